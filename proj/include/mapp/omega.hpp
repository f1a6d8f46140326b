#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <istream>
#include <optional>
#include <ostream>
#include <queue>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mapp/grid_map.hpp"

namespace mapp {

// Three consecutive path locations (a, mid, b): a and b are both adjacent to
// mid and a != b. The alternate path for the triple connects a and b without
// passing through mid.
struct Triple {
  Loc a;
  Loc mid;
  Loc b;

  friend bool operator==(const Triple& s, const Triple& t) {
    return s.a == t.a && s.mid == t.mid && s.b == t.b;
  }

  // One cache key per undirected triple: the lexicographically smaller
  // endpoint goes first.
  Triple canonical() const { return b < a ? Triple{b, mid, a} : *this; }
  bool flipped_from_canonical() const { return b < a; }
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const {
    std::size_t h = LocHash{}(t.a);
    h = h * 1000003u ^ LocHash{}(t.mid);
    h = h * 1000003u ^ LocHash{}(t.b);
    return h;
  }
};

// An alternate path, stored as the full cell sequence including endpoints.
struct OmegaPath {
  std::vector<Loc> locs;

  int len() const { return int(locs.size()) - 1; }
  OmegaPath reversed() const {
    OmegaPath r = *this;
    std::reverse(r.locs.begin(), r.locs.end());
    return r;
  }
};

// All triples anchored at l: the four straight two-move destinations plus the
// four diagonal ones, the latter through each of their two intermediates.
// Triples with a blocked intermediate or destination are omitted, so an open
// interior cell yields exactly 12.
inline std::vector<Triple> enumerate_triples(const GridMap& map, Loc l) {
  require(map.passable(l), "enumerate_triples: anchor not passable");
  std::vector<Triple> out;
  out.reserve(12);
  for (int d1 = 0; d1 < 4; ++d1) {
    Loc mid = l + kCardinalSteps[std::size_t(d1)];
    if (!map.passable(mid)) continue;
    for (int d2 = 0; d2 < 4; ++d2) {
      if ((d1 ^ 2) == d2) continue;  // no backtracking: dest would equal l
      Loc dest = mid + kCardinalSteps[std::size_t(d2)];
      if (!map.passable(dest)) continue;
      out.push_back({l, mid, dest});
    }
  }
  return out;
}

// Target-avoidance context for an alternate-path query.
//
// In the basic and AC modes every instance target is a hard obstacle
// (Definition 1, condition 3b). Under the target-isolation relaxation only
// the querying unit's own target stays hard; foreign targets cost an extra
// W = m + 1 per entering edge, so they are crossed only when unavoidable.
//
// Hard and penalty tests are applied to interior cells only. The endpoints
// are path cells whose legality the pi search already decided, and the
// opportunistic alternate path of a path's final triple necessarily ends on
// the unit's own target.
struct OmegaQuery {
  enum class Kind { AllTargets, OwnTarget };
  Kind kind = Kind::AllTargets;
  Loc own_target{-1, -1};  // only meaningful for OwnTarget
};

class OmegaCache {
 public:
  struct Stats {
    std::uint64_t distinct_triples_searched = 0;
    std::uint64_t searches = 0;
    std::uint64_t expansions = 0;
    std::uint64_t hits = 0;
  };

  // Declares the target set of the instance about to be classified. Entries
  // from earlier instances stay usable when no current target touches their
  // stored path; everything else is recomputed on demand (section 9.4 reuse).
  void set_instance_targets(const std::vector<Loc>& targets) {
    targets_.clear();
    target_list_ = targets;
    for (Loc t : targets) targets_.insert(t);
    ++generation_;
  }

  std::optional<OmegaPath> get_or_compute(const GridMap& map, const Triple& raw,
                                          const OmegaQuery& query) {
    Triple key = raw.canonical();
    auto it = entries_.find(key);
    if (it != entries_.end() && entry_valid(it->second, query)) {
      ++stats_.hits;
      return oriented(it->second, raw);
    }
    Entry e = compute(map, key, query);
    ++stats_.searches;
    if (it == entries_.end()) {
      ++stats_.distinct_triples_searched;
      it = entries_.emplace(key, std::move(e)).first;
    } else {
      it->second = std::move(e);
    }
    if (it->second.path && it->second.path->len() > lambda_observed_)
      lambda_observed_ = it->second.path->len();
    return oriented(it->second, raw);
  }

  int lambda_observed() const { return lambda_observed_; }
  const Stats& stats() const { return stats_; }
  std::size_t size() const { return entries_.size(); }

  // One record per canonical triple: coordinates, the path or a NONE marker,
  // and the avoided-target fingerprint the record was computed against.
  void save(std::ostream& out) const {
    out << "mapp-omega-cache 1\n";
    std::vector<const std::pair<const Triple, Entry>*> sorted;
    sorted.reserve(entries_.size());
    for (const auto& kv : entries_) sorted.push_back(&kv);
    std::sort(sorted.begin(), sorted.end(), [](auto* l, auto* r) {
      const Triple& a = l->first;
      const Triple& b = r->first;
      if (a.a != b.a) return a.a < b.a;
      if (a.mid != b.mid) return a.mid < b.mid;
      return a.b < b.b;
    });
    for (auto* kv : sorted) {
      const Triple& t = kv->first;
      const Entry& e = kv->second;
      out << t.a.x << ' ' << t.a.y << ' ' << t.mid.x << ' ' << t.mid.y << ' ' << t.b.x << ' '
          << t.b.y;
      if (e.path) {
        out << " path " << e.path->locs.size();
        for (Loc l : e.path->locs) out << ' ' << l.x << ' ' << l.y;
      } else {
        out << " none";
      }
      out << " avoided " << e.hard_fingerprint.size();
      for (Loc l : e.hard_fingerprint) out << ' ' << l.x << ' ' << l.y;
      out << '\n';
    }
  }

  void load(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header != "mapp-omega-cache 1")
      throw ParseError("bad omega cache header", 1);
    entries_.clear();
    int lineno = 1;
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::istringstream ls(line);
      Triple t;
      if (!(ls >> t.a.x >> t.a.y >> t.mid.x >> t.mid.y >> t.b.x >> t.b.y))
        throw ParseError("bad omega cache triple", lineno);
      Entry e;
      e.loaded = true;
      std::string tag;
      if (!(ls >> tag)) throw ParseError("missing omega cache payload", lineno);
      if (tag == "path") {
        std::size_t n = 0;
        ls >> n;
        OmegaPath p;
        p.locs.resize(n);
        for (auto& l : p.locs)
          if (!(ls >> l.x >> l.y)) throw ParseError("truncated omega path", lineno);
        e.path = std::move(p);
      } else if (tag != "none") {
        throw ParseError("unknown omega cache payload tag", lineno);
      }
      std::size_t n = 0;
      if (!(ls >> tag >> n) || tag != "avoided")
        throw ParseError("missing avoided-target fingerprint", lineno);
      e.hard_fingerprint.resize(n);
      for (auto& l : e.hard_fingerprint)
        if (!(ls >> l.x >> l.y)) throw ParseError("truncated fingerprint", lineno);
      if (e.path && e.path->len() > lambda_observed_) lambda_observed_ = e.path->len();
      entries_[t.canonical()] = std::move(e);
    }
  }

 private:
  struct Entry {
    std::optional<OmegaPath> path;  // canonical orientation
    OmegaQuery::Kind kind = OmegaQuery::Kind::AllTargets;
    Loc own{-1, -1};
    std::uint64_t generation = 0;
    bool loaded = false;
    std::vector<Loc> hard_fingerprint;  // hard-avoided cells at compute time
  };

  bool entry_valid(const Entry& e, const OmegaQuery& q) const {
    if (e.path) {
      // Reusable across instances and contexts as long as no current target
      // lies on the stored path's interior. Endpoints are exempt: they are
      // the triple's own endpoints for every query of this key.
      bool clean = true;
      for (std::size_t i = 1; i + 1 < e.path->locs.size(); ++i)
        if (targets_.count(e.path->locs[i])) {
          clean = false;
          break;
        }
      if (clean) return true;
    }
    if (e.loaded) {
      // A loaded NONE holds for any query that hard-avoids at least as much.
      if (!e.path) {
        for (Loc l : e.hard_fingerprint)
          if (!query_hard_contains(q, l)) return false;
        return true;
      }
      return false;  // loaded path with a target on it: recompute
    }
    // Same instance, same avoidance context: the exact entry applies, even if
    // its path crosses penalized targets (the crossing was unavoidable).
    return e.generation == generation_ && e.kind == q.kind &&
           (q.kind != OmegaQuery::Kind::OwnTarget || e.own == q.own_target);
  }

  bool query_hard_contains(const OmegaQuery& q, Loc l) const {
    if (q.kind == OmegaQuery::Kind::AllTargets) return targets_.count(l) > 0;
    return l == q.own_target;
  }

  std::optional<OmegaPath> oriented(const Entry& e, const Triple& raw) const {
    if (!e.path) return std::nullopt;
    return raw.flipped_from_canonical() ? e.path->reversed() : *e.path;
  }

  Entry compute(const GridMap& map, const Triple& t, const OmegaQuery& q) {
    Entry e;
    e.kind = q.kind;
    e.own = q.own_target;
    e.generation = generation_;
    if (q.kind == OmegaQuery::Kind::AllTargets) {
      e.hard_fingerprint = target_list_;
    } else {
      e.hard_fingerprint = {q.own_target};
    }

    const bool penalize = q.kind == OmegaQuery::Kind::OwnTarget;
    auto hard = [&](Loc l) { return query_hard_contains(q, l); };
    auto penalized = [&](Loc l) { return penalize && targets_.count(l) && l != q.own_target; };

    e.path = penalize ? dijkstra(map, t, hard, penalized) : bfs(map, t, hard);
    return e;
  }

  // Plain breadth-first search: unit costs, neighbours in N,E,S,W order,
  // first-reached parent wins. Shortest alternate paths keep blank travel and
  // lambda small.
  template <typename Hard>
  std::optional<OmegaPath> bfs(const GridMap& map, const Triple& t, Hard hard) {
    auto blocked = [&](Loc l) { return l == t.mid || (hard(l) && !(l == t.a) && !(l == t.b)); };
    if (blocked(t.a) || blocked(t.b)) return std::nullopt;

    std::unordered_map<Loc, Loc, LocHash> parent;
    std::deque<Loc> queue;
    parent.emplace(t.a, t.a);
    queue.push_back(t.a);
    while (!queue.empty()) {
      Loc cur = queue.front();
      queue.pop_front();
      ++stats_.expansions;
      if (cur == t.b) return reconstruct(parent, t);
      for (Loc nb : map.neighbors(cur)) {
        if (blocked(nb) || parent.count(nb)) continue;
        parent.emplace(nb, cur);
        queue.push_back(nb);
      }
    }
    return std::nullopt;
  }

  // Uniform-cost search for the penalized model; ties resolved by (y, x) so
  // results do not depend on container internals.
  template <typename Hard, typename Penalized>
  std::optional<OmegaPath> dijkstra(const GridMap& map, const Triple& t, Hard hard,
                                    Penalized penalized) {
    auto blocked = [&](Loc l) { return l == t.mid || (hard(l) && !(l == t.a) && !(l == t.b)); };
    if (blocked(t.a) || blocked(t.b)) return std::nullopt;
    const std::int64_t W = map.passable_count() + 1;

    struct QItem {
      std::int64_t dist;
      Loc loc;
      bool operator>(const QItem& o) const {
        if (dist != o.dist) return dist > o.dist;
        if (loc.y != o.loc.y) return loc.y > o.loc.y;
        return loc.x > o.loc.x;
      }
    };
    std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> open;
    std::unordered_map<Loc, std::int64_t, LocHash> dist;
    std::unordered_map<Loc, Loc, LocHash> parent;
    dist[t.a] = 0;
    parent.emplace(t.a, t.a);
    open.push({0, t.a});
    while (!open.empty()) {
      auto [d, cur] = open.top();
      open.pop();
      if (d != dist[cur]) continue;  // stale
      ++stats_.expansions;
      if (cur == t.b) return reconstruct(parent, t);
      for (Loc nb : map.neighbors(cur)) {
        if (blocked(nb)) continue;
        std::int64_t nd = d + 1 + ((penalized(nb) && nb != t.b) ? W : 0);
        auto it = dist.find(nb);
        if (it == dist.end() || nd < it->second) {
          dist[nb] = nd;
          parent[nb] = cur;
          open.push({nd, nb});
        }
      }
    }
    return std::nullopt;
  }

  static std::optional<OmegaPath> reconstruct(
      const std::unordered_map<Loc, Loc, LocHash>& parent, const Triple& t) {
    OmegaPath p;
    Loc cur = t.b;
    while (true) {
      p.locs.push_back(cur);
      Loc prev = parent.at(cur);
      if (prev == cur) break;
      cur = prev;
    }
    std::reverse(p.locs.begin(), p.locs.end());
    return p;
  }

  std::unordered_map<Triple, Entry, TripleHash> entries_;
  std::unordered_set<Loc, LocHash> targets_;
  std::vector<Loc> target_list_;
  std::uint64_t generation_ = 0;
  int lambda_observed_ = 0;
  Stats stats_;
};

}  // namespace mapp
