#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <unordered_set>
#include <vector>

#include "mapp/grid_map.hpp"
#include "mapp/omega.hpp"

namespace mapp {

enum class PlanMode { Basic, Ti, Ac, TiAc };

inline bool mode_allows_ti(PlanMode m) { return m == PlanMode::Ti || m == PlanMode::TiAc; }
inline bool mode_allows_ac(PlanMode m) { return m == PlanMode::Ac || m == PlanMode::TiAc; }

inline const char* to_string(PlanMode m) {
  switch (m) {
    case PlanMode::Basic: return "basic";
    case PlanMode::Ti: return "ti";
    case PlanMode::Ac: return "ac";
    case PlanMode::TiAc: return "ti-ac";
  }
  return "?";
}

// Per interior path index: the alternate path of the triple centred there
// (oriented along the path, from l_{i-1} to l_{i+1}), or nothing when the
// triple has none (a tunnel candidate, or the exempt final triple).
struct TripleLink {
  std::optional<OmegaPath> omega;
};

// A unit's fixed path l_0..l_k with its alternate-path family and the ordered
// set of foreign targets the path or any of its alternate paths crosses.
struct PiPath {
  std::vector<Loc> locs;
  std::vector<TripleLink> links;  // links[i] valid for 1 <= i <= k-1
  std::vector<Loc> crossed_targets;

  int k() const { return int(locs.size()) - 1; }
  Loc start() const { return locs.front(); }
  Loc target() const { return locs.back(); }
  bool has_omega(int i) const {
    return i >= 1 && i < int(links.size()) && links[std::size_t(i)].omega.has_value();
  }
};

struct PiSearchStats {
  std::uint64_t expansions = 0;
  int max_expansions_per_node = 0;
};

// A* over the extended space of (node, parent) pairs. A successor s of node
// x' reached from parent x is admitted iff
//   (a) an alternate path exists for the triple (x, x', s), or
//   (b) the mode relaxes alternate connectivity and one of the triple's cells
//       is single-width (a cheap necessary test; full tunnel validity is
//       decided after the path is built), or
//   (c) s is the target (the final triple is exempt).
// Moves onto foreign targets are inadmissible in Basic/Ac and cost an extra
// W = m + 1 under the target-isolation relaxation, so they are taken only
// when there is no other choice. Steps admitted through rule (b) carry the
// same extra cost: a unit enters tunnels only when it has to, which keeps the
// provable set monotone across modes (a path that works in Basic is never
// traded for a tunnel shortcut that then fails the blank-count test).
inline std::optional<PiPath> compute_pi(const GridMap& map, OmegaCache& cache, Loc start,
                                        Loc target,
                                        const std::unordered_set<Loc, LocHash>& foreign_targets,
                                        PlanMode mode, PiSearchStats* stats = nullptr) {
  require(map.passable(start) && map.passable(target), "compute_pi: endpoint not passable");
  require(start != target, "compute_pi: start equals target");

  const bool ti = mode_allows_ti(mode);
  const bool ac = mode_allows_ac(mode);
  const std::int64_t W = map.passable_count() + 1;
  const int kStart = 4;  // pdir value for the search root

  OmegaQuery query;
  if (ti) {
    query.kind = OmegaQuery::Kind::OwnTarget;
    query.own_target = target;
  }

  auto state_id = [&](Loc at, int pdir) { return std::size_t(map.index(at)) * 5 + std::size_t(pdir); };
  const std::size_t nstates = std::size_t(map.width() * map.height()) * 5;
  std::vector<std::int64_t> g(nstates, -1);
  std::vector<std::uint8_t> closed(nstates, 0);
  std::vector<std::uint32_t> pred(nstates, UINT32_MAX);
  std::vector<int> pops(std::size_t(map.width() * map.height()), 0);

  struct Item {
    std::int64_t f;
    std::int64_t g;
    int dir;  // successor direction used at generation time, N,E,S,W rank
    Loc at;
    int pdir;
    bool operator>(const Item& o) const {
      if (f != o.f) return f > o.f;
      if (g != o.g) return g < o.g;  // prefer higher g
      if (dir != o.dir) return dir > o.dir;
      if (at.y != o.at.y) return at.y > o.at.y;
      if (at.x != o.at.x) return at.x > o.at.x;
      return pdir > o.pdir;
    }
  };
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> open;

  const std::size_t root = state_id(start, kStart);
  g[root] = 0;
  open.push({manhattan(start, target), 0, 4, start, kStart});

  std::size_t goal_state = SIZE_MAX;
  while (!open.empty()) {
    Item item = open.top();
    open.pop();
    const std::size_t sid = state_id(item.at, item.pdir);
    if (closed[sid] || g[sid] != item.g) continue;
    closed[sid] = 1;
    int& node_pops = pops[std::size_t(map.index(item.at))];
    ++node_pops;
    if (stats) {
      ++stats->expansions;
      stats->max_expansions_per_node = std::max(stats->max_expansions_per_node, node_pops);
    }
    if (item.at == target) {
      goal_state = sid;
      break;
    }

    const bool has_parent = item.pdir != kStart;
    const Loc parent = has_parent ? item.at + kCardinalSteps[std::size_t(item.pdir)] : Loc{};
    for (int d = 0; d < 4; ++d) {
      Loc s = item.at + kCardinalSteps[std::size_t(d)];
      if (!map.passable(s)) continue;
      if (has_parent && s == parent) continue;
      const bool foreign = foreign_targets.count(s) > 0;
      if (foreign && !ti) continue;
      bool tunnel_step = false;
      if (has_parent) {
        auto omega = cache.get_or_compute(map, {parent, item.at, s}, query);
        if (!omega && s != target) {
          if (!(ac && (map.tunnel_eligible(parent) || map.tunnel_eligible(item.at) ||
                       map.tunnel_eligible(s))))
            continue;
          tunnel_step = true;
        }
      }
      std::int64_t ng = item.g + 1 + ((foreign && ti) ? W : 0) + (tunnel_step ? W : 0);
      std::size_t nid = state_id(s, d ^ 2);  // parent of s sits opposite the move
      if (closed[nid]) continue;
      if (g[nid] != -1 && g[nid] <= ng) continue;
      g[nid] = ng;
      pred[nid] = std::uint32_t(sid);
      open.push({ng + manhattan(s, target), ng, d, s, d ^ 2});
    }
  }

  if (goal_state == SIZE_MAX) return std::nullopt;

  PiPath pi;
  for (std::size_t sid = goal_state; sid != SIZE_MAX;
       sid = pred[sid] == UINT32_MAX ? SIZE_MAX : pred[sid])
    pi.locs.push_back(map.loc_of(int(sid / 5)));
  std::reverse(pi.locs.begin(), pi.locs.end());

  // The extended space can in principle revisit a map node with a different
  // parent; such a walk is not a usable pi path. Treat it as not found.
  {
    std::unordered_set<Loc, LocHash> seen;
    for (Loc l : pi.locs)
      if (!seen.insert(l).second) return std::nullopt;
  }

  const int k = pi.k();
  pi.links.resize(pi.locs.size());
  for (int i = 1; i <= k - 1; ++i) {
    auto omega = cache.get_or_compute(
        map, {pi.locs[std::size_t(i - 1)], pi.locs[std::size_t(i)], pi.locs[std::size_t(i + 1)]},
        query);
    if (!omega && i < k - 1)
      require(ac, "compute_pi: missing alternate path outside AC mode");
    pi.links[std::size_t(i)].omega = std::move(omega);
  }

  // Crossed foreign targets, ordered by first encounter along the path and
  // then along each alternate path.
  std::unordered_set<Loc, LocHash> seen;
  auto note = [&](Loc l) {
    if (foreign_targets.count(l) && seen.insert(l).second) pi.crossed_targets.push_back(l);
  };
  for (Loc l : pi.locs) note(l);
  for (int i = 1; i <= k - 1; ++i)
    if (pi.links[std::size_t(i)].omega)
      for (Loc l : pi.links[std::size_t(i)].omega->locs) note(l);

  return pi;
}

}  // namespace mapp
