#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mapp/grid_map.hpp"
#include "mapp/omega.hpp"
#include "mapp/pi_path.hpp"
#include "mapp/unit.hpp"

namespace mapp {

enum class ClassLabel { Slidable, TiSlidable, AcSlidable, TiAcSlidable, Unproven };

inline const char* to_string(ClassLabel l) {
  switch (l) {
    case ClassLabel::Slidable: return "SLIDABLE";
    case ClassLabel::TiSlidable: return "TI_SLIDABLE";
    case ClassLabel::AcSlidable: return "AC_SLIDABLE";
    case ClassLabel::TiAcSlidable: return "TI_AC_SLIDABLE";
    case ClassLabel::Unproven: return "UNPROVEN";
  }
  return "?";
}

// A maximal run of single-width path cells whose triples have no alternate
// path. Indices are positions on the owning pi path.
struct TunnelSegment {
  int first = 0;
  int last = 0;
  std::vector<Loc> cells;

  int len() const { return int(cells.size()); }
};

// Post-tunnel buffer zone: the path portion between the end of the last
// tunnel and the target, together with the alternate paths hanging off it.
// tau is the minimum number of blanks that makes tunnel crossing safe; kappa
// starts as the blank count of beta in the initial state and is maintained
// live by the engine.
struct BufferZone {
  std::unordered_set<Loc, LocHash> beta;
  int tau = 0;
  int kappa_init = 0;
};

struct Precedence {
  std::vector<std::pair<int, int>> edges;  // (u, v) unit indices: u precedes v
  std::vector<int> dropped;                // unit indices removed to break cycles
};

struct UnitPlan {
  ClassLabel label = ClassLabel::Unproven;
  std::optional<PiPath> pi;
  std::vector<TunnelSegment> tunnels;
  std::optional<BufferZone> buffer;
  bool needs_ti = false;
  bool needs_ac = false;
  bool dropped = false;
  std::string reason;  // set when label is UNPROVEN

  bool provable() const { return label != ClassLabel::Unproven; }
};

struct Classification {
  PlanMode mode = PlanMode::TiAc;
  std::vector<UnitPlan> plans;
  Precedence precedence;
  // gate_preds[v]: provable units that must be solved before v may be marked
  // solved (Definition 15, condition 2).
  std::vector<std::vector<int>> gate_preds;
  PiSearchStats pi_stats;

  int provable_count() const {
    int n = 0;
    for (const auto& p : plans) n += p.provable() ? 1 : 0;
    return n;
  }
};

inline bool check_initial_blank(const PiPath& pi,
                                const std::unordered_set<Loc, LocHash>& occupied) {
  require(pi.k() >= 1, "check_initial_blank: empty path");
  return occupied.count(pi.locs[1]) == 0;
}

namespace detail {

// Tunnel cell on a path: single-width and a member of some triple along the
// path that lacks an alternate path. Index may be 0..k.
inline bool tunnel_cell(const GridMap& map, const PiPath& pi, int idx) {
  if (!map.tunnel_eligible(pi.locs[std::size_t(idx)])) return false;
  const int k = pi.k();
  for (int j = idx - 1; j <= idx + 1; ++j)
    if (j >= 1 && j <= k - 1 && !pi.has_omega(j)) return true;
  return false;
}

}  // namespace detail

// Maximal runs of interior tunnel cells.
inline std::vector<TunnelSegment> detect_tunnels(const GridMap& map, const PiPath& pi) {
  std::vector<TunnelSegment> segments;
  const int k = pi.k();
  int i = 1;
  while (i <= k - 1) {
    if (map.tunnel_eligible(pi.locs[std::size_t(i)]) && !pi.has_omega(i)) {
      TunnelSegment seg;
      seg.first = i;
      while (i <= k - 1 && map.tunnel_eligible(pi.locs[std::size_t(i)]) && !pi.has_omega(i)) {
        seg.cells.push_back(pi.locs[std::size_t(i)]);
        seg.last = i;
        ++i;
      }
      segments.push_back(std::move(seg));
    } else {
      ++i;
    }
  }
  return segments;
}

// Every non-exempt triple without an alternate path must touch a tunnel cell;
// an isolated gap cannot be represented as a tunnel and leaves the unit
// unproven.
inline bool tunnel_gaps_covered(const GridMap& map, const PiPath& pi) {
  const int k = pi.k();
  for (int i = 1; i <= k - 2; ++i) {
    if (pi.has_omega(i)) continue;
    if (!detail::tunnel_cell(map, pi, i - 1) && !detail::tunnel_cell(map, pi, i) &&
        !detail::tunnel_cell(map, pi, i + 1))
      return false;
  }
  return true;
}

// Buffer zone per Definition 20: with j the path index of the end of the last
// tunnel, beta collects l_i and the cells of the alternate path at i for
// every i in [j+2, k-1]; tau is the longest tunnel length plus two. An empty
// beta means the target sits inside or immediately past a tunnel and the unit
// cannot be proven in AC.
inline BufferZone compute_buffer(const PiPath& pi, const std::vector<TunnelSegment>& tunnels) {
  require(!tunnels.empty(), "compute_buffer: no tunnels");
  BufferZone zone;
  int longest = 0;
  for (const auto& t : tunnels) longest = std::max(longest, t.len());
  zone.tau = longest + 2;
  const int j = tunnels.back().last;
  const int k = pi.k();
  for (int i = j + 2; i <= k - 1; ++i) {
    zone.beta.insert(pi.locs[std::size_t(i)]);
    if (pi.links[std::size_t(i)].omega)
      for (Loc l : pi.links[std::size_t(i)].omega->locs) zone.beta.insert(l);
  }
  return zone;
}

namespace detail {

// Strongly connected components, iterative Tarjan; unit counts are small.
inline std::vector<std::vector<int>> sccs(int n, const std::vector<std::vector<int>>& adj,
                                          const std::vector<bool>& alive) {
  std::vector<int> index(std::size_t(n), -1), low(std::size_t(n), 0), on(std::size_t(n), 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> out;
  int counter = 0;

  struct Frame {
    int v;
    std::size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (!alive[std::size_t(root)] || index[std::size_t(root)] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[std::size_t(root)] = low[std::size_t(root)] = counter++;
    stack.push_back(root);
    on[std::size_t(root)] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge < adj[std::size_t(f.v)].size()) {
        int w = adj[std::size_t(f.v)][f.edge++];
        if (!alive[std::size_t(w)]) continue;
        if (index[std::size_t(w)] == -1) {
          index[std::size_t(w)] = low[std::size_t(w)] = counter++;
          stack.push_back(w);
          on[std::size_t(w)] = 1;
          frames.push_back({w, 0});
        } else if (on[std::size_t(w)]) {
          low[std::size_t(f.v)] = std::min(low[std::size_t(f.v)], index[std::size_t(w)]);
        }
      } else {
        int v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[std::size_t(frames.back().v)] =
              std::min(low[std::size_t(frames.back().v)], low[std::size_t(v)]);
        if (low[std::size_t(v)] == index[std::size_t(v)]) {
          std::vector<int> comp;
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on[std::size_t(w)] = 0;
            comp.push_back(w);
            if (w == v) break;
          }
          out.push_back(std::move(comp));
        }
      }
    }
  }
  return out;
}

}  // namespace detail

// Precedence edges u -> v wherever v's target lies on u's path or one of its
// alternate paths. Cycles are broken greedily: within strongly connected
// components, repeatedly drop the unit with the highest degree (ties: larger
// unit id) until the kept relation is acyclic.
inline Precedence build_precedence(const std::vector<UnitSpec>& units,
                                   const std::vector<UnitPlan>& plans) {
  const int n = int(units.size());
  std::unordered_map<Loc, int, LocHash> target_owner;
  for (int i = 0; i < n; ++i) target_owner[units[std::size_t(i)].target] = i;

  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    if (!plans[std::size_t(u)].pi) continue;
    for (Loc t : plans[std::size_t(u)].pi->crossed_targets) {
      auto it = target_owner.find(t);
      if (it != target_owner.end() && it->second != u) edges.emplace_back(u, it->second);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<bool> alive(std::size_t(n), false);
  for (int i = 0; i < n; ++i) alive[std::size_t(i)] = plans[std::size_t(i)].pi.has_value();

  Precedence result;
  while (true) {
    auto adj = std::vector<std::vector<int>>(std::size_t(n));
    for (auto [u, v] : edges)
      if (alive[std::size_t(u)] && alive[std::size_t(v)]) adj[std::size_t(u)].push_back(v);
    auto comps = detail::sccs(n, adj, alive);

    int worst = -1, worst_degree = -1;
    for (const auto& comp : comps) {
      if (comp.size() < 2) continue;
      std::unordered_set<int> in_comp(comp.begin(), comp.end());
      for (int v : comp) {
        int deg = 0;
        for (int w : adj[std::size_t(v)]) deg += in_comp.count(w) ? 1 : 0;
        for (int x : comp)
          for (int w : adj[std::size_t(x)]) deg += (w == v && x != v) ? 1 : 0;
        if (deg > worst_degree ||
            (deg == worst_degree &&
             units[std::size_t(v)].id > units[std::size_t(worst)].id))
          worst = v, worst_degree = deg;
      }
    }
    if (worst < 0) break;
    alive[std::size_t(worst)] = false;
    result.dropped.push_back(worst);
  }
  std::sort(result.dropped.begin(), result.dropped.end());

  for (auto [u, v] : edges)
    if (alive[std::size_t(u)] && alive[std::size_t(v)]) result.edges.emplace_back(u, v);
  return result;
}

// Runs the whole first stage: pi paths with their alternate-path families,
// per-unit class labels, the precedence relation, and buffer zones.
inline Classification classify_instance(const GridMap& map, OmegaCache& cache,
                                        const std::vector<UnitSpec>& units, PlanMode mode) {
  check_units(map, units);
  const int n = int(units.size());

  std::vector<Loc> targets;
  targets.reserve(std::size_t(n));
  for (const auto& u : units) targets.push_back(u.target);
  cache.set_instance_targets(targets);

  std::unordered_set<Loc, LocHash> occupied;
  for (const auto& u : units) occupied.insert(u.start);
  std::unordered_set<Loc, LocHash> target_set(targets.begin(), targets.end());

  Classification out;
  out.mode = mode;
  out.plans.resize(std::size_t(n));

  for (int i = 0; i < n; ++i) {
    UnitPlan& plan = out.plans[std::size_t(i)];
    const UnitSpec& u = units[std::size_t(i)];
    std::unordered_set<Loc, LocHash> foreign = target_set;
    foreign.erase(u.target);

    PiSearchStats stats;
    plan.pi = compute_pi(map, cache, u.start, u.target, foreign, mode, &stats);
    out.pi_stats.expansions += stats.expansions;
    out.pi_stats.max_expansions_per_node =
        std::max(out.pi_stats.max_expansions_per_node, stats.max_expansions_per_node);
    if (!plan.pi) {
      plan.reason = "no admissible path";
      continue;
    }

    plan.tunnels = detect_tunnels(map, *plan.pi);
    plan.needs_ac = !plan.tunnels.empty();

    if (!tunnel_gaps_covered(map, *plan.pi)) {
      plan.reason = "alternate connectivity gap not representable as a tunnel";
      continue;
    }
    if (!check_initial_blank(*plan.pi, occupied)) {
      plan.reason = "second path location initially occupied";
      continue;
    }
    if (!plan.tunnels.empty()) {
      BufferZone zone = compute_buffer(*plan.pi, plan.tunnels);
      for (Loc l : zone.beta) zone.kappa_init += occupied.count(l) ? 0 : 1;
      bool ok = !zone.beta.empty() && zone.kappa_init >= zone.tau;
      if (zone.beta.empty())
        plan.reason = "target inside or immediately past a tunnel";
      else if (zone.kappa_init < zone.tau)
        plan.reason = "not enough blanks in the buffer zone";
      plan.buffer = std::move(zone);
      if (!ok) continue;
    }
    plan.reason.clear();
  }

  // Target isolation, Definition 1 condition 3: a unit is crossed when any
  // other unit's path or alternate path contains its target.
  std::vector<bool> crossed_by_other(std::size_t(n), false);
  {
    std::unordered_map<Loc, int, LocHash> owner;
    for (int i = 0; i < n; ++i) owner[units[std::size_t(i)].target] = i;
    for (int v = 0; v < n; ++v) {
      if (!out.plans[std::size_t(v)].pi) continue;
      for (Loc t : out.plans[std::size_t(v)].pi->crossed_targets) {
        auto it = owner.find(t);
        if (it != owner.end() && it->second != v) crossed_by_other[std::size_t(it->second)] = true;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    UnitPlan& plan = out.plans[std::size_t(i)];
    if (!plan.pi) continue;
    // A start cell on a foreign target is a crossing for the target's owner
    // but does not require the TI machinery for the crosser itself.
    bool enters_foreign = false;
    for (Loc t : plan.pi->crossed_targets)
      if (t != units[std::size_t(i)].start) enters_foreign = true;
    plan.needs_ti = enters_foreign || crossed_by_other[std::size_t(i)];
  }

  out.precedence = build_precedence(units, out.plans);
  for (int d : out.precedence.dropped) {
    out.plans[std::size_t(d)].dropped = true;
    if (out.plans[std::size_t(d)].reason.empty())
      out.plans[std::size_t(d)].reason = "dropped by greedy cycle breaking";
  }

  // Provability per requested mode.
  for (int i = 0; i < n; ++i) {
    UnitPlan& plan = out.plans[std::size_t(i)];
    if (!plan.pi || !plan.reason.empty()) {
      plan.label = ClassLabel::Unproven;
      continue;
    }
    if (plan.needs_ti && !mode_allows_ti(mode)) {
      plan.label = ClassLabel::Unproven;
      plan.reason = "needs the target isolation relaxation";
      continue;
    }
    if (plan.needs_ac && !mode_allows_ac(mode)) {
      plan.label = ClassLabel::Unproven;
      plan.reason = "needs the alternate connectivity relaxation";
      continue;
    }
    if (plan.needs_ti)
      plan.label = plan.needs_ac ? ClassLabel::TiAcSlidable : ClassLabel::TiSlidable;
    else
      plan.label = plan.needs_ac ? ClassLabel::AcSlidable : ClassLabel::Slidable;
  }

  // A kept unit whose target starts out occupied by a unit we will not solve
  // can only clear it through the final triple's alternate path. Without one
  // the unit is not guaranteed; demote it (and cascade).
  {
    std::unordered_map<Loc, int, LocHash> start_owner;
    for (int i = 0; i < n; ++i) start_owner[units[std::size_t(i)].start] = i;
    bool changed = true;
    while (changed) {
      changed = false;
      for (int i = 0; i < n; ++i) {
        UnitPlan& plan = out.plans[std::size_t(i)];
        if (!plan.provable()) continue;
        auto it = start_owner.find(units[std::size_t(i)].target);
        if (it == start_owner.end() || it->second == i) continue;
        if (out.plans[std::size_t(it->second)].provable()) continue;
        if (plan.pi->has_omega(plan.pi->k() - 1)) continue;
        plan.label = ClassLabel::Unproven;
        plan.reason = "target initially occupied and final triple has no alternate path";
        changed = true;
      }
    }
  }

  out.gate_preds.assign(std::size_t(n), {});
  for (auto [u, v] : out.precedence.edges)
    if (out.plans[std::size_t(u)].provable()) out.gate_preds[std::size_t(v)].push_back(u);

  return out;
}

}  // namespace mapp
