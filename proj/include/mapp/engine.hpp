#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mapp/classify.hpp"
#include "mapp/solution.hpp"

namespace mapp {

enum class Repositioning { Reverse, Counting };

inline const char* to_string(Repositioning r) {
  return r == Repositioning::Reverse ? "reverse" : "counting";
}

struct SolveOptions {
  Repositioning repositioning = Repositioning::Counting;
  bool attempt_all = false;
  // Definition 33 condition (d); can be switched off without breaking
  // progress guarantees.
  bool undo_condition_d = true;
  std::uint64_t move_budget = 0;  // 0 = unlimited
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

// Single-threaded deterministic solving engine. Consumes the artifacts of
// classify_instance; never touches the omega cache.
class Engine {
 public:
  Engine(const GridMap& map, const std::vector<UnitSpec>& units, const Classification& cls,
         const SolveOptions& options)
      : map_(map), units_(units), cls_(cls), opt_(options), n_(int(units.size())) {}

  Solution run() {
    setup();
    Solution sol;
    while (true) {
      if (active_count_ == 0) break;
      if (deadline_hit() || budget_hit()) {
        sol.timed_out = true;
        break;
      }
      if (!note_step_boundary()) {
        // The engine returned to a state already seen at a step boundary with
        // the same solved set: no net progress is possible any more.
        if (any_provable_active()) diag_.master_stalled = true;
        break;
      }
      const std::uint64_t step_moves = progression_step();
      if (active_count_ == 0) break;
      if (step_moves == 0 && !any_provable_active()) break;  // attempt-all stall rule
      if (!opt_.attempt_all && step_id_ > n_ + 1) {
        diag_.master_stalled = true;  // provable runs take at most n steps
        break;
      }
      if (needs_repositioning()) reposition();
      check_well_positioned();
    }
    sol.moves = moves_;
    sol.solved.resize(std::size_t(n_));
    for (int i = 0; i < n_; ++i) sol.solved[std::size_t(i)] = solved_[std::size_t(i)] ? 1 : 0;
    sol.progression_steps = step_id_;
    sol.diag = diag_;
    return sol;
  }

 private:
  // --- setup -------------------------------------------------------------

  void setup() {
    occ_.assign(std::size_t(map_.width() * map_.height()), -1);
    c_.assign(occ_.size(), 0);
    pos_.resize(std::size_t(n_));
    path_index_.assign(std::size_t(n_), -1);
    solved_.assign(std::size_t(n_), false);
    active_.assign(std::size_t(n_), false);
    kappa_.assign(std::size_t(n_), 0);
    loc_to_index_.resize(std::size_t(n_));
    visited_.resize(std::size_t(n_));
    initial_second_.assign(std::size_t(n_), Loc{});
    has_initial_second_.assign(std::size_t(n_), 0);
    step_start_pos_.resize(std::size_t(n_));

    for (int i = 0; i < n_; ++i) {
      pos_[std::size_t(i)] = units_[std::size_t(i)].start;
      occ_[std::size_t(map_.index(pos_[std::size_t(i)]))] = i;
      const UnitPlan& plan = cls_.plans[std::size_t(i)];
      if (plan.pi) {
        for (int j = 0; j < int(plan.pi->locs.size()); ++j)
          loc_to_index_[std::size_t(i)][plan.pi->locs[std::size_t(j)]] = j;
        path_index_[std::size_t(i)] = 0;
      }
      if (plan.provable() || (opt_.attempt_all && plan.pi)) {
        active_[std::size_t(i)] = true;
        ++active_count_;
      }
      if (plan.buffer) kappa_[std::size_t(i)] = plan.buffer->kappa_init;
    }
    digest_ = {0, 0};
    for (int i = 0; i < n_; ++i) digest_toggle(i, pos_[std::size_t(i)]);
  }

  // --- small helpers -----------------------------------------------------

  const UnitPlan& plan(int u) const { return cls_.plans[std::size_t(u)]; }
  const PiPath& pi(int u) const { return *plan(u).pi; }
  bool buffered(int u) const { return plan(u).buffer.has_value(); }
  int tau(int u) const { return plan(u).buffer->tau; }
  // Buffer-zone protection applies only where the AC guarantee is live.
  bool kappa_applicable(int u) const {
    return buffered(u) && plan(u).buffer->kappa_init >= plan(u).buffer->tau;
  }
  bool provable(int u) const { return plan(u).provable(); }

  bool deadline_hit() const {
    return opt_.deadline && std::chrono::steady_clock::now() >= *opt_.deadline;
  }
  bool budget_hit() const { return opt_.move_budget && moves_.size() >= opt_.move_budget; }

  bool any_provable_active() const {
    for (int i = 0; i < n_; ++i)
      if (active_[std::size_t(i)] && provable(i)) return true;
    return false;
  }

  int on_path_index(int u, Loc l) const {
    const auto& m = loc_to_index_[std::size_t(u)];
    auto it = m.find(l);
    return it == m.end() ? -1 : it->second;
  }

  bool at_target(int u) const { return pos_[std::size_t(u)] == units_[std::size_t(u)].target; }

  // Private zone: the unit's cell, plus the cell behind it when it stands on
  // the interior of its own path.
  bool zone_contains(int v, Loc l) const {
    if (pos_[std::size_t(v)] == l) return true;
    int i = path_index_[std::size_t(v)];  // >= 1 implies the unit has a path
    if (i >= 1 && i <= pi(v).k() - 1) return pi(v).locs[std::size_t(i - 1)] == l;
    return false;
  }

  bool beta_contains(int v, Loc l) const {
    return buffered(v) && plan(v).buffer->beta.count(l) > 0;
  }

  // Advancing condition (Definitions 2 and 23). Units that are at their
  // target, or that cannot advance at all, do not constrain repositioning.
  bool advancing_ok(int u) const {
    if (!plan(u).pi) return true;
    int i = path_index_[std::size_t(u)];
    if (i < 0) return false;
    if (kappa_applicable(u) && kappa_[std::size_t(u)] < tau(u)) return false;
    if (i == pi(u).k()) return true;
    return occ_[std::size_t(map_.index(pi(u).locs[std::size_t(i + 1)]))] == -1;
  }

  // --- move application --------------------------------------------------

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  void digest_toggle(int u, Loc l) {
    std::uint64_t key =
        (std::uint64_t(std::uint32_t(u)) << 32) | std::uint32_t(map_.index(l));
    digest_.first ^= mix(key + 0x9e3779b97f4a7c15ULL);
    digest_.second ^= mix(key + 0x7f4a7c159e3779b9ULL);
  }

  void apply_move(int u, Loc to, MoveKind kind) {
    Loc from = pos_[std::size_t(u)];
    require(manhattan(from, to) == 1, "apply_move: not adjacent");
    require(occ_[std::size_t(map_.index(to))] == -1, "apply_move: destination occupied");
    if (solved_[std::size_t(u)]) diag_.solved_moved = true;

    occ_[std::size_t(map_.index(from))] = -1;
    occ_[std::size_t(map_.index(to))] = u;
    pos_[std::size_t(u)] = to;
    digest_toggle(u, from);
    digest_toggle(u, to);

    path_index_[std::size_t(u)] = plan(u).pi ? on_path_index(u, to) : -1;
    if (kind != MoveKind::Undo) {
      c_[std::size_t(map_.index(to))] += 1;
      int j = path_index_[std::size_t(u)];
      if (j >= 0) visited_[std::size_t(u)][std::size_t(j)] = 1;
    } else {
      c_[std::size_t(map_.index(from))] -= 1;
    }
    for (int v = 0; v < n_; ++v) {
      if (!buffered(v) || solved_[std::size_t(v)]) continue;
      if (beta_contains(v, to)) kappa_[std::size_t(v)] -= 1;
      if (beta_contains(v, from)) kappa_[std::size_t(v)] += 1;
    }
    moves_.push_back({units_[std::size_t(u)].id, from, to, kind, step_id_});
    if (kind != MoveKind::Undo && !step_digests_.insert(digest_).second)
      diag_.state_repetition = true;
  }

  // --- priority order ----------------------------------------------------

  // Topological order of the kept precedence relation, extended to a total
  // order: within incomparable units three tiers (provable en-route,
  // unprovable en-route, at-target-but-active), then ascending remaining
  // distance, then ascending id.
  std::vector<int> order_units() const {
    std::vector<int> act;
    for (int i = 0; i < n_; ++i)
      if (active_[std::size_t(i)]) act.push_back(i);

    auto tier = [&](int u) {
      if (at_target(u)) return 3;
      return provable(u) ? 1 : 2;
    };
    auto dist = [&](int u) {
      if (!plan(u).pi) return INT32_MAX / 2;
      int i = path_index_[std::size_t(u)];
      if (i < 0) return INT32_MAX / 2;
      return pi(u).k() - i;
    };

    std::unordered_map<int, int> indeg;
    std::unordered_map<int, std::vector<int>> out;
    for (int u : act) indeg[u] = 0;
    for (auto [u, v] : cls_.precedence.edges)
      if (indeg.count(u) && indeg.count(v)) {
        out[u].push_back(v);
        ++indeg[v];
      }

    auto key = [&](int u) { return std::tuple(tier(u), dist(u), units_[std::size_t(u)].id); };
    auto cmp = [&](int a, int b) { return key(a) > key(b); };
    std::priority_queue<int, std::vector<int>, decltype(cmp)> ready(cmp);
    for (int u : act)
      if (indeg[u] == 0) ready.push(u);

    std::vector<int> order;
    while (!ready.empty()) {
      int u = ready.top();
      ready.pop();
      order.push_back(u);
      for (int v : out[u])
        if (--indeg[v] == 0) ready.push(v);
    }
    require(order.size() == act.size(), "order_units: cycle in kept precedence");
    return order;
  }

  // --- blank travel ------------------------------------------------------

  // A corridor is the chain of cells from a blank b to the blocked next
  // location, inclusive; interior cells are all occupied. Executing it shifts
  // every unit on it one cell toward b.
  bool corridor_valid(int u, const std::vector<int>& rank, const std::vector<Loc>& corridor)
      const {
    for (Loc l : corridor) {
      int occupant = occ_[std::size_t(map_.index(l))];
      if (occupant >= 0 && solved_[std::size_t(occupant)]) return false;
      for (int v = 0; v < n_; ++v) {
        if (v == u || !active_[std::size_t(v)]) continue;
        if (rank[std::size_t(v)] >= rank[std::size_t(u)]) continue;
        if (zone_contains(v, l)) return false;
        if (kappa_applicable(v) && beta_contains(v, l) && kappa_[std::size_t(v)] <= tau(v))
          return false;
      }
    }
    return true;
  }

  std::optional<std::vector<Loc>> can_bring_blank(int u, int i, const std::vector<int>& rank) {
    const PiPath& p = pi(u);

    if (i >= 1 && p.links[std::size_t(i)].omega) {
      // Outside tunnels: walk the alternate path of the current triple from
      // the blocked cell toward the far end; take the nearest blank whose
      // corridor stays out of protected zones.
      const auto& omega = *p.links[std::size_t(i)].omega;  // l_{i-1} .. l_{i+1}
      const auto& cells = omega.locs;
      for (int q = int(cells.size()) - 2; q >= 0; --q) {
        if (occ_[std::size_t(map_.index(cells[std::size_t(q)]))] != -1) continue;
        std::vector<Loc> corridor(cells.begin() + q, cells.end());
        if (corridor_valid(u, rank, corridor)) return corridor;
        // farther blanks only extend this corridor; no need to look past a
        // rejected one
        break;
      }
      return std::nullopt;
    }

    // Inside a tunnel (or at its mouth): seek the nearest blank among the
    // remaining path cells and the buffer zone's alternate-path interiors,
    // by breadth-first search from the blocked cell through occupied conduit
    // cells. The own target is never used for parking.
    const int k = p.k();
    std::unordered_set<Loc, LocHash> conduit;
    for (int j = i + 1; j <= k - 1; ++j) conduit.insert(p.locs[std::size_t(j)]);
    if (buffered(u)) {
      const int jstart = plan(u).tunnels.back().last + 2;
      for (int q = jstart; q <= k - 1; ++q) {
        if (!p.links[std::size_t(q)].omega) continue;
        const auto& branch = p.links[std::size_t(q)].omega->locs;
        for (std::size_t d = 1; d + 1 < branch.size(); ++d) conduit.insert(branch[d]);
      }
    }
    const Loc next = p.locs[std::size_t(i + 1)];
    std::unordered_map<Loc, Loc, LocHash> parent;
    std::deque<Loc> queue;
    parent.emplace(next, next);
    queue.push_back(next);
    while (!queue.empty()) {
      Loc cur = queue.front();
      queue.pop_front();
      for (Loc nb : map_.neighbors(cur)) {
        if (nb == pos_[std::size_t(u)] || !conduit.count(nb) || parent.count(nb)) continue;
        parent.emplace(nb, cur);
        if (occ_[std::size_t(map_.index(nb))] == -1) {
          std::vector<Loc> corridor;
          for (Loc c = nb;; c = parent.at(c)) {
            corridor.push_back(c);
            if (c == next) break;
          }
          if (corridor_valid(u, rank, corridor)) return corridor;
          return std::nullopt;
        }
        queue.push_back(nb);
      }
    }
    return std::nullopt;
  }

  void execute_blank_travel(int u, const std::vector<Loc>& corridor,
                            const std::vector<int>& rank) {
    for (std::size_t t = 1; t < corridor.size(); ++t) {
      int mover = occ_[std::size_t(map_.index(corridor[t]))];
      require(mover >= 0, "blank travel: corridor interior not occupied");
      if (mover == master_ && u != master_) diag_.master_pushed = true;
      apply_move(mover, corridor[t - 1], MoveKind::BlankShift);
      for (int v = 0; v < n_; ++v)
        if (v != u && active_[std::size_t(v)] && rank[std::size_t(v)] < rank[std::size_t(u)] &&
            zone_contains(v, pos_[std::size_t(mover)]) && mover != v)
          diag_.zone_violation = true;
    }
  }

  // --- progression -------------------------------------------------------

  // One Algorithm 4 pass entry for a single unit; returns true if any move
  // was made on its behalf.
  bool act_unit(int u, const std::vector<int>& rank) {
    if (!plan(u).pi) return false;
    int i = path_index_[std::size_t(u)];
    if (i < 0) return false;  // pushed off track
    const PiPath& p = pi(u);
    if (i == p.k()) return false;  // at target, waiting to be marked solved
    const Loc next = p.locs[std::size_t(i + 1)];

    for (int v = 0; v < n_; ++v) {
      if (v == u || !active_[std::size_t(v)] || rank[std::size_t(v)] >= rank[std::size_t(u)])
        continue;
      if (zone_contains(v, next)) return false;  // wait until released
      if (kappa_applicable(v) && beta_contains(v, next) && kappa_[std::size_t(v)] <= tau(v))
        return false;  // wait until v has spare blanks
    }
    if (visited_[std::size_t(u)][std::size_t(i + 1)]) return false;

    if (occ_[std::size_t(map_.index(next))] == -1) {
      apply_move(u, next, MoveKind::Progress);
      if (at_target(u)) solve_cascade();
      return true;
    }
    int occupant = occ_[std::size_t(map_.index(next))];
    require(!solved_[std::size_t(occupant)], "next location held by a solved unit");
    auto corridor = can_bring_blank(u, i, rank);
    if (!corridor) return false;
    execute_blank_travel(u, *corridor, rank);
    apply_move(u, next, MoveKind::Progress);
    if (at_target(u)) solve_cascade();
    return true;
  }

  void solve_cascade() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int u = 0; u < n_; ++u) {
        if (!active_[std::size_t(u)] || !plan(u).pi || !at_target(u)) continue;
        bool gates_open = true;
        for (int w : cls_.gate_preds[std::size_t(u)])
          if (!solved_[std::size_t(w)]) gates_open = false;
        if (!gates_open) continue;
        solved_[std::size_t(u)] = true;
        active_[std::size_t(u)] = false;
        --active_count_;
        changed = true;
      }
    }
  }

  // Runs passes over the active units in priority order until a full pass
  // changes nothing. Returns the number of moves made.
  std::uint64_t progression_step() {
    ++step_id_;
    step_begin_ = moves_.size();
    std::fill(c_.begin(), c_.end(), 0);
    for (int w = 0; w < n_; ++w) c_[std::size_t(map_.index(pos_[std::size_t(w)]))] = 1;
    step_digests_.clear();
    step_digests_.insert(digest_);
    for (int w = 0; w < n_; ++w) {
      step_start_pos_[std::size_t(w)] = pos_[std::size_t(w)];
      has_initial_second_[std::size_t(w)] = 0;
      if (!plan(w).pi) continue;
      visited_[std::size_t(w)].assign(plan(w).pi->locs.size(), 0);
      int i = path_index_[std::size_t(w)];
      if (i >= 0) visited_[std::size_t(w)][std::size_t(i)] = 1;
      if (active_[std::size_t(w)] && i >= 0 && i < pi(w).k()) {
        initial_second_[std::size_t(w)] = pi(w).locs[std::size_t(i + 1)];
        has_initial_second_[std::size_t(w)] = 1;
      }
    }

    std::vector<int> order = order_units();
    std::vector<int> rank(std::size_t(n_), INT32_MAX);
    for (std::size_t r = 0; r < order.size(); ++r) rank[std::size_t(order[r])] = int(r);
    master_ = order.empty() ? -1 : order[0];

    bool changed = true;
    while (changed) {
      changed = false;
      const int master_index_before =
          (master_ >= 0 && !solved_[std::size_t(master_)]) ? path_index_[std::size_t(master_)]
                                                           : -1;
      for (int u : order) {
        if (!active_[std::size_t(u)] || solved_[std::size_t(u)]) continue;
        if (act_unit(u, rank)) changed = true;
      }
      if (changed && master_ >= 0 && !solved_[std::size_t(master_)] && provable(master_) &&
          path_index_[std::size_t(master_)] <= master_index_before)
        diag_.master_stalled = true;
    }
    if (master_ >= 0 && provable(master_) && !solved_[std::size_t(master_)])
      diag_.master_stalled = true;  // Theorem 7: the master solves by step end
    last_progression_moves_ = moves_.size() - step_begin_;
    return last_progression_moves_;
  }

  // --- repositioning -----------------------------------------------------

  bool needs_repositioning() const {
    for (int u = 0; u < n_; ++u)
      if (active_[std::size_t(u)] && !advancing_ok(u)) return true;
    return false;
  }

  struct Pending {
    std::vector<std::size_t> idx;  // unconsumed segment positions, ascending
  };

  // True when every active unit either satisfies its advancing condition or
  // has nothing left to undo, and no unit still holding undoable moves parks
  // on the target of an active unit.
  bool restored(const std::vector<std::size_t>& pending_count,
                const std::unordered_map<Loc, int, LocHash>& active_targets) const {
    for (int u = 0; u < n_; ++u) {
      if (active_[std::size_t(u)] && !advancing_ok(u) && pending_count[std::size_t(u)] > 0)
        return false;
    }
    for (int w = 0; w < n_; ++w) {
      if (solved_[std::size_t(w)] || active_[std::size_t(w)] ||
          pending_count[std::size_t(w)] == 0)
        continue;
      auto it = active_targets.find(pos_[std::size_t(w)]);
      if (it != active_targets.end() && pos_[std::size_t(w)] != step_start_pos_[std::size_t(w)])
        return false;
    }
    return true;
  }

  void reposition() {
    const std::size_t seg_end = moves_.size();
    std::vector<Move> segment(moves_.begin() + std::ptrdiff_t(step_begin_), moves_.end());
    std::vector<std::size_t> pending_count(std::size_t(n_), 0);
    std::vector<int> unit_of(segment.size(), -1);
    for (std::size_t s = 0; s < segment.size(); ++s) {
      int w = unit_index(segment[s].unit);
      unit_of[s] = w;
      if (!solved_[std::size_t(w)]) ++pending_count[std::size_t(w)];
    }
    std::unordered_map<Loc, int, LocHash> active_targets;
    for (int v = 0; v < n_; ++v)
      if (active_[std::size_t(v)] && plan(v).pi) active_targets[units_[std::size_t(v)].target] = v;

    std::uint64_t undone = 0;
    if (opt_.repositioning == Repositioning::Reverse) {
      for (std::size_t s = segment.size(); s-- > 0;) {
        if (restored(pending_count, active_targets)) break;
        int w = unit_of[s];
        if (solved_[std::size_t(w)]) continue;
        undo_move(w, segment[s]);
        --pending_count[std::size_t(w)];
        ++undone;
      }
    } else {
      std::vector<bool> consumed(segment.size(), false);
      std::vector<bool> stopped(std::size_t(n_), false);
      while (true) {
        bool progressed = false;
        for (std::size_t s = segment.size(); s-- > 0;) {
          if (consumed[s]) continue;
          int w = unit_of[s];
          if (solved_[std::size_t(w)]) {
            consumed[s] = true;
            continue;
          }
          if (stopped[std::size_t(w)]) continue;
          if (stop_conditions(w, active_targets, pending_count)) {
            stopped[std::size_t(w)] = true;
            continue;
          }
          undo_move(w, segment[s]);
          consumed[s] = true;
          --pending_count[std::size_t(w)];
          ++undone;
          progressed = true;
        }
        if (restored(pending_count, active_targets)) break;
        bool unstopped = false;
        for (int w = 0; w < n_; ++w)
          if (stopped[std::size_t(w)] && pending_count[std::size_t(w)] > 0 &&
              !stop_conditions(w, active_targets, pending_count)) {
            stopped[std::size_t(w)] = false;
            unstopped = true;
          }
        if (!progressed && !unstopped) break;
      }
    }
    if (undone >= last_progression_moves_ && undone > 0) diag_.undo_overrun = true;
    (void)seg_end;
  }

  int unit_index(int id) const {
    for (int i = 0; i < n_; ++i)
      if (units_[std::size_t(i)].id == id) return i;
    throw ContractViolation("unknown unit id in move log");
  }

  void undo_move(int w, const Move& m) {
    require(pos_[std::size_t(w)] == m.to, "undo: unit not at the move destination");
    apply_move(w, m.from, MoveKind::Undo);
  }

  // Definition 33 stop conditions (extended to units without a path: they
  // stop once their cell holds no pending traffic and blocks nobody).
  bool stop_conditions(int w, const std::unordered_map<Loc, int, LocHash>& active_targets,
                       const std::vector<std::size_t>& pending_count) const {
    const Loc cur = pos_[std::size_t(w)];
    if (c_[std::size_t(map_.index(cur))] != 1) return false;  // (b)
    if (opt_.undo_condition_d) {
      for (int v = 0; v < n_; ++v)
        if (v != w && active_[std::size_t(v)] && has_initial_second_[std::size_t(v)] &&
            initial_second_[std::size_t(v)] == cur)
          return false;  // (d)
    }
    if (!active_[std::size_t(w)] || !plan(w).pi) {
      // parked on an active unit's target with pending moves: keep undoing
      auto it = active_targets.find(cur);
      if (it != active_targets.end() && pending_count[std::size_t(w)] > 0 &&
          cur != step_start_pos_[std::size_t(w)])
        return false;
      return true;
    }
    if (!advancing_ok(w)) return false;  // (a), including the kappa extension
    int i = path_index_[std::size_t(w)];
    if (i >= 0 && i < pi(w).k() &&
        c_[std::size_t(map_.index(pi(w).locs[std::size_t(i + 1)]))] != 0)
      return false;  // (c)
    return true;
  }

  void check_well_positioned() {
    for (int u = 0; u < n_; ++u)
      if (active_[std::size_t(u)] && provable(u) && !advancing_ok(u))
        diag_.not_well_positioned = true;
  }

  // Registers the state at a progression-step boundary. Returns false when
  // the same occupancy with the same solved set was already seen, i.e. the
  // engine is cycling between steps without net progress.
  bool note_step_boundary() {
    std::uint64_t solved_hash = 0x2545f4914f6cdd1dULL;
    for (int i = 0; i < n_; ++i)
      if (solved_[std::size_t(i)]) solved_hash ^= mix(0x9e3779b97f4a7c15ULL * std::uint64_t(i + 1));
    return boundary_seen_
        .insert({digest_.first ^ solved_hash, digest_.second + solved_hash})
        .second;
  }

  // --- data ----------------------------------------------------------------

  const GridMap& map_;
  const std::vector<UnitSpec>& units_;
  const Classification& cls_;
  SolveOptions opt_;
  int n_;

  std::vector<int> occ_;
  std::vector<int> c_;
  std::vector<Loc> pos_;
  std::vector<int> path_index_;
  std::vector<bool> solved_;
  std::vector<bool> active_;
  std::vector<int> kappa_;
  std::vector<std::unordered_map<Loc, int, LocHash>> loc_to_index_;
  std::vector<std::vector<std::uint8_t>> visited_;
  std::vector<Loc> initial_second_;
  std::vector<std::uint8_t> has_initial_second_;
  std::vector<Loc> step_start_pos_;
  int active_count_ = 0;
  int step_id_ = 0;
  std::size_t step_begin_ = 0;
  std::uint64_t last_progression_moves_ = 0;
  int master_ = -1;
  std::vector<Move> moves_;
  EngineDiagnostics diag_;
  std::pair<std::uint64_t, std::uint64_t> digest_{0, 0};
  struct PairHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
      return std::size_t(p.first ^ (p.second * 0x9e3779b97f4a7c15ULL));
    }
  };
  std::unordered_set<std::pair<std::uint64_t, std::uint64_t>, PairHash> step_digests_;
  std::unordered_set<std::pair<std::uint64_t, std::uint64_t>, PairHash> boundary_seen_;
};

inline Solution solve(const GridMap& map, const std::vector<UnitSpec>& units,
                      const Classification& cls, const SolveOptions& options = {}) {
  Engine engine(map, units, cls, options);
  return engine.run();
}

}  // namespace mapp
