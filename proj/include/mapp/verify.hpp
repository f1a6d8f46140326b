#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mapp/grid_map.hpp"
#include "mapp/solution.hpp"
#include "mapp/unit.hpp"

// Independent trust anchor: nothing in this header may share movement logic
// with the engine. It replays traces against the section 3 movement rules
// and provides a brute-force joint-state oracle for desk-scale ground truth.

namespace mapp {

enum class ViolationReason { NotAdjacent, DestOccupied, UnknownUnit, OffMap, FinalStateWrong };

inline const char* to_string(ViolationReason r) {
  switch (r) {
    case ViolationReason::NotAdjacent: return "NOT_ADJACENT";
    case ViolationReason::DestOccupied: return "DEST_OCCUPIED";
    case ViolationReason::UnknownUnit: return "UNKNOWN_UNIT";
    case ViolationReason::OffMap: return "OFF_MAP";
    case ViolationReason::FinalStateWrong: return "FINAL_STATE_WRONG";
  }
  return "?";
}

struct Violation {
  std::size_t move_ordinal = 0;  // 0-based index into the move list
  ViolationReason reason = ViolationReason::NotAdjacent;
};

// Replays the trace from the initial placement. Every move must take a known
// unit from its actual position to an adjacent, passable, unoccupied cell,
// and afterwards every unit flagged solved must stand on its target.
inline std::optional<Violation> validate(const GridMap& map, const std::vector<UnitSpec>& units,
                                         const std::vector<Move>& moves,
                                         const std::vector<std::uint8_t>& solved_flags) {
  std::unordered_map<int, Loc> pos;
  std::unordered_set<Loc, LocHash> occupied;
  for (const UnitSpec& u : units) {
    pos[u.id] = u.start;
    occupied.insert(u.start);
  }

  for (std::size_t i = 0; i < moves.size(); ++i) {
    const Move& m = moves[i];
    auto it = pos.find(m.unit);
    if (it == pos.end()) return Violation{i, ViolationReason::UnknownUnit};
    if (!map.passable(m.to)) return Violation{i, ViolationReason::OffMap};
    Loc cur = it->second;
    if (cur != m.from || manhattan(cur, m.to) != 1)
      return Violation{i, ViolationReason::NotAdjacent};
    if (occupied.count(m.to)) return Violation{i, ViolationReason::DestOccupied};
    occupied.erase(cur);
    occupied.insert(m.to);
    it->second = m.to;
  }

  for (std::size_t i = 0; i < units.size(); ++i) {
    if (i < solved_flags.size() && solved_flags[i] && pos[units[i].id] != units[i].target)
      return Violation{moves.size(), ViolationReason::FinalStateWrong};
  }
  return std::nullopt;
}

enum class OracleVerdict { Solvable, Unsolvable, Limit };

struct OracleResult {
  OracleVerdict verdict = OracleVerdict::Limit;
  int opt_moves = -1;            // minimal sequential move count when solvable
  std::uint64_t states_seen = 0;
};

// Breadth-first search over joint placements, one unit move per step. Exact
// on anything it finishes: Solvable comes with the sequentially optimal move
// count, Unsolvable means the reachable space was exhausted. Intended for
// tiny instances (a few units on a few dozen cells).
inline OracleResult joint_oracle(const GridMap& map, const std::vector<UnitSpec>& units,
                                 std::uint64_t max_states = 5'000'000) {
  const int n = int(units.size());
  OracleResult result;
  if (n == 0) {
    result.verdict = OracleVerdict::Solvable;
    result.opt_moves = 0;
    result.states_seen = 1;
    return result;
  }

  auto encode = [&](const std::vector<std::uint16_t>& cells) {
    std::string key(cells.size() * 2, '\0');
    for (std::size_t i = 0; i < cells.size(); ++i) {
      key[2 * i] = char(cells[i] & 0xff);
      key[2 * i + 1] = char(cells[i] >> 8);
    }
    return key;
  };

  std::vector<std::uint16_t> start(static_cast<std::size_t>(n));
  std::vector<std::uint16_t> goal(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    start[std::size_t(i)] = std::uint16_t(map.index(units[std::size_t(i)].start));
    goal[std::size_t(i)] = std::uint16_t(map.index(units[std::size_t(i)].target));
  }

  std::unordered_map<std::string, int> dist;
  std::deque<std::vector<std::uint16_t>> queue;
  dist[encode(start)] = 0;
  queue.push_back(start);
  result.states_seen = 1;

  while (!queue.empty()) {
    std::vector<std::uint16_t> cur = std::move(queue.front());
    queue.pop_front();
    const int d = dist[encode(cur)];
    if (cur == goal) {
      result.verdict = OracleVerdict::Solvable;
      result.opt_moves = d;
      return result;
    }
    std::unordered_set<std::uint16_t> occ(cur.begin(), cur.end());
    for (int i = 0; i < n; ++i) {
      Loc from = map.loc_of(cur[std::size_t(i)]);
      for (Loc nb : map.neighbors(from)) {
        std::uint16_t cell = std::uint16_t(map.index(nb));
        if (occ.count(cell)) continue;
        std::vector<std::uint16_t> nxt = cur;
        nxt[std::size_t(i)] = cell;
        std::string key = encode(nxt);
        if (dist.count(key)) continue;
        if (result.states_seen >= max_states) {
          result.verdict = OracleVerdict::Limit;
          return result;
        }
        dist[key] = d + 1;
        ++result.states_seen;
        queue.push_back(std::move(nxt));
      }
    }
  }
  result.verdict = OracleVerdict::Unsolvable;
  return result;
}

inline Metrics extract_metrics(const Solution& sol, const std::vector<UnitSpec>& units) {
  Metrics m;
  m.total_moves = sol.moves.size();
  for (const Move& mv : sol.moves) {
    switch (mv.kind) {
      case MoveKind::Progress: ++m.progress_moves; break;
      case MoveKind::BlankShift: ++m.blank_shift_moves; break;
      case MoveKind::Undo: ++m.undo_moves; break;
    }
  }
  m.units = int(units.size());
  for (std::uint8_t f : sol.solved) m.solved_units += f ? 1 : 0;
  m.success_ratio = units.empty() ? 1.0 : double(m.solved_units) / double(units.size());
  m.progression_steps = sol.progression_steps;
  return m;
}

}  // namespace mapp
