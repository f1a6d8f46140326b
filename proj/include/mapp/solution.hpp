#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mapp/grid_map.hpp"

namespace mapp {

enum class MoveKind { Progress, BlankShift, Undo };

inline const char* to_string(MoveKind k) {
  switch (k) {
    case MoveKind::Progress: return "progress";
    case MoveKind::BlankShift: return "shift";
    case MoveKind::Undo: return "undo";
  }
  return "?";
}

struct Move {
  int unit = 0;  // unit id
  Loc from;
  Loc to;
  MoveKind kind = MoveKind::Progress;
  int step_id = 0;  // progression-step ordinal, starting at 1
};

// Engine self-checks. All of these must stay false on provably solvable
// inputs; they are reported rather than thrown so that a benchmark run can
// record a defect and keep going.
struct EngineDiagnostics {
  bool state_repetition = false;          // a global state repeated inside a step
  bool master_stalled = false;            // master failed to advance in a pass
  bool master_pushed = false;             // master moved by someone else's blank travel
  bool not_well_positioned = false;       // a progression step started from a bad state
  bool zone_violation = false;            // caused move entered a protected zone
  bool undo_overrun = false;              // repositioning undid more than the step moved
  bool solved_moved = false;              // a solved unit moved

  bool clean() const {
    return !state_repetition && !master_stalled && !master_pushed && !not_well_positioned &&
           !zone_violation && !undo_overrun && !solved_moved;
  }
};

struct Solution {
  std::vector<Move> moves;
  std::vector<std::uint8_t> solved;  // parallel to the unit list
  int progression_steps = 0;
  bool timed_out = false;
  EngineDiagnostics diag;
};

struct Metrics {
  std::uint64_t total_moves = 0;
  std::uint64_t undo_moves = 0;
  std::uint64_t progress_moves = 0;
  std::uint64_t blank_shift_moves = 0;
  int units = 0;
  int solved_units = 0;
  double success_ratio = 0.0;  // solved / total, 1.0 for an empty unit set
  std::uint64_t pi_length_sum = 0;
  int lambda_observed = 0;
  int progression_steps = 0;
};

// Solution trace file: a version header, then one record per move.
inline std::string emit_trace(const std::vector<Move>& moves) {
  std::string out = "mapp-trace 1\n";
  for (const Move& m : moves) {
    out += std::to_string(m.step_id) + " " + std::to_string(m.unit) + " " +
           std::to_string(m.from.x) + " " + std::to_string(m.from.y) + " " +
           std::to_string(m.to.x) + " " + std::to_string(m.to.y) + " " + to_string(m.kind) +
           "\n";
  }
  return out;
}

inline std::vector<Move> parse_trace(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "mapp-trace 1")
    throw ParseError("bad trace header, expected 'mapp-trace 1'", 1);
  std::vector<Move> moves;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    Move m;
    std::string kind;
    if (!(ls >> m.step_id >> m.unit >> m.from.x >> m.from.y >> m.to.x >> m.to.y >> kind))
      throw ParseError("bad trace record", lineno);
    if (kind == "progress")
      m.kind = MoveKind::Progress;
    else if (kind == "shift")
      m.kind = MoveKind::BlankShift;
    else if (kind == "undo")
      m.kind = MoveKind::Undo;
    else
      throw ParseError("unknown move kind '" + kind + "'", lineno);
    moves.push_back(m);
  }
  return moves;
}

}  // namespace mapp
