#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mapp/grid_map.hpp"
#include "mapp/rng.hpp"
#include "mapp/unit.hpp"

namespace mapp {

struct Scenario {
  std::string map_ref;  // path as written in the file; informational
  std::vector<UnitSpec> units;
  std::uint64_t seed = 0;
};

// Uniform sampling without replacement via a partial Fisher-Yates shuffle
// over the passable cells (ordered row-major), driven by SplitMix64. Starts
// and targets are drawn independently; a unit whose own draw collides
// resolves by a deterministic swap with the nearest collision-free peer.
// Requires 2n <= m so that blanks remain for the solver to work with.
inline Scenario gen_scenario(const GridMap& map, int n, std::uint64_t seed) {
  require(n >= 0, "gen_scenario: negative unit count");
  require(2 * n <= map.passable_count(), "gen_scenario: need 2n <= passable cells");

  SplitMix64 rng(seed);
  std::vector<Loc> cells = map.passable_cells();

  auto draw = [&](int count) {
    std::vector<Loc> pool = cells;
    std::vector<Loc> out;
    out.reserve(std::size_t(count));
    for (int i = 0; i < count; ++i) {
      std::size_t j = std::size_t(i) + std::size_t(rng.below(pool.size() - std::size_t(i)));
      std::swap(pool[std::size_t(i)], pool[j]);
      out.push_back(pool[std::size_t(i)]);
    }
    return out;
  };

  std::vector<Loc> starts = draw(n);
  std::vector<Loc> targets = draw(n);
  for (int i = 0; i < n; ++i) {
    if (starts[std::size_t(i)] != targets[std::size_t(i)]) continue;
    for (int j = 1; j < n; ++j) {
      int o = (i + j) % n;
      if (targets[std::size_t(o)] != starts[std::size_t(i)] &&
          targets[std::size_t(i)] != starts[std::size_t(o)]) {
        std::swap(targets[std::size_t(i)], targets[std::size_t(o)]);
        break;
      }
    }
    require(starts[std::size_t(i)] != targets[std::size_t(i)],
            "gen_scenario: could not separate a start-target collision");
  }

  Scenario scen;
  scen.seed = seed;
  scen.units.reserve(std::size_t(n));
  for (int i = 0; i < n; ++i)
    scen.units.push_back({i, starts[std::size_t(i)], targets[std::size_t(i)]});
  return scen;
}

// Scenario file:
//   version 1
//   map <path>
//   <id> <sx> <sy> <tx> <ty>   (one line per unit)
inline std::string emit_scenario(const Scenario& scen) {
  std::string out = "version 1\nmap " + scen.map_ref + "\n";
  for (const UnitSpec& u : scen.units)
    out += std::to_string(u.id) + " " + std::to_string(u.start.x) + " " +
           std::to_string(u.start.y) + " " + std::to_string(u.target.x) + " " +
           std::to_string(u.target.y) + "\n";
  return out;
}

inline Scenario parse_scenario(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;

  auto next_line = [&](const char* what) {
    if (!std::getline(in, line)) throw ParseError(std::string("missing ") + what, lineno + 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++lineno;
  };

  next_line("version header");
  if (line != "version 1") throw ParseError("expected 'version 1'", lineno);
  next_line("map reference");
  if (line.rfind("map ", 0) != 0) throw ParseError("expected 'map <path>'", lineno);

  Scenario scen;
  scen.map_ref = line.substr(4);
  std::unordered_set<Loc, LocHash> starts, targets;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    UnitSpec u;
    if (!(ls >> u.id >> u.start.x >> u.start.y >> u.target.x >> u.target.y))
      throw ParseError("bad unit record", lineno);
    if (u.start == u.target) throw ParseError("unit start equals its target", lineno);
    if (!starts.insert(u.start).second) throw ParseError("duplicate start", lineno);
    if (!targets.insert(u.target).second) throw ParseError("duplicate target", lineno);
    scen.units.push_back(u);
  }
  return scen;
}

// Passability is a map-level property, checked once the map is at hand.
inline void check_scenario(const GridMap& map, const Scenario& scen) {
  check_units(map, scen.units);
}

// One benchmark result per instance.
struct ResultRow {
  std::string map_id;
  std::string scen_id;
  int n = 0;
  int m = 0;
  std::string mode;
  int slidable = 0;
  int ti_slidable = 0;
  int ac_slidable = 0;
  int ti_ac_slidable = 0;
  int unproven = 0;
  int solved = 0;
  std::uint64_t total_moves = 0;
  std::uint64_t undo_moves = 0;
  int exit_code = 0;
  long long wall_time_ms = 0;
};

inline std::string result_csv_header() {
  return "map,scen,n,m,mode,slidable,ti_slidable,ac_slidable,ti_ac_slidable,unproven,"
         "solved,total_moves,undo_moves,exit_code,wall_time_ms";
}

inline std::string to_csv(const ResultRow& r) {
  std::ostringstream out;
  out << r.map_id << ',' << r.scen_id << ',' << r.n << ',' << r.m << ',' << r.mode << ','
      << r.slidable << ',' << r.ti_slidable << ',' << r.ac_slidable << ',' << r.ti_ac_slidable
      << ',' << r.unproven << ',' << r.solved << ',' << r.total_moves << ',' << r.undo_moves
      << ',' << r.exit_code << ',' << r.wall_time_ms;
  return out.str();
}

}  // namespace mapp
