#pragma once

#include <vector>

#include "mapp/grid_map.hpp"

namespace mapp {

// A mobile unit with its start-target pair. Starts are pairwise distinct,
// targets are pairwise distinct, and start != target per unit; a unit may
// start on another unit's target.
struct UnitSpec {
  int id = 0;
  Loc start;
  Loc target;
};

inline void check_units(const GridMap& map, const std::vector<UnitSpec>& units) {
  for (std::size_t i = 0; i < units.size(); ++i) {
    const UnitSpec& u = units[i];
    require(map.passable(u.start), "unit start not passable");
    require(map.passable(u.target), "unit target not passable");
    require(u.start != u.target, "unit start equals its target");
    for (std::size_t j = i + 1; j < units.size(); ++j) {
      require(units[j].start != u.start, "duplicate unit start");
      require(units[j].target != u.target, "duplicate unit target");
      require(units[j].id != u.id, "duplicate unit id");
    }
  }
}

}  // namespace mapp
