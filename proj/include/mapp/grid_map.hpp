#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mapp/error.hpp"

namespace mapp {

// Grid coordinate: x = column, y = row, origin at the top-left corner.
struct Loc {
  int x = 0;
  int y = 0;

  friend bool operator==(Loc a, Loc b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(Loc a, Loc b) { return !(a == b); }
  // Row-major ordering, used for every deterministic tie-break in the library.
  friend bool operator<(Loc a, Loc b) { return a.y != b.y ? a.y < b.y : a.x < b.x; }
};

struct LocHash {
  std::size_t operator()(Loc l) const {
    return std::hash<std::uint64_t>{}((std::uint64_t(std::uint32_t(l.y)) << 32) |
                                      std::uint32_t(l.x));
  }
};

inline std::string to_string(Loc l) {
  return "(" + std::to_string(l.x) + "," + std::to_string(l.y) + ")";
}

// Cardinal steps in the fixed emission order N, E, S, W.
inline constexpr std::array<Loc, 4> kCardinalSteps{{{0, -1}, {1, 0}, {0, 1}, {-1, 0}}};

inline Loc operator+(Loc a, Loc b) { return {a.x + b.x, a.y + b.y}; }

inline int manhattan(Loc a, Loc b) {
  return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

// Up-to-four passable neighbours of a cell, already ordered N, E, S, W.
struct NeighborList {
  std::array<Loc, 4> cells;
  int count = 0;

  const Loc* begin() const { return cells.data(); }
  const Loc* end() const { return cells.data() + count; }
  int size() const { return count; }
  Loc operator[](int i) const { return cells[std::size_t(i)]; }
};

// Immutable 4-connected traversability grid. Safe to share across threads
// once constructed.
class GridMap {
 public:
  GridMap(int width, int height, std::vector<std::uint8_t> passable)
      : width_(width), height_(height), passable_(std::move(passable)) {
    require(width_ > 0 && height_ > 0, "GridMap: non-positive dimensions");
    require(int(passable_.size()) == width_ * height_, "GridMap: cell count mismatch");
    for (std::uint8_t c : passable_) m_ += c ? 1 : 0;
  }

  int width() const { return width_; }
  int height() const { return height_; }
  // Number of traversable cells.
  int passable_count() const { return m_; }

  bool in_bounds(Loc l) const {
    return l.x >= 0 && l.x < width_ && l.y >= 0 && l.y < height_;
  }
  bool passable(Loc l) const { return in_bounds(l) && passable_[index(l)]; }
  int index(Loc l) const { return l.y * width_ + l.x; }
  Loc loc_of(int idx) const { return {idx % width_, idx / width_}; }

  NeighborList neighbors(Loc l) const {
    require(passable(l), "neighbors: cell is not passable");
    NeighborList out;
    for (Loc step : kCardinalSteps) {
      Loc c = l + step;
      if (passable(c)) out.cells[std::size_t(out.count++)] = c;
    }
    return out;
  }

  int degree(Loc l) const {
    int d = 0;
    for (Loc step : kCardinalSteps)
      if (passable(l + step)) ++d;
    return d;
  }

  // Single-width cells (at most two passable neighbours) are the only cells
  // that can belong to a tunnel.
  bool tunnel_eligible(Loc l) const { return passable(l) && degree(l) <= 2; }

  std::vector<Loc> passable_cells() const {
    std::vector<Loc> cells;
    cells.reserve(std::size_t(m_));
    for (int y = 0; y < height_; ++y)
      for (int x = 0; x < width_; ++x)
        if (passable_[std::size_t(y * width_ + x)]) cells.push_back({x, y});
    return cells;
  }

  // Map file format:
  //   type octile      (ignored)
  //   height H
  //   width W
  //   map
  //   H rows of W cells; '.' and 'G' passable, '@', 'O', 'T', '#' blocked.
  static GridMap parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;

    auto next_line = [&](const char* what) {
      if (!std::getline(in, line)) throw ParseError(std::string("unexpected end of file, expected ") + what, lineno + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      ++lineno;
    };

    next_line("type header");
    if (line.rfind("type", 0) != 0) throw ParseError("expected 'type' header", lineno);
    next_line("height header");
    int height = parse_header_int(line, "height", lineno);
    next_line("width header");
    int width = parse_header_int(line, "width", lineno);
    next_line("'map' separator");
    if (line != "map") throw ParseError("expected 'map' separator", lineno);
    if (height <= 0 || width <= 0) throw ParseError("non-positive map dimensions", lineno);

    std::vector<std::uint8_t> passable(std::size_t(width) * std::size_t(height), 0);
    for (int y = 0; y < height; ++y) {
      next_line("map row");
      if (int(line.size()) != width)
        throw ParseError("map row has " + std::to_string(line.size()) + " cells, expected " +
                             std::to_string(width),
                         lineno);
      for (int x = 0; x < width; ++x) {
        char c = line[std::size_t(x)];
        if (c == '.' || c == 'G')
          passable[std::size_t(y) * std::size_t(width) + std::size_t(x)] = 1;
        else if (c == '@' || c == 'O' || c == 'T' || c == '#')
          ;  // blocked
        else
          throw ParseError(std::string("unknown cell character '") + c + "'", lineno, x + 1);
      }
    }
    return GridMap(width, height, std::move(passable));
  }

  // Canonical form: parse(emit()) reproduces the map, and emit(parse(t)) == t
  // for files that use '.'/'@' cells and no trailing whitespace.
  std::string emit() const {
    std::string out = "type octile\nheight " + std::to_string(height_) + "\nwidth " +
                      std::to_string(width_) + "\nmap\n";
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x)
        out += passable_[std::size_t(y * width_ + x)] ? '.' : '@';
      out += '\n';
    }
    return out;
  }

 private:
  static int parse_header_int(const std::string& line, const std::string& key, int lineno) {
    if (line.rfind(key, 0) != 0 || line.size() <= key.size() || line[key.size()] != ' ')
      throw ParseError("expected '" + key + " <n>' header", lineno);
    try {
      return std::stoi(line.substr(key.size() + 1));
    } catch (const std::exception&) {
      throw ParseError("bad integer in '" + key + "' header", lineno);
    }
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> passable_;
  int m_ = 0;
};

}  // namespace mapp
