#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "mapp/error.hpp"

namespace mapp {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path, 0);
  out << content;
}

}  // namespace mapp
