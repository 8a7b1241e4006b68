#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "chp/chp.hpp"

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline chp::Document load_fixture(const std::string& file) {
  return chp::parse(read_file(std::string(CHP_FIXTURE_DIR) + "/" + file));
}

// Test-side reachability oracle, independent of the library exploration:
// recursive descent over markings as sorted place-name sets.
inline std::set<std::set<std::string>> oracle_reach(const chp::Net& net) {
  std::set<std::set<std::string>> seen;
  auto names = [&](const chp::Marking& m) {
    auto v = net.place_names(m);
    return std::set<std::string>(v.begin(), v.end());
  };
  auto rec = [&](auto&& self, const chp::Marking& m) -> void {
    if (!seen.insert(names(m)).second) return;
    for (const auto& t : net.transitions) {
      if (!m.contains(t.pre)) continue;
      self(self, (m - t.pre) | t.post);
    }
  };
  rec(rec, net.initial);
  return seen;
}
