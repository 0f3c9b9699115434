// Copyright 2026 The mglab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Flat text serialization of a MarkovGame, one record per line:
//
//   mglab-game 1
//   horizon 3
//   states 2 2 2 1            # |S_h| for h = 1..H+1
//   actions_a 2 2 2
//   actions_b 2 2 2
//   reward <h> <s> <a> <b> <r>
//   transition <h> <s> <a> <b> <p_0> ... <p_{|S_{h+1}|-1}>
//
// Indices are 0-based. Every (h, s, a, b) needs exactly one reward and one
// transition line. Blank lines and '#' comments are ignored.

#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mglab/errors.hpp"
#include "mglab/game.hpp"

namespace mglab {

// Shortest-form round-trip formatting of a double.
inline std::string FormatDouble(double x) {
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

inline void WriteGame(std::ostream& out, const MarkovGame& game) {
  const GameDims& d = game.dims();
  out << "mglab-game 1\n";
  out << "horizon " << d.horizon << "\n";
  auto list = [&out](const char* key, const std::vector<int>& v) {
    out << key;
    for (int x : v) out << ' ' << x;
    out << '\n';
  };
  list("states", d.states);
  list("actions_a", d.actions_a);
  list("actions_b", d.actions_b);
  for (int h = 0; h < d.horizon; ++h)
    for (int s = 0; s < d.states[h]; ++s)
      for (int a = 0; a < d.actions_a[h]; ++a)
        for (int b = 0; b < d.actions_b[h]; ++b) {
          out << "reward " << h << ' ' << s << ' ' << a << ' ' << b << ' '
              << FormatDouble(game.reward(h, s, a, b)) << '\n';
          out << "transition " << h << ' ' << s << ' ' << a << ' ' << b;
          for (double p : game.transition(h, s, a, b)) out << ' ' << FormatDouble(p);
          out << '\n';
        }
}

namespace detail {

inline std::string StripComment(const std::string& line) {
  const auto hash = line.find('#');
  std::string s = hash == std::string::npos ? line : line.substr(0, hash);
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace detail

// Reads a game; stops after the last record or at a line equal to `terminator`
// when one is given (used when a game is embedded in a larger file).
inline MarkovGame ReadGame(std::istream& in, const std::string& source,
                           const std::string& terminator = {}, int* line_counter = nullptr) {
  int local_line = 0;
  int& line_no = line_counter ? *line_counter : local_line;
  GameDims d;
  bool header = false;
  std::vector<std::vector<std::vector<std::vector<double>>>> r;
  std::vector<std::vector<std::vector<std::vector<std::vector<double>>>>> p;
  std::vector<std::vector<std::vector<std::vector<char>>>> seen_r, seen_p;
  bool shaped = false;

  auto fail = [&](const std::string& what) { return ParseError(source, line_no, what); };
  auto shape = [&]() {
    if (shaped) return;
    if (d.horizon < 1 || d.states.empty() || d.actions_a.empty() || d.actions_b.empty())
      throw fail("dimension lines must precede reward/transition lines");
    try {
      d.Validate();
    } catch (const GameConstructionError& e) {
      throw fail(e.what());
    }
    r.resize(d.horizon);
    p.resize(d.horizon);
    seen_r.resize(d.horizon);
    seen_p.resize(d.horizon);
    for (int h = 0; h < d.horizon; ++h) {
      const int S = d.states[h], A = d.actions_a[h], B = d.actions_b[h];
      r[h].assign(S, std::vector<std::vector<double>>(A, std::vector<double>(B, 0.0)));
      p[h].assign(S, std::vector<std::vector<std::vector<double>>>(A, std::vector<std::vector<double>>(B)));
      seen_r[h].assign(S, std::vector<std::vector<char>>(A, std::vector<char>(B, 0)));
      seen_p[h] = seen_r[h];
    }
    shaped = true;
  };
  auto index = [&](std::istringstream& ss, int& h, int& s, int& a, int& b) {
    if (!(ss >> h >> s >> a >> b)) throw fail("expected indices h s a b");
    if (h < 0 || h >= d.horizon || s < 0 || s >= d.states[h] || a < 0 || a >= d.actions_a[h] ||
        b < 0 || b >= d.actions_b[h])
      throw fail("index out of range");
  };

  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!terminator.empty() && raw == terminator) break;
    const std::string line = detail::StripComment(raw);
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (!header) {
      int version = 0;
      if (key != "mglab-game" || !(ss >> version) || version != 1)
        throw fail("expected header 'mglab-game 1'");
      header = true;
      continue;
    }
    if (key == "horizon") {
      if (!(ss >> d.horizon)) throw fail("bad horizon");
    } else if (key == "states" || key == "actions_a" || key == "actions_b") {
      std::vector<int>& dst = key == "states" ? d.states : key == "actions_a" ? d.actions_a : d.actions_b;
      dst.clear();
      int x;
      while (ss >> x) dst.push_back(x);
    } else if (key == "reward") {
      shape();
      int h, s, a, b;
      index(ss, h, s, a, b);
      double v;
      if (!(ss >> v)) throw fail("missing reward value");
      if (!(v >= 0.0 && v <= 1.0)) throw fail("reward outside [0,1]");
      if (seen_r[h][s][a][b]) throw fail("duplicate reward");
      seen_r[h][s][a][b] = 1;
      r[h][s][a][b] = v;
    } else if (key == "transition") {
      shape();
      int h, s, a, b;
      index(ss, h, s, a, b);
      if (seen_p[h][s][a][b]) throw fail("duplicate transition");
      seen_p[h][s][a][b] = 1;
      double v;
      while (ss >> v) p[h][s][a][b].push_back(v);
      const auto& row = p[h][s][a][b];
      if (static_cast<int>(row.size()) != d.states[h + 1])
        throw fail("transition needs " + std::to_string(d.states[h + 1]) + " probabilities");
      double total = 0.0;
      for (double x : row) {
        if (!(x >= 0.0)) throw fail("negative transition probability");
        total += x;
      }
      if (std::abs(total - 1.0) > MarkovGame::kRenormalizeTolerance)
        throw fail("transition probabilities sum to " + FormatDouble(total));
    } else {
      throw fail("unknown key '" + key + "'");
    }
    if (!ss.eof()) {
      std::string rest;
      if (ss.clear(), ss >> rest) throw fail("trailing token '" + rest + "'");
    }
  }
  if (!header) throw ParseError(source, line_no, "empty game file");
  shape();
  for (int h = 0; h < d.horizon; ++h)
    for (int s = 0; s < d.states[h]; ++s)
      for (int a = 0; a < d.actions_a[h]; ++a)
        for (int b = 0; b < d.actions_b[h]; ++b)
          if (!seen_r[h][s][a][b] || !seen_p[h][s][a][b])
            throw ParseError(source, line_no,
                             "missing reward or transition for (" + std::to_string(h) + "," +
                                 std::to_string(s) + "," + std::to_string(a) + "," +
                                 std::to_string(b) + ")");
  try {
    return MarkovGame(d, r, p);
  } catch (const GameConstructionError& e) {
    throw ParseError(source, line_no, e.what());
  }
}

}  // namespace mglab
