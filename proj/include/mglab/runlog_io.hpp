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

// Text serialization of RunLog. Line records:
//
//   mglab-runlog 1
//   config <key> = <value>
//   algorithm <epoch_v|adaptive_meta>
//   opponent <kind>
//   seed <u64>
//   iota_scale <x>
//   K <episodes>
//   instance <first-episode> <block> <sub-block> <eta> <iota> <delta>
//   partial <0|1>
//   game-begin ... game-end        (embedded game file)
//   ep <k> <s1> <V1> <block> <sub-block> <s_1..s_{H+1}> <a_1..a_H> <b_1..b_H> <r_1..r_H>
//   mu <h> <s> <probs...>          (cells changed since the previous episode)
//   nu <h> <s> <probs...>
//   vc <episode> <h> <s> <value>
//   end <K>
//
// Doubles are printed in shortest round-trip form, so write -> read -> write
// is byte-stable.

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mglab/errors.hpp"
#include "mglab/game.hpp"
#include "mglab/game_io.hpp"
#include "mglab/simulation.hpp"

namespace mglab {

namespace detail {

template <Side kSide>
void WritePolicyDelta(std::ostream& out, const char* tag, const Policy<kSide>& cur,
                      const Policy<kSide>* prev) {
  for (int h = 0; h < cur.horizon(); ++h)
    for (int s = 0; s < cur.num_states(h); ++s) {
      const auto p = cur.at(h, s);
      if (prev) {
        const auto q = prev->at(h, s);
        if (std::equal(p.begin(), p.end(), q.begin(), q.end())) continue;
      }
      out << tag << ' ' << h << ' ' << s;
      for (double x : p) out << ' ' << FormatDouble(x);
      out << '\n';
    }
}

}  // namespace detail

inline void WriteRunLog(std::ostream& out, const RunLog& log) {
  out << "mglab-runlog 1\n";
  for (const auto& [k, v] : log.config) out << "config " << k << " = " << v << '\n';
  out << "algorithm " << ToString(log.algorithm) << '\n';
  out << "opponent " << log.opponent_kind << '\n';
  out << "seed " << log.seed << '\n';
  out << "iota_scale " << FormatDouble(log.iota_scale) << '\n';
  out << "K " << log.K() << '\n';
  for (const auto& i : log.instances)
    out << "instance " << i.episode << ' ' << i.block << ' ' << i.sub_block << ' '
        << FormatDouble(i.eta) << ' ' << FormatDouble(i.iota) << ' ' << FormatDouble(i.delta)
        << '\n';
  out << "partial " << (log.last_sub_block_partial ? 1 : 0) << '\n';
  out << "game-begin\n";
  WriteGame(out, log.game);
  out << "game-end\n";
  for (std::size_t k = 0; k < log.episodes.size(); ++k) {
    const auto& e = log.episodes[k];
    out << "ep " << k + 1 << ' ' << e.s1 << ' ' << FormatDouble(e.v1_optimistic) << ' ' << e.block
        << ' ' << e.sub_block;
    for (int s : e.trajectory.states) out << ' ' << s;
    for (int a : e.trajectory.actions_a) out << ' ' << a;
    for (int b : e.trajectory.actions_b) out << ' ' << b;
    for (double r : e.trajectory.rewards) out << ' ' << FormatDouble(r);
    out << '\n';
    detail::WritePolicyDelta(out, "mu", log.learner_policies[k],
                             k ? &log.learner_policies[k - 1] : nullptr);
    detail::WritePolicyDelta(out, "nu", log.opponent_policies[k],
                             k ? &log.opponent_policies[k - 1] : nullptr);
  }
  for (const auto& c : log.value_changes)
    out << "vc " << c.episode << ' ' << c.h << ' ' << c.s << ' ' << FormatDouble(c.value) << '\n';
  out << "end " << log.K() << '\n';
}

inline RunLog ReadRunLog(std::istream& in, const std::string& source) {
  RunLog log;
  int line_no = 0;
  std::string raw;
  auto fail = [&](const std::string& what) { return CorruptLogError(source + ":" + std::to_string(line_no) + ": " + what); };
  std::int64_t declared_k = -1;
  bool have_game = false;
  bool ended = false;
  MaxPolicy mu;
  MinPolicy nu;

  if (!std::getline(in, raw) || raw != "mglab-runlog 1") {
    throw CorruptLogError(source + ": missing 'mglab-runlog 1' header");
  }
  ++line_no;
  while (std::getline(in, raw)) {
    ++line_no;
    if (raw.empty()) continue;
    if (ended) throw fail("content after end record");
    std::istringstream ss(raw);
    std::string tag;
    ss >> tag;
    if (tag == "config") {
      std::string key, eq;
      ss >> key >> eq;
      std::string value;
      std::getline(ss, value);
      if (!value.empty() && value.front() == ' ') value.erase(0, 1);
      log.config.emplace_back(key, value);
    } else if (tag == "algorithm") {
      std::string a;
      ss >> a;
      if (a == "epoch_v") log.algorithm = Algorithm::kEpochV;
      else if (a == "adaptive_meta") log.algorithm = Algorithm::kAdaptiveMeta;
      else throw fail("unknown algorithm '" + a + "'");
    } else if (tag == "opponent") {
      ss >> log.opponent_kind;
    } else if (tag == "seed") {
      ss >> log.seed;
    } else if (tag == "iota_scale") {
      ss >> log.iota_scale;
    } else if (tag == "K") {
      ss >> declared_k;
      if (declared_k < 1) throw fail("bad K");
      log.episodes.reserve(declared_k);
    } else if (tag == "instance") {
      SubBlockStart i{};
      if (!(ss >> i.episode >> i.block >> i.sub_block >> i.eta >> i.iota >> i.delta))
        throw fail("bad instance record");
      log.instances.push_back(i);
    } else if (tag == "partial") {
      int p = 0;
      ss >> p;
      log.last_sub_block_partial = p != 0;
    } else if (tag == "game-begin") {
      try {
        log.game = ReadGame(in, source, "game-end", &line_no);
      } catch (const ParseError& e) {
        throw CorruptLogError(e.what());
      }
      have_game = true;
      mu = MaxPolicy::Uniform(log.game);
      nu = MinPolicy::Uniform(log.game);
    } else if (tag == "ep") {
      if (!have_game) throw fail("episode before game");
      const int H = log.game.horizon();
      std::int64_t k = 0;
      EpisodeRecord e;
      if (!(ss >> k >> e.s1 >> e.v1_optimistic >> e.block >> e.sub_block)) throw fail("bad episode record");
      if (k != log.K() + 1) throw fail("episode out of sequence");
      auto& t = e.trajectory;
      t.states.resize(H + 1);
      t.actions_a.resize(H);
      t.actions_b.resize(H);
      t.rewards.resize(H);
      for (auto& x : t.states) ss >> x;
      for (auto& x : t.actions_a) ss >> x;
      for (auto& x : t.actions_b) ss >> x;
      for (auto& x : t.rewards) ss >> x;
      if (!ss) throw fail("truncated episode record");
      if (!log.episodes.empty()) {
        log.learner_policies.push_back(mu);
        log.opponent_policies.push_back(nu);
      }
      log.episodes.push_back(std::move(e));
    } else if (tag == "mu" || tag == "nu") {
      if (log.episodes.empty()) throw fail("policy before first episode");
      int h = -1, s = -1;
      ss >> h >> s;
      if (h < 0 || h >= log.game.horizon() || s < 0 || s >= log.game.num_states(h))
        throw fail("policy cell out of range");
      std::vector<double>& p = tag == "mu" ? mu.mutable_at(h, s) : nu.mutable_at(h, s);
      for (auto& x : p) ss >> x;
      if (!ss) throw fail("truncated policy record");
    } else if (tag == "vc") {
      ValueChange c{};
      if (!(ss >> c.episode >> c.h >> c.s >> c.value)) throw fail("bad value-change record");
      log.value_changes.push_back(c);
    } else if (tag == "end") {
      std::int64_t k = -1;
      ss >> k;
      if (k != declared_k || k != log.K()) throw fail("episode count does not match K");
      ended = true;
    } else {
      throw fail("unknown record '" + tag + "'");
    }
  }
  if (!ended) throw CorruptLogError(source + ": truncated run log (no end record)");
  if (log.instances.empty()) throw CorruptLogError(source + ": no instance records");
  log.learner_policies.push_back(mu);
  log.opponent_policies.push_back(nu);
  return log;
}

}  // namespace mglab
