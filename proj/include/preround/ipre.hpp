// Copyright 2026 The Preround Authors
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

// Interleaved preround: scheduling draws alternate with pairwise queries to
// all voters, then the remaining ballots are collected and the completed
// schedule runs as a deterministic preround.
//
// Matchups are numbered 1..m/2. The seed fixes the first candidate of every
// matchup, both candidates of matchups 1..k, and for every matchup pair
// (2i-1, 2i) with i > k/2 the two candidates still to be placed. Round
// t = 1..m/4-k/2 then
//   1. draws which pooled candidate faces c(2i-1, 1), i = k/2 + t;
//   2. asks every voter to compare the two candidates of matchup t.
// Requires m % 4 == 0.

#pragma once

#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "preround/election.hpp"
#include "preround/protocols.hpp"
#include "preround/schedule.hpp"

namespace preround {

struct IpreSeed {
  std::size_t k = 0;
  std::vector<CandidateId> first;  // c(i, 1) for every matchup
  std::vector<CandidateId> second;  // c(i, 2) for i <= k
  std::vector<Matchup> pool;  // per unscheduled matchup pair, in round order

  std::size_t num_matchups() const { return first.size(); }
  std::size_t num_rounds() const { return pool.size(); }

  void validate(std::size_t m) const {
    if (m % 4 != 0) throw ElectionError("interleaved preround needs a roster size divisible by 4 (got " +
                                        std::to_string(m) + ")");
    if (k % 4 != 0) throw ElectionError("seed k must be a multiple of 4");
    if (first.size() != m / 2) throw ElectionError("seed must name a first candidate for all m/2 matchups");
    if (k > m / 2) throw ElectionError("seed k exceeds the number of matchups");
    if (second.size() != k) throw ElectionError("seed must name exactly k second candidates");
    if (pool.size() != m / 4 - k / 2) throw ElectionError("seed must give a pool for every unscheduled matchup pair");
    std::vector<bool> seen(m, false);
    auto mark = [&](CandidateId c) {
      if (c >= m || seen[c]) throw ElectionError("seed candidates must be distinct roster members");
      seen[c] = true;
    };
    for (CandidateId c : first) mark(c);
    for (CandidateId c : second) mark(c);
    for (const auto& [a, b] : pool) {
      mark(a);
      mark(b);
    }
  }

  // Second candidate of matchup `j` (1-based) once draws 1..ceil((j-k)/2) are known.
  CandidateId second_of(std::size_t j, const std::vector<bool>& draws) const {
    if (j <= k) return second.at(j - 1);
    const std::size_t offset = j - k;  // 1-based within the pooled matchups
    const std::size_t round = (offset + 1) / 2;
    if (round > draws.size()) throw ElectionError("matchup " + std::to_string(j) + " not scheduled yet");
    const auto& [a, b] = pool.at(round - 1);
    const bool swapped = draws[round - 1];
    const bool odd = offset % 2 == 1;
    return odd ? (swapped ? b : a) : (swapped ? a : b);
  }

  // The full schedule once every round has been drawn.
  Schedule schedule_for(const std::vector<bool>& draws) const {
    if (draws.size() != pool.size()) throw ElectionError("need one draw per unscheduled matchup pair");
    Schedule s;
    for (std::size_t j = 1; j <= first.size(); ++j) s.pairs.emplace_back(first[j - 1], second_of(j, draws));
    return s;
  }

  // Candidates compared by the query in round t (1-based): matchup t.
  Matchup query_pair(std::size_t round, const std::vector<bool>& draws) const {
    return {first.at(round - 1), second_of(round, draws)};
  }

  bool operator==(const IpreSeed&) const = default;
};

// Nature's coin for each round.
class DrawSource {
 public:
  virtual ~DrawSource() = default;
  virtual bool draw(std::size_t round) = 0;
};

class SeededDrawSource : public DrawSource {
 public:
  explicit SeededDrawSource(std::uint64_t seed) : rng_(seed) {}
  bool draw(std::size_t) override { return std::bernoulli_distribution(0.5)(rng_); }

 private:
  std::mt19937_64 rng_;
};

class ScriptedDrawSource : public DrawSource {
 public:
  explicit ScriptedDrawSource(std::vector<bool> bits) : bits_(std::move(bits)) {}
  bool draw(std::size_t round) override {
    if (round == 0 || round > bits_.size()) throw ElectionError("scripted draw sequence too short");
    return bits_[round - 1];
  }

 private:
  std::vector<bool> bits_;
};

// The manipulator's side of the protocol. answer() returns true for
// "prefers `first`"; complete() must return a full ballot agreeing with every
// answer given.
class ManipulatorStrategy {
 public:
  virtual ~ManipulatorStrategy() = default;
  virtual bool answer(std::size_t matchup, CandidateId first, CandidateId second, const std::vector<bool>& draws) = 0;
  virtual Ballot complete(const std::vector<bool>& draws, const std::vector<bool>& answers) = 0;
};

// Answers from, and completes with, a fixed ballot.
class FixedBallotStrategy : public ManipulatorStrategy {
 public:
  explicit FixedBallotStrategy(Ballot ballot) : ballot_(std::move(ballot)), position_(ballot_.size()) {
    for (std::size_t i = 0; i < ballot_.size(); ++i) position_.at(ballot_[i]) = i;
  }
  bool answer(std::size_t, CandidateId first, CandidateId second, const std::vector<bool>&) override {
    return position_.at(first) < position_.at(second);
  }
  Ballot complete(const std::vector<bool>&, const std::vector<bool>&) override { return ballot_; }

 private:
  Ballot ballot_;
  std::vector<std::size_t> position_;
};

class CallbackStrategy : public ManipulatorStrategy {
 public:
  using AnswerFn = std::function<bool(std::size_t, CandidateId, CandidateId, const std::vector<bool>&)>;
  using CompleteFn = std::function<Ballot(const std::vector<bool>&, const std::vector<bool>&)>;

  CallbackStrategy(AnswerFn answer, CompleteFn complete) : answer_(std::move(answer)), complete_(std::move(complete)) {}
  bool answer(std::size_t j, CandidateId a, CandidateId b, const std::vector<bool>& draws) override {
    return answer_(j, a, b, draws);
  }
  Ballot complete(const std::vector<bool>& draws, const std::vector<bool>& answers) override {
    return complete_(draws, answers);
  }

 private:
  AnswerFn answer_;
  CompleteFn complete_;
};

struct IpreQuery {
  std::size_t matchup = 0;
  CandidateId first = 0;
  CandidateId second = 0;
  std::vector<bool> group_answers;  // per nonmanipulator group: prefers first
  bool manipulator_answer = false;
};

struct IpreEvent {
  enum class Kind { Draw, Query };
  Kind kind;
  std::size_t index;  // Draw: matchup-pair index i (k/2 < i <= m/4); Query: matchup number

  bool operator==(const IpreEvent&) const = default;
};

struct IpreTranscript {
  std::vector<bool> draws;
  std::vector<IpreQuery> queries;
  std::vector<IpreEvent> events;
  Schedule schedule;
  Ballot manipulator_ballot;
  Profile final_profile;
};

struct IpreOutcome {
  CandidateId winner = 0;
  IpreTranscript transcript;
};

// Moves each constrained pair into the requested order by swapping the two
// entries in place. The pairs are disjoint, so fixes never interfere.
inline Ballot make_consistent(Ballot base, std::span<const Matchup> pairs, const std::vector<bool>& prefer_first) {
  std::vector<std::size_t> position(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) position[base[i]] = i;
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    auto [a, b] = pairs[q];
    if (!prefer_first[q]) std::swap(a, b);
    if (position[a] > position[b]) {
      std::swap(base[position[a]], base[position[b]]);
      std::swap(position[a], position[b]);
    }
  }
  return base;
}

inline bool is_consistent(const Ballot& ballot, std::span<const Matchup> pairs, const std::vector<bool>& prefer_first) {
  std::vector<std::size_t> position(ballot.size());
  for (std::size_t i = 0; i < ballot.size(); ++i) position[ballot[i]] = i;
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    const auto [a, b] = pairs[q];
    if ((position[a] < position[b]) != prefer_first[q]) return false;
  }
  return true;
}

inline IpreOutcome ipre_run(Protocol protocol, const Profile& nonmanipulators, ManipulatorStrategy& manipulator,
                            const IpreSeed& seed, DrawSource& randomness, const TieBreakPolicy& tiebreak) {
  const std::size_t m = nonmanipulators.num_candidates();
  seed.validate(m);
  IpreOutcome out;
  IpreTranscript& tr = out.transcript;

  std::vector<std::vector<std::size_t>> positions;
  for (const auto& g : nonmanipulators.groups()) {
    std::vector<std::size_t> pos(m);
    for (std::size_t i = 0; i < m; ++i) pos[g.ballot[i]] = i;
    positions.push_back(std::move(pos));
  }

  std::vector<bool> answers;
  std::vector<Matchup> asked;
  for (std::size_t round = 1; round <= seed.num_rounds(); ++round) {
    tr.draws.push_back(randomness.draw(round));
    tr.events.push_back({IpreEvent::Kind::Draw, seed.k / 2 + round});

    const auto [a, b] = seed.query_pair(round, tr.draws);
    IpreQuery q{round, a, b, {}, false};
    for (const auto& pos : positions) q.group_answers.push_back(pos[a] < pos[b]);
    q.manipulator_answer = manipulator.answer(round, a, b, tr.draws);
    tr.events.push_back({IpreEvent::Kind::Query, round});
    answers.push_back(q.manipulator_answer);
    asked.emplace_back(a, b);
    tr.queries.push_back(std::move(q));
  }

  tr.manipulator_ballot = manipulator.complete(tr.draws, answers);
  nonmanipulators.check_ballot(tr.manipulator_ballot);
  if (!is_consistent(tr.manipulator_ballot, asked, answers)) {
    throw ElectionError("manipulator completion contradicts its recorded answers");
  }
  tr.schedule = seed.schedule_for(tr.draws);
  tr.final_profile = nonmanipulators.with_ballot(tr.manipulator_ballot);
  out.winner = dpre_winner(protocol, tr.final_profile, tr.schedule, tiebreak);
  return out;
}

// Calls fn(draws) for all 2^rounds draw sequences, in binary counting order
// (round 1 is the most significant bit).
template <typename Fn>
void for_each_draw_sequence(std::size_t rounds, Fn&& fn) {
  if (rounds > 30) throw ElectionError("too many rounds to enumerate draw sequences");
  std::vector<bool> draws(rounds);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << rounds); ++code) {
    for (std::size_t r = 0; r < rounds; ++r) draws[r] = (code >> (rounds - 1 - r)) & 1;
    fn(static_cast<const std::vector<bool>&>(draws));
  }
}

// Exact probability that `target` wins when nature's draws are uniform,
// found by running the engine once per draw sequence.
inline Rational ipre_win_probability(Protocol protocol, const Profile& nonmanipulators,
                                     ManipulatorStrategy& manipulator, const IpreSeed& seed,
                                     const TieBreakPolicy& tiebreak, CandidateId target) {
  std::int64_t wins = 0;
  const std::size_t rounds = seed.num_rounds();
  for_each_draw_sequence(rounds, [&](const std::vector<bool>& draws) {
    ScriptedDrawSource source(draws);
    if (ipre_run(protocol, nonmanipulators, manipulator, seed, source, tiebreak).winner == target) ++wins;
  });
  return Rational(wins, std::int64_t{1} << rounds);
}

// Seed file:
//   k: 4
//   first: a b c d ...       (one per matchup)
//   second: e f g h          (k entries)
//   pool 3: x y              (one line per unscheduled matchup pair i)
inline IpreSeed parse_seed(std::string_view text, const Profile& profile) {
  IpreSeed seed;
  bool have_k = false, have_first = false, have_second = false;
  std::size_t expected_pool = 0;
  detail::for_each_content_line(text, [&](std::size_t line_no, std::string_view line) {
    auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "expected '<key>: <values>'");
    auto key = detail::split_ws(line.substr(0, colon));
    auto values = detail::split_ws(line.substr(colon + 1));
    auto names = [&]() {
      std::vector<CandidateId> out;
      for (auto v : values) {
        auto c = profile.find(v);
        if (!c) throw ParseError(line_no, "unknown candidate '" + std::string(v) + "'");
        out.push_back(*c);
      }
      return out;
    };
    if (key.size() == 1 && key[0] == "k") {
      auto k = values.size() == 1 ? detail::parse_int64(values[0]) : std::nullopt;
      if (!k || *k < 0) throw ParseError(line_no, "malformed k");
      seed.k = static_cast<std::size_t>(*k);
      expected_pool = seed.k / 2 + 1;
      have_k = true;
    } else if (key.size() == 1 && key[0] == "first") {
      seed.first = names();
      have_first = true;
    } else if (key.size() == 1 && key[0] == "second") {
      seed.second = names();
      have_second = true;
    } else if (key.size() == 2 && key[0] == "pool") {
      if (!have_k) throw ParseError(line_no, "'pool' before 'k'");
      auto i = detail::parse_int64(key[1]);
      if (!i || static_cast<std::size_t>(*i) != expected_pool) {
        throw ParseError(line_no, "expected pool " + std::to_string(expected_pool));
      }
      auto ids = names();
      if (ids.size() != 2) throw ParseError(line_no, "pool needs exactly two candidates");
      seed.pool.emplace_back(ids[0], ids[1]);
      ++expected_pool;
    } else {
      throw ParseError(line_no, "unknown key '" + std::string(line.substr(0, colon)) + "'");
    }
  });
  if (!have_k || !have_first || !have_second) throw ElectionError("seed file needs 'k:', 'first:' and 'second:' lines");
  seed.validate(profile.num_candidates());
  return seed;
}

inline std::string serialize_seed(const IpreSeed& seed, const Profile& profile) {
  std::ostringstream out;
  out << "k: " << seed.k << '\n';
  out << "first:";
  for (CandidateId c : seed.first) out << ' ' << profile.name(c);
  out << '\n' << "second:";
  for (CandidateId c : seed.second) out << ' ' << profile.name(c);
  out << '\n';
  for (std::size_t r = 0; r < seed.pool.size(); ++r) {
    out << "pool " << seed.k / 2 + r + 1 << ": " << profile.name(seed.pool[r].first) << ' '
        << profile.name(seed.pool[r].second) << '\n';
  }
  return out.str();
}

}  // namespace preround
