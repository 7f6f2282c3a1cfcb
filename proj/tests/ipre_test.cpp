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

#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "preround/preround.hpp"
#include "support/oracles.hpp"

namespace preround {
namespace {

// A valid seed for m candidates with the given k, drawn from a shuffled roster.
IpreSeed random_seed(std::mt19937_64& rng, std::size_t m, std::size_t k) {
  auto perm = oracle::random_order(rng, m);
  IpreSeed s;
  s.k = k;
  std::size_t next = 0;
  for (std::size_t i = 0; i < m / 2; ++i) s.first.push_back(perm[next++]);
  for (std::size_t i = 0; i < k; ++i) s.second.push_back(perm[next++]);
  while (next < m) {
    s.pool.emplace_back(perm[next], perm[next + 1]);
    next += 2;
  }
  return s;
}

// Roster a..h; matchups 1..4 all pooled.
IpreSeed small_seed() {
  IpreSeed s;
  s.k = 0;
  s.first = {0, 1, 2, 3};
  s.pool = {{4, 5}, {6, 7}};
  return s;
}

TEST(Seed, PoolOrientation) {
  const IpreSeed s = small_seed();
  s.validate(8);
  EXPECT_EQ(s.second_of(1, {false}), 4u);
  EXPECT_EQ(s.second_of(2, {false}), 5u);
  EXPECT_EQ(s.second_of(1, {true}), 5u);
  EXPECT_EQ(s.second_of(2, {true}), 4u);
  EXPECT_THROW(s.second_of(3, {true}), ElectionError);
  const Schedule sched = s.schedule_for({true, false});
  EXPECT_EQ(sched.pairs, (std::vector<Matchup>{{0, 5}, {1, 4}, {2, 6}, {3, 7}}));
  EXPECT_FALSE(sched.bye);
  EXPECT_EQ(s.query_pair(2, {true, false}), (Matchup{1, 4}));
}

TEST(Seed, Validation) {
  IpreSeed s = small_seed();
  EXPECT_THROW(s.validate(6), ElectionError);
  s.k = 2;
  EXPECT_THROW(s.validate(8), ElectionError);
  s = small_seed();
  s.pool[1] = {6, 0};
  EXPECT_THROW(s.validate(8), ElectionError);
  s = small_seed();
  s.pool.pop_back();
  EXPECT_THROW(s.validate(8), ElectionError);
}

TEST(Seed, RoundTrip) {
  const Profile p = parse_profile("candidates: a b c d e f g h\n1: a b c d e f g h\n");
  const std::string text = "k: 0\nfirst: a b c d\nsecond:\npool 1: e f\npool 2: g h\n";
  const IpreSeed s = parse_seed(text, p);
  EXPECT_EQ(s, small_seed());
  EXPECT_EQ(serialize_seed(s, p), text);
  std::mt19937_64 rng(53);
  for (int i = 0; i < 30; ++i) {
    const IpreSeed r = random_seed(rng, 8, i % 2 ? 4 : 0);
    EXPECT_EQ(parse_seed(serialize_seed(r, p), p), r);
  }
  EXPECT_THROW(parse_seed("k: 0\nfirst: a b c d\nsecond:\npool 2: e f\npool 3: g h\n", p), ParseError);
  EXPECT_THROW(parse_seed("k: 0\nfirst: a b c d\nsecond:\npool 1: e f\n", p), ElectionError);
  EXPECT_THROW(parse_seed("k: 0\nfirst: a b c q\nsecond:\npool 1: e f\npool 2: g h\n", p), ParseError);
  EXPECT_THROW(parse_seed("first: a b c d\n", p), ElectionError);
}

TEST(Engine, FixedBallotMatchesFixedPreround) {
  std::mt19937_64 rng(59);
  for (int i = 0; i < 60; ++i) {
    const std::size_t m = i % 3 == 0 ? 12 : 8;
    const std::size_t k = (i % 2 == 0) ? 0 : 4;
    const Profile p = oracle::random_profile(rng, m, 1 + rng() % 4, 3);
    const IpreSeed seed = random_seed(rng, m, k);
    const auto order = oracle::random_order(rng, m);
    const Ballot ballot = oracle::random_order(rng, m);
    for (Protocol proto : kAllProtocols) {
      FixedBallotStrategy strat(ballot);
      for_each_draw_sequence(seed.num_rounds(), [&](const std::vector<bool>& draws) {
        ScriptedDrawSource src(draws);
        const auto out = ipre_run(proto, p, strat, seed, src, TieBreakPolicy(order));
        const Schedule s = seed.schedule_for(draws);
        auto votes = oracle::expand(p);
        votes.push_back(ballot);
        EXPECT_EQ(out.winner, oracle::dpre_winner(proto, votes, s, order));
        EXPECT_EQ(out.transcript.schedule, s);
        EXPECT_EQ(out.transcript.manipulator_ballot, ballot);
      });
    }
  }
}

TEST(Engine, EventsAlternate) {
  std::mt19937_64 rng(61);
  const Profile p = oracle::random_profile(rng, 8, 3, 2);
  const IpreSeed seed = small_seed();
  FixedBallotStrategy strat(identity_ballot(8));
  ScriptedDrawSource src({true, false});
  const auto out = ipre_run(Protocol::Borda, p, strat, seed, src, TieBreakPolicy::roster_order(8));
  const std::vector<IpreEvent> want{{IpreEvent::Kind::Draw, 1},
                                    {IpreEvent::Kind::Query, 1},
                                    {IpreEvent::Kind::Draw, 2},
                                    {IpreEvent::Kind::Query, 2}};
  EXPECT_EQ(out.transcript.events, want);
  ASSERT_EQ(out.transcript.queries.size(), 2u);
  EXPECT_EQ(out.transcript.queries[0].first, 0u);
  EXPECT_EQ(out.transcript.queries[0].second, 5u);
  EXPECT_TRUE(out.transcript.queries[0].manipulator_answer);
  EXPECT_EQ(out.transcript.queries[0].group_answers.size(), p.groups().size());
  for (std::size_t g = 0; g < p.groups().size(); ++g) {
    EXPECT_EQ(out.transcript.queries[1].group_answers[g],
              oracle::position(p.groups()[g].ballot, 1) < oracle::position(p.groups()[g].ballot, 4));
  }
}

TEST(Engine, RejectsInconsistentCompletion) {
  std::mt19937_64 rng(67);
  const Profile p = oracle::random_profile(rng, 8, 2, 2);
  CallbackStrategy liar([](std::size_t, CandidateId, CandidateId, const std::vector<bool>&) { return false; },
                        [](const std::vector<bool>&, const std::vector<bool>&) { return identity_ballot(8); });
  ScriptedDrawSource src({false, false});
  EXPECT_THROW(ipre_run(Protocol::Plurality, p, liar, small_seed(), src, TieBreakPolicy::roster_order(8)),
               ElectionError);
  ScriptedDrawSource short_src({false});
  FixedBallotStrategy honest(identity_ballot(8));
  EXPECT_THROW(ipre_run(Protocol::Plurality, p, honest, small_seed(), short_src, TieBreakPolicy::roster_order(8)),
               ElectionError);
}

TEST(Engine, WinProbabilityCountsDraws) {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 20; ++i) {
    const Profile p = oracle::random_profile(rng, 8, 3, 3);
    const IpreSeed seed = random_seed(rng, 8, 0);
    const Ballot ballot = oracle::random_order(rng, 8);
    const auto order = oracle::random_order(rng, 8);
    auto votes = oracle::expand(p);
    votes.push_back(ballot);
    for (CandidateId target = 0; target < 8; ++target) {
      std::int64_t wins = 0;
      for (unsigned code = 0; code < 4; ++code) {
        const std::vector<bool> draws{(code & 2) != 0, (code & 1) != 0};
        wins += oracle::dpre_winner(Protocol::Maximin, votes, seed.schedule_for(draws), order) == target;
      }
      FixedBallotStrategy strat(ballot);
      EXPECT_EQ(ipre_win_probability(Protocol::Maximin, p, strat, seed, TieBreakPolicy(order), target),
                Rational(wins, 4));
    }
  }
}

TEST(Consistency, MakeConsistentFixesPairs) {
  std::mt19937_64 rng(73);
  for (int i = 0; i < 200; ++i) {
    const std::size_t m = 8;
    const auto perm = oracle::random_order(rng, m);
    std::vector<Matchup> pairs;
    std::vector<bool> want;
    for (std::size_t j = 0; j + 1 < m && pairs.size() < 3; j += 2) {
      pairs.emplace_back(perm[j], perm[j + 1]);
      want.push_back(rng() % 2);
    }
    const Ballot base = oracle::random_order(rng, m);
    const Ballot fixed = make_consistent(base, pairs, want);
    EXPECT_TRUE(is_consistent(fixed, pairs, want));
    auto sorted = fixed;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, identity_ballot(m));
    if (is_consistent(base, pairs, want)) {
      EXPECT_EQ(fixed, base);
    }
  }
}

TEST(Engine, SatisfyingStrategyWinsEveryDraw) {
  // (y1 v x1)(-y1 v -x1): answering x1 := not y1 always satisfies.
  const auto f = oracle::cnf(2, {{1, 2}, {-1, -2}}, 1);
  const auto r = build_ipre_instance(augment_for_ipre(reduce_sat(Protocol::Plurality, f)));
  const std::size_t m = r.profile.num_candidates();
  EXPECT_EQ(m, 12u);
  EXPECT_EQ(r.seed->k, 4u);
  ASSERT_EQ(r.seed->num_rounds(), 1u);
  // literal_pairs() lists Y variables first, so index 1 is x1.
  const auto literals = r.literal_pairs();
  CallbackStrategy good(
      [](std::size_t, CandidateId, CandidateId, const std::vector<bool>& draws) { return !draws.back(); },
      [&](const std::vector<bool>&, const std::vector<bool>& answers) {
        std::vector<Matchup> asked{{literals[1].positive, literals[1].negative}};
        return make_consistent(identity_ballot(m), asked, answers);
      });
  for (bool y : {false, true}) {
    ScriptedDrawSource src({y});
    const auto out = ipre_run(Protocol::Plurality, r.profile, good, *r.seed, src, TieBreakPolicy::roster_order(m));
    EXPECT_EQ(out.winner, r.preferred()) << "y1=" << y;
    EXPECT_EQ(out.transcript.queries[0].first, literals[1].positive);
    EXPECT_EQ(out.transcript.queries[0].second, literals[1].negative);
  }
  EXPECT_EQ(ipre_win_probability(Protocol::Plurality, r.profile, good, *r.seed, TieBreakPolicy::roster_order(m),
                                 r.preferred()),
            1);
}

}  // namespace
}  // namespace preround
