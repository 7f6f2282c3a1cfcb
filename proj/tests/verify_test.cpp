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

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "preround/preround.hpp"
#include "support/oracles.hpp"

namespace preround {
namespace {

const Protocol kSatProtocols[] = {Protocol::Plurality, Protocol::Borda, Protocol::Maximin};

CnfFormula two_clause() { return oracle::cnf(2, {{1, 2}, {-1, -2}}); }

const PropertyReport& find_report(const std::vector<PropertyReport>& reports, const std::string& id) {
  for (const auto& r : reports) {
    if (r.id == id) return r;
  }
  throw std::runtime_error("no report " + id);
}

// Re-runs the protocol on a counterexample's election with its tie-break and
// returns the winner's name.
std::string replay(Protocol proto, const Counterexample& cx) {
  const Profile& e = *cx.election;
  std::vector<CandidateId> all(e.num_candidates());
  std::iota(all.begin(), all.end(), CandidateId{0});
  return e.name(oracle::winner(proto, oracle::expand(e), all, cx.tiebreak));
}

TEST(SatSolve, Examples) {
  EXPECT_EQ(sat_solve(two_clause()), (std::vector<bool>{true, false}));
  EXPECT_FALSE(sat_solve(oracle::cnf(1, {{1}, {-1}})));
  EXPECT_EQ(sat_solve(oracle::cnf(3, {})), (std::vector<bool>{true, true, true}));
}

TEST(SatSolve, MatchesOracle) {
  std::mt19937_64 rng(151);
  for (int i = 0; i < 300; ++i) {
    const auto f = oracle::random_cnf(rng, 1 + i % 5, 1 + i % 9);
    const auto a = sat_solve(f);
    EXPECT_EQ(a.has_value(), oracle::satisfiable(f));
    if (a) {
      EXPECT_TRUE(f.satisfied_by(*a));
    }
  }
}

TEST(PerfectMatchings, Examples) {
  EXPECT_EQ(count_perfect_matchings(oracle::graph_k2(0xF)), 2);
  BipartiteGraph k33;
  k33.k = 3;
  for (std::size_t i = 1; i <= 3; ++i) {
    for (std::size_t j = 4; j <= 6; ++j) k33.add_edge(i, j);
  }
  EXPECT_EQ(count_perfect_matchings(k33), 6);
  // Edges (1,3), (1,4), (2,4).
  EXPECT_EQ(count_perfect_matchings(oracle::graph_k2(0b1011)), 1);
}

TEST(PerfectMatchings, MatchesOracle) {
  std::mt19937_64 rng(157);
  for (int i = 0; i < 100; ++i) {
    const auto g = oracle::random_graph(rng, 1 + i % 6, 0.3 + 0.1 * (i % 5));
    EXPECT_EQ(count_perfect_matchings(g), oracle::perfect_matchings(g));
  }
}

TEST(StochasticSat, Examples) {
  EXPECT_EQ(stochastic_sat_value(oracle::cnf(2, {{1, 2}, {-1, -2}}, 1)), 1);
  EXPECT_EQ(stochastic_sat_value(oracle::cnf(2, {{1}, {2}}, 1)), Rational(1, 2));
  EXPECT_EQ(stochastic_sat_value(oracle::cnf(2, {{2}, {-2}}, 1)), 0);
  EXPECT_EQ(stochastic_sat_value(oracle::cnf(2, {{1, 2}, {-1, 2}, {-2}}, 1)), 0);
  EXPECT_THROW(stochastic_sat_value(oracle::cnf(3, {{1}}, 1)), ElectionError);
  EXPECT_THROW(stochastic_sat_value(oracle::cnf(2, {{1}})), ElectionError);
}

TEST(StochasticSat, MatchesStrategyEnumeration) {
  std::mt19937_64 rng(163);
  for (int i = 0; i < 200; ++i) {
    const auto f = oracle::random_partitioned_cnf(rng, 1 + i % 2, 1 + i % 5);
    EXPECT_EQ(stochastic_sat_value(f), oracle::stochastic_sat(f));
  }
}

TEST(DpreProperties, FreshInstancesPass) {
  for (Protocol proto : kSatProtocols) {
    const auto r = build_dpre_instance(reduce_sat(proto, two_clause()));
    const auto reports = check_dpre_properties(r, proto);
    ASSERT_EQ(reports.size(), 2u);
    for (const auto& rep : reports) {
      EXPECT_TRUE(rep.passed) << to_string(proto) << ": " << rep.summary_line();
      EXPECT_TRUE(rep.exhaustive);
    }
    EXPECT_EQ(find_report(reports, "1a").summary_line(), "1a PASS (exhaustive)");
  }
}

TEST(DpreProperties, EmptyClauseRemovalLoses) {
  const auto r = build_dpre_instance(reduce_sat(Protocol::Plurality, two_clause()));
  // Removing x1+ and x2+ leaves clause 1 (x1 v x2) without a literal.
  std::vector<CandidateId> active;
  for (CandidateId c : r.originals().members()) {
    if (c != *r.find(RoleKind::Literal, 1, true) && c != *r.find(RoleKind::Literal, 2, true)) active.push_back(c);
  }
  const auto order = TieBreakPolicy::roster_order(r.profile.num_candidates()).order();
  EXPECT_NE(oracle::winner(Protocol::Plurality, oracle::expand(r.profile), active, order), r.preferred());
}

TEST(DpreProperties, FlippedBalancingVoteBreaksTie) {
  const auto r = build_dpre_instance(reduce_sat(Protocol::Plurality, two_clause()));
  const CandidateId plus = *r.find(RoleKind::Literal, 2, true), minus = *r.find(RoleKind::Literal, 2, false);
  std::vector<BallotGroup> groups = r.profile.groups();
  // Move one vote of the first group into a copy with x2+ and x2- swapped.
  auto flipped = groups[0].ballot;
  std::iter_swap(std::find(flipped.begin(), flipped.end(), plus), std::find(flipped.begin(), flipped.end(), minus));
  groups[0].count -= 1;
  groups.insert(groups.begin() + 1, BallotGroup{1, flipped});
  ReductionOutput broken = r;
  broken.profile = Profile(r.profile.roster(), groups);
  const auto reports = check_dpre_properties(broken, Protocol::Plurality);
  const auto& b = find_report(reports, "1b");
  EXPECT_FALSE(b.passed);
  ASSERT_TRUE(b.counterexample);
  EXPECT_NE(b.counterexample->description.find("variable 2"), std::string::npos);
  const PairwiseTally t(*b.counterexample->election);
  EXPECT_EQ(std::to_string(t(plus, minus)) + "-" + std::to_string(t(minus, plus)), b.counterexample->observed);
}

TEST(DpreProperties, CounterexamplesReplay) {
  for (Protocol proto : kSatProtocols) {
    const auto r = build_dpre_instance(reduce_sat(proto, two_clause()));
    // Enough extra first places for k1 to win whatever survives.
    ReductionOutput broken = r;
    const CandidateId k1 = *r.find(RoleKind::Clause, 1);
    Ballot top = identity_ballot(r.profile.num_candidates());
    std::erase(top, k1);
    top.insert(top.begin(), k1);
    broken.profile = r.profile.with_ballot(top, r.profile.num_votes());
    for (bool sampled : {false, true}) {
      VerifyOptions opt;
      opt.force_sampling = sampled;
      opt.samples = 20;
      const auto reports = check_dpre_properties(broken, proto, opt);
      const auto& a = find_report(reports, "1a");
      ASSERT_FALSE(a.passed) << to_string(proto);
      ASSERT_TRUE(a.counterexample);
      EXPECT_EQ(replay(proto, *a.counterexample), a.counterexample->observed);
      EXPECT_EQ(a.counterexample->expected, "p");
    }
  }
}

TEST(DpreProperties, SampledReportsAreDeterministic) {
  const auto r = build_dpre_instance(reduce_sat(Protocol::Borda, two_clause()));
  VerifyOptions opt;
  opt.force_sampling = true;
  opt.samples = 50;
  opt.rng_seed = 9;
  const auto first = check_dpre_properties(r, Protocol::Borda, opt);
  const auto again = check_dpre_properties(r, Protocol::Borda, opt);
  EXPECT_EQ(first[0].summary_line(), "1a PASS (sampled n=50) seed=9");
  EXPECT_EQ(first[0].summary_line(), again[0].summary_line());
}

TEST(RpreProperties, CompleteGraph) {
  const auto r = reduce_matching_r1(oracle::graph_k2(0xF));
  for (Protocol proto : kAllProtocols) {
    const auto reports = check_rpre_properties(r, proto);
    ASSERT_EQ(reports.size(), 4u);
    for (const auto& rep : reports) EXPECT_TRUE(rep.passed) << to_string(proto) << " " << rep.summary_line();
    EXPECT_TRUE(find_report(reports, "2d").exhaustive);
  }
}

TEST(RpreProperties, SingleEdgeStv) {
  const auto r = reduce_matching_r1(oracle::graph_k2(0b0001));
  const auto reports = check_rpre_properties(r, Protocol::Stv);
  EXPECT_TRUE(find_report(reports, "2a").passed);
  EXPECT_TRUE(all_passed(reports));
  // p wins exactly when {c3, c4} is removed.
  const auto order = TieBreakPolicy::roster_order(5).order();
  const auto votes = oracle::expand(r.profile);
  EXPECT_EQ(oracle::winner(Protocol::Stv, votes, {0, 1, 4}, order), 4u);
  EXPECT_NE(oracle::winner(Protocol::Stv, votes, {0, 2, 4}, order), 4u);
}

TEST(RpreProperties, CorruptedElectionReplays) {
  const auto r = reduce_matching_r1(oracle::graph_k2(0xF));
  ReductionOutput broken = r;
  // A hundred more votes ranking p first: p now beats c3 and c4.
  broken.profile = r.profile.with_ballot({4, 0, 1, 2, 3}, 100);
  for (Protocol proto : kAllProtocols) {
    const auto reports = check_rpre_properties(broken, proto);
    const auto& b = find_report(reports, "2b");
    EXPECT_FALSE(b.passed);
    ASSERT_TRUE(b.counterexample);
    const auto& a = find_report(reports, "2a");
    if (!a.passed) {
      EXPECT_EQ(replay(proto, *a.counterexample), a.counterexample->observed) << to_string(proto);
    }
  }
}

TEST(CrossCheckRpre, Values) {
  const auto k22 = cross_check_rpre(oracle::graph_k2(0xF), Protocol::Maximin);
  EXPECT_TRUE(k22.report.passed);
  EXPECT_EQ(k22.probability, Rational(2, 15));
  EXPECT_EQ(k22.report.note, "probability 2/15 = m_B/e");
  EXPECT_TRUE(k22.report.exhaustive);

  BipartiteGraph iso;
  iso.k = 2;
  iso.add_edge(1, 3);
  iso.add_edge(1, 4);
  const auto zero = cross_check_rpre(iso, Protocol::Borda);
  EXPECT_TRUE(zero.report.passed);
  EXPECT_EQ(zero.probability, 0);

  BipartiteGraph k33;
  k33.k = 3;
  for (std::size_t i = 1; i <= 3; ++i) {
    for (std::size_t j = 4; j <= 6; ++j) k33.add_edge(i, j);
  }
  VerifyOptions opt;
  opt.samples = 30;
  const auto big = cross_check_rpre(k33, Protocol::Plurality, opt);
  EXPECT_TRUE(big.report.passed);
  EXPECT_EQ(big.probability, Rational(2, 35));
  EXPECT_EQ(big.schedules, 105);
  EXPECT_EQ(big.matchings, 6);
  EXPECT_FALSE(big.report.exhaustive);
}

TEST(CrossCheckRpre, AgreesWithScheduleOracle) {
  for (unsigned mask = 0; mask < 16; mask += 5) {
    const auto g = oracle::graph_k2(mask);
    const auto r = reduce_matching_r1(g);
    const auto votes = oracle::expand(r.profile);
    const auto order = TieBreakPolicy::roster_order(5).order();
    for (Protocol proto : kAllProtocols) {
      std::int64_t wins = 0;
      const auto all = oracle::schedules(5);
      for (const auto& pairs : all) {
        Schedule s;
        for (const auto& [a, b] : pairs) {
          if (a == b) {
            s.bye = a;
          } else {
            s.pairs.emplace_back(a, b);
          }
        }
        wins += oracle::dpre_winner(proto, votes, s, order) == r.preferred();
      }
      EXPECT_EQ(Rational(wins, static_cast<std::int64_t>(all.size())), Rational(oracle::perfect_matchings(g), 15));
      EXPECT_TRUE(cross_check_rpre(g, proto).report.passed);
    }
  }
}

TEST(IpreProperties, AugmentedPlurality) {
  const auto f = oracle::cnf(2, {{1, 2}, {-1, -2}}, 1);
  const auto aug = augment_for_ipre(reduce_sat(Protocol::Plurality, f));
  const auto reports = check_ipre_properties(build_ipre_instance(aug), Protocol::Plurality);
  ASSERT_EQ(reports.size(), 3u);
  for (const auto& rep : reports) EXPECT_TRUE(rep.passed) << rep.summary_line();
}

TEST(CrossCheckIpre, SmallFormulas) {
  IpreCrossCheckOptions opt;
  opt.completions = 4;
  const std::vector<std::pair<CnfFormula, Rational>> cases{
      {oracle::cnf(2, {{1, 2}, {-1, -2}}, 1), Rational(1)},
      {oracle::cnf(2, {{1}, {2}}, 1), Rational(1, 2)},
      {oracle::cnf(2, {{2}, {-2}}, 1), Rational(0)},
  };
  for (Protocol proto : {Protocol::Plurality, Protocol::Maximin}) {
    for (const auto& [f, value] : cases) {
      const auto out = cross_check_ipre(f, proto, opt);
      EXPECT_TRUE(out.augmented);
      EXPECT_TRUE(out.report.passed) << to_string(proto) << " " << out.report.summary_line();
      EXPECT_EQ(out.expected, value);
      EXPECT_EQ(out.values.size(), 12u);
    }
  }
}

TEST(Reports, WriteDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / ("preround_rep_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  const auto r = build_dpre_instance(reduce_sat(Protocol::Plurality, two_clause()));
  ReductionOutput broken = r;
  broken.profile = r.profile.with_ballot(identity_ballot(r.profile.num_candidates()), 3);
  const auto reports = check_dpre_properties(broken, Protocol::Plurality);
  ASSERT_FALSE(all_passed(reports));
  write_report_dir(dir, reports, {"extra line"});
  const std::string summary = read_text_file(dir / "report.txt");
  EXPECT_NE(summary.find("1b FAIL (exhaustive)"), std::string::npos);
  EXPECT_NE(summary.find("extra line"), std::string::npos);
  ASSERT_TRUE(std::filesystem::exists(dir / "1b-counterexample.vote"));
  EXPECT_EQ(parse_profile(read_text_file(dir / "1b-counterexample.vote")), broken.profile);
  EXPECT_NE(read_text_file(dir / "1b-counterexample.txt").find("property: 1b"), std::string::npos);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace preround
