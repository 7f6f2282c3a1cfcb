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

#include <cstdlib>
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

// Vote totals read off the block sizes of each construction.
std::int64_t expected_votes(Protocol proto, const CnfFormula& f) {
  const auto K = static_cast<std::int64_t>(f.clauses.size());
  const auto M = static_cast<std::int64_t>(1 + 2 * f.num_variables + f.clauses.size());
  switch (proto) {
    case Protocol::Plurality: return 4 * K * K + 8 * K + 2;
    case Protocol::Borda: return 12 * K * M + 4 * M + 2;
    default: return 36 * K + 4;
  }
}

CnfFormula two_clause() { return oracle::cnf(2, {{1, 2}, {-1, -2}}); }

TEST(ReduceSat, BlockTotals) {
  const auto f = two_clause();
  const auto plur = reduce_sat(Protocol::Plurality, f);
  EXPECT_EQ(plur.profile.num_candidates(), 7u);
  EXPECT_EQ(plur.profile.num_votes(), 34);
  const auto borda = reduce_sat(Protocol::Borda, f);
  EXPECT_EQ(borda.profile.num_candidates(), 7u);
  EXPECT_EQ(borda.profile.num_votes(), 198);
  EXPECT_EQ(reduce_sat(Protocol::Maximin, f).profile.num_votes(), 76);
  EXPECT_THROW(reduce_sat(Protocol::Stv, f), ElectionError);
}

TEST(ReduceSat, Naming) {
  const auto r = reduce_sat(Protocol::Plurality, two_clause());
  EXPECT_EQ(r.profile.roster(), (std::vector<std::string>{"p", "x1+", "x1-", "x2+", "x2-", "k1", "k2"}));
  EXPECT_EQ(r.preferred(), 0u);
  EXPECT_EQ(r.find(RoleKind::Literal, 2, false), 4u);
  EXPECT_EQ(r.find(RoleKind::Clause, 2), 6u);
}

TEST(ReduceSat, PluralityScores) {
  const auto f = two_clause();
  const auto r = reduce_sat(Protocol::Plurality, f);
  const auto s = scores(Protocol::Plurality, r.profile);
  const auto K = static_cast<std::int64_t>(f.clauses.size());
  EXPECT_EQ(s[r.preferred()], 4 * K + 2);
  for (CandidateId k : r.with_role(RoleKind::Clause)) EXPECT_EQ(s[k], 4 * K);
}

TEST(ReduceSat, RandomFormulas) {
  std::mt19937_64 rng(107);
  for (int i = 0; i < 40; ++i) {
    const auto f = oracle::random_cnf(rng, 1 + i % 3, 1 + (i / 3) % 4);
    for (Protocol proto : kSatProtocols) {
      const auto r = reduce_sat(proto, f);
      r.validate();
      EXPECT_EQ(r.profile.num_votes(), expected_votes(proto, f));
      EXPECT_EQ(r.profile.num_candidates(), 1 + 2 * f.num_variables + f.clauses.size());
      EXPECT_EQ(r.clause_block.size(), r.profile.groups().size());
      const auto votes = oracle::expand(r.profile);
      for (const auto& l : r.literal_pairs()) {
        EXPECT_EQ(oracle::prefer_count(votes, l.positive, l.negative),
                  oracle::prefer_count(votes, l.negative, l.positive));
      }
    }
  }
}

TEST(ReduceSat, MaximinClausesTied) {
  std::mt19937_64 rng(109);
  for (int i = 0; i < 20; ++i) {
    const auto f = oracle::random_cnf(rng, 1 + i % 3, 2 + i % 3);
    const auto r = reduce_sat(Protocol::Maximin, f);
    const PairwiseTally t(r.profile);
    for (CandidateId a : r.with_role(RoleKind::Clause)) {
      for (CandidateId b : r.with_role(RoleKind::Clause)) {
        if (a != b) {
          EXPECT_EQ(t.margin(a, b), 0);
        }
      }
    }
  }
}

TEST(Balance, ArithmeticSplit) {
  const std::vector<LiteralPair> lits{{0, 1}};
  // d = +4 from fixed votes, 30 free votes.
  std::vector<VoteTemplate> tpl{{4, {{{0}, false}, {{1}, false}}, false}, {30, {{{0, 1}, true}}, false}};
  const auto out = balance_literal_ties(tpl, lits);
  std::int64_t pos_first = 0, neg_first = 0;
  for (std::size_t g = 1; g < out.groups.size(); ++g) {
    (out.groups[g].ballot.front() == 0 ? pos_first : neg_first) += out.groups[g].count;
  }
  EXPECT_EQ(pos_first, 13);
  EXPECT_EQ(neg_first, 17);
  // The +v-first votes come first.
  EXPECT_EQ(out.groups[1].ballot, (Ballot{0, 1}));
  EXPECT_EQ(out.groups[1].count, 13);

  std::vector<VoteTemplate> sym{{10, {{{1, 0}, true}}, false}};
  const auto even = balance_literal_ties(sym, lits);
  ASSERT_EQ(even.groups.size(), 2u);
  EXPECT_EQ(even.groups[0].count, 5);
  EXPECT_EQ(even.groups[1].count, 5);

  std::vector<VoteTemplate> bad{{4, {{{0}, false}, {{1}, false}}, false}, {2, {{{0, 1}, true}}, false}};
  EXPECT_THROW(balance_literal_ties(bad, lits), ElectionError);
  std::vector<VoteTemplate> odd{{3, {{{0, 1}, true}}, false}};
  EXPECT_THROW(balance_literal_ties(odd, lits), ElectionError);
}

TEST(Balance, RandomTemplatesTie) {
  std::mt19937_64 rng(113);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng() % 3;
    std::vector<LiteralPair> lits;
    for (std::size_t v = 0; v < n; ++v) lits.push_back({2 * v, 2 * v + 1});
    std::vector<VoteTemplate> tpl;
    const std::size_t blocks = 1 + rng() % 4;
    for (std::size_t b = 0; b < blocks; ++b) {
      VoteTemplate t;
      t.count = 1 + static_cast<std::int64_t>(rng() % 6);
      const bool free_block = rng() % 2;
      auto order = oracle::random_order(rng, 2 * n);
      t.segments.push_back({order, free_block});
      tpl.push_back(t);
    }
    tpl.push_back({1 + static_cast<std::int64_t>(rng() % 12), {{identity_ballot(2 * n), true}}, false});
    // Feasible iff each variable's forced difference d and free count F have
    // |d| <= F and F - d even.
    bool feasible = true;
    for (const auto& l : lits) {
      std::int64_t d = 0, free = 0;
      for (const auto& t : tpl) {
        if (t.segments[0].unordered) {
          free += t.count;
        } else {
          const auto& m = t.segments[0].members;
          d += oracle::position(m, l.positive) < oracle::position(m, l.negative) ? t.count : -t.count;
        }
      }
      feasible = feasible && std::abs(d) <= free && (free - d) % 2 == 0;
    }
    if (!feasible) {
      EXPECT_THROW(balance_literal_ties(tpl, lits), ElectionError);
      continue;
    }
    const auto out = balance_literal_ties(tpl, lits);
    std::vector<Ballot> votes;
    std::int64_t total = 0;
    for (const auto& g : out.groups) {
      total += g.count;
      for (std::int64_t c = 0; c < g.count; ++c) votes.push_back(g.ballot);
    }
    std::int64_t want = 0;
    for (const auto& t : tpl) want += t.count;
    EXPECT_EQ(total, want);
    for (const auto& l : lits) {
      EXPECT_EQ(oracle::prefer_count(votes, l.positive, l.negative), oracle::prefer_count(votes, l.negative, l.positive));
    }
  }
}

TEST(DpreInstance, Layout) {
  const auto base = reduce_sat(Protocol::Plurality, two_clause());
  const auto r = build_dpre_instance(base);
  EXPECT_EQ(r.profile.num_candidates(), 10u);
  ASSERT_TRUE(r.schedule);
  EXPECT_EQ(r.schedule->pairs.size(), 5u);
  EXPECT_FALSE(r.schedule->bye);
  const PairwiseTally t(r.profile);
  for (CandidateId d : r.with_role(RoleKind::Dummy)) {
    for (const auto& [a, b] : r.schedule->pairs) {
      if (b == d) {
        EXPECT_EQ(t(a, b), r.profile.num_votes());
      }
    }
  }
}

TEST(DpreInstance, SurvivorsAreOneLiteralPerVariable) {
  std::mt19937_64 rng(127);
  for (int i = 0; i < 10; ++i) {
    const auto f = oracle::random_cnf(rng, 1 + i % 3, 1 + i % 4);
    for (Protocol proto : kSatProtocols) {
      const auto r = build_dpre_instance(reduce_sat(proto, f));
      const std::size_t m = r.profile.num_candidates();
      PreroundEvaluator eval(proto, r.profile, TieBreakPolicy::roster_order(m));
      for (int s = 0; s < 10; ++s) {
        const Ballot b = oracle::random_order(rng, m);
        const CandidateSet surv = eval.survivors(*r.schedule, b);
        EXPECT_TRUE(surv.contains(r.preferred()));
        for (CandidateId k : r.with_role(RoleKind::Clause)) EXPECT_TRUE(surv.contains(k));
        for (CandidateId d : r.with_role(RoleKind::Dummy)) EXPECT_FALSE(surv.contains(d));
        for (const auto& l : r.literal_pairs()) {
          EXPECT_NE(surv.contains(l.positive), surv.contains(l.negative));
          // The manipulator's ballot decides the tied literal contest.
          EXPECT_EQ(surv.contains(l.positive), oracle::position(b, l.positive) < oracle::position(b, l.negative));
        }
      }
    }
  }
}

TEST(MatchingR1, BlockSizes) {
  const auto r = reduce_matching_r1(oracle::graph_k2(0xF));
  EXPECT_EQ(r.profile.num_candidates(), 5u);
  EXPECT_EQ(r.profile.num_votes(), 104);
  EXPECT_EQ(r.profile.roster(), (std::vector<std::string>{"c1", "c2", "c3", "c4", "p"}));
  std::vector<std::int64_t> sizes;
  for (const auto& g : r.profile.groups()) sizes.push_back(g.count);
  EXPECT_EQ(sizes[0], 48);
  EXPECT_EQ(sizes[1], 12);
  EXPECT_EQ(sizes[2], 36);
  EXPECT_EQ(sizes.size(), 3u + 8u);
}

TEST(MatchingR1, PairwiseMargins) {
  std::mt19937_64 rng(131);
  for (std::size_t k = 1; k <= 4; ++k) {
    for (int i = 0; i < 5; ++i) {
      const auto g = oracle::random_graph(rng, k, 0.5);
      const auto r = reduce_matching_r1(g);
      const auto kk = static_cast<std::int64_t>(k);
      EXPECT_EQ(r.profile.num_votes(), 12 * kk * kk * kk + 2 * kk * kk);
      const auto votes = oracle::expand(r.profile);
      const CandidateId p = r.preferred();
      for (std::size_t j = k + 1; j <= 2 * k; ++j) EXPECT_EQ(oracle::prefer_count(votes, p, j - 1), 4 * kk * kk);
      for (std::size_t a = 1; a <= k; ++a) {
        for (std::size_t b = k + 1; b <= 2 * k; ++b) {
          const auto margin = oracle::prefer_count(votes, a - 1, b - 1) - oracle::prefer_count(votes, b - 1, a - 1);
          EXPECT_EQ(margin, g.has_edge(a, b) ? 2 : -2) << a << "," << b;
        }
      }
    }
  }
}

TEST(IpreInstance, SmallLayout) {
  const auto f = oracle::cnf(2, {{1, 2}, {-1, -2}}, 1);
  const auto aug = augment_for_ipre(reduce_sat(Protocol::Plurality, f));
  EXPECT_EQ(aug.profile.num_candidates(), 8u);
  const PairwiseTally t(aug.profile);
  const auto lits = aug.literal_pairs();
  const CandidateId a1 = *aug.find(RoleKind::Aux, 1);
  EXPECT_GE(t.margin(a1, lits[0].positive), 2);
  EXPECT_GE(t.margin(a1, lits[0].negative), 2);
  EXPECT_EQ(t.margin(lits[1].positive, lits[1].negative), 0);

  const auto r = build_ipre_instance(aug);
  EXPECT_EQ(r.profile.num_candidates(), 12u);
  EXPECT_EQ(r.with_role(RoleKind::Dummy).size(), 4u);
  EXPECT_TRUE(r.with_role(RoleKind::Padding).empty());
  ASSERT_TRUE(r.seed);
  EXPECT_EQ(r.seed->k, 4u);
  EXPECT_EQ(r.seed->num_rounds(), 1u);
  EXPECT_EQ(r.seed->first[0], lits[1].positive);
  EXPECT_EQ(r.seed->second[0], lits[1].negative);
  EXPECT_EQ(r.seed->pool[0].first, a1);
}

TEST(IpreInstance, PaddingPairs) {
  // Base k = 1 + |K| + |Y| = 6, so two padding pairs bring it to 8.
  const auto f = oracle::cnf(2, {{1, 2}, {-1, -2}, {1, -2}, {2}}, 1);
  const auto r = build_ipre_instance(augment_for_ipre(reduce_sat(Protocol::Plurality, f)));
  EXPECT_EQ(r.with_role(RoleKind::Padding).size(), 4u);
  EXPECT_EQ(r.seed->k, 8u);
  EXPECT_EQ(r.profile.num_candidates() % 4, 0u);
  EXPECT_EQ(r.profile.name(r.profile.num_candidates() - 1), "z4");
}

TEST(IpreInstance, QueriesAreXPairs) {
  std::mt19937_64 rng(137);
  for (int i = 0; i < 6; ++i) {
    const auto f = oracle::random_partitioned_cnf(rng, 1 + i % 2, 2 + i % 3);
    const auto r = build_ipre_instance(augment_for_ipre(reduce_sat(Protocol::Plurality, f)));
    const std::size_t ny = *f.y_count;
    EXPECT_EQ(r.seed->num_rounds(), ny);
    const auto lits = r.literal_pairs();
    std::vector<bool> draws;
    for (std::size_t t = 1; t <= ny; ++t) {
      draws.push_back(rng() % 2);
      EXPECT_EQ(r.seed->query_pair(t, draws), (Matchup{lits[ny + t - 1].positive, lits[ny + t - 1].negative}));
    }
  }
}

TEST(Augment, BottomAuxFailsMajorityCheck) {
  const auto f = oracle::cnf(2, {{1, 2}, {-1, -2}}, 1);
  const auto aug = augment_for_ipre(reduce_sat(Protocol::Plurality, f));
  const CandidateId a1 = *aug.find(RoleKind::Aux, 1);
  std::vector<BallotGroup> groups;
  for (auto g : aug.profile.groups()) {
    std::erase(g.ballot, a1);
    g.ballot.push_back(a1);
    groups.push_back(g);
  }
  ReductionOutput broken = aug;
  broken.profile = Profile(aug.profile.roster(), groups);
  const auto reports = check_ipre_properties(broken, Protocol::Plurality);
  bool saw_3c = false;
  for (const auto& rep : reports) {
    if (rep.id == "3c") {
      saw_3c = true;
      EXPECT_FALSE(rep.passed);
    }
  }
  EXPECT_TRUE(saw_3c);
}

TEST(Augment, Preconditions) {
  EXPECT_THROW(augment_for_ipre(reduce_sat(Protocol::Plurality, two_clause())), ElectionError);
  const auto f = oracle::cnf(3, {{1, 2}}, 1);
  EXPECT_THROW(augment_for_ipre(reduce_sat(Protocol::Plurality, f)), ElectionError);
}

TEST(Files, DimacsRoundTrip) {
  const std::string text = "c xy-split 1\np cnf 2 2\n1 2 0\n-1 -2 0\n";
  const auto f = parse_dimacs(text);
  EXPECT_EQ(f, oracle::cnf(2, {{1, 2}, {-1, -2}}, 1));
  EXPECT_EQ(parse_dimacs(write_dimacs(f)), f);
  EXPECT_EQ(write_dimacs(parse_dimacs(write_dimacs(f))), write_dimacs(f));
  EXPECT_THROW(parse_dimacs("p cnf 1 1\n1 -1 0\n"), ElectionError);
  EXPECT_THROW(parse_dimacs("p cnf 1 1\n2 0\n"), ElectionError);
  EXPECT_THROW(parse_dimacs("1 0\n"), ParseError);
}

TEST(Files, GraphRoundTrip) {
  std::mt19937_64 rng(139);
  for (int i = 0; i < 20; ++i) {
    const auto g = oracle::random_graph(rng, 1 + i % 4, 0.5);
    EXPECT_EQ(parse_graph(write_graph(g)), g);
  }
}

TEST(Files, ReductionDirectoryRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / ("preround_rt_" + std::to_string(::getpid()));
  const auto f = oracle::cnf(2, {{1, 2}, {-1, -2}}, 1);
  const std::vector<ReductionOutput> outputs{
      build_dpre_instance(reduce_sat(Protocol::Borda, two_clause())),
      build_ipre_instance(augment_for_ipre(reduce_sat(Protocol::Plurality, f))),
      reduce_matching_r1(oracle::graph_k2(0xB)),
  };
  for (const auto& r : outputs) {
    std::filesystem::remove_all(dir);
    write_reduction(dir, r);
    const auto back = read_reduction(dir);
    EXPECT_EQ(back.profile, r.profile);
    EXPECT_EQ(back.roles, r.roles);
    EXPECT_EQ(back.schedule, r.schedule);
    EXPECT_EQ(back.seed, r.seed);
    EXPECT_EQ(back.formula, r.formula);
    EXPECT_EQ(back.graph, r.graph);
    EXPECT_EQ(serialize_roles(back.roles, back.profile), serialize_roles(r.roles, r.profile));
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace preround
