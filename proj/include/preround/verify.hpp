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

// End-to-end cross-checks: solver outputs on constructed instances against
// independent combinatorial oracles.

#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "preround/instance.hpp"
#include "preround/manipulation.hpp"
#include "preround/numeric.hpp"
#include "preround/properties.hpp"
#include "preround/reductions.hpp"
#include "preround/schedule.hpp"

namespace preround {

struct RpreCrossCheck {
  PropertyReport report;
  Rational probability;  // computed by schedule enumeration
  BigInt matchings;
  BigInt schedules;
};

// p's exact win probability on the graph instance must equal
// matchings / schedules, with and without any one extra ballot (every ballot
// for k <= 2, sampled otherwise).
inline RpreCrossCheck cross_check_rpre(const ReductionOutput& r, Protocol protocol, const VerifyOptions& opt = {}) {
  if (!r.graph) throw ElectionError("matching cross-check needs the source graph");
  const BipartiteGraph& g = *r.graph;
  if (g.k > 4) throw SearchBoundError("matching cross-check is limited to k <= 4");
  if (r.profile.num_candidates() != 2 * g.k + 1) throw ElectionError("instance does not match its graph");
  const CandidateId p = r.preferred();
  const TieBreakPolicy tb = detail::tiebreak_for(opt, r.profile);
  const std::size_t m = r.profile.num_candidates();

  RpreCrossCheck out;
  out.matchings = count_perfect_matchings(g);
  out.schedules = count_schedules(m);
  const Rational expected(out.matchings, out.schedules);
  out.probability = rpre_win_distribution(protocol, r.profile, tb)[p];
  out.report.id = "rpre";
  out.report.rng_seed = opt.rng_seed;
  out.report.note = "probability " + to_string(out.probability) + " = m_B/e";
  if (out.probability != expected) {
    out.report.passed = false;
    Counterexample cx;
    cx.description = "no extra ballot";
    cx.election = r.profile;
    cx.tiebreak = tb.order();
    cx.observed = to_string(out.probability);
    cx.expected = to_string(expected);
    out.report.counterexample = std::move(cx);
    return out;
  }

  const bool exhaustive = !opt.force_sampling && g.k <= 2;
  const std::size_t samples = opt.samples ? opt.samples : 200;
  std::vector<CandidateId> all(m);
  std::iota(all.begin(), all.end(), CandidateId{0});
  detail::ExtraBallots extras(all, p, exhaustive, samples, opt.rng_seed);
  out.report.exhaustive = exhaustive;
  if (!exhaustive) out.report.samples = samples;
  extras.for_each([&](const Ballot& b) {
    const Rational with = rpre_win_distribution(protocol, r.profile, tb, b)[p];
    if (with == expected) return true;
    out.report.passed = false;
    Counterexample cx;
    cx.description = "extra ballot: " + detail::names_of(r.profile, b);
    cx.election = r.profile.with_ballot(b);
    cx.tiebreak = tb.order();
    cx.observed = to_string(with);
    cx.expected = to_string(expected);
    out.report.counterexample = std::move(cx);
    return false;
  });
  return out;
}

inline RpreCrossCheck cross_check_rpre(const BipartiteGraph& g, Protocol protocol, const VerifyOptions& opt = {}) {
  return cross_check_rpre(reduce_matching_r1(g), protocol, opt);
}

struct IpreCrossCheckOptions {
  std::size_t tiebreaks = 3;  // roster order, reversed, then random
  std::size_t completions = 50;  // sampled completion ballots per tie-break
  std::uint64_t rng_seed = 1;
  VerifyOptions property_check;  // for the augmentation's own 3a-3c checks
};

struct IpreCrossCheck {
  PropertyReport report;
  Rational expected;  // stochastic SAT value
  std::vector<Rational> values;  // one per (tie-break, completion) run
  std::vector<PropertyReport> properties;  // 3a-3c of the augmented instance
  bool augmented = false;  // false: the augmentation failed its checks
};

// The interleaved game value of the constructed instance must equal the
// stochastic SAT value of the formula, for every tie-break and completion tried.
inline IpreCrossCheck cross_check_ipre(const CnfFormula& f, Protocol protocol, const IpreCrossCheckOptions& opt = {}) {
  const std::size_t ny = f.balanced_split();
  if (ny > 2) throw SearchBoundError("interleaved cross-check is limited to |X| = |Y| <= 2");
  IpreCrossCheck out;
  out.report.id = "ipre";
  out.report.exhaustive = false;
  out.report.samples = opt.tiebreaks * opt.completions;
  out.report.rng_seed = opt.rng_seed;
  out.expected = stochastic_sat_value(f);

  ReductionOutput augmented;
  try {
    augmented = augment_for_ipre(reduce_sat(protocol, f), opt.property_check, &out.properties);
  } catch (const AugmentationError& e) {
    out.properties = e.reports();
    out.report.passed = false;
    out.report.note = e.what();
    return out;
  }
  out.augmented = true;
  const ReductionOutput r = build_ipre_instance(augmented);
  const CandidateId p = r.preferred();
  const std::size_t m = r.profile.num_candidates();

  std::mt19937_64 rng(opt.rng_seed);
  for (std::size_t t = 0; t < opt.tiebreaks && out.report.passed; ++t) {
    std::vector<CandidateId> order = identity_ballot(m);
    if (t == 1) std::reverse(order.begin(), order.end());
    if (t >= 2) std::shuffle(order.begin(), order.end(), rng);
    const TieBreakPolicy tb(order);
    for (std::size_t s = 0; s < opt.completions; ++s) {
      Ballot base = identity_ballot(m);
      std::shuffle(base.begin(), base.end(), rng);
      const auto answer =
          manipulate_ipre(protocol, r.profile, p, out.expected, *r.seed, tb, CompletionPolicy::from_base(base));
      out.values.push_back(answer.best_probability);
      if (answer.best_probability == out.expected) continue;
      out.report.passed = false;
      Counterexample cx;
      cx.description = "tie-break " + detail::names_of(r.profile, order) + ", completion base " +
                       detail::names_of(r.profile, base);
      cx.election = r.profile;
      cx.tiebreak = order;
      cx.observed = to_string(answer.best_probability);
      cx.expected = to_string(out.expected);
      out.report.counterexample = std::move(cx);
      break;
    }
  }
  out.report.note = "value " + to_string(out.expected);
  return out;
}

}  // namespace preround
