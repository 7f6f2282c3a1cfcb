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

// Exact constructive-manipulation solvers for a single unweighted manipulator:
// no preround, fixed preround, uniformly random preround, and interleaved
// preround. All of them are exhaustive and refuse inputs beyond their
// configured bounds instead of degrading to sampling.

#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "preround/election.hpp"
#include "preround/ipre.hpp"
#include "preround/numeric.hpp"
#include "preround/protocols.hpp"
#include "preround/schedule.hpp"

namespace preround {

class SearchBoundError : public ElectionError {
 public:
  using ElectionError::ElectionError;
};

struct SearchLimits {
  std::size_t max_ballot_candidates = 10;  // plain and fixed-preround ballot search
  std::size_t max_rpre_candidates = 8;  // ballots x schedules
  std::size_t max_ipre_rounds = 12;
  std::size_t max_completion_candidates = 8;  // exhaustive completions at IPRE leaves
  unsigned jobs = 1;
};

// Interleaved-preround strategy. Keys are draw sequences written as '0'/'1'
// strings: `answers` maps the draws published before a query to the answer
// (true = prefers the matchup's first candidate); `completions` maps a full
// draw sequence to the ballot handed in at the end.
struct ContingencyPlan {
  std::map<std::string, bool> answers;
  std::map<std::string, Ballot> completions;
};

struct ManipulationAnswer {
  bool decision = false;
  Rational best_probability = 0;
  std::optional<Ballot> witness;
  std::optional<ContingencyPlan> plan;
};

inline std::string draw_bits(const std::vector<bool>& draws) {
  std::string out;
  for (bool d : draws) out += d ? '1' : '0';
  return out;
}

inline Ballot identity_ballot(std::size_t m) {
  Ballot b(m);
  std::iota(b.begin(), b.end(), CandidateId{0});
  return b;
}

// Lexicographically first permutation of 0..m-1 accepted by a predicate.
// make_predicate() is called once per worker, so predicates may own caches.
// Workers split the space by leading candidate; the result does not depend on `jobs`.
template <typename MakePredicate>
std::optional<Ballot> find_first_ballot(std::size_t m, unsigned jobs, MakePredicate&& make_predicate) {
  if (jobs <= 1 || m < 3) {
    auto accept = make_predicate();
    Ballot b = identity_ballot(m);
    do {
      if (accept(b)) return b;
    } while (std::next_permutation(b.begin(), b.end()));
    return std::nullopt;
  }
  std::atomic<std::size_t> best{m};
  std::atomic<std::size_t> next{0};
  std::vector<std::optional<Ballot>> found(m);
  auto worker = [&]() {
    auto accept = make_predicate();
    for (;;) {
      const std::size_t lead = next.fetch_add(1);
      if (lead >= m || lead > best.load()) return;
      Ballot b{lead};
      for (CandidateId c = 0; c < m; ++c) {
        if (c != lead) b.push_back(c);
      }
      std::size_t steps = 0;
      do {
        if (accept(b)) {
          found[lead] = b;
          std::size_t cur = best.load();
          while (lead < cur && !best.compare_exchange_weak(cur, lead)) {
          }
          break;
        }
        if ((++steps & 0xfff) == 0 && best.load() < lead) break;
      } while (std::next_permutation(b.begin() + 1, b.end()));
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < std::min<std::size_t>(jobs, m); ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  const std::size_t lead = best.load();
  if (lead == m) return std::nullopt;
  return found[lead];
}

namespace detail {

inline void check_target(const Profile& s, CandidateId p) {
  if (p >= s.num_candidates()) throw ElectionError("preferred candidate not in roster");
}

inline void check_ballot_bound(std::size_t m, std::size_t bound, std::string_view what) {
  if (m > bound) {
    throw SearchBoundError(std::string(what) + ": " + std::to_string(m) + " candidates exceeds the exhaustive bound of " +
                           std::to_string(bound));
  }
}

inline ManipulationAnswer deterministic_answer(std::optional<Ballot> witness) {
  ManipulationAnswer out;
  out.decision = witness.has_value();
  out.best_probability = out.decision ? 1 : 0;
  out.witness = std::move(witness);
  return out;
}

}  // namespace detail

// Is there a ballot b with winner(protocol, S + b) = p? Witness is the
// lexicographically first such ballot.
inline ManipulationAnswer manipulate_plain(Protocol protocol, const Profile& nonmanipulators, CandidateId p,
                                           const TieBreakPolicy& tiebreak, const SearchLimits& limits = {}) {
  detail::check_target(nonmanipulators, p);
  const std::size_t m = nonmanipulators.num_candidates();
  detail::check_ballot_bound(m, limits.max_ballot_candidates, "plain manipulation");
  const CandidateSet all(m, true);
  auto witness = find_first_ballot(m, limits.jobs, [&]() {
    return [eval = WinnerEvaluator(protocol, nonmanipulators, tiebreak), &all, p](const Ballot& b) mutable {
      return eval.winner(all, b) == p;
    };
  });
  return detail::deterministic_answer(std::move(witness));
}

inline ManipulationAnswer manipulate_dpre(Protocol protocol, const Profile& nonmanipulators, CandidateId p,
                                          const Schedule& schedule, const TieBreakPolicy& tiebreak,
                                          const SearchLimits& limits = {}) {
  detail::check_target(nonmanipulators, p);
  const std::size_t m = nonmanipulators.num_candidates();
  schedule.validate(m);
  detail::check_ballot_bound(m, limits.max_ballot_candidates, "fixed-preround manipulation");
  auto witness = find_first_ballot(m, limits.jobs, [&]() {
    return [eval = PreroundEvaluator(protocol, nonmanipulators, tiebreak), &schedule, p](const Ballot& b) mutable {
      return eval.winner(schedule, b) == p;
    };
  });
  return detail::deterministic_answer(std::move(witness));
}

// Complementary literal candidates for one variable.
struct LiteralPair {
  CandidateId positive = 0;
  CandidateId negative = 0;
};

// Fixed-preround search restricted to ballots induced by truth assignments:
// roster order, with each variable's chosen literal moved above its
// complement. Assignments are tried with true before false, variable 1 most
// significant. Complete on instances whose literal matchups are pairwise ties.
inline ManipulationAnswer manipulate_dpre_structured(Protocol protocol, const Profile& nonmanipulators, CandidateId p,
                                                     const Schedule& schedule, std::span<const LiteralPair> literals,
                                                     const TieBreakPolicy& tiebreak) {
  detail::check_target(nonmanipulators, p);
  const std::size_t m = nonmanipulators.num_candidates();
  schedule.validate(m);
  const std::size_t n = literals.size();
  if (n > 24) throw SearchBoundError("structured search is limited to 24 variables");
  std::vector<Matchup> pairs;
  for (const auto& l : literals) pairs.emplace_back(l.positive, l.negative);
  PreroundEvaluator eval(protocol, nonmanipulators, tiebreak);
  std::vector<bool> truth(n);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    for (std::size_t v = 0; v < n; ++v) truth[v] = ((code >> (n - 1 - v)) & 1) == 0;
    Ballot b = make_consistent(identity_ballot(m), pairs, truth);
    if (eval.winner(schedule, b) == p) return detail::deterministic_answer(b);
  }
  return detail::deterministic_answer(std::nullopt);
}

// Best achievable probability that p wins when the schedule is drawn
// uniformly after voting. The witness is the lexicographically first ballot
// attaining the maximum.
inline ManipulationAnswer manipulate_rpre(Protocol protocol, const Profile& nonmanipulators, CandidateId p,
                                          const Rational& threshold, const TieBreakPolicy& tiebreak,
                                          const SearchLimits& limits = {}) {
  detail::check_target(nonmanipulators, p);
  const std::size_t m = nonmanipulators.num_candidates();
  detail::check_ballot_bound(m, limits.max_rpre_candidates, "randomized-preround manipulation");
  ManipulationAnswer out;
  if (m == 1) {
    out.best_probability = 1;
    out.witness = identity_ballot(1);
    out.decision = out.best_probability >= threshold;
    return out;
  }
  const auto schedules = enumerate_schedules(m);
  const auto total = static_cast<std::int64_t>(schedules.size());
  PreroundEvaluator eval(protocol, nonmanipulators, tiebreak);
  std::int64_t best = -1;
  Ballot b = identity_ballot(m);
  do {
    std::int64_t wins = 0;
    for (const auto& s : schedules) {
      if (eval.winner(s, b) == p) ++wins;
    }
    if (wins > best) {
      best = wins;
      out.witness = b;
      if (best == total) break;
    }
  } while (std::next_permutation(b.begin(), b.end()));
  out.best_probability = Rational(best, total);
  out.decision = out.best_probability >= threshold;
  return out;
}

// How the manipulator fills in the rest of its ballot at the end of an
// interleaved preround. With `exhaustive` and a roster within the bound,
// every consistent completion is tried. Otherwise `complete` is called (the
// default: roster order with each queried pair fixed up to match the answers).
struct CompletionPolicy {
  using Fn = std::function<Ballot(const std::vector<bool>& draws, std::span<const Matchup> asked,
                                  const std::vector<bool>& answers)>;
  bool exhaustive = true;
  Fn complete;

  static CompletionPolicy from_base(Ballot base) {
    CompletionPolicy out;
    out.exhaustive = false;
    out.complete = [base = std::move(base)](const std::vector<bool>&, std::span<const Matchup> asked,
                                             const std::vector<bool>& answers) {
      return make_consistent(base, asked, answers);
    };
    return out;
  }
};

namespace detail {

struct IpreSolver {
  Protocol protocol;
  const Profile& nonmanipulators;
  CandidateId target;
  const IpreSeed& seed;
  const CompletionPolicy& policy;
  bool exhaustive_leaves;
  PreroundEvaluator eval;

  std::vector<bool> draws;
  std::vector<bool> answers;
  std::vector<Matchup> asked;

  struct Result {
    Rational value;
    ContingencyPlan plan;
  };

  Result leaf() {
    const Schedule schedule = seed.schedule_for(draws);
    const std::size_t m = nonmanipulators.num_candidates();
    Result out{Rational(0), {}};
    const std::string key = draw_bits(draws);
    if (exhaustive_leaves) {
      Ballot b = identity_ballot(m);
      do {
        if (is_consistent(b, asked, answers) && eval.winner(schedule, b) == target) {
          out.value = 1;
          out.plan.completions[key] = b;
          return out;
        }
      } while (std::next_permutation(b.begin(), b.end()));
      out.plan.completions[key] = make_consistent(identity_ballot(m), asked, answers);
      return out;
    }
    Ballot b = policy.complete ? policy.complete(draws, asked, answers)
                               : make_consistent(identity_ballot(m), asked, answers);
    nonmanipulators.check_ballot(b);
    if (!is_consistent(b, asked, answers)) throw ElectionError("completion policy contradicts the manipulator's answers");
    if (eval.winner(schedule, b) == target) out.value = 1;
    out.plan.completions[key] = std::move(b);
    return out;
  }

  // Nature draws for round r+1, then the manipulator answers query r+1.
  Result solve(std::size_t round) {
    if (round == seed.num_rounds()) return leaf();
    Result out{Rational(0), {}};
    for (bool d : {false, true}) {
      draws.push_back(d);
      asked.push_back(seed.query_pair(round + 1, draws));
      std::optional<Result> best;
      bool best_answer = true;
      for (bool a : {true, false}) {
        answers.push_back(a);
        Result r = solve(round + 1);
        answers.pop_back();
        if (!best || r.value > best->value) {
          best = std::move(r);
          best_answer = a;
        }
      }
      asked.pop_back();
      best->plan.answers[draw_bits(draws)] = best_answer;
      draws.pop_back();
      out.value += best->value / 2;
      out.plan.answers.merge(best->plan.answers);
      out.plan.completions.merge(best->plan.completions);
    }
    return out;
  }
};

}  // namespace detail

// Game value of the interleaved preround for p: nature's draws are averaged,
// the manipulator's answers maximise. Returns the optimal plan.
inline ManipulationAnswer manipulate_ipre(Protocol protocol, const Profile& nonmanipulators, CandidateId p,
                                          const Rational& threshold, const IpreSeed& seed,
                                          const TieBreakPolicy& tiebreak, const CompletionPolicy& completion = {},
                                          const SearchLimits& limits = {}) {
  detail::check_target(nonmanipulators, p);
  const std::size_t m = nonmanipulators.num_candidates();
  seed.validate(m);
  if (seed.num_rounds() > limits.max_ipre_rounds) {
    throw SearchBoundError("interleaved manipulation: " + std::to_string(seed.num_rounds()) +
                           " unscheduled matchup pairs exceeds the bound of " + std::to_string(limits.max_ipre_rounds));
  }
  const bool exhaustive = completion.exhaustive && m <= limits.max_completion_candidates;
  detail::IpreSolver solver{protocol, nonmanipulators, p, seed, completion, exhaustive,
                            PreroundEvaluator(protocol, nonmanipulators, tiebreak), {}, {}, {}};
  auto result = solver.solve(0);
  ManipulationAnswer out;
  out.best_probability = result.value;
  out.decision = result.value >= threshold;
  out.plan = std::move(result.plan);
  return out;
}

// Replays a contingency plan inside the interleaved engine.
class PlanStrategy : public ManipulatorStrategy {
 public:
  explicit PlanStrategy(ContingencyPlan plan) : plan_(std::move(plan)) {}
  bool answer(std::size_t, CandidateId, CandidateId, const std::vector<bool>& draws) override {
    auto it = plan_.answers.find(draw_bits(draws));
    if (it == plan_.answers.end()) throw ElectionError("plan has no answer after draws '" + draw_bits(draws) + "'");
    return it->second;
  }
  Ballot complete(const std::vector<bool>& draws, const std::vector<bool>&) override {
    auto it = plan_.completions.find(draw_bits(draws));
    if (it == plan_.completions.end()) throw ElectionError("plan has no completion for draws '" + draw_bits(draws) + "'");
    return it->second;
  }

 private:
  ContingencyPlan plan_;
};

}  // namespace preround
