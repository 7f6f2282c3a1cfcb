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

// Brute-force oracles and property checkers for constructed elections.
//
// Property ids:
//   1a  p wins after removing one literal per variable iff every clause keeps a
//       literal, even with one extra ballot       1b  literal pairs tied
//   2a  p wins after removing k vertices iff the right side was removed
//   2b  p loses to every right vertex   2c  left beats right iff edge
//   2d  2a-2c survive any single extra ballot
//   3a  as 1a with the aux candidates kept   3b  X literal pairs tied
//   3c  aux beats both Y literals by at least 2

#pragma once

#include <algorithm>
#include <bit>
#include <filesystem>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "preround/election.hpp"
#include "preround/instance.hpp"
#include "preround/manipulation.hpp"
#include "preround/numeric.hpp"
#include "preround/protocols.hpp"
#include "preround/schedule.hpp"

namespace preround {

// First satisfying assignment, trying true before false with variable 1 most
// significant. assignment[v - 1] is variable v.
inline std::optional<std::vector<bool>> sat_solve(const CnfFormula& f) {
  const std::size_t n = f.num_variables;
  if (n > 24) throw SearchBoundError("brute-force SAT is limited to 24 variables");
  std::vector<bool> a(n);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    for (std::size_t v = 0; v < n; ++v) a[v] = ((code >> (n - 1 - v)) & 1) == 0;
    if (f.satisfied_by(a)) return a;
  }
  return std::nullopt;
}

// Perfect matchings of B, by dynamic programming over subsets of the right side.
inline BigInt count_perfect_matchings(const BipartiteGraph& g) {
  const std::size_t k = g.k;
  if (k > 20) throw SearchBoundError("perfect-matching count is limited to k <= 20");
  std::vector<BigInt> ways(std::size_t{1} << k, 0);
  ways[0] = 1;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    if (ways[mask] == 0) continue;
    const auto left = static_cast<std::size_t>(std::popcount(mask)) + 1;  // next left vertex to match
    if (left > k) continue;
    for (std::size_t r = 0; r < k; ++r) {
      if ((mask >> r) & 1) continue;
      if (g.has_edge(left, k + 1 + r)) ways[mask | (std::uint64_t{1} << r)] += ways[mask];
    }
  }
  return ways[(std::size_t{1} << k) - 1];
}

// Optimal satisfaction probability when nature sets y_i uniformly and the
// maximiser then sets x_i, for i = 1..|Y| in order. y_i is variable i and x_i
// is variable |Y| + i.
inline Rational stochastic_sat_value(const CnfFormula& f) {
  const std::size_t ny = f.balanced_split();
  if (f.num_variables > 20) throw SearchBoundError("stochastic SAT oracle is limited to 20 variables");
  std::vector<bool> a(f.num_variables, false);
  auto value = [&](auto&& self, std::size_t i) -> Rational {
    if (i == ny) return f.satisfied_by(a) ? Rational(1) : Rational(0);
    Rational total = 0;
    for (bool y : {false, true}) {
      a[i] = y;
      Rational best = 0;
      for (bool x : {false, true}) {
        a[ny + i] = x;
        best = std::max(best, self(self, i + 1));
      }
      total += best / 2;
    }
    return total;
  };
  return value(value, 0);
}

// A replayable failure: running the protocol on `election` with `tiebreak`
// (both in the election's own ids) yields `observed`.
struct Counterexample {
  std::string description;
  std::optional<Profile> election;
  std::vector<CandidateId> tiebreak;
  std::string observed;
  std::string expected;
};

struct PropertyReport {
  std::string id;
  bool passed = true;
  bool exhaustive = true;
  std::size_t samples = 0;
  std::uint64_t rng_seed = 0;
  std::string note;
  std::optional<Counterexample> counterexample;

  static PropertyReport named(std::string id) {
    PropertyReport out;
    out.id = std::move(id);
    return out;
  }

  std::string summary_line() const {
    std::ostringstream out;
    out << id << ' ' << (passed ? "PASS" : "FAIL") << " (";
    if (exhaustive) {
      out << "exhaustive";
    } else {
      out << "sampled n=" << samples;
    }
    out << ')';
    if (!exhaustive) out << " seed=" << rng_seed;
    if (!note.empty()) out << ' ' << note;
    return out.str();
  }
};

inline bool all_passed(const std::vector<PropertyReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; });
}

struct VerifyOptions {
  bool force_sampling = false;
  std::size_t samples = 0;  // 0: the check's default
  std::uint64_t rng_seed = 1;
  std::size_t exhaustive_limit = 1'000'000;  // max ballots enumerated per case
  std::optional<TieBreakPolicy> tiebreak;  // default: roster order
};

namespace detail {

inline TieBreakPolicy tiebreak_for(const VerifyOptions& opt, const Profile& profile) {
  if (opt.tiebreak) {
    if (opt.tiebreak->size() != profile.num_candidates()) throw ElectionError("tie-break sized for another roster");
    return *opt.tiebreak;
  }
  return TieBreakPolicy::roster_order(profile.num_candidates());
}

inline std::string names_of(const Profile& profile, std::span<const CandidateId> ids) {
  std::string out;
  for (CandidateId c : ids) {
    if (!out.empty()) out += ' ';
    out += profile.name(c);
  }
  return out;
}

// Election restricted to `active`, with the optional extra ballot appended.
inline Counterexample make_counterexample(const Profile& profile, const CandidateSet& active,
                                          std::span<const CandidateId> extra, const TieBreakPolicy& tb,
                                          std::string description, CandidateId observed, std::string expected) {
  Counterexample cx;
  cx.description = std::move(description);
  Profile restricted = restrict_profile(profile, active);
  if (!extra.empty()) {
    std::vector<CandidateId> remap(profile.num_candidates(), SIZE_MAX);
    auto kept = active.members();
    for (std::size_t i = 0; i < kept.size(); ++i) remap[kept[i]] = i;
    Ballot b;
    for (CandidateId c : extra) {
      if (remap[c] != SIZE_MAX) b.push_back(remap[c]);
    }
    restricted = restricted.with_ballot(b);
  }
  cx.election = std::move(restricted);
  cx.tiebreak = tb.restricted(active).order();
  cx.observed = profile.name(observed);
  cx.expected = std::move(expected);
  return cx;
}

// Extra ballots to try: every permutation of `over` when that is at most the
// limit (and sampling is not forced), else `samples` uniform shuffles plus,
// for each candidate other than p, a ballot ranking it first and p last.
class ExtraBallots {
 public:
  ExtraBallots(std::vector<CandidateId> over, CandidateId p, bool exhaustive, std::size_t samples, std::uint64_t seed)
      : over_(std::move(over)), p_(p), exhaustive_(exhaustive), samples_(samples), rng_(seed) {}

  bool exhaustive() const { return exhaustive_; }

  template <typename Fn>  // fn(ballot) -> false to stop
  void for_each(Fn&& fn) {
    if (exhaustive_) {
      Ballot b = over_;
      std::sort(b.begin(), b.end());
      do {
        if (!fn(static_cast<const Ballot&>(b))) return;
      } while (std::next_permutation(b.begin(), b.end()));
      return;
    }
    Ballot b = over_;
    for (std::size_t i = 0; i < samples_; ++i) {
      std::shuffle(b.begin(), b.end(), rng_);
      if (!fn(static_cast<const Ballot&>(b))) return;
    }
    for (CandidateId lead : over_) {
      if (lead == p_) continue;
      Ballot adv{lead};
      for (CandidateId c : over_) {
        if (c != lead && c != p_) adv.push_back(c);
      }
      if (std::find(over_.begin(), over_.end(), p_) != over_.end()) adv.push_back(p_);
      if (!fn(static_cast<const Ballot&>(adv))) return;
    }
  }

 private:
  std::vector<CandidateId> over_;
  CandidateId p_;
  bool exhaustive_;
  std::size_t samples_;
  std::mt19937_64 rng_;
};

inline bool factorial_at_most(std::size_t n, std::size_t limit) {
  std::size_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    if (f > limit / i) return false;
    f *= i;
  }
  return f <= limit;
}

// Padding candidates come in consecutive pairs; the pairwise winner of each survives.
inline std::vector<CandidateId> padding_survivors(const ReductionOutput& r, const PairwiseTally& tally,
                                                  const TieBreakPolicy& tb) {
  auto pads = r.with_role(RoleKind::Padding);
  if (pads.size() % 2 != 0) throw ElectionError("padding candidates must come in pairs");
  std::vector<CandidateId> out;
  for (std::size_t i = 0; i < pads.size(); i += 2) {
    const std::int64_t margin = tally.margin(pads[i], pads[i + 1]);
    out.push_back(margin > 0 || (margin == 0 && tb.prefers(pads[i], pads[i + 1])) ? pads[i] : pads[i + 1]);
  }
  return out;
}

// Shared 1a / 3a check: for every choice of surviving literal per variable,
// p must win exactly when the induced assignment satisfies the formula, with
// no extra ballot and with every extra ballot considered.
inline PropertyReport check_assignment_property(const std::string& id, const ReductionOutput& r, Protocol protocol,
                                                const VerifyOptions& opt) {
  if (!r.formula) throw ElectionError("property " + id + " needs the source formula");
  const auto& f = *r.formula;
  const auto literals = r.literal_pairs();
  if (literals.size() != f.num_variables) throw ElectionError("role map does not match the formula's variables");
  const std::size_t n = f.num_variables;
  if (n > 20) throw SearchBoundError("property " + id + " enumerates 2^|V| removals; limited to 20 variables");
  const CandidateId p = r.preferred();
  const TieBreakPolicy tb = tiebreak_for(opt, r.profile);
  WinnerEvaluator eval(protocol, r.profile, tb);

  CandidateSet base = r.originals();
  for (CandidateId c : padding_survivors(r, eval.tally(), tb)) base.insert(c);

  PropertyReport report = PropertyReport::named(id);
  report.rng_seed = opt.rng_seed;
  const std::size_t samples = opt.samples ? opt.samples : 1000;
  std::vector<bool> truth(n);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n) && report.passed; ++code) {
    CandidateSet active = base;
    std::string removed;
    for (std::size_t v = 0; v < n; ++v) {
      truth[v] = ((code >> (n - 1 - v)) & 1) == 0;
      const CandidateId gone = truth[v] ? literals[v].negative : literals[v].positive;
      active.erase(gone);
      removed += (removed.empty() ? "" : " ") + r.profile.name(gone);
    }
    const bool expect_p = f.satisfied_by(truth);
    const std::string expected = expect_p ? r.profile.name(p) : "not " + r.profile.name(p);
    auto check = [&](std::span<const CandidateId> extra) {
      const CandidateId w = extra.empty() ? eval.winner(active) : eval.winner(active, extra);
      if ((w == p) == expect_p) return true;
      std::string desc = "removed {" + removed + "}";
      if (!extra.empty()) desc += ", extra ballot: " + names_of(r.profile, extra);
      report.passed = false;
      report.counterexample = make_counterexample(r.profile, active, extra, tb, desc, w, expected);
      return false;
    };
    if (!check({})) break;
    const auto members = active.members();
    const bool exhaustive = !opt.force_sampling && factorial_at_most(members.size(), opt.exhaustive_limit);
    ExtraBallots extras(members, p, exhaustive, samples, opt.rng_seed + code);
    if (!exhaustive) {
      report.exhaustive = false;
      report.samples = samples;
    }
    extras.for_each([&](const Ballot& b) { return check(b); });
  }
  return report;
}

inline PropertyReport check_literal_ties(const std::string& id, const ReductionOutput& r,
                                         std::span<const std::size_t> variables) {
  const auto literals = r.literal_pairs();
  const PairwiseTally tally(r.profile);
  PropertyReport report = PropertyReport::named(id);
  for (std::size_t v : variables) {
    const auto& l = literals.at(v - 1);
    const auto plus = tally(l.positive, l.negative), minus = tally(l.negative, l.positive);
    if (plus != minus) {
      report.passed = false;
      Counterexample cx;
      cx.description = "variable " + std::to_string(v) + ": " + r.profile.name(l.positive) + " over " +
                       r.profile.name(l.negative) + " in " + std::to_string(plus) + " votes, reverse in " +
                       std::to_string(minus);
      cx.election = r.profile;
      cx.tiebreak = TieBreakPolicy::roster_order(r.profile.num_candidates()).order();
      cx.observed = std::to_string(plus) + "-" + std::to_string(minus);
      cx.expected = "tie";
      report.counterexample = std::move(cx);
      break;
    }
  }
  return report;
}

}  // namespace detail

inline std::vector<PropertyReport> check_dpre_properties(const ReductionOutput& r, Protocol protocol,
                                                         const VerifyOptions& opt = {}) {
  r.validate();
  if (!r.formula) throw ElectionError("fixed-preround checks need the source formula");
  std::vector<std::size_t> vars(r.formula->num_variables);
  std::iota(vars.begin(), vars.end(), std::size_t{1});
  return {detail::check_assignment_property("1a", r, protocol, opt), detail::check_literal_ties("1b", r, vars)};
}

inline std::vector<PropertyReport> check_ipre_properties(const ReductionOutput& r, Protocol protocol,
                                                         const VerifyOptions& opt = {}) {
  r.validate();
  if (!r.formula) throw ElectionError("interleaved-preround checks need the source formula");
  const std::size_t ny = r.formula->balanced_split();
  std::vector<std::size_t> xs;
  for (std::size_t v = ny + 1; v <= r.formula->num_variables; ++v) xs.push_back(v);

  PropertyReport c3 = PropertyReport::named("3c");
  const PairwiseTally tally(r.profile);
  const auto literals = r.literal_pairs();
  for (std::size_t y = 1; y <= ny && c3.passed; ++y) {
    auto aux = r.find(RoleKind::Aux, y);
    if (!aux) throw ElectionError("no aux candidate for variable " + std::to_string(y));
    for (CandidateId lit : {literals[y - 1].positive, literals[y - 1].negative}) {
      const auto margin = tally.margin(*aux, lit);
      if (margin >= 2) continue;
      c3.passed = false;
      Counterexample cx;
      cx.description = r.profile.name(*aux) + " vs " + r.profile.name(lit) + ": margin " + std::to_string(margin);
      cx.election = r.profile;
      cx.tiebreak = TieBreakPolicy::roster_order(r.profile.num_candidates()).order();
      cx.observed = "margin " + std::to_string(margin);
      cx.expected = "margin >= 2";
      c3.counterexample = std::move(cx);
      break;
    }
  }
  return {detail::check_assignment_property("3a", r, protocol, opt), detail::check_literal_ties("3b", r, xs), c3};
}

// Pairwise-graph properties of a matching reduction. Extra ballots range over
// the whole roster: all (2k+1)! of them for k <= 2, else 2000 samples.
inline std::vector<PropertyReport> check_rpre_properties(const ReductionOutput& r, Protocol protocol,
                                                         const VerifyOptions& opt = {}) {
  r.validate();
  if (!r.graph) throw ElectionError("randomized-preround checks need the source graph");
  const auto& g = *r.graph;
  const std::size_t k = g.k;
  if (k > 6) throw SearchBoundError("matching property checks are limited to k <= 6");
  const CandidateId p = r.preferred();
  std::vector<CandidateId> vertex(2 * k + 1);
  for (std::size_t i = 1; i <= 2 * k; ++i) {
    auto c = r.find(RoleKind::Vertex, i);
    if (!c) throw ElectionError("no candidate for vertex " + std::to_string(i));
    vertex[i] = *c;
  }
  const TieBreakPolicy tb = detail::tiebreak_for(opt, r.profile);
  WinnerEvaluator eval(protocol, r.profile, tb);
  const PairwiseTally base_tally(r.profile);
  const std::size_t m = r.profile.num_candidates();

  // Removal sets: k-subsets of the 2k vertices, as bitmasks over vertex - 1.
  std::vector<std::uint64_t> removals;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (2 * k)); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) == k) removals.push_back(mask);
  }
  const std::uint64_t right_side = ((std::uint64_t{1} << k) - 1) << k;

  std::vector<CandidateId> position(m);
  auto check_all = [&](std::span<const CandidateId> extra, PropertyReport& a, PropertyReport& b,
                       PropertyReport& c) {
    PairwiseTally tally = base_tally;
    if (!extra.empty()) tally.add(extra);
    const std::string suffix = extra.empty() ? "" : ", extra ballot: " + detail::names_of(r.profile, extra);
    if (a.passed) {
      for (std::uint64_t mask : removals) {
        CandidateSet active(m, true);
        std::string removed;
        for (std::size_t v = 0; v < 2 * k; ++v) {
          if ((mask >> v) & 1) {
            active.erase(vertex[v + 1]);
            removed += (removed.empty() ? "" : " ") + r.profile.name(vertex[v + 1]);
          }
        }
        const bool expect_p = mask == right_side;
        const CandidateId w = extra.empty() ? eval.winner(active) : eval.winner(active, extra);
        if ((w == p) == expect_p) continue;
        a.passed = false;
        a.counterexample = detail::make_counterexample(r.profile, active, extra, tb, "removed {" + removed + "}" + suffix,
                                                       w, expect_p ? r.profile.name(p) : "not " + r.profile.name(p));
        break;
      }
    }
    auto pairwise_failure = [&](PropertyReport& rep, CandidateId x, CandidateId y, const std::string& want) {
      rep.passed = false;
      Counterexample cx;
      cx.description = r.profile.name(x) + " vs " + r.profile.name(y) + ": " + std::to_string(tally(x, y)) + "-" +
                       std::to_string(tally(y, x)) + suffix;
      cx.election = extra.empty() ? r.profile : r.profile.with_ballot(Ballot(extra.begin(), extra.end()));
      cx.tiebreak = tb.order();
      cx.observed = std::to_string(tally(x, y)) + "-" + std::to_string(tally(y, x));
      cx.expected = want;
      rep.counterexample = std::move(cx);
    };
    for (std::size_t j = k + 1; j <= 2 * k && b.passed; ++j) {
      if (tally.margin(vertex[j], p) <= 0) pairwise_failure(b, vertex[j], p, r.profile.name(vertex[j]) + " wins");
    }
    for (std::size_t i = 1; i <= k && c.passed; ++i) {
      for (std::size_t j = k + 1; j <= 2 * k && c.passed; ++j) {
        const bool edge = g.has_edge(i, j);
        const bool left_wins = tally.margin(vertex[i], vertex[j]) > 0;
        const bool right_wins = tally.margin(vertex[j], vertex[i]) > 0;
        if (edge ? !left_wins : !right_wins) {
          pairwise_failure(c, vertex[i], vertex[j], edge ? "left vertex wins (edge)" : "right vertex wins (no edge)");
        }
      }
    }
  };

  PropertyReport a = PropertyReport::named("2a"), b = PropertyReport::named("2b"), c = PropertyReport::named("2c");
  check_all({}, a, b, c);

  PropertyReport d = PropertyReport::named("2d");
  d.rng_seed = opt.rng_seed;
  PropertyReport da = PropertyReport::named("2a"), db = PropertyReport::named("2b"), dc = PropertyReport::named("2c");
  const bool exhaustive = !opt.force_sampling && k <= 2;
  const std::size_t samples = opt.samples ? opt.samples : 2000;
  std::vector<CandidateId> all(m);
  std::iota(all.begin(), all.end(), CandidateId{0});
  detail::ExtraBallots extras(all, p, exhaustive, samples, opt.rng_seed);
  d.exhaustive = exhaustive;
  if (!exhaustive) d.samples = samples;
  extras.for_each([&](const Ballot& ballot) {
    check_all(ballot, da, db, dc);
    return da.passed && db.passed && dc.passed;
  });
  for (auto* sub : {&da, &db, &dc}) {
    if (!sub->passed) {
      d.passed = false;
      d.note = "(" + sub->id + " breaks)";
      d.counterexample = sub->counterexample;
      break;
    }
  }
  return {a, b, c, d};
}

// Writes report.txt plus, per failed property, <id>-counterexample.vote and .txt.
inline void write_report_dir(const std::filesystem::path& dir, const std::vector<PropertyReport>& reports,
                             const std::vector<std::string>& extra_lines = {}) {
  std::filesystem::create_directories(dir);
  std::ostringstream summary;
  for (const auto& rep : reports) {
    summary << rep.summary_line() << '\n';
    if (!rep.counterexample) continue;
    const auto& cx = *rep.counterexample;
    std::ostringstream text;
    text << "property: " << rep.id << '\n'
         << "case: " << cx.description << '\n'
         << "observed: " << cx.observed << '\n'
         << "expected: " << cx.expected << '\n';
    if (cx.election) {
      text << "tiebreak:";
      for (CandidateId c : cx.tiebreak) text << ' ' << cx.election->name(c);
      text << '\n';
      write_text_file(dir / (rep.id + "-counterexample.vote"), serialize_profile(*cx.election));
    }
    write_text_file(dir / (rep.id + "-counterexample.txt"), text.str());
  }
  for (const auto& line : extra_lines) summary << line << '\n';
  write_text_file(dir / "report.txt", summary.str());
}

}  // namespace preround
