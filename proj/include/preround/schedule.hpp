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

// One elimination preround ahead of a base protocol: schedules, their
// enumeration and counting, and the fixed (DPRE) and uniformly random (RPRE)
// schedule variants.

#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "preround/election.hpp"
#include "preround/numeric.hpp"
#include "preround/protocols.hpp"

namespace preround {

using Matchup = std::pair<CandidateId, CandidateId>;

// Disjoint pairs plus a bye iff the roster size is odd.
struct Schedule {
  std::vector<Matchup> pairs;
  std::optional<CandidateId> bye;

  // Throws ElectionError unless the schedule covers 0..m-1 exactly.
  void validate(std::size_t m) const {
    std::vector<bool> seen(m, false);
    auto mark = [&](CandidateId c) {
      if (c >= m) throw ElectionError("schedule names candidate id " + std::to_string(c) + " outside roster");
      if (seen[c]) throw ElectionError("schedule uses candidate id " + std::to_string(c) + " twice");
      seen[c] = true;
    };
    for (const auto& [a, b] : pairs) {
      mark(a);
      mark(b);
    }
    if (bye) mark(*bye);
    if (bye.has_value() != (m % 2 == 1)) throw ElectionError("schedule needs a bye iff the roster size is odd");
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw ElectionError("schedule does not cover roster");
  }

  // Each pair ordered (low, high), pairs sorted; equal schedules have equal canonical forms.
  Schedule canonical() const {
    Schedule out = *this;
    for (auto& [a, b] : out.pairs) {
      if (a > b) std::swap(a, b);
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
  }

  bool operator==(const Schedule&) const = default;
};

// Survivors of the preround given a pairwise tally (optionally plus one ballot).
inline CandidateSet apply_preround(const PairwiseTally& tally, const Schedule& schedule, const TieBreakPolicy& tiebreak,
                                   std::span<const std::size_t> extra_position = {}) {
  CandidateSet survivors(tally.size());
  for (const auto& [a, b] : schedule.pairs) {
    std::int64_t margin = tally.margin(a, b);
    if (!extra_position.empty()) margin += extra_position[a] < extra_position[b] ? 1 : -1;
    if (margin > 0 || (margin == 0 && tiebreak.prefers(a, b))) {
      survivors.insert(a);
    } else {
      survivors.insert(b);
    }
  }
  if (schedule.bye) survivors.insert(*schedule.bye);
  return survivors;
}

inline CandidateSet apply_preround(const Profile& profile, const Schedule& schedule, const TieBreakPolicy& tiebreak) {
  schedule.validate(profile.num_candidates());
  return apply_preround(PairwiseTally(profile), schedule, tiebreak);
}

// All schedules over m candidates: repeatedly pair the lowest unplaced id
// with each later one, or (odd m, once) give it the bye.
inline std::vector<Schedule> enumerate_schedules(std::size_t m) {
  if (m <= 1) throw ElectionError("schedules need at least two candidates");
  std::vector<Schedule> out;
  std::vector<bool> placed(m, false);
  Schedule current;
  auto recurse = [&](auto&& self) -> void {
    CandidateId first = 0;
    while (first < m && placed[first]) ++first;
    if (first == m) {
      out.push_back(current);
      return;
    }
    placed[first] = true;
    if (m % 2 == 1 && !current.bye) {
      current.bye = first;
      self(self);
      current.bye.reset();
    }
    for (CandidateId other = first + 1; other < m; ++other) {
      if (placed[other]) continue;
      placed[other] = true;
      current.pairs.emplace_back(first, other);
      self(self);
      current.pairs.pop_back();
      placed[other] = false;
    }
    placed[first] = false;
  };
  recurse(recurse);
  return out;
}

// (m-1)!! for even m; m * (m-2)!! for odd m (choose the bye, then pair the rest).
inline BigInt count_schedules(std::size_t m) {
  if (m <= 1) throw ElectionError("schedules need at least two candidates");
  BigInt out = 1;
  std::size_t pairs_over = m;
  if (m % 2 == 1) {
    out = m;
    pairs_over = m - 1;
  }
  for (std::size_t k = pairs_over - 1; k >= 1; k -= 2) {
    out *= k;
    if (k == 1) break;
  }
  return out;
}

// A uniformly random schedule: shuffle, pair neighbours, last one gets the bye.
template <typename Rng>
Schedule random_schedule(std::size_t m, Rng& rng) {
  std::vector<CandidateId> perm(m);
  for (std::size_t i = 0; i < m; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  Schedule s;
  for (std::size_t i = 0; i + 1 < m; i += 2) s.pairs.emplace_back(perm[i], perm[i + 1]);
  if (m % 2 == 1) s.bye = perm.back();
  return s;
}

// Preround followed by the base protocol, for a fixed nonmanipulator profile
// and any number of (schedule, extra ballot) queries.
class PreroundEvaluator {
 public:
  PreroundEvaluator(Protocol protocol, const Profile& base, const TieBreakPolicy& tiebreak)
      : inner_(protocol, base, tiebreak) {}

  const WinnerEvaluator& inner() const { return inner_; }
  const Profile& base() const { return inner_.base(); }

  CandidateSet survivors(const Schedule& schedule) const {
    return apply_preround(inner_.tally(), schedule, inner_.tiebreak());
  }

  CandidateSet survivors(const Schedule& schedule, std::span<const CandidateId> extra) {
    set_positions(extra);
    return apply_preround(inner_.tally(), schedule, inner_.tiebreak(), position_);
  }

  CandidateId winner(const Schedule& schedule) { return inner_.winner(survivors(schedule)); }

  // `extra` is a full ballot over the base roster.
  CandidateId winner(const Schedule& schedule, std::span<const CandidateId> extra) {
    return inner_.winner(survivors(schedule, extra), extra);
  }

 private:
  void set_positions(std::span<const CandidateId> extra) {
    position_.assign(inner_.base().num_candidates(), SIZE_MAX);
    for (std::size_t i = 0; i < extra.size(); ++i) position_[extra[i]] = i;
  }

  WinnerEvaluator inner_;
  std::vector<std::size_t> position_;
};

// DPRE: winner of `protocol` on the implicit votes over the preround survivors.
inline CandidateId dpre_winner(Protocol protocol, const Profile& profile, const Schedule& schedule,
                               const TieBreakPolicy& tiebreak) {
  const CandidateSet survivors = apply_preround(profile, schedule, tiebreak);
  const auto kept = survivors.members();
  CandidateId local = winner(protocol, restrict_profile(profile, survivors), tiebreak.restricted(survivors));
  return kept[local];
}

inline constexpr std::size_t kMaxRpreCandidates = 11;

namespace detail {

inline void check_rpre_size(std::size_t m) {
  if (m < 2) throw ElectionError("randomized preround needs at least two candidates");
  if (m > kMaxRpreCandidates) {
    throw ElectionError("exact randomized preround is limited to " + std::to_string(kMaxRpreCandidates) +
                        " candidates (got " + std::to_string(m) + ")");
  }
}

}  // namespace detail

// Exact win probability of every candidate when the schedule is drawn uniformly.
// A single-candidate roster wins with certainty.
inline std::vector<Rational> rpre_win_distribution(Protocol protocol, const Profile& profile,
                                                   const TieBreakPolicy& tiebreak,
                                                   std::span<const CandidateId> extra = {}) {
  const std::size_t m = profile.num_candidates();
  std::vector<Rational> out(m, Rational(0));
  if (m == 1) {
    out[0] = 1;
    return out;
  }
  detail::check_rpre_size(m);
  PreroundEvaluator eval(protocol, profile, tiebreak);
  std::vector<std::int64_t> wins(m, 0);
  const auto schedules = enumerate_schedules(m);
  for (const auto& s : schedules) ++wins[extra.empty() ? eval.winner(s) : eval.winner(s, extra)];
  const auto total = static_cast<std::int64_t>(schedules.size());
  for (std::size_t c = 0; c < m; ++c) out[c] = Rational(wins[c], total);
  return out;
}

inline Rational rpre_win_probability(Protocol protocol, const Profile& profile, CandidateId target,
                                     const TieBreakPolicy& tiebreak) {
  if (target >= profile.num_candidates()) throw ElectionError("target candidate not in roster");
  return rpre_win_distribution(protocol, profile, tiebreak)[target];
}

// Monte Carlo estimate for rosters beyond the exact bound. Not exact.
template <typename Rng>
Rational rpre_win_probability_sampled(Protocol protocol, const Profile& profile, CandidateId target,
                                      const TieBreakPolicy& tiebreak, std::size_t samples, Rng& rng) {
  if (samples == 0) throw ElectionError("need at least one sample");
  PreroundEvaluator eval(protocol, profile, tiebreak);
  std::size_t wins = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    if (eval.winner(random_schedule(profile.num_candidates(), rng)) == target) ++wins;
  }
  return Rational(static_cast<std::int64_t>(wins), static_cast<std::int64_t>(samples));
}

// Schedule file: "pair <name> <name>" lines and at most one "bye <name>".
inline Schedule parse_schedule(std::string_view text, const Profile& profile) {
  Schedule s;
  detail::for_each_content_line(text, [&](std::size_t line_no, std::string_view line) {
    auto tok = detail::split_ws(line);
    auto lookup = [&](std::string_view n) {
      auto c = profile.find(n);
      if (!c) throw ParseError(line_no, "unknown candidate '" + std::string(n) + "'");
      return *c;
    };
    if (tok.size() == 3 && tok[0] == "pair") {
      s.pairs.emplace_back(lookup(tok[1]), lookup(tok[2]));
    } else if (tok.size() == 2 && tok[0] == "bye") {
      if (s.bye) throw ParseError(line_no, "more than one bye");
      s.bye = lookup(tok[1]);
    } else {
      throw ParseError(line_no, "expected 'pair <a> <b>' or 'bye <c>'");
    }
  });
  s.validate(profile.num_candidates());
  return s;
}

inline std::string serialize_schedule(const Schedule& s, const Profile& profile) {
  std::ostringstream out;
  for (const auto& [a, b] : s.pairs) out << "pair " << profile.name(a) << ' ' << profile.name(b) << '\n';
  if (s.bye) out << "bye " << profile.name(*s.bye) << '\n';
  return out.str();
}

}  // namespace preround
