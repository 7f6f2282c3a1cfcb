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

// Winner determination for Plurality, Borda, Maximin and STV.
//
// Every routine comes in two flavours: one over a Profile as given, and one
// over an "active" candidate subset of a larger profile. The active flavour is
// what the preround engines use; it is equivalent to running the protocol on
// restrict_profile(profile, active) but avoids materialising the restriction.

#pragma once

#include <algorithm>
#include <cctype>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "preround/election.hpp"

namespace preround {

enum class Protocol { Plurality, Borda, Maximin, Stv };

inline constexpr Protocol kAllProtocols[] = {Protocol::Plurality, Protocol::Borda, Protocol::Maximin, Protocol::Stv};

inline std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::Plurality: return "plurality";
    case Protocol::Borda: return "borda";
    case Protocol::Maximin: return "maximin";
    case Protocol::Stv: return "stv";
  }
  return "?";
}

inline Protocol parse_protocol(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  for (Protocol p : kAllProtocols) {
    if (lower == to_string(p)) return p;
  }
  throw ElectionError("unknown protocol '" + std::string(text) + "' (expected plurality|borda|maximin|stv)");
}

// Strict priority over the roster; earlier in `order` = higher priority.
// Higher priority wins score ties and pairwise ties; lower priority drops
// first on STV elimination ties.
class TieBreakPolicy {
 public:
  TieBreakPolicy() = default;

  explicit TieBreakPolicy(std::vector<CandidateId> order) : order_(std::move(order)), rank_(order_.size(), SIZE_MAX) {
    for (std::size_t i = 0; i < order_.size(); ++i) {
      if (order_[i] >= order_.size() || rank_[order_[i]] != SIZE_MAX) {
        throw ElectionError("tie-break order is not a permutation of the roster");
      }
      rank_[order_[i]] = i;
    }
  }

  static TieBreakPolicy roster_order(std::size_t m) {
    std::vector<CandidateId> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    return TieBreakPolicy(std::move(order));
  }

  // Names listed first (highest priority first), unlisted candidates after them in roster order.
  static TieBreakPolicy from_names(const Profile& profile, std::span<const std::string> names) {
    std::vector<CandidateId> order;
    std::vector<bool> used(profile.num_candidates(), false);
    for (const auto& n : names) {
      CandidateId c = profile.id(n);
      if (used[c]) throw ElectionError("tie-break lists '" + n + "' twice");
      used[c] = true;
      order.push_back(c);
    }
    for (CandidateId c = 0; c < profile.num_candidates(); ++c) {
      if (!used[c]) order.push_back(c);
    }
    return TieBreakPolicy(std::move(order));
  }

  std::size_t size() const { return order_.size(); }
  const std::vector<CandidateId>& order() const { return order_; }
  std::size_t rank(CandidateId c) const { return rank_.at(c); }
  bool prefers(CandidateId a, CandidateId b) const { return rank_[a] < rank_[b]; }

  // The policy induced on restrict_profile(..., survivors).
  TieBreakPolicy restricted(const CandidateSet& survivors) const {
    std::vector<CandidateId> remap(order_.size(), SIZE_MAX);
    std::size_t next = 0;
    for (CandidateId c = 0; c < order_.size(); ++c) {
      if (survivors.contains(c)) remap[c] = next++;
    }
    std::vector<CandidateId> order;
    for (CandidateId c : order_) {
      if (remap[c] != SIZE_MAX) order.push_back(remap[c]);
    }
    return TieBreakPolicy(std::move(order));
  }

  bool operator==(const TieBreakPolicy& o) const { return order_ == o.order_; }

 private:
  std::vector<CandidateId> order_;
  std::vector<std::size_t> rank_;
};

// Points per candidate id; only entries for the candidates in play are meaningful.
using ScoreTable = std::vector<std::int64_t>;

struct StvOutcome {
  CandidateId winner = 0;
  std::vector<CandidateId> elimination_order;
};

namespace detail {

inline void add_positional_scores(Protocol protocol, std::span<const CandidateId> ballot, std::int64_t count,
                                  const CandidateSet& active, std::size_t active_count, ScoreTable& scores) {
  if (protocol == Protocol::Plurality) {
    for (CandidateId c : ballot) {
      if (active.contains(c)) {
        scores[c] += count;
        return;
      }
    }
    return;
  }
  std::int64_t points = static_cast<std::int64_t>(active_count) - 1;
  for (CandidateId c : ballot) {
    if (active.contains(c)) scores[c] += points-- * count;
  }
}

inline ScoreTable maximin_scores(const PairwiseTally& tally, const CandidateSet& active) {
  const auto members = active.members();
  ScoreTable scores(tally.size(), 0);
  for (CandidateId a : members) {
    std::int64_t worst = tally.total() + 1;  // no opponents
    for (CandidateId b : members) {
      if (a != b) worst = std::min(worst, tally(a, b));
    }
    scores[a] = worst;
  }
  return scores;
}

inline CandidateId best_scorer(const ScoreTable& scores, const CandidateSet& active, const TieBreakPolicy& tb) {
  bool found = false;
  CandidateId best = 0;
  for (CandidateId c = 0; c < scores.size(); ++c) {
    if (!active.contains(c)) continue;
    if (!found || scores[c] > scores[best] || (scores[c] == scores[best] && tb.prefers(c, best))) {
      best = c;
      found = true;
    }
  }
  if (!found) throw ElectionError("no candidates in play");
  return best;
}

// STV over `active`, optionally with one extra ballot (which may omit inactive candidates).
inline StvOutcome stv_among(const Profile& profile, const CandidateSet& active, const TieBreakPolicy& tb,
                            std::span<const CandidateId> extra = {}) {
  CandidateSet alive = active;
  std::size_t remaining = alive.size();
  if (remaining == 0) throw ElectionError("no candidates in play");
  StvOutcome out;
  ScoreTable counts(profile.num_candidates(), 0);
  auto credit_top = [&](std::span<const CandidateId> ballot, std::int64_t count) {
    for (CandidateId c : ballot) {
      if (alive.contains(c)) {
        counts[c] += count;
        return;
      }
    }
  };
  while (remaining > 1) {
    std::fill(counts.begin(), counts.end(), 0);
    for (const auto& g : profile.groups()) credit_top(g.ballot, g.count);
    if (!extra.empty()) credit_top(extra, 1);
    bool found = false;
    CandidateId drop = 0;
    for (CandidateId c = 0; c < counts.size(); ++c) {
      if (!alive.contains(c)) continue;
      if (!found || counts[c] < counts[drop] || (counts[c] == counts[drop] && tb.prefers(drop, c))) {
        drop = c;
        found = true;
      }
    }
    alive.erase(drop);
    out.elimination_order.push_back(drop);
    --remaining;
  }
  out.winner = alive.members().front();
  return out;
}

}  // namespace detail

// Plurality, Borda or Maximin points over the full roster of `profile`.
inline ScoreTable scores(Protocol protocol, const Profile& profile) {
  if (protocol == Protocol::Stv) throw ElectionError("STV is not score-based; use stv_outcome");
  CandidateSet all(profile.num_candidates(), true);
  if (protocol == Protocol::Maximin) return detail::maximin_scores(PairwiseTally(profile), all);
  ScoreTable out(profile.num_candidates(), 0);
  for (const auto& g : profile.groups()) {
    detail::add_positional_scores(protocol, g.ballot, g.count, all, profile.num_candidates(), out);
  }
  return out;
}

inline StvOutcome stv_outcome(const Profile& profile, const TieBreakPolicy& tiebreak) {
  return detail::stv_among(profile, CandidateSet(profile.num_candidates(), true), tiebreak);
}

inline CandidateId winner(Protocol protocol, const Profile& profile, const TieBreakPolicy& tiebreak) {
  if (tiebreak.size() != profile.num_candidates()) throw ElectionError("tie-break policy sized for another roster");
  if (protocol == Protocol::Stv) return stv_outcome(profile, tiebreak).winner;
  return detail::best_scorer(scores(protocol, profile), CandidateSet(profile.num_candidates(), true), tiebreak);
}

// Winner of `protocol` run on the candidates in `active` (implicit votes),
// optionally with one additional ballot. Results are cached per active set,
// so repeated queries against the same base profile are cheap.
class WinnerEvaluator {
 public:
  WinnerEvaluator(Protocol protocol, Profile base, TieBreakPolicy tiebreak)
      : protocol_(protocol), base_(std::move(base)), tiebreak_(std::move(tiebreak)), tally_(base_) {
    if (tiebreak_.size() != base_.num_candidates()) throw ElectionError("tie-break policy sized for another roster");
  }

  Protocol protocol() const { return protocol_; }
  const Profile& base() const { return base_; }
  const PairwiseTally& tally() const { return tally_; }
  const TieBreakPolicy& tiebreak() const { return tiebreak_; }

  CandidateId winner(const CandidateSet& active) { return winner(active, {}); }

  // `extra` must rank every active candidate; inactive entries are ignored.
  CandidateId winner(const CandidateSet& active, std::span<const CandidateId> extra) {
    if (protocol_ == Protocol::Stv) return detail::stv_among(base_, active, tiebreak_, extra).winner;
    const ScoreTable& cached = base_scores(active);
    if (extra.empty()) return detail::best_scorer(cached, active, tiebreak_);

    scratch_ = cached;
    if (protocol_ == Protocol::Maximin) {
      add_extra_maximin(active, extra);
    } else {
      detail::add_positional_scores(protocol_, extra, 1, active, active.size(), scratch_);
    }
    return detail::best_scorer(scratch_, active, tiebreak_);
  }

 private:
  const ScoreTable& base_scores(const CandidateSet& active) {
    auto it = cache_.find(active);
    if (it != cache_.end()) return it->second;
    ScoreTable s;
    if (protocol_ == Protocol::Maximin) {
      s = detail::maximin_scores(tally_, active);
    } else {
      s = ScoreTable(base_.num_candidates(), 0);
      const std::size_t n = active.size();
      for (const auto& g : base_.groups()) detail::add_positional_scores(protocol_, g.ballot, g.count, active, n, s);
    }
    return cache_.emplace(active, std::move(s)).first->second;
  }

  void add_extra_maximin(const CandidateSet& active, std::span<const CandidateId> extra) {
    const std::size_t m = base_.num_candidates();
    position_.assign(m, SIZE_MAX);
    for (std::size_t i = 0; i < extra.size(); ++i) position_[extra[i]] = i;
    const auto members = active.members();
    for (CandidateId a : members) {
      std::int64_t worst = tally_.total() + 2;
      for (CandidateId b : members) {
        if (a == b) continue;
        worst = std::min(worst, tally_(a, b) + (position_[a] < position_[b] ? 1 : 0));
      }
      scratch_[a] = worst;
    }
  }

  Protocol protocol_;
  Profile base_;
  TieBreakPolicy tiebreak_;
  PairwiseTally tally_;
  std::unordered_map<CandidateSet, ScoreTable, CandidateSet::Hash> cache_;
  ScoreTable scratch_;
  std::vector<std::size_t> position_;
};

}  // namespace preround
