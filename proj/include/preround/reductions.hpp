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

// Election instances built from CNF formulas and bipartite graphs.
//
// Candidate names: p, x<v>+ and x<v>- for the literals of variable v, k<j> for
// clause j, a<y> for the auxiliary of Y-variable y, d_<name> for the dummy
// shadowing an original, z<i> for padding, and c1..c2k for graph vertices.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "preround/election.hpp"
#include "preround/instance.hpp"
#include "preround/ipre.hpp"
#include "preround/properties.hpp"
#include "preround/protocols.hpp"
#include "preround/schedule.hpp"

namespace preround {

// One run of a vote template. Members of an unordered segment may be listed
// in any order; they are laid out ascending by candidate id.
struct VoteSegment {
  std::vector<CandidateId> members;
  bool unordered = false;
};

// `count` identical votes, up to the order inside unordered segments.
struct VoteTemplate {
  std::int64_t count = 0;
  std::vector<VoteSegment> segments;
  bool clause_block = false;
};

struct BalancedVotes {
  std::vector<BallotGroup> groups;
  std::vector<bool> clause_block;  // per group
};

// Lays out the templates so that each literal pair ends up pairwise tied.
// Per variable, the votes fixing the pair's order contribute a net d; the
// first (F - d) / 2 of the F free votes, in emission order, put the positive
// literal first and the rest the negative one.
inline BalancedVotes balance_literal_ties(std::span<const VoteTemplate> templates,
                                          std::span<const LiteralPair> literals) {
  struct Placement {
    std::size_t segment;
    std::size_t index;
  };
  const std::size_t n = literals.size();
  // where[t][v] = positions of +v and -v in template t
  std::vector<std::vector<std::pair<Placement, Placement>>> where(templates.size());
  std::vector<std::int64_t> forced(n, 0), free_votes(n, 0);
  std::vector<std::vector<VoteSegment>> sorted(templates.size());

  for (std::size_t t = 0; t < templates.size(); ++t) {
    const auto& tpl = templates[t];
    if (tpl.count <= 0) throw ElectionError("vote template with non-positive count");
    sorted[t] = tpl.segments;
    for (auto& seg : sorted[t]) {
      if (seg.unordered) std::sort(seg.members.begin(), seg.members.end());
    }
    auto locate = [&](CandidateId c) {
      for (std::size_t s = 0; s < sorted[t].size(); ++s) {
        const auto& m = sorted[t][s].members;
        auto it = std::find(m.begin(), m.end(), c);
        if (it != m.end()) return Placement{s, static_cast<std::size_t>(it - m.begin())};
      }
      throw ElectionError("vote template omits candidate id " + std::to_string(c));
    };
    for (std::size_t v = 0; v < n; ++v) {
      const Placement pos = locate(literals[v].positive), neg = locate(literals[v].negative);
      where[t].emplace_back(pos, neg);
      if (pos.segment == neg.segment && sorted[t][pos.segment].unordered) {
        free_votes[v] += tpl.count;
      } else {
        const bool pos_first = pos.segment < neg.segment || (pos.segment == neg.segment && pos.index < neg.index);
        forced[v] += pos_first ? tpl.count : -tpl.count;
      }
    }
  }

  // remaining[v]: free votes still to be emitted with the positive literal first.
  std::vector<std::int64_t> remaining(n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::int64_t d = forced[v], f = free_votes[v];
    if ((f - d) % 2 != 0 || f < (d < 0 ? -d : d)) {
      throw ElectionError("cannot tie the literals of variable " + std::to_string(v + 1) + ": forced difference " +
                          std::to_string(d) + " with " + std::to_string(f) + " free votes");
    }
    remaining[v] = (f - d) / 2;
  }

  BalancedVotes out;
  for (std::size_t t = 0; t < templates.size(); ++t) {
    const auto& tpl = templates[t];
    // pos_first[v]: how many of this template's votes get +v first.
    std::vector<std::int64_t> pos_first(n, -1);
    std::vector<std::int64_t> cuts{0, tpl.count};
    for (std::size_t v = 0; v < n; ++v) {
      const auto& [pos, neg] = where[t][v];
      if (!(pos.segment == neg.segment && sorted[t][pos.segment].unordered)) continue;
      pos_first[v] = std::min(remaining[v], tpl.count);
      remaining[v] -= pos_first[v];
      cuts.push_back(pos_first[v]);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const std::int64_t from = cuts[c], to = cuts[c + 1];
      auto segments = sorted[t];
      for (std::size_t v = 0; v < n; ++v) {
        if (pos_first[v] < 0 || from < pos_first[v]) continue;
        const auto& [pos, neg] = where[t][v];
        std::swap(segments[pos.segment].members[pos.index], segments[neg.segment].members[neg.index]);
      }
      Ballot b;
      for (const auto& seg : segments) b.insert(b.end(), seg.members.begin(), seg.members.end());
      out.groups.push_back({to - from, std::move(b)});
      out.clause_block.push_back(tpl.clause_block);
    }
  }
  return out;
}

namespace detail {

inline std::string literal_name(std::size_t v, bool positive) {
  return "x" + std::to_string(v) + (positive ? "+" : "-");
}

// Candidates of a SAT instance: p, then x1+ x1- x2+ ..., then k1..k|K|.
struct SatCandidates {
  CandidateId p = 0;
  std::vector<LiteralPair> literals;
  std::vector<CandidateId> clauses;
  std::vector<std::string> roster;
  std::vector<Role> roles;

  explicit SatCandidates(const CnfFormula& f) {
    roster.push_back("p");
    roles.push_back({RoleKind::Preferred, 0, true});
    for (std::size_t v = 1; v <= f.num_variables; ++v) {
      LiteralPair l;
      l.positive = roster.size();
      roster.push_back(literal_name(v, true));
      roles.push_back({RoleKind::Literal, v, true});
      l.negative = roster.size();
      roster.push_back(literal_name(v, false));
      roles.push_back({RoleKind::Literal, v, false});
      literals.push_back(l);
    }
    for (std::size_t j = 1; j <= f.clauses.size(); ++j) {
      clauses.push_back(roster.size());
      roster.push_back("k" + std::to_string(j));
      roles.push_back({RoleKind::Clause, j, true});
    }
  }

  CandidateId literal(Literal l) const {
    return l.positive ? literals[l.variable - 1].positive : literals[l.variable - 1].negative;
  }

  std::vector<CandidateId> all_literals() const {
    std::vector<CandidateId> out;
    for (const auto& l : literals) {
      out.push_back(l.positive);
      out.push_back(l.negative);
    }
    return out;
  }

  std::vector<CandidateId> literals_in(const CnfFormula& f, std::size_t clause) const {
    std::vector<CandidateId> out;
    for (const auto& l : f.clauses[clause]) out.push_back(literal(l));
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<CandidateId> literals_not_in(const CnfFormula& f, std::size_t clause) const {
    auto in = literals_in(f, clause);
    std::vector<CandidateId> out;
    for (CandidateId c : all_literals()) {
      if (!std::binary_search(in.begin(), in.end(), c)) out.push_back(c);
    }
    return out;
  }

  std::vector<CandidateId> clauses_except(std::size_t clause) const {
    std::vector<CandidateId> out;
    for (std::size_t j = 0; j < clauses.size(); ++j) {
      if (j != clause) out.push_back(clauses[j]);
    }
    return out;
  }
};

inline VoteSegment fixed(std::vector<CandidateId> members) { return {std::move(members), false}; }
inline VoteSegment fixed(CandidateId c) { return {{c}, false}; }
inline VoteSegment any_order(std::vector<CandidateId> members) { return {std::move(members), true}; }

inline void drop_empty(std::vector<VoteTemplate>& templates) {
  for (auto& t : templates) {
    std::erase_if(t.segments, [](const VoteSegment& s) { return s.members.empty(); });
  }
}

inline std::vector<VoteTemplate> plurality_templates(const CnfFormula& f, const SatCandidates& c) {
  const auto K = static_cast<std::int64_t>(f.clauses.size());
  const auto L = c.all_literals();
  std::vector<VoteTemplate> out;
  out.push_back({4 * K + 2, {fixed(c.p), any_order(L), any_order(c.clauses)}, false});
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    out.push_back({4 * K, {fixed(c.clauses[j]), any_order(c.clauses_except(j)), any_order(L), fixed(c.p)}, false});
  }
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    out.push_back({4,
                   {any_order(c.literals_in(f, j)), fixed(c.clauses[j]), any_order(c.literals_not_in(f, j)),
                    any_order(c.clauses_except(j)), fixed(c.p)},
                   true});
  }
  return out;
}

inline std::vector<VoteTemplate> borda_templates(const CnfFormula& f, const SatCandidates& c) {
  const auto K = static_cast<std::int64_t>(f.clauses.size());
  const auto M = static_cast<std::int64_t>(c.roster.size());
  const auto L = c.all_literals();
  const std::vector<CandidateId> up = c.clauses;
  const std::vector<CandidateId> down(up.rbegin(), up.rend());
  std::vector<VoteTemplate> out;
  for (std::size_t i = 0; i < up.size(); ++i) {
    std::vector<CandidateId> after(up.begin() + static_cast<std::ptrdiff_t>(i) + 1, up.end());
    std::vector<CandidateId> before(up.begin(), up.begin() + static_cast<std::ptrdiff_t>(i));
    out.push_back({4 * M,
                   {fixed(after), fixed(c.p), fixed(before), any_order(c.literals_in(f, i)), fixed(up[i]),
                    any_order(c.literals_not_in(f, i))},
                   true});
  }
  out.push_back({4 * M, {fixed(up), fixed(c.p), any_order(L)}, false});
  out.push_back({1, {fixed(up), any_order(L), fixed(c.p)}, false});
  out.push_back({1, {fixed(down), any_order(L), fixed(c.p)}, false});
  out.push_back({4 * K * M, {fixed(c.p), fixed(up), any_order(L)}, false});
  out.push_back({4 * K * M, {fixed(down), fixed(c.p), any_order(L)}, false});
  return out;
}

inline std::vector<VoteTemplate> maximin_templates(const CnfFormula& f, const SatCandidates& c) {
  const auto K = static_cast<std::int64_t>(f.clauses.size());
  const auto L = c.all_literals();
  const auto& C = c.clauses;
  std::vector<VoteTemplate> out;
  out.push_back({8 * K, {fixed(c.p), any_order(L), any_order(C)}, false});
  out.push_back({8 * K, {any_order(L), any_order(C), fixed(c.p)}, false});
  out.push_back({8 * K, {any_order(C), fixed(c.p), any_order(L)}, false});
  out.push_back({4 * K, {any_order(L), fixed(c.p), any_order(C)}, false});
  out.push_back({4 * K, {any_order(C), any_order(L), fixed(c.p)}, false});
  for (std::size_t j = 0; j < C.size(); ++j) {
    out.push_back({4,
                   {fixed(c.p), any_order(c.clauses_except(j)), any_order(c.literals_in(f, j)), fixed(C[j]),
                    any_order(c.literals_not_in(f, j))},
                   true});
  }
  out.push_back({2, {fixed(c.p), any_order(C), any_order(L)}, false});
  out.push_back({2, {any_order(C), fixed(c.p), any_order(L)}, false});

  // Clause candidates' mutual order is not free under Maximin: a clause losing
  // every contest with another clause has a worse minimum than the proof
  // assumes. Half of each block lists them ascending, half descending, which
  // ties every pair of clauses.
  std::vector<VoteTemplate> split;
  for (auto& t : out) {
    bool has_clause_set = false;
    for (const auto& seg : t.segments) {
      if (seg.unordered && seg.members.size() > 1 && std::binary_search(C.begin(), C.end(), seg.members.front())) {
        has_clause_set = true;
      }
    }
    if (!has_clause_set) {
      split.push_back(std::move(t));
      continue;
    }
    for (bool descending : {false, true}) {
      VoteTemplate half = t;
      half.count = t.count / 2;
      for (auto& seg : half.segments) {
        if (!seg.unordered || !std::binary_search(C.begin(), C.end(), seg.members.front())) continue;
        std::sort(seg.members.begin(), seg.members.end());
        if (descending) std::reverse(seg.members.begin(), seg.members.end());
        seg.unordered = false;
      }
      split.push_back(std::move(half));
    }
  }
  return split;
}

// New candidates appended below everyone else in every vote, in the given order.
inline Profile append_at_bottom(const Profile& profile, const std::vector<std::string>& names) {
  auto roster = profile.roster();
  roster.insert(roster.end(), names.begin(), names.end());
  std::vector<BallotGroup> groups = profile.groups();
  for (auto& g : groups) {
    for (std::size_t i = 0; i < names.size(); ++i) g.ballot.push_back(profile.num_candidates() + i);
  }
  return Profile(std::move(roster), std::move(groups));
}

}  // namespace detail

// The vote blocks encoding `f` for Plurality, Borda or Maximin, with each
// literal pair tied. No dummies or schedule yet.
inline ReductionOutput reduce_sat(Protocol protocol, const CnfFormula& f) {
  f.validate();
  if (f.num_variables == 0) throw ElectionError("formula has no variables");
  if (f.clauses.empty()) throw ElectionError("formula has no clauses");
  detail::SatCandidates c(f);
  std::vector<VoteTemplate> templates;
  switch (protocol) {
    case Protocol::Plurality: templates = detail::plurality_templates(f, c); break;
    case Protocol::Borda: templates = detail::borda_templates(f, c); break;
    case Protocol::Maximin: templates = detail::maximin_templates(f, c); break;
    case Protocol::Stv: throw ElectionError("no SAT reduction is available for STV");
  }
  detail::drop_empty(templates);
  auto balanced = balance_literal_ties(templates, c.literals);
  ReductionOutput r;
  r.profile = Profile(c.roster, std::move(balanced.groups));
  r.roles = c.roles;
  r.protocol = protocol;
  r.formula = f;
  r.clause_block = std::move(balanced.clause_block);
  const PairwiseTally tally(r.profile);
  for (std::size_t v = 0; v < c.literals.size(); ++v) {
    if (tally.margin(c.literals[v].positive, c.literals[v].negative) != 0) {
      throw ElectionError("literal balancing left variable " + std::to_string(v + 1) + " untied");
    }
  }
  return r;
}

// Adds one bottom-ranked dummy per non-literal original and the schedule
// pairing each literal with its complement and each other original with its dummy.
inline ReductionOutput build_dpre_instance(const ReductionOutput& r) {
  r.validate();
  std::vector<std::string> names;
  std::vector<CandidateId> shadowed;
  for (CandidateId c = 0; c < r.roles.size(); ++c) {
    const auto kind = r.roles[c].kind;
    if (kind == RoleKind::Dummy || kind == RoleKind::Padding) throw ElectionError("instance already has dummies");
    if (kind == RoleKind::Literal) continue;
    shadowed.push_back(c);
    names.push_back("d_" + r.profile.name(c));
  }
  ReductionOutput out = r;
  out.profile = detail::append_at_bottom(r.profile, names);
  for (std::size_t i = 0; i < names.size(); ++i) out.roles.push_back({RoleKind::Dummy, 0, true});
  Schedule s;
  for (const auto& l : r.literal_pairs()) s.pairs.emplace_back(l.positive, l.negative);
  for (std::size_t i = 0; i < shadowed.size(); ++i) s.pairs.emplace_back(shadowed[i], r.profile.num_candidates() + i);
  s.validate(out.profile.num_candidates());
  out.schedule = std::move(s);
  return out;
}

// The graph instance over c1..c2k and p.
inline ReductionOutput reduce_matching_r1(const BipartiteGraph& g) {
  const std::size_t k = g.k;
  if (k < 1) throw ElectionError("graph needs k >= 1");
  std::vector<std::string> roster;
  std::vector<Role> roles;
  for (std::size_t i = 1; i <= 2 * k; ++i) {
    roster.push_back("c" + std::to_string(i));
    roles.push_back({RoleKind::Vertex, i, true});
  }
  const CandidateId p = roster.size();
  roster.push_back("p");
  roles.push_back({RoleKind::Preferred, 0, true});
  auto c = [](std::size_t i) -> CandidateId { return i - 1; };
  auto range = [&](std::size_t from, std::size_t to) {  // inclusive, either direction
    std::vector<CandidateId> out;
    if (from <= to) {
      for (std::size_t i = from; i <= to; ++i) out.push_back(c(i));
    } else {
      for (std::size_t i = from; i >= to; --i) out.push_back(c(i));
    }
    return out;
  };
  auto concat = [](std::initializer_list<std::vector<CandidateId>> parts) {
    Ballot out;
    for (const auto& part : parts) out.insert(out.end(), part.begin(), part.end());
    return out;
  };
  const auto kk = static_cast<std::int64_t>(k);
  std::vector<BallotGroup> groups;
  groups.push_back({6 * kk * kk * kk, concat({range(k + 1, 2 * k), {p}, range(1, k)})});
  groups.push_back({3 * kk * kk, concat({{p}, range(k, 1), range(2 * k, k + 1)})});
  groups.push_back({6 * kk * kk * kk - 3 * kk * kk, concat({range(k, 1), range(2 * k, k + 1), {p}})});
  for (std::size_t i = 1; i <= k; ++i) {
    for (std::size_t j = k + 1; j <= 2 * k; ++j) {
      const bool edge = g.has_edge(i, j);
      const CandidateId top = edge ? c(i) : c(j), next = edge ? c(j) : c(i);
      std::vector<CandidateId> rest;
      for (std::size_t t = 1; t <= 2 * k; ++t) {
        if (t != i && t != j) rest.push_back(c(t));
      }
      groups.push_back({1, concat({{top, next, p}, rest})});
      groups.push_back({1, concat({std::vector<CandidateId>(rest.rbegin(), rest.rend()), {p, top, next}})});
    }
  }
  ReductionOutput r;
  r.profile = Profile(std::move(roster), std::move(groups));
  r.roles = std::move(roles);
  r.graph = g;
  return r;
}

// Raised when an augmented instance fails its own property checks. The
// instance and the reports are kept for inspection.
class AugmentationError : public ElectionError {
 public:
  AugmentationError(const std::string& what, ReductionOutput instance, std::vector<PropertyReport> reports)
      : ElectionError(what), instance_(std::move(instance)), reports_(std::move(reports)) {}

  const ReductionOutput& instance() const { return instance_; }
  const std::vector<PropertyReport>& reports() const { return reports_; }

 private:
  ReductionOutput instance_;
  std::vector<PropertyReport> reports_;
};

// Adds an auxiliary a<y> per Y-variable: just above the higher of its two
// literals in every vote outside the per-clause blocks, last elsewhere. The
// result must pass the 3a-3c checks (with `check` as verification options);
// their reports go to `passed_reports` when given.
inline ReductionOutput augment_for_ipre(const ReductionOutput& r, const VerifyOptions& check = {},
                                        std::vector<PropertyReport>* passed_reports = nullptr) {
  r.validate();
  if (!r.formula || !r.protocol) throw ElectionError("augmentation needs an instance built by reduce_sat");
  if (r.clause_block.size() != r.profile.groups().size()) {
    throw ElectionError("augmentation needs the block layout of a freshly built instance");
  }
  if (!r.with_role(RoleKind::Dummy).empty() || !r.with_role(RoleKind::Padding).empty()) {
    throw ElectionError("augment before adding dummies");
  }
  const std::size_t ny = r.formula->balanced_split();
  const auto literals = r.literal_pairs();
  const std::size_t m = r.profile.num_candidates();

  auto roster = r.profile.roster();
  ReductionOutput out = r;
  for (std::size_t y = 1; y <= ny; ++y) {
    roster.push_back("a" + std::to_string(y));
    out.roles.push_back({RoleKind::Aux, y, true});
  }
  std::vector<BallotGroup> groups;
  for (std::size_t g = 0; g < r.profile.groups().size(); ++g) {
    const auto& src = r.profile.groups()[g];
    Ballot b = src.ballot;
    for (std::size_t y = 1; y <= ny; ++y) {
      const CandidateId aux = m + y - 1;
      if (r.clause_block[g]) {
        b.push_back(aux);
        continue;
      }
      auto it = std::find_if(b.begin(), b.end(), [&](CandidateId c) {
        return c == literals[y - 1].positive || c == literals[y - 1].negative;
      });
      b.insert(it, aux);
    }
    groups.push_back({src.count, std::move(b)});
  }
  out.profile = Profile(std::move(roster), std::move(groups));
  auto reports = check_ipre_properties(out, *r.protocol, check);
  if (!all_passed(reports)) {
    std::string failed;
    for (const auto& rep : reports) {
      if (!rep.passed) failed += (failed.empty() ? "" : ", ") + rep.id;
    }
    throw AugmentationError("augmented " + std::string(to_string(*r.protocol)) + " instance fails " + failed, std::move(out),
                            std::move(reports));
  }
  if (passed_reports) *passed_reports = std::move(reports);
  return out;
}

// Adds dummies, padding and the seed: matchups 1..|X| hold the X literal
// pairs, then each non-literal, non-aux original meets its dummy, then
// padding pairs; the unscheduled matchup pairs hold the Y literals with pool
// {a<y>, d_a<y>}.
inline ReductionOutput build_ipre_instance(const ReductionOutput& r) {
  r.validate();
  if (!r.formula) throw ElectionError("interleaved instance needs the source formula");
  const std::size_t ny = r.formula->balanced_split();
  const auto literals = r.literal_pairs();
  if (r.with_role(RoleKind::Aux).size() != ny) throw ElectionError("partition mismatch: instance is not augmented");

  std::vector<std::string> names;
  std::vector<CandidateId> shadowed;
  for (CandidateId c = 0; c < r.roles.size(); ++c) {
    const auto kind = r.roles[c].kind;
    if (kind == RoleKind::Dummy || kind == RoleKind::Padding) throw ElectionError("instance already has dummies");
    if (kind == RoleKind::Literal) continue;
    shadowed.push_back(c);
    names.push_back("d_" + r.profile.name(c));
  }
  const std::size_t m0 = r.profile.num_candidates();
  std::size_t k = shadowed.size();  // |X| = |Y| literal pairs plus the non-aux originals
  std::size_t padding = 0;
  while (k % 4 != 0) {
    ++k;
    ++padding;
  }
  for (std::size_t i = 1; i <= 2 * padding; ++i) names.push_back("z" + std::to_string(i));

  ReductionOutput out = r;
  out.profile = detail::append_at_bottom(r.profile, names);
  for (std::size_t i = 0; i < shadowed.size(); ++i) out.roles.push_back({RoleKind::Dummy, 0, true});
  for (std::size_t i = 0; i < 2 * padding; ++i) out.roles.push_back({RoleKind::Padding, 0, true});
  auto dummy_of = [&](std::size_t i) -> CandidateId { return m0 + i; };

  IpreSeed seed;
  seed.k = k;
  for (std::size_t i = 1; i <= ny; ++i) {
    seed.first.push_back(literals[ny + i - 1].positive);
    seed.second.push_back(literals[ny + i - 1].negative);
  }
  std::vector<std::pair<CandidateId, CandidateId>> aux_pool;
  for (std::size_t i = 0; i < shadowed.size(); ++i) {
    if (r.roles[shadowed[i]].kind == RoleKind::Aux) {
      aux_pool.emplace_back(shadowed[i], dummy_of(i));
      continue;
    }
    seed.first.push_back(shadowed[i]);
    seed.second.push_back(dummy_of(i));
  }
  for (std::size_t i = 0; i < padding; ++i) {
    seed.first.push_back(dummy_of(shadowed.size() + 2 * i));
    seed.second.push_back(dummy_of(shadowed.size() + 2 * i + 1));
  }
  for (std::size_t y = 1; y <= ny; ++y) {
    seed.first.push_back(literals[y - 1].positive);
    seed.first.push_back(literals[y - 1].negative);
    auto aux = r.find(RoleKind::Aux, y);
    auto it = std::find_if(aux_pool.begin(), aux_pool.end(), [&](const auto& e) { return e.first == *aux; });
    seed.pool.push_back(*it);
  }
  seed.validate(out.profile.num_candidates());
  out.seed = std::move(seed);
  return out;
}

}  // namespace preround
