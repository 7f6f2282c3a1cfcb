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

// Candidate rosters, ballots, multiplicity-grouped profiles, pairwise tallies
// and the line-oriented election file format.
//
//   # comment
//   candidates: a b c
//   2: a b c
//   1: c b a
//
// Candidates are addressed by name at the file boundary and by dense index
// (0..m-1, roster order) everywhere else.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace preround {

using CandidateId = std::size_t;

// Best first; a permutation of the roster.
using Ballot = std::vector<CandidateId>;

class ElectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ElectionError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ElectionError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline bool is_valid_candidate_name(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char ch) {
    return (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '_' ||
           ch == '+' || ch == ':' || ch == '-';
  });
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Calls fn(line_number, content) for every non-blank, non-comment line.
template <typename Fn>
void for_each_content_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = trim(text.substr(pos, end - pos));
    if (!line.empty() && line.front() != '#') fn(line_no, line);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

inline std::optional<std::int64_t> parse_int64(std::string_view s) {
  if (s.empty()) return std::nullopt;
  bool neg = false;
  if (s.front() == '-') {
    neg = true;
    s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
  }
  std::int64_t v = 0;
  for (char ch : s) {
    if (ch < '0' || ch > '9') return std::nullopt;
    if (v > (INT64_MAX - (ch - '0')) / 10) return std::nullopt;
    v = v * 10 + (ch - '0');
  }
  return neg ? -v : v;
}

}  // namespace detail

// A set of candidate ids drawn from a roster of fixed size.
class CandidateSet {
 public:
  CandidateSet() = default;
  explicit CandidateSet(std::size_t universe, bool full = false) : bits_(universe, full) {}

  static CandidateSet of(std::size_t universe, std::span<const CandidateId> members) {
    CandidateSet out(universe);
    for (CandidateId c : members) out.insert(c);
    return out;
  }

  std::size_t universe() const { return bits_.size(); }
  bool contains(CandidateId c) const { return c < bits_.size() && bits_[c]; }
  void insert(CandidateId c) {
    if (c >= bits_.size()) throw ElectionError("candidate id " + std::to_string(c) + " outside roster");
    bits_[c] = true;
  }
  void erase(CandidateId c) {
    if (c < bits_.size()) bits_[c] = false;
  }
  std::size_t size() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true)); }
  bool empty() const { return size() == 0; }

  std::vector<CandidateId> members() const {
    std::vector<CandidateId> out;
    for (CandidateId c = 0; c < bits_.size(); ++c) {
      if (bits_[c]) out.push_back(c);
    }
    return out;
  }

  bool operator==(const CandidateSet&) const = default;

  struct Hash {
    std::size_t operator()(const CandidateSet& s) const { return std::hash<std::vector<bool>>{}(s.bits_); }
  };

 private:
  std::vector<bool> bits_;
};

struct BallotGroup {
  std::int64_t count = 0;
  Ballot ballot;

  bool operator==(const BallotGroup&) const = default;
};

// The nonmanipulators' votes: a roster plus (multiplicity, ballot) groups.
// Groups keep insertion order; identical ballots are never merged.
class Profile {
 public:
  Profile() = default;

  Profile(std::vector<std::string> roster, std::vector<BallotGroup> groups)
      : roster_(std::move(roster)), groups_(std::move(groups)) {
    if (roster_.empty()) throw ElectionError("empty candidate roster");
    for (std::size_t i = 0; i < roster_.size(); ++i) {
      if (!is_valid_candidate_name(roster_[i])) throw ElectionError("invalid candidate name '" + roster_[i] + "'");
      if (!index_.emplace(roster_[i], i).second) throw ElectionError("duplicate candidate name '" + roster_[i] + "'");
    }
    for (const auto& g : groups_) {
      if (g.count <= 0) throw ElectionError("non-positive multiplicity " + std::to_string(g.count));
      check_ballot(g.ballot);
      total_ += g.count;
    }
    if (total_ < 1) throw ElectionError("profile has no votes");
  }

  const std::vector<std::string>& roster() const { return roster_; }
  const std::vector<BallotGroup>& groups() const { return groups_; }
  std::size_t num_candidates() const { return roster_.size(); }
  std::int64_t num_votes() const { return total_; }

  const std::string& name(CandidateId c) const { return roster_.at(c); }

  std::optional<CandidateId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  CandidateId id(std::string_view name) const {
    auto c = find(name);
    if (!c) throw ElectionError("unknown candidate '" + std::string(name) + "'");
    return *c;
  }

  // Throws unless `b` is a permutation of the roster.
  void check_ballot(const Ballot& b) const {
    if (b.size() != roster_.size()) {
      throw ElectionError("ballot lists " + std::to_string(b.size()) + " of " + std::to_string(roster_.size()) +
                          " candidates");
    }
    std::vector<bool> seen(roster_.size(), false);
    for (CandidateId c : b) {
      if (c >= roster_.size()) throw ElectionError("ballot names unknown candidate id " + std::to_string(c));
      if (seen[c]) throw ElectionError("ballot repeats candidate '" + roster_[c] + "'");
      seen[c] = true;
    }
  }

  Profile with_ballot(const Ballot& b, std::int64_t count = 1) const {
    auto groups = groups_;
    groups.push_back({count, b});
    return Profile(roster_, std::move(groups));
  }

  bool operator==(const Profile& other) const { return roster_ == other.roster_ && groups_ == other.groups_; }

 private:
  std::vector<std::string> roster_;
  std::vector<BallotGroup> groups_;
  std::unordered_map<std::string, CandidateId> index_;
  std::int64_t total_ = 0;
};

inline Ballot parse_ballot_names(const Profile& profile, std::span<const std::string_view> names) {
  Ballot b;
  b.reserve(names.size());
  for (auto n : names) b.push_back(profile.id(n));
  profile.check_ballot(b);
  return b;
}

inline std::string format_ballot(const Profile& profile, const Ballot& b) {
  std::string out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (i) out += ' ';
    out += profile.name(b[i]);
  }
  return out;
}

inline Profile parse_profile(std::string_view text) {
  std::vector<std::string> roster;
  std::unordered_map<std::string, CandidateId> index;
  std::vector<BallotGroup> groups;
  bool have_header = false;

  detail::for_each_content_line(text, [&](std::size_t line_no, std::string_view line) {
    if (!have_header) {
      constexpr std::string_view kHeader = "candidates:";
      if (line.substr(0, kHeader.size()) != kHeader) throw ParseError(line_no, "missing 'candidates:' header");
      for (auto tok : detail::split_ws(line.substr(kHeader.size()))) {
        std::string name(tok);
        if (!is_valid_candidate_name(name)) throw ParseError(line_no, "invalid candidate name '" + name + "'");
        if (!index.emplace(name, roster.size()).second) {
          throw ParseError(line_no, "duplicate candidate name '" + name + "'");
        }
        roster.push_back(std::move(name));
      }
      if (roster.empty()) throw ParseError(line_no, "empty candidate list");
      have_header = true;
      return;
    }
    auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "expected '<multiplicity>: <ballot>'");
    auto count = detail::parse_int64(detail::trim(line.substr(0, colon)));
    if (!count) throw ParseError(line_no, "malformed multiplicity");
    if (*count <= 0) throw ParseError(line_no, "non-positive multiplicity " + std::to_string(*count));
    Ballot ballot;
    std::vector<bool> seen(roster.size(), false);
    for (auto tok : detail::split_ws(line.substr(colon + 1))) {
      auto it = index.find(std::string(tok));
      if (it == index.end()) throw ParseError(line_no, "unknown candidate '" + std::string(tok) + "'");
      if (seen[it->second]) throw ParseError(line_no, "candidate '" + std::string(tok) + "' repeated");
      seen[it->second] = true;
      ballot.push_back(it->second);
    }
    for (CandidateId c = 0; c < roster.size(); ++c) {
      if (!seen[c]) throw ParseError(line_no, "ballot omits candidate '" + roster[c] + "'");
    }
    groups.push_back({*count, std::move(ballot)});
  });

  if (!have_header) throw ParseError(1, "missing 'candidates:' header");
  if (groups.empty()) throw ElectionError("profile has no votes");
  return Profile(std::move(roster), std::move(groups));
}

inline std::string serialize_profile(const Profile& profile) {
  std::ostringstream out;
  out << "candidates:";
  for (const auto& n : profile.roster()) out << ' ' << n;
  out << '\n';
  for (const auto& g : profile.groups()) out << g.count << ": " << format_ballot(profile, g.ballot) << '\n';
  return out.str();
}

// above(a, b) = number of votes ranking a over b.
class PairwiseTally {
 public:
  PairwiseTally() = default;
  explicit PairwiseTally(std::size_t m) : m_(m), above_(m * m, 0) {}

  explicit PairwiseTally(const Profile& profile) : PairwiseTally(profile.num_candidates()) {
    for (const auto& g : profile.groups()) add(g.ballot, g.count);
  }

  // Ballots over a subset of the roster are allowed; absent candidates are untouched.
  void add(std::span<const CandidateId> ballot, std::int64_t count = 1) {
    for (std::size_t i = 0; i < ballot.size(); ++i) {
      for (std::size_t j = i + 1; j < ballot.size(); ++j) above_[ballot[i] * m_ + ballot[j]] += count;
    }
    total_ += count;
  }

  std::int64_t operator()(CandidateId a, CandidateId b) const { return above_[a * m_ + b]; }
  std::int64_t margin(CandidateId a, CandidateId b) const { return (*this)(a, b) - (*this)(b, a); }
  std::size_t size() const { return m_; }
  std::int64_t total() const { return total_; }

 private:
  std::size_t m_ = 0;
  std::vector<std::int64_t> above_;
  std::int64_t total_ = 0;
};

inline PairwiseTally pairwise_tally(const Profile& profile) {
  return PairwiseTally(profile);
}

// Keeps only the survivors in every ballot. The result's roster lists the
// survivors in ascending original id, so new id i maps to survivors.members()[i].
inline Profile restrict_profile(const Profile& profile, const CandidateSet& survivors) {
  if (survivors.universe() != profile.num_candidates()) throw ElectionError("survivor set sized for another roster");
  auto kept = survivors.members();
  if (kept.empty()) throw ElectionError("empty survivor set");
  std::vector<CandidateId> remap(profile.num_candidates(), SIZE_MAX);
  std::vector<std::string> roster;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    remap[kept[i]] = i;
    roster.push_back(profile.name(kept[i]));
  }
  std::vector<BallotGroup> groups;
  groups.reserve(profile.groups().size());
  for (const auto& g : profile.groups()) {
    Ballot b;
    b.reserve(kept.size());
    for (CandidateId c : g.ballot) {
      if (remap[c] != SIZE_MAX) b.push_back(remap[c]);
    }
    groups.push_back({g.count, std::move(b)});
  }
  return Profile(std::move(roster), std::move(groups));
}

}  // namespace preround
