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

// Inputs and outputs of the hardness reductions: CNF formulas (DIMACS, with
// an optional "c xy-split <n>" line), bipartite graphs, candidate role maps
// and the on-disk layout of a reduction directory.

#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "preround/election.hpp"
#include "preround/ipre.hpp"
#include "preround/manipulation.hpp"
#include "preround/schedule.hpp"

namespace preround {

struct Literal {
  std::size_t variable = 0;  // 1-based
  bool positive = true;

  bool operator==(const Literal&) const = default;
};

using Clause = std::vector<Literal>;

// Variables are 1..num_variables. With a partition, variables 1..y_count are
// nature's (Y) and the rest are the manipulator's (X).
struct CnfFormula {
  std::size_t num_variables = 0;
  std::vector<Clause> clauses;
  std::optional<std::size_t> y_count;

  void validate() const {
    for (std::size_t k = 0; k < clauses.size(); ++k) {
      const auto& cl = clauses[k];
      const std::string where = "clause " + std::to_string(k + 1);
      if (cl.empty()) throw ElectionError(where + " is empty");
      for (std::size_t i = 0; i < cl.size(); ++i) {
        if (cl[i].variable == 0 || cl[i].variable > num_variables) {
          throw ElectionError(where + " uses undeclared variable " + std::to_string(cl[i].variable));
        }
        for (std::size_t j = i + 1; j < cl.size(); ++j) {
          if (cl[i].variable != cl[j].variable) continue;
          if (cl[i].positive == cl[j].positive) throw ElectionError(where + " repeats a literal");
          throw ElectionError(where + " is tautological (contains x" + std::to_string(cl[i].variable) + " and its negation)");
        }
      }
    }
    if (y_count && *y_count > num_variables) throw ElectionError("xy-split exceeds the number of variables");
  }

  bool contains(std::size_t clause, Literal l) const {
    const auto& cl = clauses.at(clause);
    return std::find(cl.begin(), cl.end(), l) != cl.end();
  }

  // assignment[v - 1] is the value of variable v.
  bool satisfied_by(const std::vector<bool>& assignment) const {
    for (const auto& cl : clauses) {
      bool sat = false;
      for (const auto& l : cl) sat = sat || assignment.at(l.variable - 1) == l.positive;
      if (!sat) return false;
    }
    return true;
  }

  // Requires a partition with |X| = |Y|; returns |Y|.
  std::size_t balanced_split() const {
    if (!y_count) throw ElectionError("formula has no X/Y partition (expected a 'c xy-split <n>' line)");
    if (2 * *y_count != num_variables) {
      throw ElectionError("partition mismatch: |Y| = " + std::to_string(*y_count) + " but |X| = " +
                          std::to_string(num_variables - *y_count));
    }
    return *y_count;
  }

  bool operator==(const CnfFormula&) const = default;
};

inline CnfFormula parse_dimacs(std::string_view text) {
  CnfFormula f;
  bool have_header = false;
  std::size_t declared_clauses = 0;
  Clause current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = detail::trim(text.substr(pos, end - pos));
    pos = end + 1;
    const bool last = end == text.size();
    auto tok = detail::split_ws(line);
    if (tok.empty() || tok[0] == "%") {
      if (last) break;
      continue;
    }
    if (tok[0] == "c") {
      if (tok.size() == 3 && tok[1] == "xy-split") {
        auto n = detail::parse_int64(tok[2]);
        if (!n || *n < 0) throw ParseError(line_no, "malformed xy-split");
        f.y_count = static_cast<std::size_t>(*n);
      }
    } else if (tok[0] == "p") {
      if (have_header) throw ParseError(line_no, "duplicate problem line");
      auto v = tok.size() == 4 ? detail::parse_int64(tok[2]) : std::nullopt;
      auto c = tok.size() == 4 ? detail::parse_int64(tok[3]) : std::nullopt;
      if (tok.size() != 4 || tok[1] != "cnf" || !v || !c || *v < 0 || *c < 0) {
        throw ParseError(line_no, "expected 'p cnf <variables> <clauses>'");
      }
      f.num_variables = static_cast<std::size_t>(*v);
      declared_clauses = static_cast<std::size_t>(*c);
      have_header = true;
    } else {
      if (!have_header) throw ParseError(line_no, "clause before 'p cnf' line");
      for (auto t : tok) {
        auto lit = detail::parse_int64(t);
        if (!lit) throw ParseError(line_no, "malformed literal '" + std::string(t) + "'");
        if (*lit == 0) {
          if (current.empty()) throw ParseError(line_no, "empty clause");
          f.clauses.push_back(std::move(current));
          current.clear();
          try {
            CnfFormula one{f.num_variables, {f.clauses.back()}, std::nullopt};
            one.validate();
          } catch (const ElectionError& e) {
            throw ParseError(line_no, e.what());
          }
          continue;
        }
        const auto var = static_cast<std::size_t>(*lit < 0 ? -*lit : *lit);
        if (var > f.num_variables) throw ParseError(line_no, "variable " + std::to_string(var) + " out of range");
        current.push_back({var, *lit > 0});
      }
    }
    if (last) break;
  }
  if (!have_header) throw ParseError(line_no, "missing 'p cnf' line");
  if (!current.empty()) throw ParseError(line_no, "last clause is not terminated by 0");
  if (f.clauses.size() != declared_clauses) {
    throw ParseError(line_no, "header declares " + std::to_string(declared_clauses) + " clauses, found " +
                                  std::to_string(f.clauses.size()));
  }
  f.validate();
  return f;
}

inline std::string write_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  if (f.y_count) out << "c xy-split " << *f.y_count << '\n';
  out << "p cnf " << f.num_variables << ' ' << f.clauses.size() << '\n';
  for (const auto& cl : f.clauses) {
    for (const auto& l : cl) out << (l.positive ? "" : "-") << l.variable << ' ';
    out << "0\n";
  }
  return out.str();
}

// Vertices 1..k on the left, k+1..2k on the right; edges (i, j) with i <= k < j.
struct BipartiteGraph {
  std::size_t k = 0;
  std::set<std::pair<std::size_t, std::size_t>> edges;

  bool has_edge(std::size_t i, std::size_t j) const { return edges.count({i, j}) > 0; }

  void add_edge(std::size_t i, std::size_t j) {
    if (i < 1 || i > k || j <= k || j > 2 * k) {
      throw ElectionError("edge (" + std::to_string(i) + ", " + std::to_string(j) + ") outside 1..k x k+1..2k");
    }
    if (!edges.emplace(i, j).second) {
      throw ElectionError("duplicate edge (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
  }

  bool operator==(const BipartiteGraph&) const = default;
};

// "k <int>" followed by one "i j" edge per line; '#' comments.
inline BipartiteGraph parse_graph(std::string_view text) {
  BipartiteGraph g;
  bool have_k = false;
  detail::for_each_content_line(text, [&](std::size_t line_no, std::string_view line) {
    auto tok = detail::split_ws(line);
    if (!have_k) {
      auto k = tok.size() == 2 && tok[0] == "k" ? detail::parse_int64(tok[1]) : std::nullopt;
      if (!k || *k < 1) throw ParseError(line_no, "expected 'k <positive int>'");
      g.k = static_cast<std::size_t>(*k);
      have_k = true;
      return;
    }
    auto i = tok.size() == 2 ? detail::parse_int64(tok[0]) : std::nullopt;
    auto j = tok.size() == 2 ? detail::parse_int64(tok[1]) : std::nullopt;
    if (!i || !j || *i < 0 || *j < 0) throw ParseError(line_no, "expected an edge 'i j'");
    try {
      g.add_edge(static_cast<std::size_t>(*i), static_cast<std::size_t>(*j));
    } catch (const ElectionError& e) {
      throw ParseError(line_no, e.what());
    }
  });
  if (!have_k) throw ParseError(1, "missing 'k <int>' line");
  return g;
}

inline std::string write_graph(const BipartiteGraph& g) {
  std::ostringstream out;
  out << "k " << g.k << '\n';
  for (const auto& [i, j] : g.edges) out << i << ' ' << j << '\n';
  return out.str();
}

enum class RoleKind { Preferred, Literal, Clause, Aux, Dummy, Padding, Vertex };

// What a candidate stands for in a constructed election. `index` is the
// 1-based variable (Literal, Aux), clause (Clause) or vertex (Vertex).
struct Role {
  RoleKind kind = RoleKind::Dummy;
  std::size_t index = 0;
  bool positive = true;

  std::string to_string() const {
    switch (kind) {
      case RoleKind::Preferred: return "p";
      case RoleKind::Literal: return std::string("lit") + (positive ? "+" : "-") + std::to_string(index);
      case RoleKind::Clause: return "clause" + std::to_string(index);
      case RoleKind::Aux: return "aux" + std::to_string(index);
      case RoleKind::Dummy: return "dummy";
      case RoleKind::Padding: return "padding";
      case RoleKind::Vertex: return "vertex" + std::to_string(index);
    }
    return "?";
  }

  static Role parse(std::string_view text) {
    auto number = [&](std::string_view digits) {
      auto v = detail::parse_int64(digits);
      if (!v || *v < 1) throw ElectionError("malformed role '" + std::string(text) + "'");
      return static_cast<std::size_t>(*v);
    };
    if (text == "p") return {RoleKind::Preferred, 0, true};
    if (text == "dummy") return {RoleKind::Dummy, 0, true};
    if (text == "padding") return {RoleKind::Padding, 0, true};
    if (text.starts_with("lit+")) return {RoleKind::Literal, number(text.substr(4)), true};
    if (text.starts_with("lit-")) return {RoleKind::Literal, number(text.substr(4)), false};
    if (text.starts_with("clause")) return {RoleKind::Clause, number(text.substr(6)), true};
    if (text.starts_with("aux")) return {RoleKind::Aux, number(text.substr(3)), true};
    if (text.starts_with("vertex")) return {RoleKind::Vertex, number(text.substr(6)), true};
    throw ElectionError("unknown role '" + std::string(text) + "'");
  }

  bool is_original() const { return kind != RoleKind::Dummy && kind != RoleKind::Padding; }

  bool operator==(const Role&) const = default;
};

// A constructed election together with what it encodes.
struct ReductionOutput {
  Profile profile;
  std::vector<Role> roles;  // one per candidate
  std::optional<Protocol> protocol;
  std::optional<CnfFormula> formula;
  std::optional<BipartiteGraph> graph;
  std::optional<Schedule> schedule;  // fixed-preround instances
  std::optional<IpreSeed> seed;  // interleaved-preround instances
  // Per profile group: true if the group comes from a per-clause block whose
  // literal order is prescribed. Only known in memory, right after construction.
  std::vector<bool> clause_block;

  std::optional<CandidateId> find(RoleKind kind, std::size_t index = 0, bool positive = true) const {
    for (CandidateId c = 0; c < roles.size(); ++c) {
      const auto& r = roles[c];
      if (r.kind == kind && r.index == index && (kind != RoleKind::Literal || r.positive == positive)) return c;
    }
    return std::nullopt;
  }

  CandidateId preferred() const {
    auto p = find(RoleKind::Preferred);
    if (!p) throw ElectionError("role map has no preferred candidate");
    return *p;
  }

  std::vector<CandidateId> with_role(RoleKind kind) const {
    std::vector<CandidateId> out;
    for (CandidateId c = 0; c < roles.size(); ++c) {
      if (roles[c].kind == kind) out.push_back(c);
    }
    return out;
  }

  // Entry v-1 holds the literal candidates of variable v.
  std::vector<LiteralPair> literal_pairs() const {
    std::size_t n = 0;
    for (const auto& r : roles) {
      if (r.kind == RoleKind::Literal) n = std::max(n, r.index);
    }
    std::vector<LiteralPair> out(n);
    std::vector<int> seen(n, 0);
    for (CandidateId c = 0; c < roles.size(); ++c) {
      const auto& r = roles[c];
      if (r.kind != RoleKind::Literal) continue;
      (r.positive ? out[r.index - 1].positive : out[r.index - 1].negative) = c;
      seen[r.index - 1] |= r.positive ? 1 : 2;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (seen[v] != 3) throw ElectionError("variable " + std::to_string(v + 1) + " lacks a complementary literal pair");
    }
    return out;
  }

  CandidateSet originals() const {
    CandidateSet out(roles.size());
    for (CandidateId c = 0; c < roles.size(); ++c) {
      if (roles[c].is_original()) out.insert(c);
    }
    return out;
  }

  void validate() const {
    if (roles.size() != profile.num_candidates()) throw ElectionError("role map is not total");
    if (with_role(RoleKind::Preferred).size() != 1) throw ElectionError("role map needs exactly one preferred candidate");
    literal_pairs();
  }
};

inline std::string serialize_roles(const std::vector<Role>& roles, const Profile& profile) {
  std::ostringstream out;
  for (CandidateId c = 0; c < roles.size(); ++c) out << roles[c].to_string() << ": " << profile.name(c) << '\n';
  return out.str();
}

inline std::vector<Role> parse_roles(std::string_view text, const Profile& profile) {
  std::vector<std::optional<Role>> roles(profile.num_candidates());
  detail::for_each_content_line(text, [&](std::size_t line_no, std::string_view line) {
    auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "expected '<role>: <candidate>'");
    auto name = detail::trim(line.substr(colon + 1));
    auto c = profile.find(name);
    if (!c) throw ParseError(line_no, "unknown candidate '" + std::string(name) + "'");
    if (roles[*c]) throw ParseError(line_no, "candidate '" + std::string(name) + "' has two roles");
    try {
      roles[*c] = Role::parse(detail::trim(line.substr(0, colon)));
    } catch (const ElectionError& e) {
      throw ParseError(line_no, e.what());
    }
  });
  std::vector<Role> out;
  for (CandidateId c = 0; c < roles.size(); ++c) {
    if (!roles[c]) throw ElectionError("role map omits candidate '" + profile.name(c) + "'");
    out.push_back(*roles[c]);
  }
  return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ElectionError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ElectionError("cannot write " + path.string());
  out << text;
  if (!out) throw ElectionError("error writing " + path.string());
}

namespace files {
inline constexpr const char* kElection = "election.vote";
inline constexpr const char* kRoles = "roles.map";
inline constexpr const char* kSchedule = "schedule.sched";
inline constexpr const char* kSeed = "seed.ipre";
inline constexpr const char* kFormula = "formula.cnf";
inline constexpr const char* kGraph = "graph.bg";
}  // namespace files

inline void write_reduction(const std::filesystem::path& dir, const ReductionOutput& r) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / files::kElection, serialize_profile(r.profile));
  write_text_file(dir / files::kRoles, serialize_roles(r.roles, r.profile));
  if (r.schedule) write_text_file(dir / files::kSchedule, serialize_schedule(*r.schedule, r.profile));
  if (r.seed) write_text_file(dir / files::kSeed, serialize_seed(*r.seed, r.profile));
  if (r.formula) write_text_file(dir / files::kFormula, write_dimacs(*r.formula));
  if (r.graph) write_text_file(dir / files::kGraph, write_graph(*r.graph));
}

inline ReductionOutput read_reduction(const std::filesystem::path& dir) {
  ReductionOutput r;
  r.profile = parse_profile(read_text_file(dir / files::kElection));
  r.roles = parse_roles(read_text_file(dir / files::kRoles), r.profile);
  if (std::filesystem::exists(dir / files::kSchedule)) {
    r.schedule = parse_schedule(read_text_file(dir / files::kSchedule), r.profile);
  }
  if (std::filesystem::exists(dir / files::kSeed)) r.seed = parse_seed(read_text_file(dir / files::kSeed), r.profile);
  if (std::filesystem::exists(dir / files::kFormula)) r.formula = parse_dimacs(read_text_file(dir / files::kFormula));
  if (std::filesystem::exists(dir / files::kGraph)) r.graph = parse_graph(read_text_file(dir / files::kGraph));
  return r;
}

}  // namespace preround
