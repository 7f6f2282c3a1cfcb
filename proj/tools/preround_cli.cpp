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

// preround: command-line front end.
//
// Exit codes: 0 success, 1 usage or input error, 2 failed property or
// unmet --expect.

#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "preround/preround.hpp"

namespace fs = std::filesystem;
using namespace preround;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kCheckFailed = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string protocol;
  std::string tiebreak;
  std::uint64_t rng_seed = 1;
  unsigned jobs = 1;
};

Protocol protocol_of(const Common& c) { return parse_protocol(c.protocol); }

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

TieBreakPolicy tiebreak_for(const Common& c, const Profile& profile) {
  const auto names = split_commas(c.tiebreak);
  return TieBreakPolicy::from_names(profile, names);
}

Profile load_profile(const std::string& path) { return parse_profile(read_text_file(path)); }

std::string ballot_names(const Profile& profile, const Ballot& b) { return format_ballot(profile, b); }

// ---- winner ---------------------------------------------------------------

struct WinnerArgs {
  Common common;
  std::string preround = "none";
  std::string schedule;
  std::string election;
};

int run_winner(const WinnerArgs& a) {
  const Profile profile = load_profile(a.election);
  const Protocol protocol = protocol_of(a.common);
  const TieBreakPolicy tb = tiebreak_for(a.common, profile);
  if (a.preround == "none") {
    std::cout << "winner " << profile.name(winner(protocol, profile, tb)) << '\n';
  } else if (a.preround == "dpre") {
    if (a.schedule.empty()) throw UsageError("--preround dpre needs --schedule FILE");
    const Schedule s = parse_schedule(read_text_file(a.schedule), profile);
    std::cout << "winner " << profile.name(dpre_winner(protocol, profile, s, tb)) << '\n';
  } else if (a.preround == "rpre") {
    const auto dist = rpre_win_distribution(protocol, profile, tb);
    for (CandidateId c = 0; c < dist.size(); ++c) std::cout << profile.name(c) << ' ' << to_string(dist[c]) << '\n';
  } else {
    throw UsageError("--preround must be none, dpre or rpre");
  }
  return kOk;
}

// ---- schedules ------------------------------------------------------------

struct SchedulesArgs {
  bool list = false;
  std::string election;
};

int run_schedules(const SchedulesArgs& a) {
  const Profile profile = load_profile(a.election);
  const std::size_t m = profile.num_candidates();
  std::cout << "count " << to_string(count_schedules(m)) << '\n';
  if (!a.list) return kOk;
  for (const auto& s : enumerate_schedules(m)) {
    std::string line;
    for (const auto& [x, y] : s.pairs) line += (line.empty() ? "" : "; ") + ("pair " + profile.name(x) + ' ' + profile.name(y));
    if (s.bye) line += (line.empty() ? "" : "; ") + ("bye " + profile.name(*s.bye));
    std::cout << line << '\n';
  }
  return kOk;
}

// ---- manipulate -----------------------------------------------------------

struct ManipulateArgs {
  Common common;
  std::string mode;
  std::string prefer;
  std::string threshold = "1";
  std::string schedule;
  std::string seed;
  std::string roles;
  std::string expect;
  std::string election;
};

int run_manipulate(const ManipulateArgs& a) {
  if (!a.expect.empty() && a.expect != "yes" && a.expect != "no") throw UsageError("--expect must be yes or no");
  const Profile profile = load_profile(a.election);
  const Protocol protocol = protocol_of(a.common);
  const TieBreakPolicy tb = tiebreak_for(a.common, profile);
  const CandidateId p = profile.id(a.prefer);
  const Rational threshold = parse_rational(a.threshold);
  SearchLimits limits;
  limits.jobs = a.common.jobs;

  ManipulationAnswer answer;
  if (a.mode == "plain") {
    answer = manipulate_plain(protocol, profile, p, tb, limits);
  } else if (a.mode == "dpre") {
    if (a.schedule.empty()) throw UsageError("--mode dpre needs --schedule FILE");
    const Schedule s = parse_schedule(read_text_file(a.schedule), profile);
    if (a.roles.empty()) {
      answer = manipulate_dpre(protocol, profile, p, s, tb, limits);
    } else {
      const auto roles = parse_roles(read_text_file(a.roles), profile);
      ReductionOutput r;
      r.profile = profile;
      r.roles = roles;
      const auto literals = r.literal_pairs();
      answer = manipulate_dpre_structured(protocol, profile, p, s, literals, tb);
    }
  } else if (a.mode == "rpre") {
    answer = manipulate_rpre(protocol, profile, p, threshold, tb, limits);
  } else if (a.mode == "ipre") {
    if (a.seed.empty()) throw UsageError("--mode ipre needs --seed FILE");
    const IpreSeed seed = parse_seed(read_text_file(a.seed), profile);
    answer = manipulate_ipre(protocol, profile, p, threshold, seed, tb, {}, limits);
  } else {
    throw UsageError("--mode must be plain, dpre, rpre or ipre");
  }

  std::cout << (answer.decision ? "yes" : "no") << ' ' << to_string(answer.best_probability);
  if (answer.witness) std::cout << " witness: " << ballot_names(profile, *answer.witness);
  std::cout << '\n';
  if (answer.plan) {
    for (const auto& [draws, bit] : answer.plan->answers) {
      std::cout << "draws=" << draws << " -> answer=" << (bit ? 1 : 0) << '\n';
    }
    for (const auto& [draws, ballot] : answer.plan->completions) {
      std::cout << "draws=" << draws << " -> ballot: " << ballot_names(profile, ballot) << '\n';
    }
  }
  if (!a.expect.empty() && (a.expect == "yes") != answer.decision) {
    std::cerr << "expected " << a.expect << '\n';
    return kCheckFailed;
  }
  return kOk;
}

// ---- reduce ---------------------------------------------------------------

struct ReduceArgs {
  Common common;
  std::string target = "dpre";
  std::string input;
  std::string out;
};

void print_counts(const ReductionOutput& r) {
  std::cout << "candidates: " << r.profile.num_candidates() << " votes: " << r.profile.num_votes() << '\n';
}

int run_reduce_sat(const ReduceArgs& a) {
  const Protocol protocol = protocol_of(a.common);
  const CnfFormula f = parse_dimacs(read_text_file(a.input));
  const ReductionOutput base = reduce_sat(protocol, f);
  if (a.target == "dpre") {
    const auto r = build_dpre_instance(base);
    write_reduction(a.out, r);
    print_counts(r);
    return kOk;
  }
  if (a.target != "ipre") throw UsageError("--target must be dpre or ipre");
  VerifyOptions check;
  check.rng_seed = a.common.rng_seed;
  try {
    const auto r = build_ipre_instance(augment_for_ipre(base, check));
    write_reduction(a.out, r);
    print_counts(r);
    return kOk;
  } catch (const AugmentationError& e) {
    const fs::path report = fs::path(a.out) / "report";
    write_report_dir(report, e.reports());
    std::cerr << "error: " << e.what() << "\nreport: " << (report / "report.txt").string() << '\n';
    return kInputError;
  }
}

int run_reduce_matching(const ReduceArgs& a) {
  const auto r = reduce_matching_r1(parse_graph(read_text_file(a.input)));
  write_reduction(a.out, r);
  print_counts(r);
  return kOk;
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
  Common common;
  std::string target;
  std::string mode = "auto";
  std::string graph;
  std::string report;
  std::string dir;
};

VerifyOptions verify_options(const VerifyArgs& a, const Profile& profile) {
  VerifyOptions opt;
  opt.rng_seed = a.common.rng_seed;
  if (a.mode == "exhaustive") {
    opt.exhaustive_limit = std::numeric_limits<std::size_t>::max();
  } else if (a.mode.rfind("sampled:", 0) == 0) {
    auto n = detail::parse_int64(std::string_view(a.mode).substr(8));
    if (!n || *n < 1) throw UsageError("--mode sampled:N needs a positive N");
    opt.force_sampling = true;
    opt.samples = static_cast<std::size_t>(*n);
  } else if (a.mode != "auto") {
    throw UsageError("--mode must be auto, exhaustive or sampled:N");
  }
  opt.tiebreak = tiebreak_for(a.common, profile);
  return opt;
}

int run_verify(const VerifyArgs& a) {
  ReductionOutput r = read_reduction(a.dir);
  if (!a.graph.empty()) r.graph = parse_graph(read_text_file(a.graph));
  const Protocol protocol = protocol_of(a.common);
  const VerifyOptions opt = verify_options(a, r.profile);

  std::vector<PropertyReport> reports;
  if (a.target == "dpre") {
    reports = check_dpre_properties(r, protocol, opt);
  } else if (a.target == "rpre") {
    reports = check_rpre_properties(r, protocol, opt);
    auto cross = cross_check_rpre(r, protocol, opt);
    reports.push_back(cross.report);
  } else if (a.target == "ipre") {
    reports = check_ipre_properties(r, protocol, opt);
    if (!r.seed) throw ElectionError("interleaved instance directory lacks " + std::string(files::kSeed));
    const Rational expected = stochastic_sat_value(*r.formula);
    const auto answer = manipulate_ipre(protocol, r.profile, r.preferred(), expected, *r.seed, *opt.tiebreak,
                                        CompletionPolicy::from_base(identity_ballot(r.profile.num_candidates())));
    PropertyReport game = PropertyReport::named("value");
    game.note = to_string(answer.best_probability) + " = stochastic SAT " + to_string(expected);
    game.passed = answer.best_probability == expected;
    reports.push_back(game);
  } else {
    throw UsageError("verify target must be dpre, rpre or ipre");
  }

  for (const auto& rep : reports) {
    if (rep.id == "rpre") {
      std::cout << rep.note << ' ' << (rep.passed ? "PASS" : "FAIL") << '\n';
    } else if (rep.id == "value") {
      std::cout << "value " << rep.note << ' ' << (rep.passed ? "PASS" : "FAIL") << '\n';
    } else {
      std::cout << rep.summary_line() << '\n';
    }
  }
  const bool ok = all_passed(reports);
  if (!ok || !a.report.empty()) {
    const fs::path dir = a.report.empty() ? fs::path(a.dir) / "report" : fs::path(a.report);
    write_report_dir(dir, reports);
    std::cout << "report: " << (dir / "report.txt").string() << '\n';
  }
  return ok ? kOk : kCheckFailed;
}

void add_common(CLI::App* cmd, Common& c, bool protocol_required) {
  auto* opt = cmd->add_option("--protocol", c.protocol, "plurality|borda|maximin|stv");
  if (protocol_required) opt->required();
  cmd->add_option("--tiebreak", c.tiebreak, "comma-separated names, highest priority first");
  cmd->add_option("--rng-seed", c.rng_seed, "seed for every sampled step");
  cmd->add_option("--jobs", c.jobs, "worker threads")->check(CLI::Range(1u, 256u));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Voting protocols with an elimination preround: winners, manipulation, reductions, checks"};
  app.require_subcommand(1);

  WinnerArgs winner_args;
  auto* winner_cmd = app.add_subcommand("winner", "winner (or rpre win probabilities) of an election");
  add_common(winner_cmd, winner_args.common, true);
  winner_cmd->add_option("--preround", winner_args.preround, "none|dpre|rpre");
  winner_cmd->add_option("--schedule", winner_args.schedule, "schedule file for dpre");
  winner_cmd->add_option("election", winner_args.election)->required();

  SchedulesArgs schedules_args;
  auto* schedules_cmd = app.add_subcommand("schedules", "count (and list) preround schedules");
  schedules_cmd->add_flag("--list", schedules_args.list, "print every schedule");
  schedules_cmd->add_option("election", schedules_args.election)->required();

  ManipulateArgs manip_args;
  auto* manip_cmd = app.add_subcommand("manipulate", "constructive manipulation by one voter");
  add_common(manip_cmd, manip_args.common, true);
  manip_cmd->add_option("--mode", manip_args.mode, "plain|dpre|rpre|ipre")->required();
  manip_cmd->add_option("--prefer", manip_args.prefer, "candidate to make win")->required();
  manip_cmd->add_option("--threshold", manip_args.threshold, "success probability N/D (default 1)");
  manip_cmd->add_option("--schedule", manip_args.schedule, "schedule file for dpre");
  manip_cmd->add_option("--roles", manip_args.roles, "role map: search assignments instead of ballots (dpre)");
  manip_cmd->add_option("--seed", manip_args.seed, "seed file for ipre");
  manip_cmd->add_option("--expect", manip_args.expect, "yes|no: exit 2 on a different verdict");
  manip_cmd->add_option("election", manip_args.election)->required();

  ReduceArgs reduce_args;
  auto* reduce_cmd = app.add_subcommand("reduce", "build election instances from formulas and graphs");
  reduce_cmd->require_subcommand(1);
  auto* sat_cmd = reduce_cmd->add_subcommand("sat", "CNF formula to election");
  add_common(sat_cmd, reduce_args.common, true);
  sat_cmd->add_option("--target", reduce_args.target, "dpre|ipre");
  sat_cmd->add_option("formula", reduce_args.input, "DIMACS file")->required();
  sat_cmd->add_option("-o,--out", reduce_args.out, "output directory")->required();
  auto* matching_cmd = reduce_cmd->add_subcommand("matching", "bipartite graph to election");
  matching_cmd->add_option("graph", reduce_args.input, "graph file")->required();
  matching_cmd->add_option("-o,--out", reduce_args.out, "output directory")->required();

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "check a reduction output's properties");
  add_common(verify_cmd, verify_args.common, true);
  verify_cmd->add_option("target", verify_args.target, "dpre|rpre|ipre")->required();
  verify_cmd->add_option("dir", verify_args.dir, "reduce output directory")->required();
  verify_cmd->add_option("--mode", verify_args.mode, "auto|exhaustive|sampled:N");
  verify_cmd->add_option("--graph", verify_args.graph, "graph file (rpre; default: the one in DIR)");
  verify_cmd->add_option("--report", verify_args.report, "report directory (default: DIR/report on failure)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*winner_cmd) return run_winner(winner_args);
    if (*schedules_cmd) return run_schedules(schedules_args);
    if (*manip_cmd) return run_manipulate(manip_args);
    if (*sat_cmd) return run_reduce_sat(reduce_args);
    if (*matching_cmd) return run_reduce_matching(reduce_args);
    if (*verify_cmd) return run_verify(verify_args);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
