// Copyright 2026 The duration-solver Authors.
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

#include "duration/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "duration/asymptotic.hpp"
#include "duration/exact_solver.hpp"
#include "duration/simulator.hpp"

namespace duration {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Round-trip precision for machine consumption.
std::string Full(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Six decimals, the precision of the reference table.  printf rounds the
// exact binary value to nearest, ties to even.
std::string Fixed6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

struct FormatFlags {
  bool json = false;
  bool csv = false;

  void add_to(CLI::App* cmd) {
    auto* j = cmd->add_flag("--json", json, "JSON output (default)");
    auto* c = cmd->add_flag("--csv", csv, "CSV output");
    j->excludes(c);
  }
};

const std::vector<int> kDefaultHorizons = {10, 20,  30,  40,  50,  60,  70,
                                             80, 90, 100, 200, 500, 1000};

Horizon MakeHorizon(int n) {
  if (n < 2) throw UsageError("n must be >= 2, got " + std::to_string(n));
  return Horizon(n);
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  int n = 0;
  std::string table_out;
  FormatFlags format;
};

void WriteStateTable(const SolveResult& result, const Horizon& horizon,
                     std::ostream& os) {
  const PayoffTable phi = payoff_table(horizon);
  const PolicyThresholds& th = result.thresholds();
  os << "k,phi1,phi2,continuation,stop1,stop2\n";
  for (int k = 1; k <= horizon.n(); ++k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    const double phi2 = k >= 2 ? phi.second[idx] : 0.0;
    os << k << ',' << Full(phi.best[idx]) << ',' << Full(phi2) << ','
       << Full(result.continuation(k)) << ',' << (th.stops(k, 1) ? 1 : 0) << ','
       << (k >= 2 && th.stops(k, 2) ? 1 : 0) << '\n';
  }
}

int RunSolve(const SolveArgs& args, std::ostream& out) {
  const Horizon horizon = MakeHorizon(args.n);
  const SolveResult result = solve(horizon);
  const PolicyThresholds& th = result.thresholds();
  if (args.format.csv) {
    out << "n,k1,k2,value\n"
        << horizon.n() << ',' << th.k1 << ',' << th.k2 << ','
        << Full(result.value()) << '\n';
  } else {
    Json j;
    j["n"] = horizon.n();
    j["k1"] = th.k1;
    j["k2"] = th.k2;
    j["value"] = result.value();
    out << j.dump() << '\n';
  }
  if (!args.table_out.empty()) {
    if (args.table_out == "-") {
      WriteStateTable(result, horizon, out);
    } else {
      std::ofstream file(args.table_out, std::ios::binary);
      if (!file) throw UsageError("cannot open " + args.table_out);
      WriteStateTable(result, horizon, file);
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct TableArgs {
  std::vector<int> ns = kDefaultHorizons;
  FormatFlags format;
};

int RunTable(const TableArgs& args, std::ostream& out) {
  std::vector<std::pair<Horizon, SolveResult>> rows;
  for (int n : args.ns) {
    Horizon h = MakeHorizon(n);
    rows.emplace_back(h, solve(h));
  }
  const AsymptoticSolution limit = solve_asymptotic();
  if (args.format.json) {
    Json j = Json::array();
    for (const auto& [h, r] : rows) {
      j.push_back({{"n", h.n()},
                   {"k1", r.thresholds().k1},
                   {"k2", r.thresholds().k2},
                   {"value", r.value()}});
    }
    j.push_back({{"n", "inf"}, {"a", limit.a}, {"b", limit.b}, {"value", limit.value}});
    out << j.dump() << '\n';
    return kExitOk;
  }
  out << "N,k1,k2,v_N\n";
  for (const auto& [h, r] : rows) {
    out << h.n() << ',' << r.thresholds().k1 << ',' << r.thresholds().k2 << ','
        << Fixed6(r.value()) << '\n';
  }
  out << "inf," << Fixed6(limit.a) << ',' << Fixed6(limit.b) << ','
      << Fixed6(limit.value) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  int n = 0;
  std::optional<int> k1;
  std::optional<int> k2;
  std::int64_t trials = 100000;
  std::uint64_t seed = 0;
  int threads = 0;
  FormatFlags format;
};

int RunSimulate(const SimulateArgs& args, std::ostream& out) {
  const Horizon horizon = MakeHorizon(args.n);
  if (args.trials < 1) throw UsageError("--trials must be >= 1");
  PolicyThresholds policy = solve(horizon).thresholds();
  if (args.k1) policy.k1 = *args.k1;
  if (args.k2) policy.k2 = *args.k2;
  try {
    validate(policy, horizon);
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  const McEstimate est =
      monte_carlo(horizon, policy, args.trials, args.seed, args.threads);
  const double exact = policy_value(policy, horizon);
  std::optional<double> z;
  if (est.std_error > 0.0) {
    z = (est.mean - exact) / est.std_error;
  } else if (est.mean == exact) {
    z = 0.0;
  }

  if (args.format.csv) {
    out << "n,k1,k2,trials,seed,mean,std_error,exact,z_score\n"
        << horizon.n() << ',' << policy.k1 << ',' << policy.k2 << ','
        << est.trials << ',' << est.seed << ',' << Full(est.mean) << ','
        << Full(est.std_error) << ',' << Full(exact) << ','
        << (z ? Full(*z) : std::string("nan")) << '\n';
    return kExitOk;
  }
  Json j;
  j["n"] = horizon.n();
  j["k1"] = policy.k1;
  j["k2"] = policy.k2;
  j["trials"] = est.trials;
  j["seed"] = est.seed;
  j["mean"] = est.mean;
  j["std_error"] = est.std_error;
  j["exact"] = exact;
  j["z_score"] = z ? Json(*z) : Json(nullptr);
  out << j.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct PmfArgs {
  int n = 0;
  int i = 0;
  int rank = 0;
  FormatFlags format;
};

int RunPmf(const PmfArgs& args, std::ostream& out) {
  const Horizon horizon = MakeHorizon(args.n);
  if (args.i < 1 || args.i > args.n || args.rank < 1 || args.rank > 2 ||
      args.rank > args.i) {
    throw UsageError("need 1 <= i <= n and rank in {1, 2} with rank <= i");
  }
  const DurationPmf pmf = duration_pmf(args.i, args.rank, horizon);
  if (args.format.csv) {
    out << "k,probability\n";
    for (int k = pmf.first_end_time(); k <= args.n; ++k) {
      out << k << ',' << Full(pmf.at(k)) << '\n';
    }
    out << "survive," << Full(pmf.survival()) << '\n';
    return kExitOk;
  }
  Json j;
  j["n"] = args.n;
  j["i"] = args.i;
  j["rank"] = args.rank;
  Json mass = Json::array();
  for (int k = pmf.first_end_time(); k <= args.n; ++k) {
    mass.push_back({{"k", k}, {"probability", pmf.at(k)}});
  }
  j["mass"] = std::move(mass);
  j["survive"] = pmf.survival();
  j["mean_duration"] = pmf.mean_duration();
  out << j.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct AsymptoticArgs {
  std::optional<int> fine_n;
  FormatFlags format;
};

int RunAsymptotic(const AsymptoticArgs& args, std::ostream& out) {
  const AsymptoticSolution sol = solve_asymptotic();
  std::optional<SolveResult> fine;
  std::optional<Horizon> horizon;
  if (args.fine_n) {
    horizon = MakeHorizon(*args.fine_n);
    fine = solve(*horizon);
  }
  if (args.format.csv) {
    out << "a,b,value,residual_b,residual_a";
    if (fine) out << ",k1_over_n,k2_over_n,v_n";
    out << '\n'
        << Full(sol.a) << ',' << Full(sol.b) << ',' << Full(sol.value) << ','
        << Full(sol.residual_b) << ',' << Full(sol.residual_a);
    if (fine) {
      const double n = horizon->n();
      out << ',' << Full(fine->thresholds().k1 / n) << ','
          << Full(fine->thresholds().k2 / n) << ',' << Full(fine->value());
    }
    out << '\n';
    return kExitOk;
  }
  Json j;
  j["a"] = sol.a;
  j["b"] = sol.b;
  j["value"] = sol.value;
  j["residual_b"] = sol.residual_b;
  j["residual_a"] = sol.residual_a;
  if (fine) {
    const double n = horizon->n();
    j["n"] = horizon->n();
    j["k1_over_n"] = fine->thresholds().k1 / n;
    j["k2_over_n"] = fine->thresholds().k2 / n;
    j["v_n"] = fine->value();
  }
  out << j.dump() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Exact solver, simulator and asymptotics for the duration "
               "problem with relatively best or second-best candidates",
               "duration_solver"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Optimal thresholds and value");
  solve_cmd->add_option("--n,n", solve_args.n, "Number of items")->required();
  solve_cmd->add_option("--table-out", solve_args.table_out,
                        "Write the per-time state table as CSV ('-' = stdout)");
  solve_args.format.add_to(solve_cmd);

  TableArgs table_args;
  auto* table_cmd =
      app.add_subcommand("table", "Thresholds and values for a list of N");
  table_cmd->add_option("--ns", table_args.ns, "Comma-separated horizons")
      ->delimiter(',');
  table_args.format.add_to(table_cmd);

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo policy value");
  sim_cmd->add_option("--n,n", sim_args.n, "Number of items")->required();
  sim_cmd->add_option("--k1", sim_args.k1, "Rank-1 threshold (default: optimal)");
  sim_cmd->add_option("--k2", sim_args.k2, "Rank-2 threshold (default: optimal)");
  sim_cmd->add_option("--trials", sim_args.trials, "Number of trials");
  sim_cmd->add_option("--seed", sim_args.seed, "Random seed");
  sim_cmd->add_option("--threads", sim_args.threads,
                      "Worker threads (0 = DURATION_SOLVER_THREADS or all)");
  sim_args.format.add_to(sim_cmd);

  PmfArgs pmf_args;
  auto* pmf_cmd = app.add_subcommand("pmf", "Distribution of the candidacy end time");
  pmf_cmd->add_option("--n,n", pmf_args.n, "Number of items")->required();
  pmf_cmd->add_option("--i", pmf_args.i, "Selection time")->required();
  pmf_cmd->add_option("--rank", pmf_args.rank, "Relative rank at selection (1 or 2)")
      ->required();
  pmf_args.format.add_to(pmf_cmd);

  AsymptoticArgs asym_args;
  auto* asym_cmd = app.add_subcommand("asymptotic", "Limits as N grows");
  asym_cmd->add_option("--fine-n", asym_args.fine_n,
                       "Also solve this finite N for comparison");
  asym_args.format.add_to(asym_cmd);

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("duration_solver");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "duration_solver: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return RunSolve(solve_args, out);
    if (*table_cmd) return RunTable(table_args, out);
    if (*sim_cmd) return RunSimulate(sim_args, out);
    if (*pmf_cmd) return RunPmf(pmf_args, out);
    if (*asym_cmd) return RunAsymptotic(asym_args, out);
  } catch (const UsageError& e) {
    err << "duration_solver: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericFailure& e) {
    err << "duration_solver: numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::domain_error& e) {
    err << "duration_solver: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace duration
