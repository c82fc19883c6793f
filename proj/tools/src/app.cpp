#include "trophy_cli/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "trophy/benchmark.hpp"
#include "trophy/csv.hpp"
#include "trophy/error.hpp"
#include "trophy_cli/manifest.hpp"

namespace trophy::cli {

namespace {

constexpr int kExitIo = 74;

struct SolveOptions {
  std::string problem;
  std::string bits = "24,53";
  double tol = 1e-5;
  int max_iter = 5000;
  double delta0 = 1.0;
  double omega = 0.9;
  int memory = 10;
  std::string cost_model = "linear";
  std::string out_dir = ".";
};

struct BenchOptions {
  std::string manifest;
  std::optional<int> jobs;
  std::optional<std::string> cost_model;
  std::optional<std::string> out_dir;
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::vector<int> parse_bits(const std::string& text) {
  std::vector<int> bits;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int b = 0;
    try {
      b = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw UsageError("--bits: '" + item + "' is not an integer");
    }
    if (used != item.size()) {
      throw UsageError("--bits: '" + item + "' is not an integer");
    }
    bits.push_back(b);
  }
  return bits;
}

int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::first_order:
      return kExitSolved;
    case SolveStatus::radius_underflow:
    case SolveStatus::max_iter:
      return kExitNotConverged;
    case SolveStatus::eval_failure:
      return kExitEvalFailure;
  }
  return kExitEvalFailure;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  }
}

int cmd_solve(const SolveOptions& o, std::ostream& out) {
  const ProblemSpec problem = find_problem(o.problem);
  const CostModel cost = CostModel::by_name(o.cost_model);

  SolverConfig config;
  config.hierarchy = PrecisionHierarchy(parse_bits(o.bits));
  config.eps_tol = o.tol;
  config.max_iter = o.max_iter;
  config.delta0 = o.delta0;
  config.omega = o.omega;
  config.lsr1_memory = o.memory;
  config.x0 = Eigen::Map<const Eigen::VectorXd>(problem.initial_point.data(), problem.dim);
  config.validate();

  Oracle oracle(problem, config.hierarchy);
  SolveResult result;
  try {
    result = solve(config, oracle);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    out << "evaluation failed: " << e.what() << '\n';
    return kExitEvalFailure;
  }

  std::ostringstream history;
  csv::write_history(history, result.history);
  std::ostringstream ledger;
  csv::write_ledger_header(ledger);
  csv::write_ledger_rows(ledger, problem.name, "trophy", result.ledger);
  const std::filesystem::path dir(o.out_dir);
  ensure_dir(dir);
  csv::write_atomic(dir / "history.csv", history.str());
  csv::write_atomic(dir / "ledger.csv", ledger.str());

  out << "problem     " << problem.name << " (n=" << problem.dim << ")\n";
  out << "hierarchy   " << o.bits << '\n';
  out << "status      " << to_string(result.status) << '\n';
  out << "iterations  " << result.iterations << '\n';
  out << "f           " << fmt("%.10e", result.f_final) << '\n';
  out << "|g|         " << fmt("%.6e", result.gnorm_final) << '\n';
  double adjusted = std::nan("");
  try {
    adjusted = adjusted_calls(result.ledger, cost);
  } catch (const UsageError&) {
  }
  out << "adjusted    " << (std::isnan(adjusted) ? std::string("n/a") : fmt("%.2f", adjusted)) << " ("
      << o.cost_model << ")\n";
  for (std::size_t p = 0; p < result.ledger.level_bits.size(); ++p) {
    out << "level " << result.ledger.level_bits[p] << "    f=" << result.ledger.f_calls[p]
        << " g=" << result.ledger.g_calls[p] << '\n';
  }
  return exit_code(result.status);
}

double median(std::vector<double> v) {
  if (v.empty()) {
    return std::nan("");
  }
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

int cmd_bench(const BenchOptions& o, std::ostream& out) {
  RunManifest manifest = load_manifest(o.manifest);
  if (o.jobs) {
    manifest.jobs = std::max(*o.jobs, 1);
  }
  if (o.cost_model) {
    (void)CostModel::by_name(*o.cost_model);
    manifest.cost_model = *o.cost_model;
  }
  if (o.out_dir) {
    manifest.out_dir = *o.out_dir;
  }

  const std::vector<ProblemSpec> problems = manifest.resolve_suite();
  int reference_bits = 0;
  for (const SolverDefinition& s : manifest.solvers) {
    reference_bits = std::max(reference_bits, s.config.hierarchy.bits(s.config.hierarchy.top()));
  }
  const std::vector<RunRecord> records = run_grid(problems, manifest.solvers, manifest.jobs, reference_bits);

  const auto model_index = static_cast<std::size_t>(
      std::find(std::begin(kCostModelNames), std::end(kCostModelNames), manifest.cost_model) -
      std::begin(kCostModelNames));

  std::ostringstream runs;
  csv::write_runs(runs, records);
  std::ostringstream ledger;
  csv::write_ledger_header(ledger);
  for (const RunRecord& r : records) {
    csv::write_ledger_rows(ledger, r.problem, r.solver, r.ledger);
  }
  std::ostringstream profiles;
  csv::write_profiles_header(profiles);
  const std::vector<double> tau = default_tau_grid();
  for (const MetricSpec spec : {MetricSpec{Metric::adjusted_calls, model_index}, MetricSpec{Metric::iterations, 0},
                                MetricSpec{Metric::gnorm_final, 0}}) {
    csv::write_profile_rows(profiles, metric_label(spec), performance_profile(performance_ratios(records, spec), tau));
  }

  const std::filesystem::path dir(manifest.out_dir);
  ensure_dir(dir);
  csv::write_atomic(dir / "runs.csv", runs.str());
  csv::write_atomic(dir / "profiles.csv", profiles.str());
  csv::write_atomic(dir / "ledger.csv", ledger.str());

  std::size_t width = 6;
  for (const SolverDefinition& s : manifest.solvers) {
    width = std::max(width, s.name.size());
  }
  out << std::string(width - 6, ' ') << "solver  solved  median adjusted (" << manifest.cost_model << ")\n";
  for (const SolverDefinition& s : manifest.solvers) {
    long solved = 0;
    std::vector<double> adjusted;
    for (const RunRecord& r : records) {
      if (r.solver == s.name && r.solved()) {
        ++solved;
        if (!std::isnan(r.adjusted_calls[model_index])) {
          adjusted.push_back(r.adjusted_calls[model_index]);
        }
      }
    }
    const double med = median(adjusted);
    char line[256];
    std::snprintf(line, sizeof(line), "%*s  %3ld/%-3zu  %s\n", static_cast<int>(width), s.name.c_str(), solved,
                  problems.size(), std::isnan(med) ? "n/a" : fmt("%.2f", med).c_str());
    out << line;
  }
  out << "wrote " << (dir / "runs.csv").string() << ", profiles.csv, ledger.csv\n";
  return kExitSolved;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixed-precision trust-region solver and benchmark harness", "trophy"};
  app.require_subcommand(1);

  SolveOptions so;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one suite problem and write history.csv and ledger.csv");
  solve_cmd->add_option("--problem", so.problem, "Suite problem name")->required();
  solve_cmd->add_option("--bits", so.bits, "Comma-separated significand widths, increasing")->capture_default_str();
  solve_cmd->add_option("--tol", so.tol, "Gradient-norm tolerance")->capture_default_str();
  solve_cmd->add_option("--max-iter", so.max_iter, "Iteration limit")->capture_default_str();
  solve_cmd->add_option("--delta0", so.delta0, "Initial trust-region radius")->capture_default_str();
  solve_cmd->add_option("--omega", so.omega, "Exponent of the precision test")->capture_default_str();
  solve_cmd->add_option("--memory", so.memory, "L-SR1 memory")->capture_default_str();
  solve_cmd->add_option("--cost-model", so.cost_model, "Cost model for the adjusted-call summary")
      ->check(CLI::IsMember({"linear", "quadratic", "paper-linear", "paper-quadratic"}))
      ->capture_default_str();
  solve_cmd->add_option("--out-dir", so.out_dir, "Directory for the CSV outputs")->capture_default_str();

  BenchOptions bo;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run a solver x problem grid described by a manifest");
  bench_cmd->add_option("manifest", bo.manifest, "Manifest file")->required();
  bench_cmd->add_option("--jobs", bo.jobs, "Concurrent solves (overrides the manifest)");
  bench_cmd->add_option("--cost-model", bo.cost_model, "Cost model for profiles and summary")
      ->check(CLI::IsMember({"linear", "quadratic", "paper-linear", "paper-quadratic"}));
  bench_cmd->add_option("--out-dir", bo.out_dir, "Output directory (overrides the manifest)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*solve_cmd) {
      return cmd_solve(so, out);
    }
    return cmd_bench(bo, out);
  } catch (const ManifestError& e) {
    err << "manifest error: " << e.what() << '\n';
    return kExitManifest;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n" << (*solve_cmd ? solve_cmd->help() : bench_cmd->help());
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace trophy::cli
