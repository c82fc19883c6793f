#include "trophy/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <thread>

#include "trophy/error.hpp"

namespace trophy {

namespace {

struct Preset {
  const char* name;
  SolverAlgorithm algorithm;
  std::vector<int> bits;
};

const std::vector<Preset>& presets() {
  static const std::vector<Preset> p = {
      {"tr-double", SolverAlgorithm::trust_region, {53}},
      {"tr-single", SolverAlgorithm::trust_region, {24}},
      {"tr-half", SolverAlgorithm::trust_region, {11}},
      {"trophy-sd", SolverAlgorithm::trophy, {24, 53}},
      {"trophy-hsd", SolverAlgorithm::trophy, {11, 24, 53}},
      {"trophy-ladder", SolverAlgorithm::trophy, {8, 11, 17, 24, 53}},
      {"trophy-every5", SolverAlgorithm::trophy, {8, 13, 18, 23, 28, 33, 38, 43, 48, 53}},
  };
  return p;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

SolverDefinition solver_preset(const std::string& name) {
  for (const Preset& p : presets()) {
    if (name == p.name) {
      SolverDefinition def;
      def.name = p.name;
      def.algorithm = p.algorithm;
      def.config.hierarchy = PrecisionHierarchy(p.bits);
      return def;
    }
  }
  throw UsageError("unknown solver preset: " + name);
}

std::vector<std::string> solver_preset_names() {
  std::vector<std::string> names;
  for (const Preset& p : presets()) {
    names.emplace_back(p.name);
  }
  return names;
}

std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::adjusted_calls:
      return "adjusted_calls";
    case Metric::iterations:
      return "iterations";
    case Metric::gnorm_final:
      return "gnorm_final";
  }
  return "unknown";
}

std::string metric_label(const MetricSpec& spec) {
  std::string label(to_string(spec.metric));
  if (spec.metric == Metric::adjusted_calls) {
    label += '_';
    for (char c : kCostModelNames[spec.cost_model]) {
      label += c == '-' ? '_' : c;
    }
  }
  return label;
}

double metric_value(const RunRecord& record, const MetricSpec& spec) {
  if (!record.solved()) {
    return kInf;
  }
  double v = kInf;
  switch (spec.metric) {
    case Metric::adjusted_calls:
      v = record.adjusted_calls.at(spec.cost_model);
      break;
    case Metric::iterations:
      v = static_cast<double>(record.iterations);
      break;
    case Metric::gnorm_final:
      v = record.gnorm_final;
      break;
  }
  if (std::isnan(v)) {
    return kInf;
  }
  return std::max(v, std::numeric_limits<double>::min());
}

RatioTable performance_ratios(const std::vector<RunRecord>& records, const MetricSpec& spec) {
  RatioTable table;
  std::map<std::string, std::map<std::string, double>> values;
  for (const RunRecord& r : records) {
    if (std::find(table.solvers.begin(), table.solvers.end(), r.solver) == table.solvers.end()) {
      table.solvers.push_back(r.solver);
    }
    values[r.problem][r.solver] = metric_value(r, spec);
  }
  for (const auto& [problem, by_solver] : values) {
    table.problems.push_back(problem);
    std::vector<double> row(table.solvers.size(), kInf);
    for (std::size_t j = 0; j < table.solvers.size(); ++j) {
      if (const auto it = by_solver.find(table.solvers[j]); it != by_solver.end()) {
        row[j] = it->second;
      }
    }
    const double best = *std::min_element(row.begin(), row.end());
    for (double& v : row) {
      v = std::isinf(best) ? kInf : v / best;
    }
    table.ratios.push_back(std::move(row));
  }
  return table;
}

std::vector<ProfileCurve> performance_profile(const RatioTable& table, const std::vector<double>& tau_grid) {
  if (table.problems.empty() || table.solvers.empty()) {
    throw UsageError("performance profile needs at least one problem and one solver");
  }
  if (tau_grid.empty() || tau_grid.front() != 1.0) {
    throw UsageError("tau grid must start at 1");
  }
  for (std::size_t i = 1; i < tau_grid.size(); ++i) {
    if (!(tau_grid[i] > tau_grid[i - 1])) {
      throw UsageError("tau grid must be strictly increasing");
    }
  }
  const double n = static_cast<double>(table.problems.size());
  std::vector<ProfileCurve> curves;
  for (std::size_t j = 0; j < table.solvers.size(); ++j) {
    ProfileCurve c{table.solvers[j], tau_grid, std::vector<double>(tau_grid.size(), 0.0)};
    for (std::size_t t = 0; t < tau_grid.size(); ++t) {
      long count = 0;
      for (const auto& row : table.ratios) {
        count += row[j] <= tau_grid[t] ? 1 : 0;
      }
      c.h[t] = static_cast<double>(count) / n;
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

std::vector<double> default_tau_grid() {
  constexpr int kPoints = 200;
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    grid[static_cast<std::size_t>(i)] = std::exp2(10.0 * i / (kPoints - 1));
  }
  grid.front() = 1.0;
  grid.back() = 1024.0;
  return grid;
}

RunRecord run_one(const ProblemSpec& problem, const SolverDefinition& solver, int reference_bits,
                  SolveResult* full_result, const IterationObserver& observer) {
  RunRecord rec;
  rec.problem = problem.name;
  rec.solver = solver.name;
  rec.ledger = EvalLedger(solver.config.hierarchy.all_bits());
  try {
    SolverConfig config = solver.config;
    config.x0 = Eigen::Map<const Eigen::VectorXd>(problem.initial_point.data(),
                                                  static_cast<Eigen::Index>(problem.initial_point.size()));
    Oracle oracle(problem, config.hierarchy);
    SolveResult result = solver.algorithm == SolverAlgorithm::trophy
                              ? solve(config, oracle, observer)
                              : solve_fixed_precision(config, oracle, observer);
    rec.status = result.status;
    rec.iterations = result.iterations;
    rec.f_final = result.f_final;
    rec.gnorm_final = result.gnorm_final;
    rec.ledger = result.ledger;
    if (full_result != nullptr) {
      *full_result = std::move(result);
    }
  } catch (const std::exception&) {
    rec.status = SolveStatus::eval_failure;
  }

  for (std::string_view name : kCostModelNames) {
    CostModel model = CostModel::by_name(std::string(name));
    if (reference_bits > 0) {
      model.reference_bits = reference_bits;
    }
    try {
      rec.adjusted_calls.push_back(adjusted_calls(rec.ledger, model));
    } catch (const UsageError&) {
      rec.adjusted_calls.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return rec;
}

std::vector<RunRecord> run_grid(const std::vector<ProblemSpec>& problems,
                                const std::vector<SolverDefinition>& solvers, int parallelism, int reference_bits) {
  const std::size_t cells = problems.size() * solvers.size();
  std::vector<RunRecord> records(cells);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < cells; c = next++) {
      records[c] = run_one(problems[c / solvers.size()], solvers[c % solvers.size()], reference_bits);
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(parallelism, 1)), 1,
                                                      std::max<std::size_t>(cells, 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (std::thread& t : pool) {
    t.join();
  }

  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return a.problem != b.problem ? a.problem < b.problem : a.solver < b.solver;
  });
  return records;
}

}  // namespace trophy
