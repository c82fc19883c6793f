#include "trophy/oracle.hpp"

#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <utility>

#include "trophy/error.hpp"

namespace trophy {

PrecisionHierarchy::PrecisionHierarchy(const std::vector<int>& bits) {
  if (bits.empty()) {
    throw ConfigError("precision hierarchy needs at least one level");
  }
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (i > 0 && bits[i] <= bits[i - 1]) {
      throw ConfigError("precision hierarchy must be strictly increasing");
    }
    levels_.push_back(PrecisionLevel::from_bits(bits[i]));
  }
}

std::vector<int> PrecisionHierarchy::all_bits() const {
  std::vector<int> out;
  out.reserve(levels_.size());
  for (const PrecisionLevel& l : levels_) {
    out.push_back(l.bits);
  }
  return out;
}

EvalLedger::EvalLedger(std::vector<int> bits)
    : level_bits(std::move(bits)), f_calls(level_bits.size(), 0), g_calls(level_bits.size(), 0) {}

long long EvalLedger::total_f() const noexcept {
  return std::accumulate(f_calls.begin(), f_calls.end(), 0LL);
}

long long EvalLedger::total_g() const noexcept {
  return std::accumulate(g_calls.begin(), g_calls.end(), 0LL);
}

CostModel CostModel::linear_bits() { return CostModel{Kind::linear_bits, {}, std::nullopt}; }

CostModel CostModel::quadratic_bits() { return CostModel{Kind::quadratic_bits, {}, std::nullopt}; }

CostModel CostModel::paper_linear() {
  return CostModel{Kind::table, {{11, 0.25}, {24, 0.5}, {53, 1.0}}, std::nullopt};
}

CostModel CostModel::paper_quadratic() {
  return CostModel{Kind::table, {{11, 1.0 / 16.0}, {24, 0.25}, {53, 1.0}}, std::nullopt};
}

CostModel CostModel::by_name(const std::string& name) {
  if (name == "linear") return linear_bits();
  if (name == "quadratic") return quadratic_bits();
  if (name == "paper-linear") return paper_linear();
  if (name == "paper-quadratic") return paper_quadratic();
  throw UsageError("unknown cost model: " + name);
}

double CostModel::weight(int bits, int top_bits) const {
  const double ref = static_cast<double>(reference_bits.value_or(top_bits));
  switch (kind) {
    case Kind::linear_bits:
      return static_cast<double>(bits) / ref;
    case Kind::quadratic_bits: {
      const double r = static_cast<double>(bits) / ref;
      return r * r;
    }
    case Kind::table: {
      const auto it = table.find(bits);
      if (it == table.end()) {
        throw UsageError("cost table has no weight for " + std::to_string(bits) + " bits");
      }
      return it->second;
    }
  }
  return 1.0;
}

double adjusted_calls(const EvalLedger& ledger, const CostModel& model, bool include_gradients) {
  if (ledger.f_calls.size() != ledger.level_bits.size() ||
      ledger.g_calls.size() != ledger.level_bits.size()) {
    throw UsageError("ledger level counts do not match its hierarchy");
  }
  if (ledger.level_bits.empty()) {
    return 0.0;
  }
  const int top = ledger.level_bits.back();
  double total = 0.0;
  for (std::size_t p = 0; p < ledger.level_bits.size(); ++p) {
    double calls = static_cast<double>(ledger.f_calls[p]);
    if (include_gradients) {
      calls += static_cast<double>(ledger.g_calls[p]);
    }
    total += model.weight(ledger.level_bits[p], top) * calls;
  }
  return total;
}

long long display_calls(double adjusted) { return std::llround(adjusted); }

Oracle::Oracle(ProblemSpec problem, PrecisionHierarchy hierarchy)
    : problem_(std::move(problem)), hierarchy_(std::move(hierarchy)), ledger_(hierarchy_.all_bits()) {}

void Oracle::check(const Eigen::VectorXd& x, int level) const {
  if (level < 0 || level > hierarchy_.top()) {
    throw UsageError("precision level " + std::to_string(level) + " outside hierarchy");
  }
  if (x.size() != problem_.dim) {
    throw UsageError("problem " + problem_.name + " expects dimension " + std::to_string(problem_.dim) +
                     ", got " + std::to_string(x.size()));
  }
}

double Oracle::eval_f(const Eigen::VectorXd& x, int level) {
  check(x, level);
  ++ledger_.f_calls[static_cast<std::size_t>(level)];
  return eval_value(problem_.program, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
                    hierarchy_.bits(level));
}

Eigen::VectorXd Oracle::eval_grad(const Eigen::VectorXd& x, int level) {
  check(x, level);
  ++ledger_.g_calls[static_cast<std::size_t>(level)];
  const Evaluation e =
      evaluate(problem_, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
               hierarchy_.bits(level));
  return Eigen::Map<const Eigen::VectorXd>(e.g.data(), static_cast<Eigen::Index>(e.g.size()));
}

}  // namespace trophy
