#include <cmath>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "counting.hpp"
#include "trophy/error.hpp"
#include "trophy/oracle.hpp"

namespace {

using trophy::CostModel;
using trophy::EvalLedger;
using trophy::Oracle;
using trophy::PrecisionHierarchy;

EvalLedger ledger_with(std::vector<int> bits, std::vector<long long> f, std::vector<long long> g = {}) {
  EvalLedger l(std::move(bits));
  l.f_calls = std::move(f);
  if (!g.empty()) {
    l.g_calls = std::move(g);
  }
  return l;
}

TEST(PrecisionHierarchy, ValidatesLevels) {
  EXPECT_THROW(PrecisionHierarchy(std::vector<int>{}), trophy::ConfigError);
  EXPECT_THROW(PrecisionHierarchy({24, 24}), trophy::ConfigError);
  EXPECT_THROW(PrecisionHierarchy({53, 24}), trophy::ConfigError);
  EXPECT_THROW(PrecisionHierarchy({0, 24}), trophy::ConfigError);
  EXPECT_THROW(PrecisionHierarchy({24, 64}), trophy::ConfigError);
  const PrecisionHierarchy h({11, 24, 53});
  EXPECT_EQ(h.size(), 3);
  EXPECT_EQ(h.top(), 2);
  EXPECT_EQ(h.bits(0), 11);
  EXPECT_EQ(h.levels()[1].label, "single");
  EXPECT_EQ(h.all_bits(), (std::vector<int>{11, 24, 53}));
}

TEST(AdjustedCalls, PublishedHalfSingleDoubleCounts) {
  const EvalLedger l = ledger_with({11, 24, 53}, {465, 1898, 6});
  EXPECT_DOUBLE_EQ(trophy::adjusted_calls(l, CostModel::paper_linear()), 1071.25);
  EXPECT_EQ(trophy::display_calls(trophy::adjusted_calls(l, CostModel::paper_linear())), 1071);
  EXPECT_EQ(trophy::display_calls(trophy::adjusted_calls(l, CostModel::paper_quadratic())), 510);
}

TEST(AdjustedCalls, PublishedSingleOnlyCounts) {
  const EvalLedger l = ledger_with({24}, {3411});
  EXPECT_DOUBLE_EQ(trophy::adjusted_calls(l, CostModel::paper_linear()), 1705.5);
  EXPECT_EQ(trophy::display_calls(trophy::adjusted_calls(l, CostModel::paper_linear())), 1706);
  EXPECT_EQ(trophy::display_calls(trophy::adjusted_calls(l, CostModel::paper_quadratic())), 853);
}

TEST(AdjustedCalls, PublishedDoubleOnlyCounts) {
  const EvalLedger l = ledger_with({53}, {1877});
  for (const CostModel& m : {CostModel::paper_linear(), CostModel::paper_quadratic(), CostModel::linear_bits(),
                             CostModel::quadratic_bits()}) {
    EXPECT_EQ(trophy::adjusted_calls(l, m), 1877.0);
  }
}

TEST(AdjustedCalls, BitRatioWeights) {
  const EvalLedger l = ledger_with({11, 24, 53}, {1, 1, 1});
  EXPECT_EQ(CostModel::linear_bits().weight(11, 53), 11.0 / 53.0);
  EXPECT_EQ(CostModel::linear_bits().weight(24, 53), 24.0 / 53.0);
  EXPECT_EQ(CostModel::linear_bits().weight(53, 53), 1.0);
  EXPECT_DOUBLE_EQ(trophy::adjusted_calls(l, CostModel::linear_bits()), (11.0 + 24.0 + 53.0) / 53.0);
  EXPECT_DOUBLE_EQ(trophy::adjusted_calls(l, CostModel::quadratic_bits()),
                   (121.0 + 576.0 + 2809.0) / 2809.0);
}

TEST(AdjustedCalls, ReferenceWidthOverridesTheLedgerTop) {
  const EvalLedger l = ledger_with({24}, {10});
  CostModel m = CostModel::linear_bits();
  EXPECT_EQ(trophy::adjusted_calls(l, m), 10.0);
  m.reference_bits = 53;
  EXPECT_DOUBLE_EQ(trophy::adjusted_calls(l, m), 240.0 / 53.0);
}

TEST(AdjustedCalls, SingleLevelIsTheRawCountUnderEveryModel) {
  for (int bits : {11, 24, 53}) {
    const EvalLedger l = ledger_with({bits}, {37});
    EXPECT_EQ(trophy::adjusted_calls(l, CostModel::linear_bits()), 37.0);
    EXPECT_EQ(trophy::adjusted_calls(l, CostModel::quadratic_bits()), 37.0);
  }
}

TEST(AdjustedCalls, GradientsCountOnlyOnRequest) {
  const EvalLedger l = ledger_with({24, 53}, {4, 2}, {3, 1});
  const CostModel m = CostModel::paper_linear();
  EXPECT_EQ(trophy::adjusted_calls(l, m), 4.0);
  EXPECT_EQ(trophy::adjusted_calls(l, m, true), 4.0 + 2.5);
}

TEST(AdjustedCalls, TableWithoutAnEntryIsAUsageError) {
  const EvalLedger l = ledger_with({8, 53}, {1, 1});
  EXPECT_THROW(trophy::adjusted_calls(l, CostModel::paper_linear()), trophy::UsageError);
  EXPECT_THROW(CostModel::by_name("cubic"), trophy::UsageError);
}

TEST(DisplayCalls, RoundsHalfAwayFromZero) {
  EXPECT_EQ(trophy::display_calls(1705.5), 1706);
  EXPECT_EQ(trophy::display_calls(1071.25), 1071);
  EXPECT_EQ(trophy::display_calls(509.5625), 510);
  EXPECT_EQ(trophy::display_calls(2.5), 3);
  EXPECT_EQ(trophy::display_calls(-2.5), -3);
}

TEST(Oracle, CountsEveryCallAtItsLevel) {
  Oracle o(trophy::find_problem("sphere2"), PrecisionHierarchy({11, 24, 53}));
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  for (int p = 0; p < 3; ++p) {
    EXPECT_EQ(o.eval_f(zero, p), 0.0);
    EXPECT_EQ(o.eval_grad(zero, p), Eigen::VectorXd::Zero(2));
  }
  o.eval_f(zero, 2);
  EXPECT_EQ(o.ledger().f_calls, (std::vector<long long>{1, 1, 2}));
  EXPECT_EQ(o.ledger().g_calls, (std::vector<long long>{1, 1, 1}));
  EXPECT_EQ(o.ledger().total_f(), 4);
  EXPECT_EQ(o.ledger().total_g(), 3);
}

TEST(Oracle, RejectsBadLevelsAndDimensions) {
  Oracle o(trophy::find_problem("sphere2"), PrecisionHierarchy({24, 53}));
  EXPECT_THROW(o.eval_f(Eigen::VectorXd::Zero(2), 2), trophy::UsageError);
  EXPECT_THROW(o.eval_f(Eigen::VectorXd::Zero(3), 0), trophy::UsageError);
  EXPECT_EQ(o.ledger().total_f(), 0);
}

TEST(Oracle, TopLevelIsTheNativeProgram) {
  for (const trophy::ProblemSpec& p : trophy::list_problems(100)) {
    Oracle o(p, PrecisionHierarchy({24, 53}));
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(p.initial_point.data(), p.dim);
    EXPECT_EQ(o.eval_f(x, 1), p.program.native(p.initial_point)) << p.name;
  }
}

TEST(Oracle, ErrorShrinksWithWidthAtPinnedInputs) {
  Oracle o(trophy::find_problem("rosenbrock2"), PrecisionHierarchy({11, 24, 53}));
  const Eigen::Vector2d x(-1.2, 1.0);
  const double f0 = o.eval_f(x, 0);
  const double f1 = o.eval_f(x, 1);
  const double f2 = o.eval_f(x, 2);
  EXPECT_GE(std::abs(f0 - f2), std::abs(f1 - f2));
  const Eigen::VectorXd g0 = o.eval_grad(x, 0);
  const Eigen::VectorXd g1 = o.eval_grad(x, 1);
  const Eigen::VectorXd g2 = o.eval_grad(x, 2);
  EXPECT_GE((g0 - g2).norm(), (g1 - g2).norm());
}

TEST(Oracle, OneProgramCallPerValueAndOnePassPerCoordinate) {
  auto counts = std::make_shared<trophy::testing::CallCounts>();
  Oracle o(trophy::testing::instrument(trophy::find_problem("wood4"), counts), PrecisionHierarchy({11, 53}));
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(4);
  o.eval_f(x, 0);
  o.eval_f(x, 1);
  o.eval_f(x, 1);
  o.eval_grad(x, 0);
  EXPECT_EQ(counts->value_calls[11], 1);
  EXPECT_EQ(counts->value_calls[53], 2);
  EXPECT_EQ(counts->dual_passes[11], 4);
  EXPECT_EQ(counts->dual_passes[53], 0);
}

}  // namespace
