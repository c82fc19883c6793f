#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "trophy/error.hpp"
#include "trophy/precision.hpp"

namespace {

using trophy::BinaryOp;
using trophy::DualScalar;
using trophy::Rounded;
using trophy::round_to_bits;
using trophy::testing::round_bits_reference;
using trophy::testing::round_integer_to_bits;

std::uint64_t bits_of(double x) { return std::bit_cast<std::uint64_t>(x); }

// Finite doubles drawn uniformly over bit patterns, plus values spread over a
// moderate exponent range so that both regimes are covered.
std::vector<double> sample_doubles(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-60, 60);
  std::vector<double> out;
  out.reserve(count);
  while (out.size() < count) {
    if (out.size() % 2 == 0) {
      const double x = std::bit_cast<double>(rng());
      if (std::isfinite(x)) {
        out.push_back(x);
      }
    } else {
      out.push_back(std::ldexp(mant(rng), expo(rng)));
    }
  }
  return out;
}

TEST(ReferenceRounding, MatchesIntegerRoundingExhaustivelyOnTwelveBitIntegers) {
  for (std::uint64_t n = 1; n < 4096; ++n) {
    for (int b = 1; b <= 8; ++b) {
      const auto expected = static_cast<double>(round_integer_to_bits(n, b));
      const double x = static_cast<double>(n);
      ASSERT_EQ(round_bits_reference(x, b), expected) << n << " at " << b;
      ASSERT_EQ(round_bits_reference(-x, b), -expected) << n << " at " << b;
      // Scaling by a power of two commutes with rounding, including deep in
      // the subnormal range where the encoding has fewer fraction bits.
      ASSERT_EQ(round_bits_reference(std::ldexp(x, 900), b), std::ldexp(expected, 900));
      ASSERT_EQ(round_bits_reference(std::ldexp(x, -1060), b), std::ldexp(expected, -1060));
    }
  }
}

TEST(ReferenceRounding, CarriesIntoExponentAndOverflows) {
  EXPECT_EQ(round_bits_reference(255.0, 8), 255.0);
  EXPECT_EQ(round_bits_reference(511.0, 8), 512.0);
  const double max = std::numeric_limits<double>::max();
  EXPECT_TRUE(std::isinf(round_bits_reference(max, 8)));
}

TEST(RoundToBits, AgreesWithReferenceOnSampledDoubles) {
  const std::vector<double> xs = sample_doubles(200000, 11);
  for (int b : {1, 2, 3, 8, 11, 13, 17, 24, 30, 52, 53}) {
    for (double x : xs) {
      ASSERT_EQ(bits_of(round_to_bits(x, b)), bits_of(round_bits_reference(x, b))) << x << " at " << b;
    }
  }
}

TEST(RoundToBits, AgreesWithReferenceOnSubnormalsAndEdges) {
  const double tiny = std::numeric_limits<double>::denorm_min();
  const double min_normal = std::numeric_limits<double>::min();
  const double max = std::numeric_limits<double>::max();
  std::vector<double> xs{tiny, 3 * tiny, 7 * tiny, min_normal, min_normal - tiny, std::nextafter(min_normal, 1.0),
                         max, std::nextafter(max, 0.0), 1.0 + 0x1p-52, 0.1, 1.0 / 3.0};
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10000; ++i) {
    xs.push_back(std::bit_cast<double>(rng() & ((std::uint64_t{1} << 52) - 1)));
  }
  for (double x : xs) {
    for (int b = 1; b <= 53; ++b) {
      ASSERT_EQ(bits_of(round_to_bits(x, b)), bits_of(round_bits_reference(x, b))) << x << " at " << b;
      ASSERT_EQ(bits_of(round_to_bits(-x, b)), bits_of(round_bits_reference(-x, b)));
    }
  }
}

TEST(RoundToBits, PowersOfTwoAreExact) {
  for (int e = -1074; e <= 1023; e += 7) {
    EXPECT_EQ(round_to_bits(std::ldexp(1.0, e), 1), std::ldexp(1.0, e));
  }
  EXPECT_EQ(round_to_bits(1.0, 11), 1.0);
}

TEST(RoundToBits, TenthAtElevenBits) {
  // 0.1 = 0x1.999999999999ap-4; eleven bits keep 1.1001100110 and the
  // discarded tail 0110... is below half, so the kept bits stand.
  EXPECT_EQ(round_to_bits(0.1, 11), 0x1.998p-4);
  EXPECT_EQ(round_to_bits(0.1, 11), round_bits_reference(0.1, 11));
}

TEST(RoundToBits, TiesGoToEven) {
  EXPECT_EQ(round_to_bits(2049.0, 11), 2048.0);
  EXPECT_EQ(round_to_bits(2051.0, 11), 2052.0);
  EXPECT_EQ(round_to_bits(-2049.0, 11), -2048.0);
  EXPECT_EQ(round_to_bits(1.5, 1), 2.0);
  EXPECT_EQ(round_to_bits(2.5, 2), 2.0);
}

TEST(RoundToBits, NonFiniteValuesPassThrough) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(round_to_bits(inf, 8), inf);
  EXPECT_EQ(round_to_bits(-inf, 8), -inf);
  EXPECT_TRUE(std::isnan(round_to_bits(std::nan(""), 8)));
  EXPECT_EQ(bits_of(round_to_bits(-0.0, 8)), bits_of(-0.0));
}

TEST(RoundToBits, RejectsWidthsOutsideOneToFiftyThree) {
  EXPECT_THROW(round_to_bits(1.0, 0), trophy::ConfigError);
  EXPECT_THROW(round_to_bits(1.0, 54), trophy::ConfigError);
  EXPECT_THROW(trophy::Rounded(1.0, -3), trophy::ConfigError);
  EXPECT_THROW(trophy::PrecisionLevel::from_bits(60), trophy::ConfigError);
}

TEST(RoundToBits, IdentityAtNativeWidth) {
  for (double x : sample_doubles(100000, 3)) {
    ASSERT_EQ(bits_of(round_to_bits(x, 53)), bits_of(x));
  }
}

TEST(RoundToBits, IdempotentUlpBoundedAndMonotoneInWidth) {
  const std::vector<double> xs = sample_doubles(100000, 17);
  for (double x : xs) {
    for (int b : {8, 11, 13, 17, 24, 53}) {
      const double r = round_to_bits(x, b);
      if (!std::isfinite(r)) {
        continue;  // overflow past DBL_MAX at narrow widths
      }
      ASSERT_EQ(bits_of(round_to_bits(r, b)), bits_of(r));
      ASSERT_LE(std::abs(r - x), std::ldexp(std::abs(x), -b)) << x << " at " << b;
    }
    double previous = std::numeric_limits<double>::infinity();
    for (int b : {8, 11, 24, 53}) {
      const double err = std::abs(round_to_bits(x, b) - x);
      ASSERT_LE(err, previous) << x << " at " << b;
      previous = err;
    }
  }
}

TEST(RoundedBinop, SmallWidthExamples) {
  EXPECT_EQ(trophy::rounded_binop(1.0, 1.0, BinaryOp::add, 11), 2.0);
  EXPECT_EQ(trophy::rounded_binop(2047.0, 1.0, BinaryOp::add, 11), 2048.0);
  EXPECT_EQ(trophy::rounded_binop(2048.0, 1.0, BinaryOp::add, 11), 2048.0);
  EXPECT_EQ(trophy::rounded_binop(1.0, 3.0, BinaryOp::div, 53), 1.0 / 3.0);
  EXPECT_EQ(trophy::rounded_binop(1.0, 0.0, BinaryOp::div, 11), std::numeric_limits<double>::infinity());
  EXPECT_EQ(trophy::rounded_binop(-1.0, 0.0, BinaryOp::div, 11), -std::numeric_limits<double>::infinity());
}

TEST(RoundedBinop, NativeWidthIsPlainDoubleAndResultsAreIdempotent) {
  const std::vector<double> xs = sample_doubles(20000, 23);
  for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
    const double a = xs[i];
    const double b = xs[i + 1];
    ASSERT_EQ(bits_of(trophy::rounded_binop(a, b, BinaryOp::add, 53)), bits_of(a + b));
    ASSERT_EQ(bits_of(trophy::rounded_binop(a, b, BinaryOp::mul, 53)), bits_of(a * b));
    const double ar = round_to_bits(a, 13);
    const double br = round_to_bits(b, 13);
    for (BinaryOp op : {BinaryOp::add, BinaryOp::sub, BinaryOp::mul, BinaryOp::div}) {
      const double r = trophy::rounded_binop(ar, br, op, 13);
      ASSERT_EQ(bits_of(round_to_bits(r, 13)), bits_of(r));
    }
  }
}

TEST(RoundedScalar, OperationsRoundEveryResult) {
  const Rounded a(1.0, 11);
  const Rounded b(0x1p-11, 11);
  EXPECT_EQ((a + b).value(), 1.0);  // tie, even neighbour
  EXPECT_EQ((a + b + b).value(), 1.0);
  EXPECT_EQ((a + (b + b)).value(), 1.0 + 0x1p-10);
  EXPECT_EQ((a + b).bits(), 11);
  EXPECT_EQ(sqrt(Rounded(2.0, 11)).value(), round_to_bits(std::sqrt(2.0), 11));
  EXPECT_EQ(exp(Rounded(1.0, 24)).value(), round_to_bits(std::exp(1.0), 24));
  EXPECT_EQ(sin(Rounded(0.5, 8)).value(), round_to_bits(std::sin(round_to_bits(0.5, 8)), 8));
  EXPECT_EQ(abs(Rounded(-3.0, 8)).value(), 3.0);
}

TEST(RoundedScalar, MixedWidthsResolveToTheNarrower) {
  const Rounded narrow(1.0, 11);
  const Rounded r = narrow + 0.1;  // the literal meets an 11-bit operand
  EXPECT_EQ(r.bits(), 11);
  EXPECT_EQ(r.value(), round_to_bits(1.0 + round_to_bits(0.1, 11), 11));
  EXPECT_EQ((Rounded(3.0, 24) * Rounded(1.0 / 3.0, 53)).bits(), 24);
}

TEST(RoundedScalar, NativeWidthReproducesDoubleArithmetic) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    const Rounded rx(x);
    const Rounded ry(y);
    ASSERT_EQ(bits_of(((rx * ry - rx) / (ry + 5.0)).value()), bits_of((x * y - x) / (y + 5.0)));
    ASSERT_EQ(bits_of(sqrt(abs(rx)).value()), bits_of(std::sqrt(std::abs(x))));
  }
}

TEST(DualScalar, ProductAndQuotientRules) {
  const DualScalar a(Rounded(3.0), Rounded(1.0));
  const DualScalar b(Rounded(2.0), Rounded(0.0));
  const DualScalar p = a * b;
  EXPECT_EQ(p.primal().value(), 6.0);
  EXPECT_EQ(p.tangent().value(), 2.0);
  const DualScalar q = b / a;
  EXPECT_EQ(q.primal().value(), 2.0 / 3.0);
  EXPECT_EQ(q.tangent().value(), (0.0 * 3.0 - 2.0 * 1.0) / (3.0 * 3.0));
}

TEST(DualScalar, ElementaryFunctionDerivatives) {
  const DualScalar x(Rounded(0.7), Rounded(1.0));
  EXPECT_DOUBLE_EQ(sqrt(x).tangent().value(), 0.5 / std::sqrt(0.7));
  EXPECT_DOUBLE_EQ(exp(x).tangent().value(), std::exp(0.7));
  EXPECT_DOUBLE_EQ(log(x).tangent().value(), 1.0 / 0.7);
  EXPECT_DOUBLE_EQ(sin(x).tangent().value(), std::cos(0.7));
  EXPECT_DOUBLE_EQ(cos(x).tangent().value(), -std::sin(0.7));
  EXPECT_DOUBLE_EQ(pow(x, 3.0).tangent().value(), 3.0 * 0.7 * 0.7);
  EXPECT_EQ(abs(-x).tangent().value(), 1.0);
}

TEST(DualScalar, TangentIsRoundedAtTheCarrierWidth) {
  const DualScalar x(Rounded(1.0, 8), Rounded(1.0, 8));
  const DualScalar y = x * DualScalar(Rounded(1.0 + 0x1p-7, 8), Rounded(0.0, 8)) * 3.0;
  EXPECT_EQ(y.tangent().bits(), 8);
  EXPECT_EQ(y.tangent().value(), round_to_bits(round_to_bits(1.0 + 0x1p-7, 8) * 3.0, 8));
}

struct Sphere {
  template <class T>
  T operator()(std::span<const T> x) const {
    T s = 0.0;
    for (const T& v : x) {
      s += v * v;
    }
    return s * 0.5;
  }
};

TEST(EvalWithGradient, SphereAtOriginAnyWidth) {
  const trophy::ScalarProgram p = trophy::make_program(Sphere{});
  const std::vector<double> x(3, 0.0);
  for (int b : {8, 11, 24, 53}) {
    const trophy::Evaluation e = trophy::eval_with_gradient(p, x, b);
    EXPECT_EQ(e.f, 0.0);
    EXPECT_EQ(e.g, std::vector<double>(3, 0.0));
    EXPECT_TRUE(e.finite);
  }
}

TEST(EvalWithGradient, InputsAreRoundedAndNonFiniteResultsAreFlagged) {
  const trophy::ScalarProgram p = trophy::make_program(Sphere{});
  const std::vector<double> x{0.1};
  EXPECT_EQ(trophy::eval_value(p, x, 11), round_to_bits(round_to_bits(0.1, 11) * round_to_bits(0.1, 11) * 0.5, 11));
  const trophy::Evaluation e = trophy::eval_with_gradient(p, x, 11);
  EXPECT_EQ(e.g[0], round_to_bits(0.1, 11));
  const std::vector<double> huge{1e200};
  EXPECT_FALSE(trophy::eval_with_gradient(p, huge, 53).finite);
}

}  // namespace
