#include "trophy/precision.hpp"

#include <cmath>
#include <string>

#include "trophy/error.hpp"

namespace trophy {

namespace {

void check_bits(int bits) {
  if (bits < kMinBits || bits > kNativeBits) {
    throw ConfigError("significand width must be in [1, 53], got " + std::to_string(bits));
  }
}

}  // namespace

PrecisionLevel PrecisionLevel::from_bits(int bits) {
  check_bits(bits);
  switch (bits) {
    case 11:
      return {bits, "half"};
    case 24:
      return {bits, "single"};
    case 53:
      return {bits, "double"};
    default:
      return {bits, "p" + std::to_string(bits)};
  }
}

namespace detail {

double round_unchecked(double x, int bits) noexcept {
  if (bits >= kNativeBits || x == 0.0 || !std::isfinite(x)) {
    return x;
  }
  // x = m * 2^e with 0.5 <= |m| < 1. Scaling m by 2^bits puts the last kept
  // bit at the units place; nearbyint rounds ties to even under the default
  // rounding mode. Both scalings are exact.
  int e = 0;
  const double m = std::frexp(x, &e);
  const double kept = std::nearbyint(std::ldexp(m, bits));
  return std::ldexp(kept, e - bits);
}

}  // namespace detail

double round_to_bits(double x, int bits) {
  check_bits(bits);
  return detail::round_unchecked(x, bits);
}

double rounded_binop(double a, double b, BinaryOp op, int bits) {
  check_bits(bits);
  double r = 0.0;
  switch (op) {
    case BinaryOp::add:
      r = a + b;
      break;
    case BinaryOp::sub:
      r = a - b;
      break;
    case BinaryOp::mul:
      r = a * b;
      break;
    case BinaryOp::div:
      r = a / b;
      break;
  }
  return detail::round_unchecked(r, bits);
}

Rounded::Rounded(double v, int bits) {
  check_bits(bits);
  value_ = detail::round_unchecked(v, bits);
  bits_ = bits;
}

namespace {

// Operands are brought to the common (narrower) width before the operation.
template <class Op>
Rounded apply(Rounded a, Rounded b, Op op) noexcept {
  const int bits = a.bits() < b.bits() ? a.bits() : b.bits();
  const double x = a.bits() == bits ? a.value() : detail::round_unchecked(a.value(), bits);
  const double y = b.bits() == bits ? b.value() : detail::round_unchecked(b.value(), bits);
  return Rounded::unchecked(detail::round_unchecked(op(x, y), bits), bits);
}

}  // namespace

Rounded operator+(Rounded a, Rounded b) noexcept {
  return apply(a, b, [](double x, double y) { return x + y; });
}
Rounded operator-(Rounded a, Rounded b) noexcept {
  return apply(a, b, [](double x, double y) { return x - y; });
}
Rounded operator*(Rounded a, Rounded b) noexcept {
  return apply(a, b, [](double x, double y) { return x * y; });
}
Rounded operator/(Rounded a, Rounded b) noexcept {
  return apply(a, b, [](double x, double y) { return x / y; });
}

Rounded sqrt(Rounded a) noexcept {
  return Rounded::unchecked(detail::round_unchecked(std::sqrt(a.value_), a.bits_), a.bits_);
}
Rounded exp(Rounded a) noexcept {
  return Rounded::unchecked(detail::round_unchecked(std::exp(a.value_), a.bits_), a.bits_);
}
Rounded log(Rounded a) noexcept {
  return Rounded::unchecked(detail::round_unchecked(std::log(a.value_), a.bits_), a.bits_);
}
Rounded sin(Rounded a) noexcept {
  return Rounded::unchecked(detail::round_unchecked(std::sin(a.value_), a.bits_), a.bits_);
}
Rounded cos(Rounded a) noexcept {
  return Rounded::unchecked(detail::round_unchecked(std::cos(a.value_), a.bits_), a.bits_);
}
Rounded abs(Rounded a) noexcept { return Rounded::unchecked(std::fabs(a.value_), a.bits_); }
Rounded pow(Rounded a, Rounded b) noexcept {
  return apply(a, b, [](double x, double y) { return std::pow(x, y); });
}

DualScalar sqrt(const DualScalar& a) noexcept {
  const Rounded r = sqrt(a.primal_);
  return {r, a.tangent_ / (r * 2.0)};
}
DualScalar exp(const DualScalar& a) noexcept {
  const Rounded e = exp(a.primal_);
  return {e, a.tangent_ * e};
}
DualScalar log(const DualScalar& a) noexcept { return {log(a.primal_), a.tangent_ / a.primal_}; }
DualScalar sin(const DualScalar& a) noexcept {
  return {sin(a.primal_), a.tangent_ * cos(a.primal_)};
}
DualScalar cos(const DualScalar& a) noexcept {
  return {cos(a.primal_), -(a.tangent_ * sin(a.primal_))};
}
DualScalar abs(const DualScalar& a) noexcept { return a.primal_ < 0.0 ? -a : a; }
DualScalar pow(const DualScalar& a, double exponent) noexcept {
  const Rounded c(exponent);
  return {pow(a.primal_, c), a.tangent_ * (c * pow(a.primal_, c - 1.0))};
}

double eval_value(const ScalarProgram& program, std::span<const double> x, int bits) {
  check_bits(bits);
  std::vector<Rounded> xr;
  xr.reserve(x.size());
  for (double xi : x) {
    xr.emplace_back(xi, bits);
  }
  return program.rounded(xr).value();
}

Evaluation eval_with_gradient(const ScalarProgram& program, std::span<const double> x, int bits) {
  check_bits(bits);
  const std::size_t n = x.size();
  std::vector<DualScalar> xd;
  xd.reserve(n);
  for (double xi : x) {
    xd.emplace_back(Rounded(xi, bits), Rounded(0.0, bits));
  }

  Evaluation out;
  out.g.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    xd[i] = DualScalar(xd[i].primal(), Rounded(1.0, bits));
    const DualScalar r = program.dual(xd);
    xd[i] = DualScalar(xd[i].primal(), Rounded(0.0, bits));
    if (i == 0) {
      out.f = r.primal().value();
    }
    out.g[i] = r.tangent().value();
  }
  if (n == 0) {
    out.f = eval_value(program, x, bits);
  }

  out.finite = std::isfinite(out.f);
  for (double gi : out.g) {
    out.finite = out.finite && std::isfinite(gi);
  }
  return out;
}

}  // namespace trophy
