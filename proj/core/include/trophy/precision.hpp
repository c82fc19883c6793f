#pragma once

#include <compare>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace trophy {

inline constexpr int kMinBits = 1;
inline constexpr int kNativeBits = 53;

/// A significand width. The count includes the implicit leading bit, so 24 is
/// IEEE single and 53 is IEEE double. The exponent range is always that of a
/// double.
struct PrecisionLevel {
  int bits = kNativeBits;
  std::string label;

  /// Validated constructor; labels 11/24/53 as half/single/double.
  static PrecisionLevel from_bits(int bits);

  friend bool operator==(const PrecisionLevel&, const PrecisionLevel&) = default;
};

/// Rounds `x` to the nearest value with `bits` significand bits, ties to even.
/// Infinities and NaN pass through. Throws ConfigError unless 1 <= bits <= 53.
double round_to_bits(double x, int bits);

enum class BinaryOp { add, sub, mul, div };

/// Computes `a op b` in double and rounds the result to `bits`.
double rounded_binop(double a, double b, BinaryOp op, int bits);

namespace detail {
double round_unchecked(double x, int bits) noexcept;
}

/// A real number carried at a fixed significand width. Every operation is
/// computed in double and the result rounded back to the width.
///
/// Mixed widths resolve to the narrower one. A plain double converts at 53
/// bits, so a literal such as 0.1 is re-rounded when it meets a narrower
/// operand, the way a constant would be stored in a narrow program.
class Rounded {
 public:
  constexpr Rounded() noexcept = default;
  // NOLINTNEXTLINE(google-explicit-constructor): literals mix freely into objectives.
  constexpr Rounded(double v) noexcept : value_(v) {}
  Rounded(double v, int bits);

  /// Wraps a value the caller knows is already representable at `bits`.
  static constexpr Rounded unchecked(double v, int bits) noexcept {
    Rounded r;
    r.value_ = v;
    r.bits_ = bits;
    return r;
  }

  [[nodiscard]] constexpr double value() const noexcept { return value_; }
  [[nodiscard]] constexpr int bits() const noexcept { return bits_; }

  friend Rounded operator+(Rounded a, Rounded b) noexcept;
  friend Rounded operator-(Rounded a, Rounded b) noexcept;
  friend Rounded operator*(Rounded a, Rounded b) noexcept;
  friend Rounded operator/(Rounded a, Rounded b) noexcept;
  friend Rounded operator-(Rounded a) noexcept { return unchecked(-a.value_, a.bits_); }

  Rounded& operator+=(Rounded o) noexcept { return *this = *this + o; }
  Rounded& operator-=(Rounded o) noexcept { return *this = *this - o; }
  Rounded& operator*=(Rounded o) noexcept { return *this = *this * o; }
  Rounded& operator/=(Rounded o) noexcept { return *this = *this / o; }

  friend bool operator==(Rounded a, Rounded b) noexcept { return a.value_ == b.value_; }
  friend std::partial_ordering operator<=>(Rounded a, Rounded b) noexcept {
    return a.value_ <=> b.value_;
  }

  friend Rounded sqrt(Rounded a) noexcept;
  friend Rounded exp(Rounded a) noexcept;
  friend Rounded log(Rounded a) noexcept;
  friend Rounded sin(Rounded a) noexcept;
  friend Rounded cos(Rounded a) noexcept;
  friend Rounded abs(Rounded a) noexcept;
  friend Rounded pow(Rounded a, Rounded b) noexcept;

 private:
  double value_ = 0.0;
  int bits_ = kNativeBits;
};

/// Forward-mode dual number over Rounded: both components are rounded after
/// every operation, so the tangent is the derivative the narrow program
/// actually induces.
class DualScalar {
 public:
  constexpr DualScalar() noexcept = default;
  // NOLINTNEXTLINE(google-explicit-constructor)
  constexpr DualScalar(double v) noexcept : primal_(v), tangent_(0.0) {}
  constexpr DualScalar(Rounded primal, Rounded tangent) noexcept
      : primal_(primal), tangent_(tangent) {}

  [[nodiscard]] constexpr Rounded primal() const noexcept { return primal_; }
  [[nodiscard]] constexpr Rounded tangent() const noexcept { return tangent_; }

  friend DualScalar operator+(const DualScalar& a, const DualScalar& b) noexcept {
    return {a.primal_ + b.primal_, a.tangent_ + b.tangent_};
  }
  friend DualScalar operator-(const DualScalar& a, const DualScalar& b) noexcept {
    return {a.primal_ - b.primal_, a.tangent_ - b.tangent_};
  }
  friend DualScalar operator*(const DualScalar& a, const DualScalar& b) noexcept {
    return {a.primal_ * b.primal_, a.tangent_ * b.primal_ + a.primal_ * b.tangent_};
  }
  friend DualScalar operator/(const DualScalar& a, const DualScalar& b) noexcept {
    return {a.primal_ / b.primal_,
            (a.tangent_ * b.primal_ - a.primal_ * b.tangent_) / (b.primal_ * b.primal_)};
  }
  friend DualScalar operator-(const DualScalar& a) noexcept { return {-a.primal_, -a.tangent_}; }

  DualScalar& operator+=(const DualScalar& o) noexcept { return *this = *this + o; }
  DualScalar& operator-=(const DualScalar& o) noexcept { return *this = *this - o; }
  DualScalar& operator*=(const DualScalar& o) noexcept { return *this = *this * o; }
  DualScalar& operator/=(const DualScalar& o) noexcept { return *this = *this / o; }

  friend bool operator==(const DualScalar& a, const DualScalar& b) noexcept {
    return a.primal_ == b.primal_;
  }
  friend std::partial_ordering operator<=>(const DualScalar& a, const DualScalar& b) noexcept {
    return a.primal_ <=> b.primal_;
  }

  friend DualScalar sqrt(const DualScalar& a) noexcept;
  friend DualScalar exp(const DualScalar& a) noexcept;
  friend DualScalar log(const DualScalar& a) noexcept;
  friend DualScalar sin(const DualScalar& a) noexcept;
  friend DualScalar cos(const DualScalar& a) noexcept;
  friend DualScalar abs(const DualScalar& a) noexcept;
  /// Power with a constant exponent.
  friend DualScalar pow(const DualScalar& a, double exponent) noexcept;

 private:
  Rounded primal_;
  Rounded tangent_;
};

/// A scalar-generic objective instantiated for the three scalar types the
/// oracles need. Build one with make_program from a callable whose call
/// operator is a template over the scalar type.
struct ScalarProgram {
  std::function<double(std::span<const double>)> native;
  std::function<Rounded(std::span<const Rounded>)> rounded;
  std::function<DualScalar(std::span<const DualScalar>)> dual;
};

template <class F>
ScalarProgram make_program(F f) {
  return ScalarProgram{
      [f](std::span<const double> x) { return f(x); },
      [f](std::span<const Rounded> x) { return f(x); },
      [f](std::span<const DualScalar> x) { return f(x); },
  };
}

struct Evaluation {
  double f = 0.0;
  std::vector<double> g;
  bool finite = true;
};

/// Objective value with inputs and every operation rounded to `bits`.
double eval_value(const ScalarProgram& program, std::span<const double> x, int bits);

/// Value and gradient at `bits`. The gradient takes one dual pass per
/// coordinate; `finite` is false if any component is inf or NaN.
Evaluation eval_with_gradient(const ScalarProgram& program, std::span<const double> x, int bits);

}  // namespace trophy
