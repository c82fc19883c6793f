#include "trophy/problems.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "trophy/error.hpp"

namespace trophy {

namespace {

// Objectives are written once over a generic scalar. Constants are plain
// doubles; the scalar type decides how they round.

struct Sphere {
  template <class T>
  T operator()(std::span<const T> x) const {
    T sum(0.0);
    for (const T& xi : x) {
      sum += xi * xi;
    }
    return 0.5 * sum;
  }
};

struct Rosenbrock {
  template <class T>
  T operator()(std::span<const T> x) const {
    const T t = x[1] - x[0] * x[0];
    const T u = 1.0 - x[0];
    return 100.0 * (t * t) + u * u;
  }
};

struct ChainedRosenbrock {
  template <class T>
  T operator()(std::span<const T> x) const {
    T sum(0.0);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const T t = x[i + 1] - x[i] * x[i];
      const T u = 1.0 - x[i];
      sum += 100.0 * (t * t) + u * u;
    }
    return sum;
  }
};

struct Beale {
  template <class T>
  T operator()(std::span<const T> x) const {
    const T y2 = x[1] * x[1];
    const T a = 1.5 - x[0] * (1.0 - x[1]);
    const T b = 2.25 - x[0] * (1.0 - y2);
    const T c = 2.625 - x[0] * (1.0 - y2 * x[1]);
    return a * a + b * b + c * c;
  }
};

struct Himmelblau {
  template <class T>
  T operator()(std::span<const T> x) const {
    const T a = x[0] * x[0] + x[1] - 11.0;
    const T b = x[0] + x[1] * x[1] - 7.0;
    return a * a + b * b;
  }
};

struct Booth {
  template <class T>
  T operator()(std::span<const T> x) const {
    const T a = x[0] + 2.0 * x[1] - 7.0;
    const T b = 2.0 * x[0] + x[1] - 5.0;
    return a * a + b * b;
  }
};

struct PowellSingular {
  template <class T>
  T operator()(std::span<const T> x) const {
    const T a = x[0] + 10.0 * x[1];
    const T b = x[2] - x[3];
    const T c = x[1] - 2.0 * x[2];
    const T d = x[0] - x[3];
    const T c2 = c * c;
    const T d2 = d * d;
    return a * a + 5.0 * (b * b) + c2 * c2 + 10.0 * (d2 * d2);
  }
};

struct Wood {
  template <class T>
  T operator()(std::span<const T> x) const {
    const T t1 = x[1] - x[0] * x[0];
    const T u1 = 1.0 - x[0];
    const T t2 = x[3] - x[2] * x[2];
    const T u2 = 1.0 - x[2];
    const T v = x[1] - 1.0;
    const T w = x[3] - 1.0;
    return 100.0 * (t1 * t1) + u1 * u1 + 90.0 * (t2 * t2) + u2 * u2 +
           10.1 * (v * v + w * w) + 19.8 * (v * w);
  }
};

// Moré, Garbow and Hillstrom's trigonometric function.
struct Trigonometric {
  template <class T>
  T operator()(std::span<const T> x) const {
    using std::cos;
    using std::sin;
    const double n = static_cast<double>(x.size());
    T cos_sum(0.0);
    for (const T& xj : x) {
      cos_sum += cos(xj);
    }
    T sum(0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double index = static_cast<double>(i + 1);
      const T r = n - cos_sum + index * (1.0 - cos(x[i])) - sin(x[i]);
      sum += r * r;
    }
    return sum;
  }
};

struct DixonPrice {
  template <class T>
  T operator()(std::span<const T> x) const {
    const T u = x[0] - 1.0;
    T sum = u * u;
    for (std::size_t i = 1; i < x.size(); ++i) {
      const T r = 2.0 * (x[i] * x[i]) - x[i - 1];
      sum += static_cast<double>(i + 1) * (r * r);
    }
    return sum;
  }
};

struct Zakharov {
  template <class T>
  T operator()(std::span<const T> x) const {
    T squares(0.0);
    T weighted(0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      squares += x[i] * x[i];
      weighted += (0.5 * static_cast<double>(i + 1)) * x[i];
    }
    const T w2 = weighted * weighted;
    return squares + w2 + w2 * w2;
  }
};

// 0.5 * sum d_i x_i^2 with d spread log-uniformly over [1, condition].
struct IllConditionedQuadratic {
  std::vector<double> diag;

  template <class T>
  T operator()(std::span<const T> x) const {
    T sum(0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      sum += 0.5 * diag[i] * x[i] * x[i];
    }
    return sum;
  }
};

// Mathematically sum 0.5 x_i^2 - c_i x_i, but each term is assembled from
// quantities of size B^2 that cancel. At 24 bits the value carries an
// absolute error near 1e-3 and the gradient cannot resolve c_i, whose last
// bit sits half a 24-bit ulp of B off the grid: every gradient component is
// at least 2^-17 in magnitude.
struct NoisySum {
  static constexpr double kOffset = 128.0;
  std::vector<double> centers;

  template <class T>
  T operator()(std::span<const T> x) const {
    T sum(0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const T shifted = x[i] + kOffset;
      sum += 0.5 * (shifted * shifted - kOffset * kOffset) - kOffset * x[i] - centers[i] * x[i];
    }
    return sum;
  }
};

std::vector<double> quadratic_diagonal(int n, double condition) {
  std::vector<double> d(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    d[static_cast<std::size_t>(i)] =
        std::pow(condition, static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return d;
}

std::vector<double> noisy_sum_centers(int n) {
  // (k + 1/2) * 2^-16 for k near (1 + 0.3 i) * 2^16; 2^-16 is the 24-bit ulp
  // of values in [128, 256).
  const double grid = std::ldexp(1.0, -16);
  std::vector<double> c(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double k = std::round((1.0 + 0.3 * i) / grid);
    c[static_cast<std::size_t>(i)] = (k + 0.5) * grid;
  }
  return c;
}

std::vector<double> alternating(int n, double odd, double even) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    v[static_cast<std::size_t>(i)] = (i % 2 == 0) ? odd : even;
  }
  return v;
}

template <class F>
ProblemSpec make(std::string name, std::vector<double> x0, F objective,
                 std::optional<double> min_value = std::nullopt,
                 std::optional<std::vector<double>> minimizer = std::nullopt) {
  ProblemSpec p;
  p.name = std::move(name);
  p.dim = static_cast<int>(x0.size());
  p.initial_point = std::move(x0);
  p.known_min_value = min_value;
  p.known_minimizer = std::move(minimizer);
  p.program = make_program(std::move(objective));
  return p;
}

std::vector<ProblemSpec> build_suite() {
  std::vector<ProblemSpec> suite;
  suite.push_back(make("sphere2", {1.0, 1.0}, Sphere{}, 0.0, std::vector<double>(2, 0.0)));
  suite.push_back(make("rosenbrock2", {-1.2, 1.0}, Rosenbrock{}, 0.0, std::vector<double>{1.0, 1.0}));
  suite.push_back(make("chained_rosenbrock50", alternating(50, -1.2, 1.0), ChainedRosenbrock{}, 0.0,
                       std::vector<double>(50, 1.0)));
  suite.push_back(make("beale", {1.0, 1.0}, Beale{}, 0.0, std::vector<double>{3.0, 0.5}));
  suite.push_back(make("himmelblau", {1.0, 1.0}, Himmelblau{}, 0.0, std::vector<double>{3.0, 2.0}));
  suite.push_back(make("booth", {0.0, 0.0}, Booth{}, 0.0, std::vector<double>{1.0, 3.0}));
  suite.push_back(make("powell_singular4", {3.0, -1.0, 0.0, 1.0}, PowellSingular{}, 0.0,
                       std::vector<double>(4, 0.0)));
  suite.push_back(make("wood4", {-3.0, -1.0, -3.0, -1.0}, Wood{}, 0.0, std::vector<double>(4, 1.0)));
  suite.push_back(make("trigonometric10", std::vector<double>(10, 0.1), Trigonometric{}));

  std::vector<double> dixon_min(10);
  for (int i = 0; i < 10; ++i) {
    const double p = std::ldexp(1.0, i + 1);
    dixon_min[static_cast<std::size_t>(i)] = std::pow(2.0, -(p - 2.0) / p);
  }
  suite.push_back(make("dixon_price10", std::vector<double>(10, 1.0), DixonPrice{}, 0.0, dixon_min));
  suite.push_back(make("zakharov5", std::vector<double>(5, 1.0), Zakharov{}, 0.0, std::vector<double>(5, 0.0)));

  for (int exponent : {2, 4, 6, 8, 10}) {
    const double condition = std::pow(10.0, exponent);
    suite.push_back(make("quadratic10_c1e" + std::to_string(exponent), std::vector<double>(10, 1.0),
                         IllConditionedQuadratic{quadratic_diagonal(10, condition)}, 0.0,
                         std::vector<double>(10, 0.0)));
  }

  std::vector<double> centers = noisy_sum_centers(10);
  double min_value = 0.0;
  for (double c : centers) {
    min_value -= 0.5 * c * c;
  }
  suite.push_back(make("noisy_sum10", std::vector<double>(10, 0.0), NoisySum{centers}, min_value, centers));

  std::sort(suite.begin(), suite.end(),
            [](const ProblemSpec& a, const ProblemSpec& b) { return a.name < b.name; });
  return suite;
}

const std::vector<ProblemSpec>& suite() {
  static const std::vector<ProblemSpec> s = build_suite();
  return s;
}

}  // namespace

Evaluation evaluate(const ProblemSpec& problem, std::span<const double> x, int bits) {
  if (static_cast<int>(x.size()) != problem.dim) {
    throw UsageError("problem " + problem.name + " expects dimension " + std::to_string(problem.dim) +
                     ", got " + std::to_string(x.size()));
  }
  return eval_with_gradient(problem.program, x, bits);
}

std::vector<ProblemSpec> list_problems(int max_dim) {
  std::vector<ProblemSpec> out;
  for (const ProblemSpec& p : suite()) {
    if (p.dim <= max_dim) {
      out.push_back(p);
    }
  }
  return out;
}

ProblemSpec find_problem(const std::string& name) {
  for (const ProblemSpec& p : suite()) {
    if (p.name == name) {
      return p;
    }
  }
  throw UsageError("unknown problem: " + name);
}

}  // namespace trophy
