#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace trophy::testing {

using Gradient = std::function<std::vector<double>(const std::vector<double>&)>;
using Value = std::function<double(const std::vector<double>&)>;

// Hand-written double implementations. The gradients are written in the
// operation order forward-mode AD follows through the objective, so they are
// comparable bit for bit, not merely to a tolerance.
inline double rosenbrock_value(const std::vector<double>& x) {
  const double t = x[1] - x[0] * x[0];
  const double u = 1.0 - x[0];
  return 100.0 * (t * t) + u * u;
}

inline std::vector<double> rosenbrock_gradient(const std::vector<double>& x) {
  const double t = x[1] - x[0] * x[0];
  const double u = 1.0 - x[0];
  return {100.0 * (-4.0 * (x[0] * t)) + -2.0 * u, 100.0 * (2.0 * t)};
}

inline double booth_value(const std::vector<double>& x) {
  const double a = x[0] + 2.0 * x[1] - 7.0;
  const double b = 2.0 * x[0] + x[1] - 5.0;
  return a * a + b * b;
}

inline std::vector<double> booth_gradient(const std::vector<double>& x) {
  const double a = x[0] + 2.0 * x[1] - 7.0;
  const double b = 2.0 * x[0] + x[1] - 5.0;
  return {2.0 * a + 4.0 * b, 4.0 * a + 2.0 * b};
}

inline std::vector<double> sphere_gradient(const std::vector<double>& x) { return x; }

inline double powell_value(const std::vector<double>& x) {
  const double a = x[0] + 10.0 * x[1];
  const double b = x[2] - x[3];
  const double c = x[1] - 2.0 * x[2];
  const double d = x[0] - x[3];
  const double c2 = c * c;
  const double d2 = d * d;
  return a * a + 5.0 * (b * b) + c2 * c2 + 10.0 * (d2 * d2);
}

inline std::vector<double> powell_gradient(const std::vector<double>& x) {
  const double a = x[0] + 10.0 * x[1];
  const double b = x[2] - x[3];
  const double c = x[1] - 2.0 * x[2];
  const double d = x[0] - x[3];
  const double c3 = c * (c * c);
  const double d3 = d * (d * d);
  return {2.0 * a + 40.0 * d3, 2.0 * (10.0 * a) + 4.0 * c3, 5.0 * (2.0 * b) + -8.0 * c3,
          5.0 * (-2.0 * b) + -40.0 * d3};
}

inline std::vector<double> quadratic_diag(double condition) {
  std::vector<double> d(10);
  for (int i = 0; i < 10; ++i) {
    d[static_cast<std::size_t>(i)] = std::pow(condition, i / 9.0);
  }
  return d;
}

/// Every polynomial suite member with its hand-written gradient.
inline std::map<std::string, Gradient> polynomial_gradients() {
  std::map<std::string, Gradient> hand{{"sphere2", sphere_gradient},
                                       {"rosenbrock2", rosenbrock_gradient},
                                       {"booth", booth_gradient},
                                       {"powell_singular4", powell_gradient}};
  for (int e : {2, 4, 6, 8, 10}) {
    const std::vector<double> d = quadratic_diag(std::pow(10.0, e));
    hand["quadratic10_c1e" + std::to_string(e)] = [d](const std::vector<double>& x) {
      std::vector<double> g(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        g[i] = d[i] * x[i];
      }
      return g;
    };
  }
  return hand;
}

}  // namespace trophy::testing
