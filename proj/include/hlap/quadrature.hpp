#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace hlap {

// Gauss-Legendre rule on [-1, 1] (Golub-Welsch free, Newton on P_n).
struct GaussRule {
  std::vector<double> x, w;

  explicit GaussRule(int n) : x(n), w(n) {
    for (int i = 0; i < n; ++i) {
      double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = t;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (t * p1 - p0) / (t * t - 1);
        const double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-16) break;
      }
      x[i] = t;
      w[i] = 2 / ((1 - t * t) * dp * dp);
    }
  }

  template <class F>
  double integrate(F&& g, double a, double b) const {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * g(c + h * x[i]);
    return s * h;
  }
};

inline const GaussRule& gauss8() {
  static const GaussRule rule(8);
  return rule;
}

// int_a^b r^e dr for 0 <= a <= b, written without cancellation for a close to b.
inline double power_integral(double a, double b, double e) {
  if (b <= a) return 0;
  const double q = e + 1;
  if (std::abs(q) < 1e-14) return std::log(b / a);
  if (a == 0) {
    if (q <= 0) return INFINITY;
    return std::pow(b, q) / q;
  }
  return std::pow(b, q) * (-std::expm1(q * std::log(a / b))) / q;
}

}  // namespace hlap
