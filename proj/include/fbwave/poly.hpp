#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace fbwave::poly {

// Coefficients are stored lowest degree first: c[0] + c[1] x + c[2] x^2 + ...

inline double eval(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

inline std::vector<double> derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
  return d;
}

inline std::vector<double> antiderivative(const std::vector<double>& c,
                                          double constant = 0.0) {
  std::vector<double> a(c.size() + 1);
  a[0] = constant;
  for (std::size_t i = 0; i < c.size(); ++i) a[i + 1] = c[i] / static_cast<double>(i + 1);
  return a;
}

inline std::vector<double> multiply(const std::vector<double>& a,
                                    const std::vector<double>& b) {
  std::vector<double> r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

// Real roots of c3 x^3 + c2 x^2 + c1 x + c0, ascending.  Closed form on the
// depressed cubic, then two Newton polish steps on the original coefficients
// to pull the trig/Cardano evaluations back to full precision.
inline std::vector<double> cubic_real_roots(double c3, double c2, double c1,
                                            double c0) {
  std::vector<double> roots;
  if (c3 == 0.0) {  // quadratic fallback
    if (c2 == 0.0) {
      if (c1 != 0.0) roots.push_back(-c0 / c1);
      return roots;
    }
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) return roots;
    const double s = std::sqrt(disc);
    const double q = -0.5 * (c1 + std::copysign(s, c1));
    roots.push_back(q / c2);
    if (q != 0.0) roots.push_back(c0 / q);
    else roots.push_back(-c1 / (2.0 * c2));
    std::sort(roots.begin(), roots.end());
    return roots;
  }

  const double b = c2 / c3, c = c1 / c3, d = c0 / c3;
  const double shift = b / 3.0;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

  // Three real roots need p < 0 and |3q/(pm)| <= 1; testing that ratio with a
  // small slack instead of the discriminant keeps double roots (fold levels)
  // on the three-root path despite rounding.
  bool three = false;
  if (p < 0.0) {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = 3.0 * q / (p * m);
    if (std::abs(arg) <= 1.0 + 1e-10) {
      three = true;
      const double theta = std::acos(std::clamp(arg, -1.0, 1.0)) / 3.0;
      for (int k = 0; k < 3; ++k)
        roots.push_back(m * std::cos(theta - 2.0 * M_PI * k / 3.0) - shift);
    }
  }
  if (!three) {
    if (p == 0.0 && q == 0.0) {
      roots.assign(3, -shift);
    } else {  // single real root: Cardano
      const double half_q = q / 2.0;
      const double inner = half_q * half_q + p * p * p / 27.0;
      const double s = std::sqrt(std::max(inner, 0.0));
      const double u = std::cbrt(-half_q + s);
      const double v = std::cbrt(-half_q - s);
      roots.push_back(u + v - shift);
    }
  }

  for (double& r : roots) {
    for (int it = 0; it < 2; ++it) {
      const double f = ((c3 * r + c2) * r + c1) * r + c0;
      const double fp = (3.0 * c3 * r + 2.0 * c2) * r + c1;
      if (fp == 0.0) break;
      const double step = f / fp;
      if (!(std::abs(step) < 0.1 * (1.0 + std::abs(r)))) break;  // double root
      r -= step;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace fbwave::poly
