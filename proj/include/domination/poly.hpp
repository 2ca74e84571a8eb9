#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace domination::poly {

/// Coefficients in ascending order: p[0] + p[1] x + p[2] x^2 + ...
using Coeffs = std::vector<double>;

Coeffs multiply(const Coeffs& a, const Coeffs& b);
Coeffs add(const Coeffs& a, const Coeffs& b, double scale_b = 1.0);

template <class T>
T evaluate(const Coeffs& p, T x) {
  T acc{};
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// All complex roots as eigenvalues of the companion matrix.
std::vector<std::complex<double>> companion_roots(const Coeffs& p);

/// Root of f in [lo, hi] given a sign change; bisection to full precision.
/// Throws NumericError naming the interval when f(lo) f(hi) > 0.
double bisect(const std::function<double(double)>& f, double lo, double hi);

}  // namespace domination::poly
