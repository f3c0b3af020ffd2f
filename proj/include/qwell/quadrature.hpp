#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "qwell/errors.hpp"

namespace qwell {

/// Gauss-Legendre nodes and weights on [-1, 1].
class GaussLegendre {
 public:
  explicit GaussLegendre(int order);

  int order() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Integral of f over [a, b].
  template <class F>
  auto integrate(F&& f, double a, double b) const -> decltype(f(a)) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    decltype(f(a)) sum{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      sum += weights_[i] * f(mid + half * nodes_[i]);
    }
    return sum * half;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Cached rule; safe for concurrent readers.
const GaussLegendre& gauss_legendre(int order);

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(std::complex<double> v) { return std::abs(v); }

template <class F, class T>
T simpson_step(F& f, double a, double b, T fa, T fm, T fb, T whole, double tol, int depth,
               int& evaluations) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const T flm = f(lm);
  const T frm = f(rm);
  evaluations += 2;
  const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const T delta = left + right - whole;
  if (depth <= 0) {
    throw NumericError("adaptive Simpson exceeded its recursion depth");
  }
  if (magnitude(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, evaluations) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, evaluations);
}

}  // namespace detail

/// Adaptive Simpson integration of f over [a, b]. `rel_tol` is relative to
/// the magnitude of a coarse first estimate (absolute floor `abs_tol`).
template <class F>
auto adaptive_simpson(F&& f, double a, double b, double rel_tol, double abs_tol = 1e-300,
                      int max_depth = 50) -> decltype(f(a)) {
  using T = decltype(f(a));
  if (a == b) return T{};
  // Seed on a few panels so that oscillatory integrands are not mistaken
  // for converged on the first comparison.
  constexpr int kSeedPanels = 8;
  T coarse{};
  std::vector<T> fs(2 * kSeedPanels + 1);
  const double h = (b - a) / (2 * kSeedPanels);
  for (int i = 0; i <= 2 * kSeedPanels; ++i) fs[i] = f(a + h * i);
  for (int p = 0; p < kSeedPanels; ++p) {
    coarse += h / 3.0 * (fs[2 * p] + 4.0 * fs[2 * p + 1] + fs[2 * p + 2]);
  }
  const double tol = std::max(rel_tol * detail::magnitude(coarse), abs_tol);
  int evaluations = 0;
  T total{};
  for (int p = 0; p < kSeedPanels; ++p) {
    const double x0 = a + 2 * p * h;
    const double x1 = x0 + 2 * h;
    const T whole = h / 3.0 * (fs[2 * p] + 4.0 * fs[2 * p + 1] + fs[2 * p + 2]);
    total += detail::simpson_step(f, x0, x1, fs[2 * p], fs[2 * p + 1], fs[2 * p + 2], whole,
                                  tol / kSeedPanels, max_depth, evaluations);
  }
  return total;
}

}  // namespace qwell
