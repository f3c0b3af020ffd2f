#include "qwell/sudden.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "qwell/errors.hpp"

namespace qwell {
namespace {

void require_index(int n, const char* what) {
  if (n < 1) throw DomainError(fmt::format("{} must be >= 1, got {}", what, n));
}

double sinc(double u) {
  if (std::abs(u) < 1e-4) return 1.0 - u * u / 6.0;
  return std::sin(u) / u;
}

// Integral of cos(c x + d) over [lo, hi], written so that c -> 0 is smooth.
double cos_integral(double c, double d, double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  return 2.0 * half * std::cos(c * mid + d) * sinc(c * half);
}

}  // namespace

double overlap_amplitude(int n, int k, const WellGeometry& initial, const WellGeometry& final) {
  require_index(n, "initial quantum number");
  require_index(k, "final quantum number");
  const double lo = std::max(initial.left(), final.left());
  const double hi = std::min(initial.right(), final.right());
  if (!(hi > lo)) return 0.0;

  const double p = kPi * n / initial.width();
  const double q = kPi * k / final.width();
  // sin(p(x - a_i)) sin(q(x - a_f)) = [cos((p-q)x + d1) - cos((p+q)x + d2)] / 2
  double c1 = p - q;
  if (std::abs(k - n * final.width() / initial.width()) < kDegenerateIndexTol) c1 = 0.0;
  const double d1 = q * final.left() - p * initial.left();
  const double c2 = p + q;
  const double d2 = -(p * initial.left() + q * final.left());

  const double norm = 2.0 / std::sqrt(initial.width() * final.width());
  return 0.5 * norm * (cos_integral(c1, d1, lo, hi) - cos_integral(c2, d2, lo, hi));
}

double shrinking_amplitude(int n, int k, double alpha) {
  require_index(n, "initial quantum number");
  require_index(k, "final quantum number");
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw DomainError(fmt::format("shrinking-well amplitude needs 0 < alpha <= 1, got {}", alpha));
  }
  const double na = n * alpha;
  if (std::abs(k - na) < kDegenerateIndexTol) return std::sqrt(alpha);
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;
  return sign * 2.0 * k * std::sqrt(alpha) / kPi * std::sin(kPi * na) / (k * double(k) - na * na);
}

double transition_probability(int n, int k, const WellGeometry& initial, const WellGeometry& final) {
  const double m = overlap_amplitude(n, k, initial, final);
  return m * m;
}

double total_probability_closed_form(int n, double alpha) {
  require_index(n, "initial quantum number");
  if (!(alpha > 0.0)) throw DomainError(fmt::format("alpha must be positive, got {}", alpha));
  if (alpha >= 1.0) return 1.0;
  const double arg = 2.0 * kPi * n * alpha;
  return alpha * (1.0 - std::sin(arg) / arg);
}

double total_probability_sum(int n, const WellGeometry& initial, const WellGeometry& final,
                             int k_max) {
  require_index(k_max, "k_max");
  double sum = 0.0;
  for (int k = 1; k <= k_max; ++k) sum += transition_probability(n, k, initial, final);
  return sum;
}

double shrinking_sum_tail(int n, double alpha, int k_max) {
  require_index(n, "initial quantum number");
  require_index(k_max, "k_max");
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw DomainError(fmt::format("tail estimate needs 0 < alpha <= 1, got {}", alpha));
  }
  const double c = n * alpha;
  // Terms near the pole k ~ c are summed explicitly.
  const int k0 = std::max(k_max, static_cast<int>(std::ceil(4.0 * c)) + 16);
  double explicit_part = 0.0;
  for (int k = k_max + 1; k <= k0; ++k) {
    const double m = shrinking_amplitude(n, k, alpha);
    explicit_part += m * m;
  }
  const double s = std::sin(kPi * c);
  const double prefactor = 4.0 * alpha * s * s / (kPi * kPi);
  const double x = k0;
  const double d = x * x - c * c;
  const double integral = x / (2.0 * d) - std::log1p(-2.0 * c / (x + c)) / (4.0 * c);
  const double f = x * x / (d * d);
  const double df = -2.0 * x * (x * x + c * c) / (d * d * d);
  return explicit_part + prefactor * (integral - 0.5 * f - df / 12.0);
}

double probability_deficit(int n, const WellGeometry& initial, const WellGeometry& final) {
  require_index(n, "initial quantum number");
  if (final.left() <= initial.left() && final.right() >= initial.right()) return 0.0;
  const double lo = std::max(initial.left(), final.left());
  const double hi = std::min(initial.right(), final.right());
  if (!(hi > lo)) return 1.0;
  const double p = kPi * n / initial.width();
  // 2 sin^2 = 1 - cos(2 p (x - a))
  const double kept =
      (hi - lo - cos_integral(2.0 * p, -2.0 * p * initial.left(), lo, hi)) / initial.width();
  return std::clamp(1.0 - kept, 0.0, 1.0);
}

OverlapMatrix::OverlapMatrix(int n_max, int k_max, const WellGeometry& initial,
                             const WellGeometry& final)
    : n_max_(n_max), k_max_(k_max), initial_(initial), final_(final) {
  require_index(n_max, "n_max");
  require_index(k_max, "k_max");
  values_.resize(static_cast<std::size_t>(n_max) * k_max);
  for (int n = 1; n <= n_max; ++n) {
    for (int k = 1; k <= k_max; ++k) values_[index(n, k)] = overlap_amplitude(n, k, initial, final);
  }
}

std::size_t OverlapMatrix::index(int n, int k) const {
  if (n < 1 || n > n_max_ || k < 1 || k > k_max_) {
    throw DomainError(fmt::format("overlap index ({}, {}) outside {}x{}", n, k, n_max_, k_max_));
  }
  return static_cast<std::size_t>(n - 1) * k_max_ + (k - 1);
}

double OverlapMatrix::row_sum(int n) const {
  double sum = 0.0;
  for (int k = 1; k <= k_max_; ++k) sum += probability(n, k);
  return sum;
}

TransitionSummary summarize_transitions(int n, const WellGeometry& initial,
                                        const WellGeometry& final, int k_max) {
  TransitionSummary s;
  s.n = n;
  s.k_max = k_max;
  s.deficit = probability_deficit(n, initial, final);
  s.total_probability = 1.0 - s.deficit;
  s.partial_sum = total_probability_sum(n, initial, final, k_max);
  return s;
}

}  // namespace qwell
