#include "qwell/regularized.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "qwell/errors.hpp"

namespace qwell {
namespace {

// Even levels (n odd):  u tan u = v.  Odd levels (n even): -u cot u = v.
// u = k L and v = kappa L with L the half width; u^2 + v^2 = u0^2.
double level_condition(int n, double u, double u0) {
  const double v = std::sqrt(std::max(u0 * u0 - u * u, 0.0));
  return (n % 2 == 1) ? u * std::sin(u) - v * std::cos(u) : u * std::cos(u) + v * std::sin(u);
}

double solve_level(int n, double u0) {
  const double half_pi = 0.5 * kPi;
  double lo = (n - 1) * half_pi;
  double hi = std::min(n * half_pi, u0);
  // Sign of the condition just above lo; the root is where it flips.
  const auto sign_at = [&](double u) { return std::signbit(level_condition(n, u, u0)); };
  const bool lo_sign = sign_at(lo + 1e-300 + lo * 1e-16);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sign_at(mid) == lo_sign) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double u = 0.5 * (lo + hi);
  // Newton polish on the smooth form; keep inside the bracket.
  for (int iter = 0; iter < 5; ++iter) {
    const double h = 1e-7 * std::max(u, 1e-3);
    const double f = level_condition(n, u, u0);
    const double df = (level_condition(n, u + h, u0) - level_condition(n, u - h, u0)) / (2.0 * h);
    if (df == 0.0) break;
    const double next = u - f / df;
    if (!(next > lo - 1e-12 && next < hi + 1e-12)) break;
    u = next;
  }
  return u;
}

}  // namespace

RegularizedWell::RegularizedWell(double height, double width, double left_edge)
    : height_(height), width_(width), left_(left_edge) {
  if (!(height > 0.0) || !std::isfinite(height)) {
    throw DomainError(fmt::format("well height must be positive, got {}", height));
  }
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw DomainError(fmt::format("well width must be positive, got {}", width));
  }
}

double RegularizedWell::depth_ratio(const Units& units) const {
  return height_ / eigen_energy(1, WellGeometry(left_, width_), units);
}

int count_bound_states(const RegularizedWell& well, const Units& units) {
  units.validate();
  const double s = std::sqrt(2.0 * units.mass * well.height()) * well.width() / (kPi * units.hbar);
  return 1 + static_cast<int>(std::floor(s));
}

std::vector<BoundLevel> bound_levels(const RegularizedWell& well, const Units& units) {
  units.validate();
  const double half = 0.5 * well.width();
  const double u0 = half * std::sqrt(2.0 * units.mass * well.height()) / units.hbar;
  const int expected = count_bound_states(well, units);
  std::vector<BoundLevel> levels;
  levels.reserve(expected);
  for (int n = 1; (n - 1) * 0.5 * kPi < u0; ++n) {
    const double u = solve_level(n, u0);
    const double v = std::sqrt(std::max(u0 * u0 - u * u, 0.0));
    if (!(v > 0.0)) break;  // threshold case: not normalisable
    const double residual = level_condition(n, u, u0);
    if (std::abs(residual) > 1e-12 * std::max(1.0, u0)) {
      throw NumericError(fmt::format("bound level {} residual {} above tolerance", n, residual));
    }
    BoundLevel level;
    level.n = n;
    level.parity = (n % 2 == 1) ? Parity::Even : Parity::Odd;
    level.wavenumber = u / half;
    level.decay = v / half;
    level.energy = units.hbar * units.hbar * level.wavenumber * level.wavenumber / (2.0 * units.mass);
    level.xi = level.energy / well.height();

    const double k = level.wavenumber;
    const bool even = level.parity == Parity::Even;
    const double inner = even ? half + std::sin(2.0 * u) / (2.0 * k) : half - std::sin(2.0 * u) / (2.0 * k);
    const double edge_factor = even ? std::cos(u) : std::sin(u);
    const double norm2 = inner + edge_factor * edge_factor / level.decay;
    // Positive slope at the left edge, matching sqrt(2/b) sin(pi n (x-a)/b).
    const double sign = even ? (std::sin(u) >= 0.0 ? 1.0 : -1.0) : (std::cos(u) >= 0.0 ? 1.0 : -1.0);
    level.inner_amplitude = sign / std::sqrt(norm2);
    level.edge_value = std::abs(level.inner_amplitude * edge_factor);
    levels.push_back(level);
  }
  if (static_cast<int>(levels.size()) != expected) {
    throw NumericError(fmt::format("found {} bound levels, counting formula gives {}",
                                   levels.size(), expected));
  }
  return levels;
}

double bound_wavefunction_value(const BoundLevel& level, const RegularizedWell& well, double x) {
  const double c = well.center();
  const double half = 0.5 * well.width();
  const double k = level.wavenumber;
  const double a = level.inner_amplitude;
  const bool even = level.parity == Parity::Even;
  const auto inside = [&](double s) { return even ? a * std::cos(k * s) : a * std::sin(k * s); };
  const double s = x - c;
  if (std::abs(s) <= half) return inside(s);
  const double edge = inside(s > 0.0 ? half : -half);
  return edge * std::exp(-level.decay * (std::abs(s) - half));
}

double bound_overlap(const BoundLevel& a, const RegularizedWell& well_a, const BoundLevel& b,
                     const RegularizedWell& well_b, double pad_decay_lengths) {
  const double pad = pad_decay_lengths / (a.decay + b.decay);
  std::vector<double> cuts = {well_a.left(), well_a.right(), well_b.left(), well_b.right()};
  std::sort(cuts.begin(), cuts.end());
  cuts.insert(cuts.begin(), cuts.front() - pad);
  cuts.push_back(cuts.back() + pad);
  auto f = [&](double x) {
    return bound_wavefunction_value(a, well_a, x) * bound_wavefunction_value(b, well_b, x);
  };
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    total += Rule::integrate(f, cuts[i], cuts[i + 1], 12, 1e-10);
  }
  return total;
}

double bound_overlap_sum(int n_initial, const RegularizedWell& initial,
                         const RegularizedWell& final, const Units& units) {
  if (initial.height() != final.height()) {
    throw DomainError("initial and final wells must share the height V");
  }
  for (const RegularizedWell* w : {&initial, &final}) {
    const double ratio = w->depth_ratio(units);
    if (ratio < kMinDepthRatio) {
      throw DomainError(fmt::format(
          "well of width {} too shallow: V is {:.3g} x ground energy (need >= {})", w->width(),
          ratio, kMinDepthRatio));
    }
    if (ratio < kShallowWarnRatio) {
      std::clog << fmt::format("warning: V is only {:.3g} x ground energy for width {}\n", ratio,
                               w->width());
    }
  }
  const auto levels_i = bound_levels(initial, units);
  if (n_initial < 1 || n_initial > static_cast<int>(levels_i.size())) {
    throw DomainError(fmt::format("initial level {} not bound (well has {})", n_initial,
                                  levels_i.size()));
  }
  const BoundLevel& start = levels_i[n_initial - 1];
  double sum = 0.0;
  for (const BoundLevel& level : bound_levels(final, units)) {
    const double m = bound_overlap(start, initial, level, final);
    sum += m * m;
  }
  return sum;
}

}  // namespace qwell
