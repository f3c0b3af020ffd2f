#include "qwell/mapped_frame.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "qwell/bessel.hpp"
#include "qwell/errors.hpp"
#include "qwell/quadrature.hpp"

namespace qwell {
namespace {

constexpr double kTauRelTol = 1e-10;
constexpr double kQuadratureTol = 1e-8;
constexpr int kMaxBasisNodes = 32000;

double inverse_alpha_squared_integral(const MotionLaw& law, double t0, double t1) {
  auto f = [&law](double t) {
    const double a = law.alpha_at(t);
    return 1.0 / (a * a);
  };
  return adaptive_simpson(f, t0, t1, kTauRelTol);
}

}  // namespace

double tau_of_t(const MotionLaw& law, double t) {
  const double alpha = law.alpha_at(t);  // validates t
  if (law.kind() == MotionLaw::Kind::Linear) return t / alpha;
  double tau = 0.0;
  const auto samples = law.samples();
  for (std::size_t i = 0; i + 1 < samples.size() && samples[i].t < t; ++i) {
    tau += inverse_alpha_squared_integral(law, samples[i].t, std::min(t, samples[i + 1].t));
  }
  return tau;
}

double alpha_of_tau(const MotionLaw& law, double tau) {
  if (!(tau >= 0.0)) throw DomainError(fmt::format("scaled time must be >= 0, got {}", tau));
  if (law.kind() == MotionLaw::Kind::Linear) {
    const double tau_end = tau_of_t(law, law.duration());
    const double x = law.slope() * tau;
    if (x >= 1.0) {
      throw DomainError(fmt::format("scaled time {} at or beyond the pole 1/alpha' = {}", tau,
                                    1.0 / law.slope()));
    }
    if (tau > tau_end * (1.0 + 1e-12) + 1e-300) {
      throw DomainError(fmt::format("scaled time {} beyond end of motion {}", tau, tau_end));
    }
    return 1.0 / (1.0 - x);
  }
  const double tau_end = tau_of_t(law, law.duration());
  if (tau > tau_end * (1.0 + 1e-12)) {
    throw DomainError(fmt::format("scaled time {} beyond end of motion {}", tau, tau_end));
  }
  double lo = 0.0;
  double hi = law.duration();
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * law.duration(); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (tau_of_t(law, mid) < tau) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return law.alpha_at(0.5 * (lo + hi));
}

MappedClock::MappedClock(const MotionLaw& law) : law_(law) {
  const auto samples = law_.samples();
  node_tau_.reserve(samples.size());
  node_tau_.push_back(0.0);
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const double dt = samples[i + 1].t - samples[i].t;
    node_tau_.push_back(node_tau_.back() + dt / (samples[i].alpha * samples[i + 1].alpha));
  }
}

MappedTime MappedClock::at_t(double t) const {
  MappedTime out;
  out.t = t;
  out.alpha = law_.alpha_at(t);
  out.rate = law_.rate_at(t);
  const std::size_t i = law_.segment_of(t);
  const auto& s0 = law_.samples()[i];
  out.tau = node_tau_[i] + (t - s0.t) / (s0.alpha * out.alpha);
  return out;
}

MappedTime MappedClock::at_tau(double tau) const {
  if (!(tau >= 0.0) || tau > tau_final() * (1.0 + 1e-12)) {
    throw DomainError(fmt::format("scaled time {} outside [0, {}]", tau, tau_final()));
  }
  tau = std::min(tau, tau_final());
  auto it = std::upper_bound(node_tau_.begin(), node_tau_.end(), tau);
  std::size_t i = static_cast<std::size_t>(std::distance(node_tau_.begin(), it));
  i = std::min(i == 0 ? 0 : i - 1, node_tau_.size() - 2);
  const auto& s0 = law_.samples()[i];
  const auto& s1 = law_.samples()[i + 1];
  const double slope = (s1.alpha - s0.alpha) / (s1.t - s0.t);
  const double dtau = tau - node_tau_[i];
  // dtau = u / (a0 (a0 + s u))  =>  u = dtau a0^2 / (1 - s dtau a0)
  const double u = dtau * s0.alpha * s0.alpha / (1.0 - slope * dtau * s0.alpha);
  const double t = std::clamp(s0.t + u, s0.t, s1.t);
  MappedTime out;
  out.t = t;
  out.tau = tau;
  out.alpha = s0.alpha + slope * (t - s0.t);
  out.rate = slope;
  return out;
}

BasisIntegrals basis_integrals(int m, int n, double width, int nodes) {
  if (m < 1 || n < 1) throw DomainError("basis indices must be >= 1");
  auto integrate = [&](int order) {
    const GaussLegendre& rule = gauss_legendre(order);
    auto inv_sq = [&](double y) {
      return mapped_eigenfunction(m, y, width) * mapped_eigenfunction(n, y, width) / (y * y);
    };
    auto deriv = [&](double y) {
      return mapped_eigenfunction(m, y, width) * mapped_eigenfunction_derivative(n, y, width) / y;
    };
    const double mid = 0.5 * width;
    BasisIntegrals whole{rule.integrate(inv_sq, 0.0, width), rule.integrate(deriv, 0.0, width),
                         order};
    BasisIntegrals halves{rule.integrate(inv_sq, 0.0, mid) + rule.integrate(inv_sq, mid, width),
                          rule.integrate(deriv, 0.0, mid) + rule.integrate(deriv, mid, width),
                          order};
    const double err = std::max(std::abs(whole.inverse_square - halves.inverse_square),
                                std::abs(whole.derivative_over_y - halves.derivative_over_y));
    return std::pair{halves, err};
  };
  for (int order = nodes; order <= kMaxBasisNodes; order *= 2) {
    auto [result, err] = integrate(order);
    if (err <= kQuadratureTol) return result;
  }
  throw NumericError(fmt::format("basis integrals ({}, {}) did not reach {}", m, n, kQuadratureTol));
}

namespace {

// V_mn = A g^2 + B g with g = 1/(alpha alpha').
struct ElementCoefficients {
  std::complex<double> quadratic;
  std::complex<double> linear;
};

ElementCoefficients element_coefficients(int n, int m, double width, const Units& units) {
  const BasisIntegrals ints = basis_integrals(m, n, width);
  const double omega = mapped_eigen_energy(n, width, units) / units.hbar;
  const double pref = -units.hbar * units.hbar / (2.0 * units.mass);
  const std::complex<double> i(0.0, 1.0);
  // d/dtau -> -i omega, d2/dtau2 -> -omega^2
  ElementCoefficients c;
  c.quadratic = pref * (-omega * omega * ints.inverse_square);
  c.linear = pref * (2.0 * i * omega * ints.inverse_square - 2.0 * i * omega * ints.derivative_over_y);
  return c;
}

}  // namespace

std::complex<double> perturbation_matrix_element(int n, int m, double alpha, double alpha_prime,
                                                 double width, const Units& units) {
  units.validate();
  if (!(alpha > 0.0)) throw DomainError(fmt::format("alpha must be positive, got {}", alpha));
  if (alpha_prime == 0.0 || !std::isfinite(alpha_prime)) {
    throw DomainError("perturbation element needs a nonzero finite alpha'");
  }
  const ElementCoefficients c = element_coefficients(n, m, width, units);
  const double g = 1.0 / (alpha * alpha_prime);
  return c.quadratic * g * g + c.linear * g;
}

double expansion_parameter(int n, int m, double alpha, double alpha_prime, double width,
                           const Units& units) {
  if (n == m) throw DomainError("expansion parameter is defined between distinct levels");
  if (!(alpha > 0.0)) throw DomainError(fmt::format("alpha must be positive, got {}", alpha));
  if (alpha_prime == 0.0) throw DomainError("expansion parameter needs a nonzero alpha'");
  const double dE = mapped_eigen_energy(n, width, units) - mapped_eigen_energy(m, width, units);
  return dE / (units.hbar * alpha * alpha_prime);
}

std::complex<double> first_order_amplitude(int n_initial, int m_final, const MotionLaw& law,
                                           const Units& units, double width) {
  units.validate();
  if (n_initial == m_final) throw DomainError("first-order amplitude needs distinct levels");
  if (law.max_rate() == 0.0) return {0.0, 0.0};

  const ElementCoefficients c = element_coefficients(n_initial, m_final, width, units);
  const double omega = (mapped_eigen_energy(m_final, width, units) -
                        mapped_eigen_energy(n_initial, width, units)) /
                       units.hbar;
  const MappedClock clock(law);
  auto integrand = [&](double tau) {
    const MappedTime mt = clock.at_tau(std::min(tau, clock.tau_final()));
    if (mt.rate == 0.0) return std::complex<double>(0.0, 0.0);
    const double g = 1.0 / (mt.alpha * mt.rate);
    return (c.quadratic * g * g + c.linear * g) * std::polar(1.0, omega * tau);
  };
  std::complex<double> integral{};
  const auto& nodes = clock.node_taus();
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    // Evaluate strictly inside each segment so the slope is unambiguous.
    const double a = nodes[i];
    const double b = nodes[i + 1];
    const double eps = 1e-13 * (b - a);
    integral += adaptive_simpson(integrand, a + eps, b - eps, 1e-10);
  }
  const std::complex<double> minus_i_over_hbar(0.0, -1.0 / units.hbar);
  return minus_i_over_hbar * integral;
}

}  // namespace qwell
