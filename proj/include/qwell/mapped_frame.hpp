#pragma once

// Coordinate and time map y = x/alpha(t), tau = int_0^t dt'/alpha^2 that
// freezes the well on [0, b], the perturbation operator of the linear law in
// the Bessel eigenbasis, and first-order transition amplitudes.

#include <complex>
#include <vector>

#include "qwell/well.hpp"

namespace qwell {

/// Scaled time tau(t). Linear law: closed form t/alpha(t). Tables: adaptive
/// Simpson quadrature of 1/alpha^2 (relative tolerance 1e-10).
double tau_of_t(const MotionLaw& law, double t);

/// Inverse of tau_of_t expressed as alpha. Linear law: 1/(1 - alpha' tau).
/// Tables: bisection on tau_of_t to 1e-12.
double alpha_of_tau(const MotionLaw& law, double tau);

struct MappedTime {
  double t = 0.0;
  double tau = 0.0;
  double alpha = 1.0;
  double rate = 0.0;  // d alpha / dt
};

/// Exact per-segment map between lab and scaled time. On every linear piece
/// alpha = a0 + s (t - t0) one has tau - tau0 = (t - t0) / (a0 alpha).
class MappedClock {
 public:
  explicit MappedClock(const MotionLaw& law);

  double tau_final() const { return node_tau_.back(); }
  MappedTime at_t(double t) const;
  MappedTime at_tau(double tau) const;
  /// Scaled-time positions of the table nodes (kinks of alpha).
  const std::vector<double>& node_taus() const { return node_tau_; }

 private:
  MotionLaw law_;
  std::vector<double> node_tau_;
};

/// Spatial integrals of the Bessel basis entering the perturbation:
/// inverse_square = int chi_m chi_n / y^2, derivative_over_y = int chi_m chi_n' / y.
struct BasisIntegrals {
  double inverse_square = 0.0;
  double derivative_over_y = 0.0;
  int nodes = 0;  // Gauss-Legendre order that met the tolerance
};

inline constexpr int kDefaultBasisNodes = 2000;

BasisIntegrals basis_integrals(int m, int n, double width = 1.0, int nodes = kDefaultBasisNodes);

/// <chi_m | V | chi_n> for the linear law at scale alpha and rate alpha',
///   V = -hbar^2/(2 m y^2) [ 1/(a a')^2 d2/dtau2 - 2/(a a') d/dtau
///                           + 2y/(a a') d2/(dy dtau) ],
/// with d/dtau acting on the phase exp(-i E_n tau/hbar) of chi_n.
std::complex<double> perturbation_matrix_element(int n, int m, double alpha, double alpha_prime,
                                                 double width = 1.0, const Units& units = {});

/// delta = (E_n - E_m) / (hbar alpha alpha') with mapped energies.
double expansion_parameter(int n, int m, double alpha, double alpha_prime, double width = 1.0,
                           const Units& units = {});

/// First-order amplitude chi_n -> chi_m over the whole motion,
///   c_m = -(i/hbar) int_0^tau(T) <chi_m|V|chi_n>(tau) exp(i (E_m - E_n) tau / hbar) dtau.
/// A static law gives 0.
std::complex<double> first_order_amplitude(int n_initial, int m_final, const MotionLaw& law,
                                           const Units& units = {}, double width = 1.0);

}  // namespace qwell
