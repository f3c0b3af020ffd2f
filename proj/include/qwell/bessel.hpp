#pragma once

// Bessel functions J0, J1, J2, zeros of J1, and the eigenbasis
// chi_n(y) = sqrt(2)/(b |J2(z_n)|) sqrt(y) J1(y z_n / b) of the mapped-frame
// Hamiltonian on [0, b].

#include "qwell/well.hpp"

namespace qwell {

/// J_order(z) for order in {0, 1, 2}. Negative z is handled by parity.
double bessel_j(int order, double z);

/// n-th positive root of J1, written z_n = pi n u_n.
struct BesselZero {
  int n = 1;
  double z = 0.0;
  double u = 1.0;
};

/// Roots are computed once and cached; concurrent callers are safe.
BesselZero bessel_j1_zero(int n);

struct MappedEigenState {
  int n = 1;
  double energy = 0.0;
  BesselZero zero;
  double width = 1.0;

  double value(double y) const;
};

/// chi_n(y) on [0, width]; 0 outside.
double mapped_eigenfunction(int n, double y, double width = 1.0);

/// d chi_n / dy on (0, width].
double mapped_eigenfunction_derivative(int n, double y, double width = 1.0);

/// hbar^2 z_n^2 / (2 m width^2), i.e. the sine-well energy times u_n^2.
double mapped_eigen_energy(int n, double width = 1.0, const Units& units = {});

MappedEigenState mapped_eigen_state(int n, double width = 1.0, const Units& units = {});

}  // namespace qwell
