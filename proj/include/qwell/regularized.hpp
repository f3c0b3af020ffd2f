#pragma once

// Finite-height well: zero potential on [left, left + width], height V
// elsewhere. Bound spectrum, eigenfunctions with analytic tails, and the
// bound-state share of a suddenly changed state.

#include <vector>

#include "qwell/well.hpp"

namespace qwell {

class RegularizedWell {
 public:
  RegularizedWell(double height, double width, double left_edge = 0.0);

  double height() const { return height_; }
  double width() const { return width_; }
  double left() const { return left_; }
  double right() const { return left_ + width_; }
  double center() const { return left_ + 0.5 * width_; }

  /// V divided by the ground energy of the infinite well of the same width.
  double depth_ratio(const Units& units = {}) const;

 private:
  double height_;
  double width_;
  double left_;
};

/// Wells below this depth ratio are rejected where the infinite-well limit
/// is assumed; below kShallowWarnRatio a warning is logged.
inline constexpr double kMinDepthRatio = 10.0;
inline constexpr double kShallowWarnRatio = 100.0;

enum class Parity { Even, Odd };

struct BoundLevel {
  int n = 1;
  double energy = 0.0;
  double xi = 0.0;  // energy / V
  Parity parity = Parity::Even;
  double wavenumber = 0.0;  // inside
  double decay = 0.0;       // kappa outside
  double inner_amplitude = 0.0;
  double edge_value = 0.0;  // |psi| at the edges
};

/// 1 + floor(sqrt(2 m V) width / (pi hbar)).
int count_bound_states(const RegularizedWell& well, const Units& units = {});

/// All bound levels, increasing in energy.
std::vector<BoundLevel> bound_levels(const RegularizedWell& well, const Units& units = {});

/// Normalised eigenfunction on the whole line (sign: positive just inside
/// the left edge).
double bound_wavefunction_value(const BoundLevel& level, const RegularizedWell& well, double x);

/// <b | a> by adaptive Gauss-Kronrod over the union of the supports padded
/// with `pad_decay_lengths` decay lengths of the slower-decaying state.
double bound_overlap(const BoundLevel& a, const RegularizedWell& well_a, const BoundLevel& b,
                     const RegularizedWell& well_b, double pad_decay_lengths = 20.0);

/// Sum over all bound levels k of the final well of |<k_f | n_i>|^2. Both
/// wells must share V.
double bound_overlap_sum(int n_initial, const RegularizedWell& initial,
                         const RegularizedWell& final, const Units& units = {});

}  // namespace qwell
