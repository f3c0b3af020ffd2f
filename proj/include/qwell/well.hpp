#pragma once

// Infinite square well: geometry, units, wall-motion laws and the sine
// eigenbasis.

#include <span>
#include <vector>

namespace qwell {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Unit system. Natural units (hbar = mass = 1) by default.
struct Units {
  double hbar = 1.0;
  double mass = 1.0;

  /// Throws DomainError unless both constants are strictly positive.
  void validate() const;
};

/// Support [left, left + width] of an infinite well.
class WellGeometry {
 public:
  WellGeometry() = default;
  WellGeometry(double left, double width);

  /// Geometry [a, a + b*alpha] obtained from [0, b] by shift and scale.
  static WellGeometry scaled(double alpha, double shift = 0.0, double base_width = 1.0);

  double left() const { return left_; }
  double width() const { return width_; }
  double right() const { return left_ + width_; }
  bool contains(double x) const { return x >= left_ && x <= right(); }

  friend bool operator==(const WellGeometry&, const WellGeometry&) = default;

 private:
  double left_ = 0.0;
  double width_ = 1.0;
};

/// Wall-width scale factor alpha(t) on [0, T], alpha(0) = 1.
class MotionLaw {
 public:
  enum class Kind { Linear, UserTable };

  struct Sample {
    double t;
    double alpha;
  };

  /// alpha(t) = 1 + slope*t with slope = (alpha_final - 1)/duration.
  static MotionLaw linear(double alpha_final, double duration);

  /// Piecewise-linear law through the samples. The first sample must be
  /// (0, 1), times strictly increasing, every alpha positive.
  static MotionLaw table(std::vector<Sample> samples);

  Kind kind() const { return kind_; }
  double alpha_final() const { return alpha_final_; }
  double duration() const { return duration_; }
  std::span<const Sample> samples() const { return samples_; }

  /// Linear slope alpha'. Only meaningful for Kind::Linear.
  double slope() const { return slope_; }

  /// alpha(t); throws DomainError for t outside [0, T].
  double alpha_at(double t) const;

  /// d alpha / dt. For tables the right-hand slope (left-hand at t = T).
  double rate_at(double t) const;

  /// Largest |d alpha/dt| over [0, T].
  double max_rate() const;

  double min_alpha() const;
  double max_alpha() const;

  /// Index of the table segment containing t.
  std::size_t segment_of(double t) const;

 private:
  MotionLaw() = default;
  void check_time(double t) const;

  Kind kind_ = Kind::Linear;
  double alpha_final_ = 1.0;
  double duration_ = 1.0;
  double slope_ = 0.0;
  std::vector<Sample> samples_;
};

double alpha_at(const MotionLaw& law, double t);

/// Stationary state n of an infinite well.
struct EigenState {
  int n = 1;
  double energy = 0.0;
  WellGeometry geometry;

  double value(double x) const;
};

/// (pi hbar n)^2 / (2 m width^2).
double eigen_energy(int n, const WellGeometry& geometry, const Units& units = {});

/// sqrt(2/width) sin(pi n (x - a)/width) inside the well, exactly 0 outside
/// and on the edges.
double eigenfunction_value(int n, double x, const WellGeometry& geometry);

EigenState eigen_state(int n, const WellGeometry& geometry, const Units& units = {});

}  // namespace qwell
