#include "qwell/well.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "qwell/errors.hpp"

namespace qwell {

void Units::validate() const {
  if (!(hbar > 0.0) || !(mass > 0.0)) {
    throw DomainError(fmt::format("units must be positive (hbar={}, mass={})", hbar, mass));
  }
}

WellGeometry::WellGeometry(double left, double width) : left_(left), width_(width) {
  if (!(width > 0.0) || !std::isfinite(width) || !std::isfinite(left)) {
    throw DomainError(fmt::format("well width must be positive and finite, got {}", width));
  }
}

WellGeometry WellGeometry::scaled(double alpha, double shift, double base_width) {
  return WellGeometry(shift, base_width * alpha);
}

MotionLaw MotionLaw::linear(double alpha_final, double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw DomainError(fmt::format("motion duration must be positive, got {}", duration));
  }
  if (!(alpha_final > 0.0) || !std::isfinite(alpha_final)) {
    throw DomainError(fmt::format("final scale factor must be positive, got {}", alpha_final));
  }
  MotionLaw law;
  law.kind_ = Kind::Linear;
  law.alpha_final_ = alpha_final;
  law.duration_ = duration;
  law.slope_ = (alpha_final - 1.0) / duration;
  law.samples_ = {{0.0, 1.0}, {duration, alpha_final}};
  return law;
}

MotionLaw MotionLaw::table(std::vector<Sample> samples) {
  if (samples.size() < 2) {
    throw DomainError("motion table needs at least two samples");
  }
  if (samples.front().t != 0.0 || samples.front().alpha != 1.0) {
    throw DomainError("motion table must start at (t=0, alpha=1)");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].alpha > 0.0) || !std::isfinite(samples[i].alpha)) {
      throw DomainError(fmt::format("motion table alpha must be positive (sample {})", i));
    }
    if (i > 0 && !(samples[i].t > samples[i - 1].t)) {
      throw DomainError(fmt::format("motion table times must increase strictly (sample {})", i));
    }
  }
  MotionLaw law;
  law.kind_ = Kind::UserTable;
  law.alpha_final_ = samples.back().alpha;
  law.duration_ = samples.back().t;
  law.slope_ = (law.alpha_final_ - 1.0) / law.duration_;
  law.samples_ = std::move(samples);
  return law;
}

void MotionLaw::check_time(double t) const {
  if (!(t >= 0.0) || !(t <= duration_)) {
    throw DomainError(fmt::format("time {} outside motion interval [0, {}]", t, duration_));
  }
}

std::size_t MotionLaw::segment_of(double t) const {
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double v, const Sample& s) { return v < s.t; });
  std::size_t idx = static_cast<std::size_t>(std::distance(samples_.begin(), it));
  idx = idx == 0 ? 0 : idx - 1;
  return std::min(idx, samples_.size() - 2);
}

double MotionLaw::alpha_at(double t) const {
  check_time(t);
  if (kind_ == Kind::Linear) return 1.0 + slope_ * t;
  const std::size_t i = segment_of(t);
  const Sample& s0 = samples_[i];
  const Sample& s1 = samples_[i + 1];
  const double w = (t - s0.t) / (s1.t - s0.t);
  return s0.alpha + w * (s1.alpha - s0.alpha);
}

double MotionLaw::rate_at(double t) const {
  check_time(t);
  if (kind_ == Kind::Linear) return slope_;
  const std::size_t i = segment_of(t);
  return (samples_[i + 1].alpha - samples_[i].alpha) / (samples_[i + 1].t - samples_[i].t);
}

double MotionLaw::max_rate() const {
  double r = 0.0;
  for (std::size_t i = 0; i + 1 < samples_.size(); ++i) {
    r = std::max(r, std::abs((samples_[i + 1].alpha - samples_[i].alpha) /
                             (samples_[i + 1].t - samples_[i].t)));
  }
  return r;
}

double MotionLaw::min_alpha() const {
  double a = samples_.front().alpha;
  for (const auto& s : samples_) a = std::min(a, s.alpha);
  return a;
}

double MotionLaw::max_alpha() const {
  double a = samples_.front().alpha;
  for (const auto& s : samples_) a = std::max(a, s.alpha);
  return a;
}

double alpha_at(const MotionLaw& law, double t) { return law.alpha_at(t); }

double eigen_energy(int n, const WellGeometry& geometry, const Units& units) {
  if (n < 1) throw DomainError(fmt::format("quantum number must be >= 1, got {}", n));
  units.validate();
  const double p = kPi * units.hbar * n;
  return p * p / (2.0 * units.mass * geometry.width() * geometry.width());
}

double eigenfunction_value(int n, double x, const WellGeometry& geometry) {
  if (n < 1) throw DomainError(fmt::format("quantum number must be >= 1, got {}", n));
  if (x <= geometry.left() || x >= geometry.right()) return 0.0;
  const double w = geometry.width();
  return std::sqrt(2.0 / w) * std::sin(kPi * n * (x - geometry.left()) / w);
}

double EigenState::value(double x) const { return eigenfunction_value(n, x, geometry); }

EigenState eigen_state(int n, const WellGeometry& geometry, const Units& units) {
  return EigenState{n, eigen_energy(n, geometry, units), geometry};
}

}  // namespace qwell
