#include "qwell/bessel.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <vector>

#include <fmt/format.h>

#include "qwell/errors.hpp"

namespace qwell {
namespace {

constexpr double kSeriesLimit = 8.0;
constexpr double kAsymptoticLimit = 25.0;

// Ascending series sum_k (-1)^k (z/2)^(2k+nu) / (k! (k+nu)!).
double series_j(int nu, double z) {
  const double h = 0.5 * z;
  double term = 1.0;
  for (int i = 1; i <= nu; ++i) term *= h / i;
  double sum = term;
  const double h2 = h * h;
  for (int k = 1; k < 200; ++k) {
    term *= -h2 / (double(k) * (k + nu));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Miller's downward recurrence normalised by J0 + 2 sum J_2k = 1.
std::array<double, 3> miller_j012(double z) {
  const int start = 2 * ((static_cast<int>(z) + 20 + static_cast<int>(std::sqrt(60.0 * z))) / 2);
  double next = 0.0;
  double cur = 1e-30;
  double even_sum = 0.0;
  std::array<double, 3> j{};
  for (int k = start; k > 0; --k) {
    const double prev = 2.0 * k / z * cur - next;
    next = cur;
    cur = prev;  // J_{k-1}
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      even_sum *= 1e-250;
      for (double& v : j) v *= 1e-250;
    }
    const int order = k - 1;
    if (order <= 2) j[order] = cur;
    if (order > 0 && order % 2 == 0) even_sum += cur;
  }
  const double norm = j[0] + 2.0 * even_sum;
  for (double& v : j) v /= norm;
  return j;
}

// Hankel expansion J_nu(z) = sqrt(2/(pi z)) (P cos chi - Q sin chi).
double asymptotic_j(int nu, double z) {
  const double mu = 4.0 * nu * nu;
  const double eightz = 8.0 * z;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * eightz);
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      default: p += term; break;
    }
    if (std::abs(term) < 1e-17) break;
  }
  const double chi = z - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * z)) * (p * std::cos(chi) - q * std::sin(chi));
}

class ZeroCache {
 public:
  BesselZero get(int n) {
    {
      std::shared_lock lock(mutex_);
      if (static_cast<std::size_t>(n) < zeros_.size() && zeros_[n] > 0.0) {
        return make(n, zeros_[n]);
      }
    }
    const double z = solve(n);
    std::unique_lock lock(mutex_);
    if (zeros_.size() <= static_cast<std::size_t>(n)) zeros_.resize(n + 1, 0.0);
    if (zeros_[n] == 0.0) zeros_[n] = z;
    return make(n, zeros_[n]);
  }

 private:
  static BesselZero make(int n, double z) { return BesselZero{n, z, z / (kPi * n)}; }

  static double solve(int n) {
    // McMahon's expansion for the n-th zero of J1.
    const double beta = (n + 0.25) * kPi;
    const double b8 = 8.0 * beta;
    double x = beta - 3.0 / b8 + 36.0 / (b8 * b8 * b8);
    double lo = x - 0.5;
    double hi = x + 0.5;
    if (lo < 1e-3) lo = 1e-3;
    double flo = bessel_j(1, lo);
    double fhi = bessel_j(1, hi);
    if (flo * fhi > 0.0) {
      throw NumericError(fmt::format("could not bracket zero {} of J1", n));
    }
    for (int iter = 0; iter < 100; ++iter) {
      const double f = bessel_j(1, x);
      if (f == 0.0) return x;
      if ((f < 0.0) == (flo < 0.0)) {
        lo = x;
        flo = f;
      } else {
        hi = x;
      }
      const double df = bessel_j(0, x) - f / x;
      double step = f / df;
      double candidate = x - step;
      if (!(candidate > lo && candidate < hi)) {
        candidate = 0.5 * (lo + hi);
        step = x - candidate;
      }
      x = candidate;
      if (std::abs(step) < 1e-15 * x) {
        return x;
      }
    }
    throw NumericError(fmt::format("J1 zero {} did not converge in 100 iterations", n));
  }

  std::shared_mutex mutex_;
  std::vector<double> zeros_;
};

ZeroCache& zero_cache() {
  static ZeroCache cache;
  return cache;
}

}  // namespace

double bessel_j(int order, double z) {
  if (order < 0 || order > 2) {
    throw DomainError(fmt::format("bessel_j supports orders 0..2, got {}", order));
  }
  if (z < 0.0) {
    const double v = bessel_j(order, -z);
    return order == 1 ? -v : v;
  }
  if (z == 0.0) return order == 0 ? 1.0 : 0.0;
  if (z < kSeriesLimit) return series_j(order, z);
  if (z < kAsymptoticLimit) return miller_j012(z)[order];
  return asymptotic_j(order, z);
}

BesselZero bessel_j1_zero(int n) {
  if (n < 1) throw DomainError(fmt::format("zero index must be >= 1, got {}", n));
  return zero_cache().get(n);
}

double mapped_eigenfunction(int n, double y, double width) {
  if (!(width > 0.0)) throw DomainError("basis width must be positive");
  if (!(y > 0.0) || !(y < width)) return 0.0;
  const BesselZero zero = bessel_j1_zero(n);
  const double norm = std::sqrt(2.0) / (width * std::abs(bessel_j(2, zero.z)));
  return norm * std::sqrt(y) * bessel_j(1, y * zero.z / width);
}

double mapped_eigenfunction_derivative(int n, double y, double width) {
  if (!(width > 0.0)) throw DomainError("basis width must be positive");
  if (!(y > 0.0) || y > width) return 0.0;
  const BesselZero zero = bessel_j1_zero(n);
  const double norm = std::sqrt(2.0) / (width * std::abs(bessel_j(2, zero.z)));
  const double k = zero.z / width;
  const double u = k * y;
  const double j1 = bessel_j(1, u);
  // J1'(u) = J0(u) - J1(u)/u
  return norm * (0.5 * j1 / std::sqrt(y) + std::sqrt(y) * k * (bessel_j(0, u) - j1 / u));
}

double mapped_eigen_energy(int n, double width, const Units& units) {
  units.validate();
  if (!(width > 0.0)) throw DomainError("basis width must be positive");
  const BesselZero zero = bessel_j1_zero(n);
  const double p = units.hbar * zero.z / width;
  return p * p / (2.0 * units.mass);
}

double MappedEigenState::value(double y) const { return mapped_eigenfunction(n, y, width); }

MappedEigenState mapped_eigen_state(int n, double width, const Units& units) {
  return MappedEigenState{n, mapped_eigen_energy(n, width, units), bessel_j1_zero(n), width};
}

}  // namespace qwell
