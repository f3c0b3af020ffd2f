#include "qwell/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>

#include <fmt/format.h>

#include "qwell/well.hpp"

namespace qwell {

GaussLegendre::GaussLegendre(int order) : nodes_(order), weights_(order) {
  if (order < 1) throw DomainError(fmt::format("Gauss-Legendre order must be >= 1, got {}", order));
  // Newton iteration on P_n from the Tricomi initial guess; roots are
  // symmetric so only half are computed.
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[i] = -x;
    nodes_[order - 1 - i] = x;
    weights_[i] = w;
    weights_[order - 1 - i] = w;
  }
  if (order % 2 == 1) nodes_[order / 2] = 0.0;
}

const GaussLegendre& gauss_legendre(int order) {
  static std::shared_mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendre>> cache;
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(order);
    if (it != cache.end()) return *it->second;
  }
  auto rule = std::make_unique<GaussLegendre>(order);
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.try_emplace(order, std::move(rule));
  return *it->second;
}

}  // namespace qwell
