#pragma once

// Sudden change of the well: overlap amplitudes between the stationary
// states of two infinite wells, the projector sum rule and the probability
// that is not accounted for by the final well's discrete spectrum.

#include <vector>

#include "qwell/well.hpp"

namespace qwell {

/// Summaries default to this many final states.
inline constexpr int kDefaultKMax = 1024;

/// Below this distance |k - n w_f/w_i| the equal-frequency form of the
/// overlap integral is used.
inline constexpr double kDegenerateIndexTol = 1e-9;

/// Signed overlap <n, initial | k, final> evaluated with the exact
/// antiderivative over the intersection of the supports.
double overlap_amplitude(int n, int k, const WellGeometry& initial, const WellGeometry& final);

/// Closed-form amplitude for [0, b] -> [0, b*alpha], alpha <= 1:
/// (-1)^(k+1) (2 k sqrt(alpha)/pi) sin(pi n alpha) / (k^2 - (n alpha)^2),
/// and sqrt(alpha) at k = n*alpha.
double shrinking_amplitude(int n, int k, double alpha);

double transition_probability(int n, int k, const WellGeometry& initial, const WellGeometry& final);

/// alpha (1 - sin(2 pi n alpha)/(2 pi n alpha)) for 0 < alpha <= 1; a final
/// well that covers the initial one (alpha >= 1) keeps all probability.
double total_probability_closed_form(int n, double alpha);

/// Partial sum of transition probabilities over k = 1..k_max.
double total_probability_sum(int n, const WellGeometry& initial, const WellGeometry& final,
                             int k_max = kDefaultKMax);

/// Asymptotic value of the terms k > k_max missing from the partial sum in
/// the shrinking case [0, b] -> [0, b*alpha]. Euler-Maclaurin on the exact
/// term k^2 / (k^2 - (n alpha)^2)^2; error O(k_max^-5).
double shrinking_sum_tail(int n, double alpha, int k_max);

/// 1 - integral of |psi_n,initial|^2 over the overlap of the supports.
double probability_deficit(int n, const WellGeometry& initial, const WellGeometry& final);

/// Dense table of amplitudes M(n, k), n = 1..n_max, k = 1..k_max.
class OverlapMatrix {
 public:
  OverlapMatrix(int n_max, int k_max, const WellGeometry& initial, const WellGeometry& final);

  int n_max() const { return n_max_; }
  int k_max() const { return k_max_; }
  const WellGeometry& initial() const { return initial_; }
  const WellGeometry& final() const { return final_; }

  double amplitude(int n, int k) const { return values_[index(n, k)]; }
  double probability(int n, int k) const {
    const double m = amplitude(n, k);
    return m * m;
  }
  double row_sum(int n) const;

 private:
  std::size_t index(int n, int k) const;

  int n_max_;
  int k_max_;
  WellGeometry initial_;
  WellGeometry final_;
  std::vector<double> values_;
};

struct TransitionSummary {
  int n = 1;
  double total_probability = 1.0;  // projector value 1 - deficit
  double deficit = 0.0;
  double partial_sum = 1.0;  // sum over k <= k_max
  int k_max = kDefaultKMax;
};

TransitionSummary summarize_transitions(int n, const WellGeometry& initial,
                                        const WellGeometry& final, int k_max = kDefaultKMax);

}  // namespace qwell
