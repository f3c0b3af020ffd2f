#pragma once

// Crank-Nicolson propagation of a particle in a well with moving walls.
//
// Mapped frame: phi(y, tau) = sqrt(alpha) psi(alpha y, t) lives on the fixed
// interval [0, b] and obeys
//   i hbar d phi/d tau = [p^2/2m - alpha alpha_dot D] phi,  D = (y p + p y)/2,
// which is unitary with Dirichlet walls at y = 0 and y = b.
//
// Lab frame: finite walls of height V on a padded box, the moving edge
// smeared over one grid cell.

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "qwell/well.hpp"

namespace qwell {

using cplx = std::complex<double>;

/// Samples at x_j = origin + j * spacing, j = 0..N. The two end samples are
/// Dirichlet nodes and always 0.
struct GridState {
  std::vector<cplx> samples;
  double origin = 0.0;
  double spacing = 0.0;
  double time = 0.0;

  std::size_t intervals() const { return samples.empty() ? 0 : samples.size() - 1; }
  double position(std::size_t j) const { return origin + spacing * static_cast<double>(j); }
  double norm() const;
};

struct TimeSample {
  double t = 0.0;
  double alpha = 1.0;
  double tau = 0.0;
  double w_nn = 1.0;  // weight left in the instantaneous level n
};

struct EvolutionReport {
  GridState final_state;                  // lab frame, at t = T
  std::optional<GridState> mapped_state;  // y frame, mapped solver only
  std::vector<double> w_table;            // k = 1..k_max onto the final well
  double remainder = 0.0;                 // norm - sum(w_table)
  double norm_drift = 0.0;
  long step_count = 0;
  double alpha_final = 1.0;
  std::vector<TimeSample> series;
};

inline constexpr int kMinGridIntervals = 256;
inline constexpr int kDefaultGridIntervals = 2048;
inline constexpr double kDefaultPhaseStep = 0.05;  // dt * E_max / hbar
inline constexpr double kMaxPhaseStep = 0.1;
inline constexpr double kMaxNormDrift = 1e-6;

enum class InitialBasis { Sine, Bessel };

struct MappedOptions {
  int grid_intervals = kDefaultGridIntervals;
  double d_tau = 0.0;  // 0: choose from kDefaultPhaseStep
  long steps = 0;      // > 0 overrides d_tau
  int k_max = 8;       // levels in the table; also sets E_max
  double width = 1.0;  // b
  InitialBasis initial = InitialBasis::Sine;
  int series_points = 200;
  Units units{};
};

/// Evolves level n of the initial well under `law`. Throws ConfigError when
/// d_tau * E_max / hbar >= kMaxPhaseStep or the grid is too coarse, and
/// NumericError when the norm drifts by more than kMaxNormDrift.
EvolutionReport evolve_mapped(int n, const MotionLaw& law, const MappedOptions& options = {});

struct LabOptions {
  double height = 1e5;  // V
  double box_left = 0.0;  // box defaults to the well trajectory padded by
  double box_right = 0.0; // a quarter width when left == right
  int grid_intervals = 4096;
  double dt = 0.0;
  long steps = 0;
  int k_max = 8;  // only sets E_max; the table holds every bound level
  double width = 1.0;
  int series_points = 200;
  Units units{};
};

inline constexpr double kMinLabDepthRatio = 1e3;
inline constexpr double kMinBoxPadDecayLengths = 5.0;

/// Lab-frame evolution of the finite-wall well [0, b alpha(t)]. w_table runs
/// over all bound levels of the final well; remainder is the continuum share.
EvolutionReport evolve_lab(int n, const MotionLaw& law, const LabOptions& options = {});

/// Instantaneous change [0, b] -> [0, b alpha] of the finite-wall well.
EvolutionReport evolve_lab_sudden(int n, double alpha, const LabOptions& options = {});

struct TransitionTable {
  std::vector<double> w;  // k = 1..k_max
  double residual = 0.0;  // norm - sum(w)
};

/// |<psi_k | psi>|^2 against the sine levels of `target` by grid quadrature.
TransitionTable transition_table(const EvolutionReport& report, const WellGeometry& target,
                                 int k_max);

/// |<chi_m | phi>|^2 for the mapped state of a report.
double bessel_projection(const EvolutionReport& report, int m, double width = 1.0);

struct ConvergenceRow {
  int grid_intervals = 0;
  long steps = 0;
  double w_nn = 0.0;
  double norm_drift = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::vector<double> ratios;  // |w_l - w_{l-1}| / |w_{l+1} - w_l|
  double observed_order = 0.0; // log2 of the last ratio
  double extrapolated = 0.0;   // Richardson, second order
};

/// Mapped-frame runs at (N, s), (2N, 2s), (4N, 4s), ... with `levels` entries.
ConvergenceReport convergence_sweep(int n, const MotionLaw& law, const MappedOptions& base,
                                    int levels = 3);

namespace detail {

/// Solves the tridiagonal system with sub-diagonal a, diagonal b and
/// super-diagonal c in place of d. a[0] and c[last] are ignored.
void solve_tridiagonal(std::span<const cplx> a, std::span<const cplx> b, std::span<const cplx> c,
                       std::span<cplx> d);

struct TridiagonalEigen {
  std::vector<double> values;
  std::vector<double> vectors;  // column-major, size rows * values.size()
  std::size_t rows = 0;
};

/// Eigenpairs of a real symmetric tridiagonal matrix, either with index
/// range [first, last] (1-based) or with eigenvalues in (lower, upper].
TridiagonalEigen tridiagonal_eigen_index(std::vector<double> diag, std::vector<double> off,
                                         int first, int last);
TridiagonalEigen tridiagonal_eigen_range(std::vector<double> diag, std::vector<double> off,
                                         double lower, double upper);

}  // namespace detail

}  // namespace qwell
