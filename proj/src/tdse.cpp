#include "qwell/tdse.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <lapacke.h>

#include "qwell/bessel.hpp"
#include "qwell/errors.hpp"
#include "qwell/mapped_frame.hpp"

namespace qwell {

double GridState::norm() const {
  double sum = 0.0;
  for (const cplx& v : samples) sum += std::norm(v);
  return sum * spacing;
}

namespace detail {

void solve_tridiagonal(std::span<const cplx> a, std::span<const cplx> b, std::span<const cplx> c,
                       std::span<cplx> d) {
  const std::size_t n = d.size();
  if (n == 0) return;
  // One real division per pivot; the recurrence is latency bound.
  const auto inv = [](cplx z) {
    const double s = 1.0 / (z.real() * z.real() + z.imag() * z.imag());
    return cplx{z.real() * s, -z.imag() * s};
  };
  std::vector<cplx> cp(n);
  cplx r = inv(b[0]);
  cp[0] = c[0] * r;
  d[0] *= r;
  for (std::size_t i = 1; i < n; ++i) {
    r = inv(b[i] - a[i] * cp[i - 1]);
    cp[i] = (i + 1 < n) ? c[i] * r : cplx{};
    d[i] = (d[i] - a[i] * d[i - 1]) * r;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= cp[i] * d[i + 1];
}

namespace {

// Number of eigenvalues below sigma (Sturm count from the LDL^T pivots).
int count_below(const std::vector<double>& diag, const std::vector<double>& off, double sigma) {
  int count = 0;
  double q = diag[0] - sigma;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < diag.size(); ++i) {
    if (q == 0.0) q = 1e-300;
    q = diag[i] - sigma - off[i - 1] * off[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace

TridiagonalEigen tridiagonal_eigen_index(std::vector<double> diag, std::vector<double> off,
                                         int first, int last) {
  const auto n = static_cast<lapack_int>(diag.size());
  if (first < 1 || last < first || last > n) {
    throw DomainError(fmt::format("eigen index range [{}, {}] invalid for size {}", first, last, n));
  }
  off.resize(diag.size(), 0.0);
  TridiagonalEigen out;
  out.rows = diag.size();
  const int count = last - first + 1;
  out.values.resize(count);
  out.vectors.resize(static_cast<std::size_t>(count) * out.rows);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), off.data(),
                                         0.0, 0.0, first, last, 0.0, &found, out.values.data(),
                                         out.vectors.data(), n, support.data());
  if (info != 0 || found != count) {
    throw NumericError(fmt::format("dstevr failed (info {}, found {} of {})", info, found, count));
  }
  return out;
}

TridiagonalEigen tridiagonal_eigen_range(std::vector<double> diag, std::vector<double> off,
                                         double lower, double upper) {
  off.resize(diag.size(), 0.0);
  const int first = count_below(diag, off, lower) + 1;
  const int last = count_below(diag, off, upper);
  if (last < first) {
    TridiagonalEigen empty;
    empty.rows = diag.size();
    return empty;
  }
  return tridiagonal_eigen_index(std::move(diag), std::move(off), first, last);
}

}  // namespace detail

namespace {

double sine_projection(std::span<const cplx> samples, double spacing, double width, int k,
                       double origin = 0.0) {
  const WellGeometry geometry(origin, width);
  cplx sum{};
  for (std::size_t j = 1; j + 1 < samples.size(); ++j) {
    sum += eigenfunction_value(k, origin + spacing * static_cast<double>(j), geometry) * samples[j];
  }
  return std::norm(sum * spacing);
}

// Splits [nodes.front(), nodes.back()] into per-segment uniform steps.
std::vector<long> distribute_steps(const std::vector<double>& nodes, double step, long total) {
  const double span = nodes.back() - nodes.front();
  std::vector<long> steps(nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double len = nodes[i + 1] - nodes[i];
    const double want = total > 0 ? static_cast<double>(total) * len / span : len / step;
    steps[i] = std::max<long>(1, static_cast<long>(std::ceil(want - 1e-9)));
  }
  return steps;
}

void check_drift(double drift, long steps) {
  if (!(drift <= kMaxNormDrift)) {
    throw NumericError(fmt::format("norm drift {:.3e} after {} steps exceeds {:.0e}", drift, steps,
                                   kMaxNormDrift));
  }
}

}  // namespace

EvolutionReport evolve_mapped(int n, const MotionLaw& law, const MappedOptions& opt) {
  opt.units.validate();
  if (n < 1) throw DomainError(fmt::format("level index must be >= 1, got {}", n));
  if (opt.grid_intervals < kMinGridIntervals) {
    throw ConfigError(fmt::format("grid needs >= {} intervals, got {}", kMinGridIntervals,
                                  opt.grid_intervals));
  }
  if (opt.k_max < 1) throw ConfigError(fmt::format("k_max must be >= 1, got {}", opt.k_max));
  if (!(opt.width > 0.0)) throw DomainError(fmt::format("width must be positive, got {}", opt.width));

  const double hbar = opt.units.hbar;
  const double mass = opt.units.mass;
  const int big_n = opt.grid_intervals;
  const double h = opt.width / big_n;
  const std::size_t inner = static_cast<std::size_t>(big_n) - 1;

  const MappedClock clock(law);
  const double tau_final = clock.tau_final();
  const double e_max = eigen_energy(std::max(opt.k_max, n), WellGeometry(0.0, opt.width), opt.units);
  const double dilation_max = law.max_alpha() * law.max_rate();

  double step = kDefaultPhaseStep * hbar / e_max;
  if (dilation_max > 0.0) step = std::min(step, kDefaultPhaseStep / dilation_max);
  if (opt.d_tau > 0.0) step = opt.d_tau;

  std::vector<double> nodes = clock.node_taus();
  const std::vector<long> seg_steps = distribute_steps(nodes, step, opt.steps);
  for (std::size_t s = 0; s < seg_steps.size(); ++s) {
    const double d = (nodes[s + 1] - nodes[s]) / static_cast<double>(seg_steps[s]);
    if (d * e_max / hbar >= kMaxPhaseStep) {
      throw ConfigError(fmt::format(
          "d_tau = {:.3e} does not resolve E_max = {:.4g} (d_tau E_max / hbar = {:.3g} >= {})", d,
          e_max, d * e_max / hbar, kMaxPhaseStep));
    }
  }

  std::vector<cplx> phi(static_cast<std::size_t>(big_n) + 1, cplx{});
  for (std::size_t j = 1; j <= inner; ++j) {
    const double y = h * static_cast<double>(j);
    phi[j] = opt.initial == InitialBasis::Sine
                 ? eigenfunction_value(n, y, WellGeometry(0.0, opt.width))
                 : mapped_eigenfunction(n, y, opt.width);
  }
  if (opt.initial == InitialBasis::Bessel) {
    GridState tmp{phi, 0.0, h, 0.0};
    const double scale = 1.0 / std::sqrt(tmp.norm());
    for (cplx& v : phi) v *= scale;
  }
  const double norm0 = GridState{phi, 0.0, h, 0.0}.norm();

  // Off-diagonal of D without the -i: hbar (y_j + y_{j+1}) / (4h).
  std::vector<double> dil(inner);
  for (std::size_t j = 1; j <= inner; ++j) {
    dil[j - 1] = hbar * (2.0 * static_cast<double>(j) + 1.0) / 4.0;
  }
  const double kin_diag = hbar * hbar / (mass * h * h);
  const double kin_off = -0.5 * hbar * hbar / (mass * h * h);

  long total_steps = 0;
  for (long s : seg_steps) total_steps += s;
  const long stride = std::max<long>(1, total_steps / std::max(1, opt.series_points));

  EvolutionReport report;
  std::span<const cplx> inner_view(phi);
  auto record = [&](double tau) {
    const MappedTime m = clock.at_tau(std::min(tau, tau_final));
    report.series.push_back(
        {m.t, m.alpha, m.tau, sine_projection(inner_view, h, opt.width, n)});
  };
  record(0.0);

  std::vector<cplx> lower(inner), diag(inner, cplx{1.0, 0.0}), upper(inner), rhs(inner);
  long done = 0;
  for (std::size_t s = 0; s < seg_steps.size(); ++s) {
    const double d_tau = (nodes[s + 1] - nodes[s]) / static_cast<double>(seg_steps[s]);
    const cplx c{0.0, 0.5 * d_tau / hbar};
    std::fill(diag.begin(), diag.end(), 1.0 + c * kin_diag);
    const cplx diag_rhs = 1.0 - c * kin_diag;
    for (long i = 0; i < seg_steps[s]; ++i) {
      const double tau_mid = nodes[s] + (static_cast<double>(i) + 0.5) * d_tau;
      const MappedTime m = clock.at_tau(tau_mid);
      const double g = m.alpha * m.rate;
      // H_{j,j+1} = kin_off + i g dil_j and H_{j+1,j} = conj; times c = i cr.
      const double cr = c.imag();
      for (std::size_t j = 0; j < inner; ++j) {
        upper[j] = {-cr * g * dil[j], cr * kin_off};
        lower[j] = j > 0 ? cplx{cr * g * dil[j - 1], cr * kin_off} : cplx{};
      }
      for (std::size_t j = 0; j < inner; ++j) {
        const std::size_t y = j + 1;
        cplx v = diag_rhs * phi[y];
        if (j > 0) v -= lower[j] * phi[y - 1];
        if (j + 1 < inner) v -= upper[j] * phi[y + 1];
        rhs[j] = v;
      }
      detail::solve_tridiagonal(lower, diag, upper, rhs);
      std::copy(rhs.begin(), rhs.end(), phi.begin() + 1);
      ++done;
      if (done % stride == 0 || done == total_steps) {
        record(nodes[s] + static_cast<double>(i + 1) * d_tau);
      }
    }
  }

  GridState mapped{phi, 0.0, h, tau_final};
  report.norm_drift = std::abs(mapped.norm() - norm0);
  report.step_count = total_steps;
  check_drift(report.norm_drift, total_steps);

  const double af = law.alpha_final();
  report.alpha_final = af;
  GridState lab{phi, 0.0, af * h, law.duration()};
  for (cplx& v : lab.samples) v /= std::sqrt(af);
  double total = 0.0;
  for (int k = 1; k <= opt.k_max; ++k) {
    const double w = sine_projection(phi, h, opt.width, k);
    report.w_table.push_back(w);
    total += w;
  }
  report.remainder = mapped.norm() - total;
  report.final_state = std::move(lab);
  report.mapped_state = std::move(mapped);
  return report;
}

namespace {

struct LabGrid {
  double origin;
  double h;
  int intervals;
  double height;
  double hbar;
  double mass;

  double x(std::size_t j) const { return origin + h * static_cast<double>(j); }

  // Fraction of the cell around x_j outside [left, right], times V.
  double potential(std::size_t j, double left, double right) const {
    const double lo = x(j) - 0.5 * h;
    const double hi = x(j) + 0.5 * h;
    const double in = std::max(0.0, std::min(hi, right) - std::max(lo, left));
    return height * (1.0 - in / h);
  }

  std::vector<double> diagonal(double left, double right) const {
    std::vector<double> d(static_cast<std::size_t>(intervals) - 1);
    const double kin = hbar * hbar / (mass * h * h);
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = kin + potential(j + 1, left, right);
    return d;
  }

  std::vector<double> off() const {
    return std::vector<double>(static_cast<std::size_t>(intervals) - 1,
                               -0.5 * hbar * hbar / (mass * h * h));
  }
};

LabGrid make_lab_grid(double max_right, const LabOptions& opt) {
  opt.units.validate();
  if (!(opt.width > 0.0)) throw DomainError(fmt::format("width must be positive, got {}", opt.width));
  const double e1 = eigen_energy(1, WellGeometry(0.0, opt.width), opt.units);
  if (!(opt.height >= kMinLabDepthRatio * e1)) {
    throw ConfigError(fmt::format("V = {:.4g} below {:.0e} x E1 = {:.4g}", opt.height,
                                  kMinLabDepthRatio, kMinLabDepthRatio * e1));
  }
  if (opt.grid_intervals < kMinGridIntervals) {
    throw ConfigError(fmt::format("grid needs >= {} intervals, got {}", kMinGridIntervals,
                                  opt.grid_intervals));
  }
  double left = opt.box_left;
  double right = opt.box_right;
  if (left == right) {
    left = -0.25 * opt.width;
    right = max_right + 0.25 * opt.width;
  }
  const double decay = opt.units.hbar / std::sqrt(2.0 * opt.units.mass * opt.height);
  const double pad = kMinBoxPadDecayLengths * decay;
  if (left > -pad || right < max_right + pad) {
    throw ConfigError(fmt::format(
        "box [{}, {}] must contain the well trajectory [0, {}] padded by {:.3g}", left, right,
        max_right, pad));
  }
  return {left, (right - left) / opt.grid_intervals, opt.grid_intervals, opt.height,
          opt.units.hbar, opt.units.mass};
}

// Grid eigenstate `n` of the well [left, right], normalised, sign fixed by
// the overlap with the infinite-well sine.
std::vector<cplx> lab_eigenstate(const LabGrid& grid, int n, double left, double right) {
  const auto eig = detail::tridiagonal_eigen_index(grid.diagonal(left, right), grid.off(), n, n);
  const WellGeometry geometry(left, right - left);
  std::vector<cplx> psi(static_cast<std::size_t>(grid.intervals) + 1, cplx{});
  double dot = 0.0;
  for (std::size_t j = 0; j < eig.rows; ++j) {
    dot += eig.vectors[j] * eigenfunction_value(n, grid.x(j + 1), geometry);
  }
  const double scale = (dot < 0.0 ? -1.0 : 1.0) / std::sqrt(grid.h);
  for (std::size_t j = 0; j < eig.rows; ++j) psi[j + 1] = scale * eig.vectors[j];
  return psi;
}

void project_bound(const LabGrid& grid, std::span<const cplx> psi, double left, double right,
                   EvolutionReport& report) {
  const auto eig =
      detail::tridiagonal_eigen_range(grid.diagonal(left, right), grid.off(), -1.0, grid.height);
  const double norm = GridState{std::vector<cplx>(psi.begin(), psi.end()), grid.origin, grid.h, 0}
                          .norm();
  double total = 0.0;
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    cplx sum{};
    for (std::size_t j = 0; j < eig.rows; ++j) sum += eig.vectors[k * eig.rows + j] * psi[j + 1];
    const double w = std::norm(sum) * grid.h;  // unit vectors vs. h-normalised psi
    report.w_table.push_back(w);
    total += w;
  }
  report.remainder = norm - total;
}

}  // namespace

EvolutionReport evolve_lab(int n, const MotionLaw& law, const LabOptions& opt) {
  if (n < 1) throw DomainError(fmt::format("level index must be >= 1, got {}", n));
  const double b = opt.width;
  const LabGrid grid = make_lab_grid(b * law.max_alpha(), opt);
  const double hbar = opt.units.hbar;
  const std::size_t inner = static_cast<std::size_t>(grid.intervals) - 1;

  const double e_max =
      eigen_energy(std::max(opt.k_max, n), WellGeometry(0.0, b * law.min_alpha()), opt.units);
  double step = kDefaultPhaseStep * hbar / e_max;
  if (opt.dt > 0.0) step = opt.dt;
  std::vector<double> nodes;
  for (const auto& s : law.samples()) nodes.push_back(s.t);
  const std::vector<long> seg_steps = distribute_steps(nodes, step, opt.steps);
  for (std::size_t s = 0; s < seg_steps.size(); ++s) {
    const double d = (nodes[s + 1] - nodes[s]) / static_cast<double>(seg_steps[s]);
    if (d * e_max / hbar >= kMaxPhaseStep) {
      throw ConfigError(fmt::format(
          "dt = {:.3e} does not resolve E_max = {:.4g} (dt E_max / hbar = {:.3g} >= {})", d, e_max,
          d * e_max / hbar, kMaxPhaseStep));
    }
  }

  std::vector<cplx> psi = lab_eigenstate(grid, n, 0.0, b);
  const double norm0 = GridState{psi, grid.origin, grid.h, 0.0}.norm();

  long total_steps = 0;
  for (long s : seg_steps) total_steps += s;
  const long stride = std::max<long>(1, total_steps / std::max(1, opt.series_points));

  EvolutionReport report;
  const MappedClock clock(law);
  auto record = [&](double t) {
    t = std::min(t, law.duration());
    const double a = law.alpha_at(t);
    const auto ref = lab_eigenstate(grid, n, 0.0, b * a);
    cplx sum{};
    for (std::size_t j = 1; j <= inner; ++j) sum += ref[j] * psi[j];
    report.series.push_back({t, a, clock.at_t(t).tau, std::norm(sum * grid.h)});
  };
  record(0.0);

  const double off = -0.5 * hbar * hbar / (opt.units.mass * grid.h * grid.h);
  std::vector<cplx> lower(inner), diag(inner), upper(inner), rhs(inner);
  long done = 0;
  for (std::size_t s = 0; s < seg_steps.size(); ++s) {
    const double dt = (nodes[s + 1] - nodes[s]) / static_cast<double>(seg_steps[s]);
    const cplx c{0.0, 0.5 * dt / hbar};
    std::fill(lower.begin(), lower.end(), c * off);
    std::fill(upper.begin(), upper.end(), c * off);
    for (long i = 0; i < seg_steps[s]; ++i) {
      const double t_mid = nodes[s] + (static_cast<double>(i) + 0.5) * dt;
      const std::vector<double> h_diag = grid.diagonal(0.0, b * law.alpha_at(t_mid));
      for (std::size_t j = 0; j < inner; ++j) {
        diag[j] = 1.0 + c * h_diag[j];
        cplx v = (1.0 - c * h_diag[j]) * psi[j + 1];
        v -= c * off * (psi[j] + psi[j + 2]);
        rhs[j] = v;
      }
      detail::solve_tridiagonal(lower, diag, upper, rhs);
      std::copy(rhs.begin(), rhs.end(), psi.begin() + 1);
      ++done;
      if (done % stride == 0 || done == total_steps) {
        record(nodes[s] + static_cast<double>(i + 1) * dt);
      }
    }
  }

  GridState final{psi, grid.origin, grid.h, law.duration()};
  report.norm_drift = std::abs(final.norm() - norm0);
  report.step_count = total_steps;
  check_drift(report.norm_drift, total_steps);
  report.alpha_final = law.alpha_final();
  project_bound(grid, psi, 0.0, b * law.alpha_final(), report);
  report.final_state = std::move(final);
  return report;
}

EvolutionReport evolve_lab_sudden(int n, double alpha, const LabOptions& opt) {
  if (n < 1) throw DomainError(fmt::format("level index must be >= 1, got {}", n));
  if (!(alpha > 0.0)) throw DomainError(fmt::format("alpha must be positive, got {}", alpha));
  const double b = opt.width;
  const LabGrid grid = make_lab_grid(b * std::max(1.0, alpha), opt);
  std::vector<cplx> psi = lab_eigenstate(grid, n, 0.0, b);
  EvolutionReport report;
  report.alpha_final = alpha;
  report.series.push_back({0.0, alpha, 0.0, 0.0});
  project_bound(grid, psi, 0.0, b * alpha, report);
  if (n <= static_cast<int>(report.w_table.size())) report.series.back().w_nn = report.w_table[n - 1];
  report.final_state = GridState{std::move(psi), grid.origin, grid.h, 0.0};
  return report;
}

TransitionTable transition_table(const EvolutionReport& report, const WellGeometry& target,
                                 int k_max) {
  const GridState& s = report.final_state;
  TransitionTable out;
  double total = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    cplx sum{};
    for (std::size_t j = 1; j + 1 < s.samples.size(); ++j) {
      sum += eigenfunction_value(k, s.position(j), target) * s.samples[j];
    }
    const double w = std::norm(sum * s.spacing);
    out.w.push_back(w);
    total += w;
  }
  out.residual = s.norm() - total;
  return out;
}

double bessel_projection(const EvolutionReport& report, int m, double width) {
  if (!report.mapped_state) throw DomainError("report carries no mapped-frame state");
  const GridState& s = *report.mapped_state;
  cplx sum{};
  for (std::size_t j = 1; j + 1 < s.samples.size(); ++j) {
    sum += mapped_eigenfunction(m, s.position(j), width) * s.samples[j];
  }
  return std::norm(sum * s.spacing);
}

ConvergenceReport convergence_sweep(int n, const MotionLaw& law, const MappedOptions& base,
                                    int levels) {
  if (levels < 3) throw ConfigError(fmt::format("need >= 3 refinement levels, got {}", levels));
  MappedOptions opt = base;
  if (opt.steps <= 0) opt.steps = 4L * opt.grid_intervals;
  opt.d_tau = 0.0;
  opt.series_points = 1;
  ConvergenceReport out;
  for (int l = 0; l < levels; ++l) {
    const EvolutionReport r = evolve_mapped(n, law, opt);
    out.rows.push_back({opt.grid_intervals, r.step_count, r.w_table.at(n - 1), r.norm_drift});
    opt.grid_intervals *= 2;
    opt.steps *= 2;
  }
  for (std::size_t l = 2; l < out.rows.size(); ++l) {
    const double e0 = std::abs(out.rows[l - 1].w_nn - out.rows[l - 2].w_nn);
    const double e1 = std::abs(out.rows[l].w_nn - out.rows[l - 1].w_nn);
    out.ratios.push_back(e0 / e1);
  }
  out.observed_order = std::log2(out.ratios.back());
  const double fine = out.rows.back().w_nn;
  const double mid = out.rows[out.rows.size() - 2].w_nn;
  out.extrapolated = fine + (fine - mid) / 3.0;
  return out;
}

}  // namespace qwell
