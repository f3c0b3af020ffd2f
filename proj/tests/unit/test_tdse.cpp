#include <cmath>
#include <vector>

#include "doctest.h"
#include "qwell/errors.hpp"
#include "qwell/regularized.hpp"
#include "qwell/sudden.hpp"
#include "qwell/tdse.hpp"

using namespace qwell;

namespace {

const double kE1 = kPi * kPi / 2;

MotionLaw static_law(double duration) { return MotionLaw::table({{0, 1}, {duration, 1}}); }

// Dense Gaussian elimination with partial pivoting.
std::vector<cplx> dense_solve(std::vector<std::vector<cplx>> m, std::vector<cplx> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
    }
    std::swap(m[p], m[c]);
    std::swap(rhs[p], rhs[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const cplx f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  std::vector<cplx> x(n);
  for (std::size_t i = n; i-- > 0;) {
    cplx s = rhs[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= m[i][k] * x[k];
    x[i] = s / m[i][i];
  }
  return x;
}

}  // namespace

TEST_CASE("tridiagonal solve matches dense elimination") {
  const int n = 12;
  std::vector<cplx> a(n), b(n), c(n), d(n);
  std::vector<std::vector<cplx>> m(n, std::vector<cplx>(n));
  for (int i = 0; i < n; ++i) {
    a[i] = {0.3 * i - 1.0, 0.2};
    b[i] = {4.0 + 0.1 * i, -0.5 * i};
    c[i] = {1.0, 0.7 - 0.05 * i};
    d[i] = {std::sin(i * 1.0), std::cos(i * 2.0)};
    m[i][i] = b[i];
    if (i > 0) m[i][i - 1] = a[i];
    if (i + 1 < n) m[i][i + 1] = c[i];
  }
  const auto want = dense_solve(m, d);
  detail::solve_tridiagonal(a, b, c, d);
  for (int i = 0; i < n; ++i) CHECK(std::abs(d[i] - want[i]) < 1e-13);
}

TEST_CASE("tridiagonal eigenpairs of the discrete Laplacian") {
  const int n = 200;
  std::vector<double> diag(n, 2.0), off(n - 1, -1.0);
  const auto low = detail::tridiagonal_eigen_index(diag, off, 1, 4);
  REQUIRE(low.values.size() == 4);
  CHECK(low.rows == n);
  for (int k = 1; k <= 4; ++k) {
    CHECK(low.values[k - 1] == doctest::Approx(2.0 - 2.0 * std::cos(k * kPi / (n + 1))).epsilon(1e-12));
    // eigenvector is a sampled sine up to sign
    double dot = 0.0, nrm = 0.0;
    for (int j = 0; j < n; ++j) {
      const double s = std::sin(k * kPi * (j + 1) / (n + 1));
      dot += s * low.vectors[(k - 1) * n + j];
      nrm += s * s;
    }
    CHECK(std::abs(dot) / std::sqrt(nrm) == doctest::Approx(1.0).epsilon(1e-10));
  }
  const double upper = 2.0 - 2.0 * std::cos(10.5 * kPi / (n + 1));
  const auto range = detail::tridiagonal_eigen_range(diag, off, -1.0, upper);
  CHECK(range.values.size() == 10);
  CHECK_THROWS_AS(detail::tridiagonal_eigen_index(diag, off, 0, 3), DomainError);
}

TEST_CASE("static well keeps the initial level") {
  MappedOptions opt;
  opt.grid_intervals = 512;
  const auto r = evolve_mapped(2, static_law(1.0 / kE1), opt);
  CHECK(r.w_table[1] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.norm_drift < 1e-10);
  CHECK(r.alpha_final == 1.0);
  CHECK(r.series.back().w_nn == doctest::Approx(1.0).epsilon(1e-8));

  LabOptions lab;
  lab.grid_intervals = 2048;
  const auto l = evolve_lab(1, static_law(0.2 / kE1), lab);
  CHECK(l.w_table[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(l.norm_drift < 1e-10);
}

TEST_CASE("fast motion reproduces the sudden amplitudes") {
  MappedOptions opt;
  opt.grid_intervals = 1024;
  const auto r = evolve_mapped(1, MotionLaw::linear(0.5, 1e-3 / kE1), opt);
  for (int k = 1; k <= 5; ++k) {
    const double want = std::pow(shrinking_amplitude(1, k, 0.5), 2);
    CHECK(r.w_table[k - 1] == doctest::Approx(want).epsilon(1e-2));
  }
  // the compressed state stays in the well; what is missing sits above k_max
  double low = 0.0;
  for (int k = 1; k <= 8; ++k) low += std::pow(shrinking_amplitude(1, k, 0.5), 2);
  CHECK(r.remainder == doctest::Approx(1.0 - low).epsilon(1e-2));
}

TEST_CASE("slow motion stays in the instantaneous level") {
  MappedOptions opt;
  opt.grid_intervals = 512;
  const auto r = evolve_mapped(1, MotionLaw::linear(0.5, 10.0 / kE1), opt);
  CHECK(r.w_table[0] > 0.99);
  CHECK(r.series.size() >= 2);
  for (std::size_t i = 1; i < r.series.size(); ++i) {
    CHECK(r.series[i].t > r.series[i - 1].t);
    CHECK(r.series[i].w_nn > 0.99);
  }
}

TEST_CASE("table laws and the Bessel initial state") {
  MappedOptions opt;
  opt.grid_intervals = 512;
  const auto law = MotionLaw::table({{0, 1}, {0.05, 0.8}, {0.1, 1.2}});
  const auto r = evolve_mapped(1, law, opt);
  CHECK(r.alpha_final == doctest::Approx(1.2));
  CHECK(r.norm_drift < 1e-8);
  const auto t = transition_table(r, WellGeometry::scaled(1.2), 8);
  for (int k = 0; k < 8; ++k) CHECK(t.w[k] == doctest::Approx(r.w_table[k]).epsilon(1e-10));
  CHECK(t.residual > -1e-6);

  opt.initial = InitialBasis::Bessel;
  const auto b = evolve_mapped(1, static_law(1e-6 / kE1), opt);
  CHECK(bessel_projection(b, 1) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(bessel_projection(b, 2) < 1e-8);
  CHECK_THROWS_AS(bessel_projection(evolve_lab_sudden(1, 0.5, {}), 1), DomainError);
}

TEST_CASE("lab sudden change matches the bound-state sum") {
  LabOptions opt;
  opt.height = 1e4;
  opt.grid_intervals = 4096;
  const auto r = evolve_lab_sudden(1, 0.5, opt);
  double sum = 0.0;
  for (double w : r.w_table) sum += w;
  const double want = bound_overlap_sum(1, RegularizedWell(1e4, 1.0), RegularizedWell(1e4, 0.5));
  CHECK(sum == doctest::Approx(want).epsilon(1e-3));
  CHECK(r.remainder == doctest::Approx(1.0 - sum).epsilon(1e-9));
}

TEST_CASE("lab and mapped frames converge together as the walls get higher") {
  const auto law = MotionLaw::linear(0.5, 1.0 / kE1);
  const auto mapped = evolve_mapped(1, law);
  std::vector<double> worst;
  for (double V : {1e5, 1e6, 1e7}) {
    LabOptions opt;
    opt.height = V;
    const auto lab = evolve_lab(1, law, opt);
    double w = 0.0;
    for (int k = 1; k <= 5; ++k) {
      w = std::max(w, std::abs(lab.w_table[k - 1] - mapped.w_table[k - 1]) / mapped.w_table[k - 1]);
    }
    CAPTURE(V);
    CHECK(lab.w_table[0] == doctest::Approx(mapped.w_table[0]).epsilon(2e-2));
    worst.push_back(w);
  }
  CHECK(worst[1] < worst[0]);
  CHECK(worst[2] < worst[1]);
  CHECK(worst[2] < 2e-2);
}

TEST_CASE("second-order convergence") {
  MappedOptions base;
  base.grid_intervals = 256;
  base.steps = 1024;
  base.k_max = 2;
  const auto rep = convergence_sweep(1, MotionLaw::linear(0.75, 1.0 / kE1), base, 3);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[1].grid_intervals == 512);
  CHECK(rep.rows[2].steps == 4096);
  CHECK(rep.observed_order == doctest::Approx(2.0).epsilon(0.25));
  CHECK(std::abs(rep.extrapolated - rep.rows[2].w_nn) < std::abs(rep.rows[2].w_nn - rep.rows[1].w_nn));
  CHECK_THROWS_AS(convergence_sweep(1, MotionLaw::linear(0.75, 1.0), base, 2), ConfigError);
}

TEST_CASE("configuration errors") {
  const auto law = MotionLaw::linear(0.5, 1.0 / kE1);
  MappedOptions coarse;
  coarse.grid_intervals = 100;
  CHECK_THROWS_AS(evolve_mapped(1, law, coarse), ConfigError);
  MappedOptions big_step;
  big_step.d_tau = 1.0;
  CHECK_THROWS_AS(evolve_mapped(1, law, big_step), ConfigError);
  CHECK_THROWS_AS(evolve_mapped(0, law), DomainError);

  LabOptions shallow;
  shallow.height = 100.0;
  CHECK_THROWS_AS(evolve_lab(1, law, shallow), ConfigError);
  LabOptions tight;
  tight.box_left = -0.001;
  tight.box_right = 1.001;
  CHECK_THROWS_AS(evolve_lab(1, law, tight), ConfigError);
  LabOptions few;
  few.grid_intervals = 64;
  CHECK_THROWS_AS(evolve_lab_sudden(1, 0.5, few), ConfigError);
}
