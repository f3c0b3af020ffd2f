#include <cmath>
#include <sstream>
#include <iostream>

#include "doctest.h"
#include "qwell/errors.hpp"
#include "qwell/regularized.hpp"
#include "qwell/sudden.hpp"

using namespace qwell;

namespace {

double simpson(auto f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Restores std::clog after capturing it.
struct ClogCapture {
  std::ostringstream text;
  std::streambuf* old = std::clog.rdbuf(text.rdbuf());
  ~ClogCapture() { std::clog.rdbuf(old); }
};

}  // namespace

TEST_CASE("level count") {
  for (double V : {1e-6, 1.0, 50.0, 1e3, 1e5}) {
    for (double w : {0.5, 1.0, 2.0}) {
      const RegularizedWell well(V, w);
      const int want = 1 + static_cast<int>(std::floor(std::sqrt(2 * V) * w / kPi));
      CHECK(count_bound_states(well) == want);
      CHECK(static_cast<int>(bound_levels(well).size()) == want);
    }
  }
  CHECK(count_bound_states(RegularizedWell(1e-8, 1.0)) == 1);
  const Units u{2.0, 0.5};
  CHECK(count_bound_states(RegularizedWell(100.0, 1.0), u) ==
        1 + static_cast<int>(std::floor(std::sqrt(2 * 0.5 * 100.0) / (2.0 * kPi))));
}

TEST_CASE("levels satisfy the matching conditions") {
  const RegularizedWell well(500.0, 1.3, -0.2);
  const auto levels = bound_levels(well);
  double last = -1.0;
  for (const auto& l : levels) {
    CHECK(l.energy > last);
    last = l.energy;
    CHECK(l.energy < well.height());
    CHECK(l.xi == doctest::Approx(l.energy / well.height()));
    CHECK(l.wavenumber == doctest::Approx(std::sqrt(2 * l.energy)));
    CHECK(l.decay == doctest::Approx(std::sqrt(2 * (well.height() - l.energy))));
    const double half = 0.5 * l.wavenumber * well.width();
    // even: k tan(k L/2) = kappa, odd: -k cot(k L/2) = kappa
    const double lhs = (l.parity == Parity::Even) ? l.wavenumber * std::tan(half)
                                                   : -l.wavenumber / std::tan(half);
    CHECK(lhs == doctest::Approx(l.decay).epsilon(1e-9));
    CHECK((l.parity == Parity::Even) == (l.n % 2 == 1));
  }
}

TEST_CASE("eigenfunctions are normalised and continuous") {
  const RegularizedWell well(200.0, 1.0, 0.5);
  for (const auto& l : bound_levels(well)) {
    const double reach = 40.0 / l.decay;
    const double norm = simpson(
        [&](double x) { return std::pow(bound_wavefunction_value(l, well, x), 2); },
        well.left() - reach, well.right() + reach, 200000);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
    const double e = 1e-9;
    for (double edge : {well.left(), well.right()}) {
      CHECK(bound_wavefunction_value(l, well, edge - e) ==
            doctest::Approx(bound_wavefunction_value(l, well, edge + e)).epsilon(1e-6));
      CHECK(std::abs(bound_wavefunction_value(l, well, edge)) ==
            doctest::Approx(l.edge_value).epsilon(1e-9));
    }
    CHECK(bound_wavefunction_value(l, well, well.left() + 1e-4) > 0.0);
  }
}

TEST_CASE("deep well approaches the sine well") {
  const RegularizedWell well(1e8, 1.0);
  const auto levels = bound_levels(well);
  const WellGeometry g(0.0, 1.0);
  for (int n = 1; n <= 3; ++n) {
    CHECK(levels[n - 1].energy == doctest::Approx(eigen_energy(n, g)).epsilon(1e-3));
    CHECK(bound_wavefunction_value(levels[n - 1], well, 0.37) ==
          doctest::Approx(eigenfunction_value(n, 0.37, g)).epsilon(1e-3));
  }
}

TEST_CASE("overlaps against Simpson") {
  const RegularizedWell a(300.0, 1.0);
  const RegularizedWell b(300.0, 0.6, 0.1);
  const auto la = bound_levels(a);
  const auto lb = bound_levels(b);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < lb.size(); ++k) {
      const double lo = -40.0 / std::min(la[i].decay, lb[k].decay);
      const double want = simpson(
          [&](double x) {
            return bound_wavefunction_value(la[i], a, x) * bound_wavefunction_value(lb[k], b, x);
          },
          lo, 1.0 - lo, 400000);
      CHECK(bound_overlap(la[i], a, lb[k], b) == doctest::Approx(want).scale(1.0).epsilon(1e-9));
    }
  }
  CHECK(bound_overlap(la[0], a, la[0], a) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(bound_overlap(la[0], a, la[1], a) == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
}

TEST_CASE("bound sum approaches the infinite-well projector") {
  const RegularizedWell a(1e6, 1.0);
  const RegularizedWell b(1e6, 0.5);
  const double sum = bound_overlap_sum(1, a, b);
  CHECK(sum == doctest::Approx(total_probability_closed_form(1, 0.5)).epsilon(2e-2));
  CHECK(sum < 1.0);
  // the expanded well keeps almost everything
  const RegularizedWell wide(1e6, 2.0);
  CHECK(bound_overlap_sum(1, a, wide) == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("bound sum preconditions") {
  const RegularizedWell a(1e4, 1.0);
  CHECK_THROWS_AS(bound_overlap_sum(1, a, RegularizedWell(1e3, 0.5)), DomainError);
  CHECK_THROWS_AS(bound_overlap_sum(1, RegularizedWell(40.0, 1.0), RegularizedWell(40.0, 0.5)),
                  DomainError);
  CHECK_THROWS_AS(bound_overlap_sum(500, a, RegularizedWell(1e4, 0.5)), DomainError);
  CHECK_THROWS_AS(RegularizedWell(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(RegularizedWell(1.0, -1.0), DomainError);
  ClogCapture capture;
  const RegularizedWell shallow(300.0, 1.0);
  CHECK(shallow.depth_ratio() == doctest::Approx(300.0 / (kPi * kPi / 2)));
  bound_overlap_sum(1, shallow, RegularizedWell(300.0, 0.9));
  CHECK(capture.text.str().find("warning") != std::string::npos);
}
