#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <random>

#include "doctest.h"
#include "qwell/bessel.hpp"
#include "qwell/errors.hpp"
#include "qwell/mapped_frame.hpp"

using namespace qwell;
namespace bm = boost::math;

namespace {

// chi_n and chi_n' from Boost Bessel functions.
double chi(int n, double y) {
  const double z = bm::cyl_bessel_j_zero(1.0, n);
  return std::sqrt(2.0) / std::abs(bm::cyl_bessel_j(2, z)) * std::sqrt(y) * bm::cyl_bessel_j(1, z * y);
}

double chi_prime(int n, double y) {
  const double z = bm::cyl_bessel_j_zero(1.0, n);
  const double c = std::sqrt(2.0) / std::abs(bm::cyl_bessel_j(2, z));
  const double j1 = bm::cyl_bessel_j(1, z * y);
  const double dj1 = z * (bm::cyl_bessel_j(0, z * y) - j1 / (z * y));
  return c * (0.5 / std::sqrt(y) * j1 + std::sqrt(y) * dj1);
}

double gk(auto f) {
  return bm::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-13);
}

}  // namespace

TEST_CASE("scaled time of the linear law") {
  const auto law = MotionLaw::linear(2.0, 1.0);
  CHECK(tau_of_t(law, 1.0) == doctest::Approx(0.5));
  CHECK(tau_of_t(law, 0.0) == 0.0);
  CHECK(alpha_of_tau(law, 0.5) == doctest::Approx(2.0));
  CHECK(alpha_of_tau(law, 0.0) == 1.0);
  CHECK_THROWS_AS(alpha_of_tau(law, 0.7), DomainError);
  CHECK_THROWS_AS(alpha_of_tau(law, -0.1), DomainError);
  const auto tiny = MotionLaw::linear(1.0 + 1e-9, 3.0);
  CHECK(tau_of_t(tiny, 3.0) == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("tau and alpha are inverse") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const MotionLaw laws[] = {MotionLaw::linear(0.4, 2.0), MotionLaw::linear(3.0, 0.5),
                            MotionLaw::table({{0, 1}, {0.3, 1.4}, {1.0, 0.6}, {1.5, 0.9}})};
  for (const auto& law : laws) {
    for (int i = 0; i < 100; ++i) {
      const double t = u(rng) * law.duration();
      CHECK(alpha_of_tau(law, tau_of_t(law, t)) == doctest::Approx(law.alpha_at(t)).epsilon(1e-10));
    }
  }
}

TEST_CASE("linear identity (1/a')(1 - 1/alpha) = t/alpha") {
  const auto law = MotionLaw::linear(0.3, 5.0);
  for (int i = 0; i <= 1000; ++i) {
    const double t = 5.0 * i / 1000.0;
    const double a = law.alpha_at(t);
    CHECK((1.0 / law.slope()) * (1.0 - 1.0 / a) == doctest::Approx(t / a).scale(1.0).epsilon(1e-12));
  }
}

TEST_CASE("clock agrees with direct integration on tables") {
  const auto law = MotionLaw::table({{0, 1}, {0.3, 1.4}, {1.0, 0.6}, {1.5, 0.9}});
  const MappedClock clock(law);
  CHECK(clock.node_taus().size() == 4);
  for (double t : {0.1, 0.3, 0.77, 1.2, 1.5}) {
    const double direct = bm::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double s) { return 1.0 / std::pow(law.alpha_at(s), 2); }, 0.0, t, 15, 1e-13);
    const auto mt = clock.at_t(t);
    CHECK(mt.tau == doctest::Approx(direct).epsilon(1e-11));
    CHECK(tau_of_t(law, t) == doctest::Approx(direct).epsilon(1e-9));
    const auto back = clock.at_tau(mt.tau);
    CHECK(back.t == doctest::Approx(t).epsilon(1e-12));
    CHECK(back.alpha == doctest::Approx(law.alpha_at(t)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(clock.at_tau(clock.tau_final() * 1.01), DomainError);
}

TEST_CASE("basis integrals against Boost Bessel quadrature") {
  for (auto [m, n] : {std::pair{1, 1}, {1, 2}, {2, 1}, {3, 5}, {6, 6}}) {
    CAPTURE(m);
    CAPTURE(n);
    const auto ints = basis_integrals(m, n);
    const double inv2 = gk([&](double y) { return chi(m, y) * chi(n, y) / (y * y); });
    const double dy = gk([&](double y) { return chi(m, y) * chi_prime(n, y) / y; });
    CHECK(ints.inverse_square == doctest::Approx(inv2).epsilon(1e-9));
    CHECK(ints.derivative_over_y == doctest::Approx(dy).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("perturbation element: finite, scaling with alpha alpha'") {
  for (int n = 1; n <= 20; n += 3) {
    for (int m = 1; m <= 20; m += 4) {
      CHECK(std::isfinite(std::abs(perturbation_matrix_element(n, m, 0.5, 1.0))));
      CHECK(std::isfinite(std::abs(perturbation_matrix_element(n, m, 2.0, -0.3))));
    }
  }
  // V = A g^2 + B g, g = 1/(alpha alpha'): recover A and B from two rates.
  const auto v1 = perturbation_matrix_element(2, 1, 1.0, 1.0);
  const auto v2 = perturbation_matrix_element(2, 1, 1.0, 0.5);
  const auto quad = (v2 - 2.0 * v1) / 2.0;
  const auto lin = v1 - quad;
  const auto v3 = perturbation_matrix_element(2, 1, 1.0, 0.25);
  CHECK(std::abs(v3 - (16.0 * quad + 4.0 * lin)) < 1e-9 * std::abs(v3));
  const auto v4 = perturbation_matrix_element(2, 1, 2.0, 0.5);
  CHECK(std::abs(v4 - v1) < 1e-12 * std::abs(v1));
  CHECK_THROWS_AS(perturbation_matrix_element(1, 2, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(perturbation_matrix_element(1, 2, -1.0, 1.0), DomainError);
}

TEST_CASE("expansion parameter") {
  const double d = expansion_parameter(2, 1, 1.0, 1.0);
  const double z1 = bm::cyl_bessel_j_zero(1.0, 1);
  const double z2 = bm::cyl_bessel_j_zero(1.0, 2);
  CHECK(d == doctest::Approx((z2 * z2 - z1 * z1) / 2).epsilon(1e-13));
  CHECK(d == doctest::Approx(17.27).epsilon(1e-3));
  CHECK(expansion_parameter(2, 1, 1.0, 0.5) == doctest::Approx(2 * d));
  CHECK(expansion_parameter(40, 1, 1.0, 1.0) > expansion_parameter(20, 1, 1.0, 1.0));
  CHECK_THROWS_AS(expansion_parameter(2, 2, 1.0, 1.0), DomainError);
}

TEST_CASE("first-order amplitude") {
  const auto fixed = MotionLaw::table({{0, 1}, {1, 1}});
  CHECK(std::abs(first_order_amplitude(1, 2, fixed)) == 0.0);
  const auto law = MotionLaw::linear(1.1, 1.0);
  const auto c = first_order_amplitude(1, 2, law);
  CHECK(std::isfinite(std::abs(c)));
  // direct tau integral of the element with Boost quadrature
  const double omega = mapped_eigen_energy(2) - mapped_eigen_energy(1);
  const MappedClock clock(law);
  auto re = [&](double tau) {
    const auto mt = clock.at_tau(tau);
    return (perturbation_matrix_element(1, 2, mt.alpha, mt.rate) * std::polar(1.0, omega * tau));
  };
  const double tf = clock.tau_final();
  const double real = bm::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double s) { return re(s).real(); }, 0.0, tf, 12, 1e-11);
  const double imag = bm::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double s) { return re(s).imag(); }, 0.0, tf, 12, 1e-11);
  const std::complex<double> want = std::complex<double>(0.0, -1.0) * std::complex<double>(real, imag);
  CHECK(std::abs(c - want) < 1e-7 * std::abs(want));
  CHECK_THROWS_AS(first_order_amplitude(1, 1, law), DomainError);
}
