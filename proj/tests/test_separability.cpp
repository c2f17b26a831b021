#include <doctest.h>

#include <cmath>

#include "gqfi/separability.hpp"
#include "test_util.hpp"

using namespace gqfi;

namespace {

double rel_diff(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  if (scale == 0.0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

TEST_CASE("two_photon_coefficients: beta = 0 reduces to the thermal skeleton") {
  const auto c = two_photon_coefficients(0.0, 0.0, 0.4, 0.7);
  CHECK(c.lambda1 == doctest::Approx(0.4 * 0.4).epsilon(1e-14));
  CHECK(c.lambda2 == doctest::Approx(0.7 * 0.7).epsilon(1e-14));
  CHECK(c.omega == doctest::Approx(0.4 * 0.7).epsilon(1e-14));
  CHECK(std::abs(c.upsilon1) == 0.0);
  CHECK(std::abs(c.upsilon2) == 0.0);
  CHECK(std::abs(c.xi) == 0.0);
}

TEST_CASE("two_photon_coefficients: rejects theta outside [0, 1)") {
  CHECK_THROWS_AS(two_photon_coefficients(0.0, 0.0, 1.0, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(two_photon_coefficients(0.0, 0.0, -0.1, 0.5),
                  std::invalid_argument);
}

TEST_CASE("single_particle_matrix: hermitian, diagonal limit, trace") {
  std::mt19937_64 rng(601);
  std::uniform_real_distribution<double> th(0.0, 0.95), mag(0.0, 2.0),
      ph(0.0, kTwoPi);
  for (int i = 0; i < 100; ++i) {
    const complexd b1 = std::polar(mag(rng), ph(rng));
    const complexd b2 = std::polar(mag(rng), ph(rng));
    const auto c = two_photon_coefficients(b1, b2, th(rng), th(rng));
    const Eigen::Matrix4cd m = single_particle_matrix(c);
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * m.cwiseAbs().maxCoeff());
    CHECK(m.trace().real() ==
          doctest::Approx(c.lambda1 + c.lambda2 + c.omega).epsilon(1e-12));
  }

  // beta = 0: the coherence entries vanish and the matrix block-diagonalizes
  // into diag(Lambda1, Omega/2 times the symmetric projector, Lambda2).
  const auto c0 = two_photon_coefficients(0.0, 0.0, 0.3, 0.8);
  const Eigen::Matrix4cd diag = single_particle_matrix(c0);
  CHECK(diag(0, 0).real() == doctest::Approx(c0.lambda1));
  CHECK(diag(1, 1).real() == doctest::Approx(c0.omega / 2.0));
  CHECK(diag(1, 2).real() == doctest::Approx(c0.omega / 2.0));
  CHECK(diag(2, 2).real() == doctest::Approx(c0.omega / 2.0));
  CHECK(diag(3, 3).real() == doctest::Approx(c0.lambda2));
  CHECK(std::abs(diag(0, 1)) == 0.0);
  CHECK(std::abs(diag(0, 3)) == 0.0);
  CHECK(std::abs(diag(1, 3)) == 0.0);
}

TEST_CASE("displaced-Fock summation rebuilds the closed-form matrix") {
  std::mt19937_64 rng(602);
  std::uniform_real_distribution<double> th(0.0, 0.9), mag(0.0, 2.5),
      ph(0.0, kTwoPi);
  for (int i = 0; i < 40; ++i) {
    const complexd b1 = std::polar(mag(rng), ph(rng));
    const complexd b2 = std::polar(mag(rng), ph(rng));
    const double t1 = th(rng), t2 = th(rng);
    const auto c = two_photon_coefficients(b1, b2, t1, t2);
    const Eigen::Matrix4cd closed = c.c_norm * single_particle_matrix(c);
    const Eigen::Matrix4cd summed = displaced_fock_oracle_n2(b1, b2, t1, t2, 300, 300);
    CHECK(rel_diff(closed, summed) <= 1e-8);
  }
}

TEST_CASE("displaced-Fock summation: pure coherent projector at theta = 0") {
  const complexd b(0.8, -0.3);
  const Eigen::Matrix4cd m = displaced_fock_oracle_n2(b, b, 0.0, 0.0, 0, 0);
  // rank one: the N = 2 component of a product coherent state
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
  CHECK(es.eigenvalues()(0) >= -1e-14);
  CHECK(es.eigenvalues()(1) <= 1e-14 * es.eigenvalues()(3));
  CHECK(es.eigenvalues()(3) > 0.0);
}

TEST_CASE("displaced-Fock summation: omega entry matches the closed form") {
  const complexd b(1.0, 0.0);
  const double t = 0.5;
  const auto c = two_photon_coefficients(b, b, t, t);
  const Eigen::Matrix4cd summed = displaced_fock_oracle_n2(b, b, t, t, 80, 80);
  // <12| rho |12> = C * Omega / 2
  CHECK(summed(1, 1).real() ==
        doctest::Approx(c.c_norm * c.omega / 2.0).epsilon(1e-8));
}

TEST_CASE("displaced_fock_oracle_n2: rejects insufficient truncation") {
  CHECK_THROWS_AS(displaced_fock_oracle_n2(1.0, 1.0, 0.9, 0.9, 10, 10),
                  std::runtime_error);
}

TEST_CASE("partial transpose: symmetric grid is separable") {
  const double thetas[] = {0.0, 0.3, 0.6, 0.9};
  const double betas[] = {0.0, 0.5, 1.0, 2.0, 5.0};
  const double phases[] = {0.0, kPi / 3.0};
  for (double t : thetas) {
    for (double babs : betas) {
      for (double ph : phases) {
        const complexd b = std::polar(babs, ph);
        const auto rep = partial_transpose_spectrum(
            two_photon_coefficients(b, b, t, t));
        const double trace = 2.0 * two_photon_coefficients(b, b, t, t).lambda1 +
                             two_photon_coefficients(b, b, t, t).omega;
        CHECK(rep.separable_in_n2);
        CHECK(rep.eigenvalues[0] >= -1e-12 * trace);
        REQUIRE(rep.isolated_eigenvalue.has_value());
        CHECK(*rep.isolated_eigenvalue >= -1e-12 * std::max(1.0, trace));
        // the isolated value really sits in the spectrum
        double closest = 1e300;
        for (double e : rep.eigenvalues)
          closest = std::min(closest, std::abs(e - *rep.isolated_eigenvalue));
        CHECK(closest <= 1e-9 * std::max(1.0, std::abs(*rep.isolated_eigenvalue)));
      }
    }
  }
}

TEST_CASE("partial transpose: characteristic-polynomial identities") {
  std::mt19937_64 rng(603);
  std::uniform_real_distribution<double> th(0.0, 0.9), mag(0.0, 3.0),
      ph(0.0, kTwoPi);
  for (int i = 0; i < 60; ++i) {
    const complexd b = std::polar(mag(rng), ph(rng));
    const double t = th(rng);
    const auto rep = partial_transpose_spectrum(two_photon_coefficients(b, b, t, t));
    REQUIRE(rep.identity_residuals.has_value());
    for (double r : *rep.identity_residuals) CHECK(r <= 1e-9);
  }
}

TEST_CASE("partial transpose: asymmetric case is reported, not asserted") {
  const auto rep = partial_transpose_spectrum(
      two_photon_coefficients(complexd(1.2, 0.4), complexd(0.3, -0.8), 0.2, 0.7));
  CHECK_FALSE(rep.isolated_eigenvalue.has_value());
  CHECK_FALSE(rep.identity_residuals.has_value());
  // spectrum is still a valid spectrum of a Hermitian matrix
  CHECK(rep.eigenvalues[0] <= rep.eigenvalues[3]);
}
