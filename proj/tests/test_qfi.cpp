#include <doctest.h>

#include <cmath>

#include "gqfi/qfi.hpp"
#include "test_util.hpp"

using namespace gqfi;
using gqfi::test::ParamSampler;

TEST_CASE("auxiliary_params: canonical working form gives o = 1") {
  IsotropicGaussianParams p;
  p.phi_1 = kPi / 2.0;
  p.phi_2 = 0.0;
  const AuxiliaryParams a = auxiliary_params(p);
  CHECK(a.m == doctest::Approx(0.0));
  CHECK(a.p == doctest::Approx(0.0));
  CHECK(a.o == doctest::Approx(1.0));
}

TEST_CASE("auxiliary_params: theta = psi = 0 closed forms") {
  ParamSampler gen(201);
  for (int i = 0; i < 50; ++i) {
    IsotropicGaussianParams p = gen.draw();
    p.theta = 0.0;
    p.psi = 0.0;
    const AuxiliaryParams a = auxiliary_params(p);
    CHECK(a.o == doctest::Approx(std::sin(p.phi_1 - p.phi_2)).epsilon(1e-12));
    CHECK(a.p == doctest::Approx(-std::cos(p.phi_1 - p.phi_2)).epsilon(1e-12));
    CHECK(a.kappa ==
          doctest::Approx(std::sin(p.alpha) * std::cos(p.phi_1 + p.phi_d2)).epsilon(1e-12));
    CHECK(a.delta ==
          doctest::Approx(std::sin(p.alpha) * std::sin(p.phi_1 + p.phi_d2)).epsilon(1e-12));
    CHECK(a.upsilon ==
          doctest::Approx(std::cos(p.alpha) * std::cos(p.phi_2 + p.phi_d1)).epsilon(1e-12));
    CHECK(a.lambda ==
          doctest::Approx(std::cos(p.alpha) * std::sin(p.phi_2 + p.phi_d1)).epsilon(1e-12));
  }
}

TEST_CASE("auxiliary_params: sum-of-squares identities") {
  ParamSampler gen(202);
  for (int i = 0; i < 500; ++i) {
    const AuxiliaryParams a = auxiliary_params(gen.draw());
    CHECK(std::abs(a.m * a.m + a.o * a.o + a.p * a.p - 1.0) <= 1e-12);
    CHECK(std::abs(a.kappa * a.kappa + a.delta * a.delta + a.upsilon * a.upsilon +
                   a.lambda * a.lambda - 1.0) <= 1e-12);
  }
}

TEST_CASE("xyz: pinned values") {
  const Xyz zero = xyz(3.7, 0.0, 0.0);
  CHECK(zero.x == 0.0);
  CHECK(zero.y == 0.0);
  CHECK(zero.z == 0.0);

  // nu = 1, r2 = 0: X and Y vanish, Z = 2 sinh^2(r) cosh(2r).
  const double r = 0.8;
  const Xyz v = xyz(1.0, r, 0.0);
  CHECK(std::abs(v.x) <= 1e-14);
  CHECK(std::abs(v.y) <= 1e-14);
  CHECK(v.z == doctest::Approx(2.0 * std::pow(std::sinh(r), 2) * std::cosh(2.0 * r))
                   .epsilon(1e-12));

  // Large-nu limit at r1 = r2 = r.
  const double rr = 0.6;
  const Xyz w = xyz(1e6, rr, rr);
  const double expected = 4.0 * std::pow(std::sinh(2.0 * rr), 2) / 2.0 +
                          4.0 * std::pow(std::sinh(rr), 2) * std::pow(std::sinh(rr), 2) +
                          std::pow(std::sinh(2.0 * rr), 2) -
                          2.0 * 2.0 * std::pow(std::sinh(rr), 2);
  // direct evaluation of the definition at nu -> infinity:
  // X -> 4 sinh^2(2r)... evaluated literally below.
  const double x_limit = 4.0 * std::pow(std::sinh(2.0 * rr), 2) -
                         4.0 * std::pow(std::sinh(rr), 2);
  (void)expected;
  CHECK(w.x == doctest::Approx(x_limit).epsilon(1e-9));
  CHECK(w.x > 0.0);
}

TEST_CASE("xyz: matches the literal definitions") {
  ParamSampler gen(203);
  for (int i = 0; i < 300; ++i) {
    const double nu = gen.uniform(1.0, 50.0);
    const double r1 = gen.uniform(0.0, 3.0);
    const double r2 = gen.uniform(0.0, 3.0);
    const double c = nu * nu / (nu * nu + 1.0);
    const double lit_z = 2.0 * c * (std::pow(std::sinh(2 * r1), 2) + std::pow(std::sinh(2 * r2), 2)) -
                         2.0 * (std::pow(std::sinh(r1), 2) + std::pow(std::sinh(r2), 2));
    const double lit_x = 4.0 * c * std::pow(std::sinh(r1 + r2), 2) -
                         2.0 * (std::pow(std::sinh(r1), 2) + std::pow(std::sinh(r2), 2));
    const double lit_y = 4.0 * c * std::pow(std::sinh(r1 - r2), 2) -
                         2.0 * (std::pow(std::sinh(r1), 2) + std::pow(std::sinh(r2), 2));
    const Xyz v = xyz(nu, r1, r2);
    const double scale = std::max({1.0, std::abs(lit_z), std::abs(lit_x), std::abs(lit_y)});
    CHECK(std::abs(v.z - lit_z) <= 1e-9 * scale);
    CHECK(std::abs(v.x - lit_x) <= 1e-9 * scale);
    CHECK(std::abs(v.y - lit_y) <= 1e-9 * scale);
  }
}

TEST_CASE("xyz: ordering z >= x >= |y| >= 0 on the property grid") {
  const double nus[] = {1.0, 1.01, 2.0, 10.0, 100.0};
  for (double nu : nus) {
    for (double r1 = 0.0; r1 <= 3.0; r1 += 0.25) {
      for (double r2 = 0.0; r2 <= 3.0; r2 += 0.25) {
        const Xyz v = xyz(nu, r1, r2);
        CHECK(v.z >= v.x - 1e-12 * std::max(1.0, v.z));
        CHECK(v.x >= std::abs(v.y) - 1e-12 * std::max(1.0, v.x));
        CHECK(v.x >= -1e-12);
      }
    }
  }
}

TEST_CASE("qfi_jy: coherent states reach the standard limit 4<N>") {
  ParamSampler gen(204);
  for (int i = 0; i < 50; ++i) {
    IsotropicGaussianParams p = gen.draw();
    p.nu = 1.0;
    p.r_1 = 0.0;
    p.r_2 = 0.0;
    CHECK(qfi_jy(p) ==
          doctest::Approx(4.0 * p.gamma_abs * p.gamma_abs).epsilon(1e-12));
  }
}

TEST_CASE("qfi_jy: displaced thermal capacity 4|gamma|^2/nu") {
  ParamSampler gen(205);
  for (int i = 0; i < 50; ++i) {
    IsotropicGaussianParams p = gen.draw();
    p.r_1 = 0.0;
    p.r_2 = 0.0;
    CHECK(qfi_jy(p) ==
          doctest::Approx(4.0 * p.gamma_abs * p.gamma_abs / p.nu).epsilon(1e-12));
  }
}

TEST_CASE("qfi_jy: canonical squeezed vacuum") {
  IsotropicGaussianParams p;
  p.r_1 = 0.5;
  p.phi_1 = kPi / 2.0;
  const double expected = 4.0 * std::pow(std::sinh(0.5), 2);
  CHECK(qfi_jy(p) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(1.0861).epsilon(1e-4));
}

TEST_CASE("qfi_jy is nonnegative") {
  ParamSampler gen(206);
  for (int i = 0; i < 500; ++i) {
    CHECK(qfi_jy(gen.draw()) >= 0.0);
  }
}

TEST_CASE("qfi_jy: invariant under shifts preserving the combined angles") {
  ParamSampler gen(207);
  for (int i = 0; i < 100; ++i) {
    IsotropicGaussianParams p = gen.draw();
    const double s = gen.uniform(0.0, kTwoPi);
    IsotropicGaussianParams q = p;
    q.phi_1 += s;
    q.phi_2 += s;
    q.phi_d1 -= s;
    q.phi_d2 -= s;
    CHECK(qfi_jy(q) == doctest::Approx(qfi_jy(p)).epsilon(1e-10));
  }
}

TEST_CASE("ftql: pinned values and thermal equality") {
  IsotropicGaussianParams p;
  p.nu = 2.0;
  p.gamma_abs = std::sqrt(2.0);  // <N> = |gamma|^2 + nu - 1 = 3
  CHECK(mean_photon_number(p) == doctest::Approx(3.0));
  CHECK(ftql(p) == doctest::Approx(4.0 * 4.0 / 2.0 - 4.0).epsilon(1e-12));

  // Zero temperature: the bound reduces to 4<N>.
  ParamSampler gen(208);
  for (int i = 0; i < 30; ++i) {
    IsotropicGaussianParams q = gen.draw();
    q.nu = 1.0;
    CHECK(ftql(q) == doctest::Approx(4.0 * mean_photon_number(q)).epsilon(1e-10));
  }

  // Displaced thermal states sit exactly on the bound, any angles.
  for (int i = 0; i < 30; ++i) {
    IsotropicGaussianParams q = gen.draw();
    q.r_1 = 0.0;
    q.r_2 = 0.0;
    CHECK(ftql(q) == doctest::Approx(qfi_jy(q)).epsilon(1e-12));
  }
}

TEST_CASE("ftql matches 4(<N>+1)/nu - 4") {
  ParamSampler gen(209);
  for (int i = 0; i < 200; ++i) {
    const IsotropicGaussianParams p = gen.draw();
    const double direct = 4.0 * (mean_photon_number(p) + 1.0) / p.nu - 4.0;
    CHECK(std::abs(ftql(p) - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("advantage_gap: displaced thermal gives exactly zero") {
  ParamSampler gen(210);
  for (int i = 0; i < 50; ++i) {
    IsotropicGaussianParams p = gen.draw();
    p.r_1 = 0.0;
    p.r_2 = 0.0;
    CHECK(std::abs(advantage_gap(p)) <= 1e-14 * std::max(1.0, qfi_jy(p)));
  }
}

TEST_CASE("advantage_gap: canonical squeezed state gives 2X") {
  ParamSampler gen(211);
  for (int i = 0; i < 50; ++i) {
    IsotropicGaussianParams p = gen.draw();
    p.gamma_abs = 0.0;
    p.theta = 0.0;
    p.psi = 0.0;
    p.phi_2 = p.phi_1 - kPi / 2.0;
    const Xyz v = xyz(p.nu, p.r_1, p.r_2);
    CHECK(advantage_gap(p) == doctest::Approx(2.0 * v.x).epsilon(1e-9));
    CHECK(advantage_gap(p) >= -1e-12);
  }
}

TEST_CASE("advantage_gap agrees with qfi_jy - ftql (two code paths)") {
  ParamSampler gen(212);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const IsotropicGaussianParams p = gen.draw();
    const double gap = advantage_gap(p);
    const double direct = qfi_jy(p) - ftql(p);
    const double scale = std::max(qfi_jy(p), ftql(p));
    if (std::abs(direct) < 1e-12 * scale) {
      // catastrophic cancellation region: loosened tolerance
      CHECK(std::abs(gap - direct) <= 1e-6 * std::max(1.0, scale));
    } else {
      CHECK(std::abs(gap - direct) <= 1e-9 * std::max(std::abs(direct), 1e-30));
    }
    ++checked;
  }
  CHECK(checked == 10000);
}

TEST_CASE("qfi and gap stay finite and consistent at large rates") {
  IsotropicGaussianParams p;
  p.nu = 1e13;
  p.r_1 = 50.0;
  p.r_2 = 40.0;
  p.gamma_abs = 10.0;
  p.phi_1 = 1.0;
  p.theta = 0.7;
  const double q = qfi_jy(p);
  const double gap = advantage_gap(p);
  CHECK(std::isfinite(q));
  CHECK(std::isfinite(gap));
  CHECK(std::abs(gap - (q - ftql(p))) <= 1e-9 * q);

  p.r_1 = 170.0;
  p.r_2 = 0.0;
  CHECK(std::isfinite(qfi_jy(p)));
  CHECK(qfi_jy(p) > 0.0);
}
