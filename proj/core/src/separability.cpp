#include "gqfi/separability.hpp"

#include <cmath>
#include <stdexcept>

namespace gqfi {

namespace {

double sq(double x) { return x * x; }

void validate_theta(double th) {
  if (!std::isfinite(th) || th < 0.0 || th >= 1.0)
    throw std::invalid_argument("thermal weight theta must lie in [0, 1)");
}

bool symmetric_case(complexd b1, complexd b2, double t1, double t2) {
  return std::abs(t1 - t2) <= 1e-12 &&
         std::abs(b1 - b2) <= 1e-12 * (1.0 + std::abs(b1));
}

complexd ipow(complexd b, int k) {
  complexd r(1.0, 0.0);
  for (int i = 0; i < k; ++i) r *= b;
  return r;
}

// <2|D(beta)|p>-type amplitudes of the N = 2 component, written as
// polynomials in conj(beta) so the beta -> 0 limit is regular.
complexd amp_two(complexd b, int p) {
  const complexd bb = std::conj(b);
  complexd t = b * b * ipow(bb, p);
  if (p >= 1) t += 2.0 * static_cast<double>(p) * b * ipow(bb, p - 1);
  if (p >= 2) t += static_cast<double>(p) * static_cast<double>(p - 1) * ipow(bb, p - 2);
  return t / std::sqrt(2.0);
}

complexd amp_one(complexd b, int p) {
  const complexd bb = std::conj(b);
  complexd t = b * ipow(bb, p);
  if (p >= 1) t += static_cast<double>(p) * ipow(bb, p - 1);
  return t;
}

}  // namespace

TwoPhotonCoefficients two_photon_coefficients(complexd beta1, complexd beta2,
                                              double theta1, double theta2) {
  validate_theta(theta1);
  validate_theta(theta2);
  if (!std::isfinite(beta1.real()) || !std::isfinite(beta1.imag()) ||
      !std::isfinite(beta2.real()) || !std::isfinite(beta2.imag()))
    throw std::invalid_argument("displacement beta must be finite");

  const double b1 = std::norm(beta1);  // |beta1|^2
  const double b2 = std::norm(beta2);
  const double u1 = 1.0 + theta1;
  const double u2 = 1.0 + theta2;

  TwoPhotonCoefficients c;
  c.c_norm = (1.0 - theta1) * (1.0 - theta2) *
             std::exp(b1 * (theta1 - 1.0) + b2 * (theta2 - 1.0));
  c.lambda1 = 0.5 * (b1 * b1 * sq(sq(u1)) + 4.0 * b1 * theta1 * sq(u1) +
                     2.0 * theta1 * theta1);
  c.lambda2 = 0.5 * (b2 * b2 * sq(sq(u2)) + 4.0 * b2 * theta2 * sq(u2) +
                     2.0 * theta2 * theta2);
  c.upsilon1 = std::conj(beta1) * beta2 / std::sqrt(2.0) * u1 * u2 *
               (b1 * sq(u1) + 2.0 * theta1);
  // mode swap of upsilon1; the conjugation orientation (beta1 conj(beta2))
  // follows from Hermiticity against the displaced-Fock summation.
  c.upsilon2 = beta1 * std::conj(beta2) / std::sqrt(2.0) * u1 * u2 *
               (b2 * sq(u2) + 2.0 * theta2);
  c.xi = beta1 * beta1 * std::conj(beta2) * std::conj(beta2) * sq(u1) * sq(u2) / 2.0;
  c.omega = (b1 * sq(u1) + theta1) * (b2 * sq(u2) + theta2);
  return c;
}

Eigen::Matrix4cd single_particle_matrix(const TwoPhotonCoefficients& c) {
  const double rt2 = std::sqrt(2.0);
  Eigen::Matrix4cd m;
  m << complexd(c.lambda1), std::conj(c.upsilon1) / rt2, std::conj(c.upsilon1) / rt2, c.xi,
      c.upsilon1 / rt2, complexd(c.omega / 2.0), complexd(c.omega / 2.0), c.upsilon2 / rt2,
      c.upsilon1 / rt2, complexd(c.omega / 2.0), complexd(c.omega / 2.0), c.upsilon2 / rt2,
      std::conj(c.xi), std::conj(c.upsilon2) / rt2, std::conj(c.upsilon2) / rt2, complexd(c.lambda2);
  return m;
}

PptReport partial_transpose_spectrum(const TwoPhotonCoefficients& c) {
  const Eigen::Matrix4cd m = single_particle_matrix(c);

  // Transpose the second-particle index: (i,j),(k,l) -> (i,l),(k,j).
  Eigen::Matrix4cd pt;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          pt(2 * i + j, 2 * k + l) = m(2 * i + l, 2 * k + j);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(pt);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("partial transpose eigendecomposition failed");

  PptReport rep;
  for (int i = 0; i < 4; ++i) rep.eigenvalues[i] = es.eigenvalues()(i);
  const double trace = pt.trace().real();
  rep.separable_in_n2 = rep.eigenvalues[0] >= -1e-12 * std::abs(trace);

  // Fully symmetric block structure: one eigenvalue decouples and the other
  // three obey closed-form symmetric-function identities.
  const bool sym = std::abs(c.lambda1 - c.lambda2) <=
                       1e-9 * (1.0 + std::abs(c.lambda1)) &&
                   std::abs(c.upsilon1 - c.upsilon2) <=
                       1e-9 * (1.0 + std::abs(c.upsilon1)) &&
                   std::abs(c.upsilon1.imag()) <= 1e-9 * (1.0 + std::abs(c.upsilon1)) &&
                   std::abs(c.xi.imag()) <= 1e-9 * (1.0 + std::abs(c.xi));
  if (sym) {
    const double lam = c.lambda1;
    const double ups = c.upsilon1.real();
    const double xi = c.xi.real();
    const double om = c.omega;
    rep.isolated_eigenvalue = om / 2.0 - xi;

    Eigen::Matrix3d block;
    block << lam, ups, om / 2.0, ups, om / 2.0 + xi, ups, om / 2.0, ups, lam;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> e3(block);
    const Eigen::Vector3d y = e3.eigenvalues();

    const double s1 = y(0) + y(1) + y(2);
    const double s2 = y(0) * y(1) + y(0) * y(2) + y(1) * y(2);
    const double s3 = y(0) * y(1) * y(2);
    const double t1 = 2.0 * lam + xi + om / 2.0;
    const double t2 =
        2.0 * lam * (xi + om / 2.0) + lam * lam - om * om / 4.0 - 2.0 * ups * ups;
    const double t3 =
        (lam - om / 2.0) * ((xi + om / 2.0) * (lam + om / 2.0) - 2.0 * ups * ups);
    // Residuals are scaled by the magnitude of the contributing terms: several
    // identities are exact zeros by cancellation (pure coherent states), where
    // a result-relative residual would be meaningless.
    auto rel = [](double s, double t, double scale) {
      return std::abs(s - t) / std::max({std::abs(s), std::abs(t), scale, 1e-300});
    };
    const double scale1 = std::abs(y(0)) + std::abs(y(1)) + std::abs(y(2));
    const double scale2 = std::abs(y(0) * y(1)) + std::abs(y(0) * y(2)) +
                          std::abs(y(1) * y(2)) +
                          2.0 * std::abs(lam) * (std::abs(xi) + om / 2.0) +
                          lam * lam + om * om / 4.0 + 2.0 * ups * ups;
    const double scale3 =
        std::abs(y(0) * y(1) * y(2)) +
        (std::abs(lam) + om / 2.0) *
            ((std::abs(xi) + om / 2.0) * (std::abs(lam) + om / 2.0) +
             2.0 * ups * ups);
    rep.identity_residuals = {rel(s1, t1, scale1), rel(s2, t2, scale2),
                              rel(s3, t3, scale3)};
  }
  return rep;
}

Eigen::Matrix4cd displaced_fock_oracle_n2(complexd beta1, complexd beta2,
                                          double theta1, double theta2,
                                          int p_max, int q_max) {
  validate_theta(theta1);
  validate_theta(theta2);
  if (p_max < 0 || q_max < 0)
    throw std::invalid_argument("truncation orders must be nonnegative");
  if ((theta1 > 0.0 && std::pow(theta1, p_max) >= 1e-12) ||
      (theta2 > 0.0 && std::pow(theta2, q_max) >= 1e-12))
    throw std::runtime_error("truncation insufficient for requested thermal weights");

  const double envelope = std::exp(-(std::norm(beta1) + std::norm(beta2)) / 2.0);
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  for (int p = 0; p <= p_max; ++p) {
    for (int q = 0; q <= q_max; ++q) {
      const double weight = (1.0 - theta1) * (1.0 - theta2) *
                            std::pow(theta1, p) * std::pow(theta2, q);
      if (weight == 0.0 && (p > 0 || q > 0)) continue;
      const double scale = envelope * std::exp(-0.5 * (std::lgamma(p + 1.0) +
                                                       std::lgamma(q + 1.0)));
      const complexd a20 = scale * amp_two(beta1, p) * ipow(std::conj(beta2), q);
      const complexd a02 = scale * amp_two(beta2, q) * ipow(std::conj(beta1), p);
      const complexd a11 = scale * amp_one(beta1, p) * amp_one(beta2, q);

      Eigen::Vector4cd ket;
      ket << a20, a11 / std::sqrt(2.0), a11 / std::sqrt(2.0), a02;
      m += weight * ket * ket.adjoint();
    }
  }
  return m;
}

}  // namespace gqfi
