#include "gqfi/gaussian_state.hpp"

#include <cmath>
#include <stdexcept>

namespace gqfi {

namespace {

constexpr double kSqueezeZeroTol = 1e-9;   // below this a squeezing rate is zero
constexpr double kGammaZeroTol = 1e-14;    // below this the displacement is zero

bool finite(double x) { return std::isfinite(x); }

Matrix4c hermitize(const Matrix4c& m) { return 0.5 * (m + m.adjoint()); }

// Anti-linear map T(w_a, w_b) = (conj w_b, conj w_a). Eigenvectors of
// sigma/nu that stem from one column u of the passive factor have the form
// (u, -conj u)/sqrt(2), i.e. T w = -w.
Vector4c theta_map(const Vector4c& w) {
  Vector4c t;
  t << std::conj(w(2)), std::conj(w(3)), std::conj(w(0)), std::conj(w(1));
  return t;
}

// Projects an eigenvector onto the T w = -w real subspace of its eigenspace
// and normalizes. Both candidates w - Tw and i(w + Tw) satisfy the relation;
// at least one is nonzero for a unit vector.
Vector4c fix_conjugate_structure(const Vector4c& w) {
  Vector4c a = w - theta_map(w);
  Vector4c b = complexd(0.0, 1.0) * (w + theta_map(w));
  Vector4c v = (a.norm() >= b.norm()) ? a : b;
  return v / v.norm();
}

// Splits a U(2) matrix into diag(e^{-i phi1}, e^{-i phi2}) * Rot(theta)
// * diag(e^{-i psi}, e^{i psi}).
void euler_split_u2(const Eigen::Matrix2cd& u, double& phi1, double& phi2,
                    double& theta, double& psi) {
  const double c = std::abs(u(0, 0));
  const double s = std::abs(u(0, 1));
  theta = std::atan2(s, c);
  if (s < 1e-12) {
    psi = 0.0;
    phi1 = -std::arg(u(0, 0));
    phi2 = -std::arg(u(1, 1));
  } else if (c < 1e-12) {
    psi = 0.0;
    phi1 = -std::arg(u(0, 1));
    phi2 = -std::arg(-u(1, 0));
  } else {
    const double a00 = std::arg(u(0, 0));
    const double a01 = std::arg(u(0, 1));
    phi1 = -0.5 * (a00 + a01);
    psi = 0.5 * (a01 - a00);
    phi2 = psi - std::arg(u(1, 1));
  }
}

}  // namespace

double reduce_angle(double phi) {
  double x = std::fmod(phi, kTwoPi);
  if (x < 0.0) x += kTwoPi;
  if (x >= kTwoPi) x = 0.0;
  return x;
}

void IsotropicGaussianParams::validate() const {
  const double fields[] = {nu,    gamma_abs, alpha, phi_d1, phi_d2, phi_1,
                           phi_2, theta,     psi,   r_1,    r_2};
  for (double f : fields) {
    if (!finite(f)) throw std::invalid_argument("non-finite state parameter");
  }
  if (nu < 1.0) throw std::invalid_argument("symplectic eigenvalue nu must be >= 1");
  if (gamma_abs < 0.0) throw std::invalid_argument("|gamma| must be >= 0");
}

IsotropicGaussianParams IsotropicGaussianParams::reduced() const {
  IsotropicGaussianParams q = *this;
  q.alpha = reduce_angle(alpha);
  q.phi_d1 = reduce_angle(phi_d1);
  q.phi_d2 = reduce_angle(phi_d2);
  q.phi_1 = reduce_angle(phi_1);
  q.phi_2 = reduce_angle(phi_2);
  q.theta = reduce_angle(theta);
  q.psi = reduce_angle(psi);
  return q;
}

complexd IsotropicGaussianParams::gamma1() const {
  return gamma_abs * std::cos(alpha) * std::polar(1.0, phi_d1);
}

complexd IsotropicGaussianParams::gamma2() const {
  return gamma_abs * std::sin(alpha) * std::polar(1.0, phi_d2);
}

void PhaseSpaceState::validate() const {
  if (!sigma.allFinite() || !d.allFinite())
    throw std::invalid_argument("non-finite phase-space state");
  if ((sigma - sigma.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("covariance matrix is not Hermitian");
  if (std::abs(d(2) - std::conj(d(0))) > 1e-10 ||
      std::abs(d(3) - std::conj(d(1))) > 1e-10)
    throw std::invalid_argument("displacement lacks (gamma, conj gamma) pairing");
  auto [n1, n2] = symplectic_eigenvalues(*this);
  if (n1 < 1.0 - 1e-9)
    throw std::invalid_argument("covariance matrix is not physical");
}

bool SymplecticMatrix::is_symplectic(double tol) const {
  const Matrix4c k = symplectic_form();
  return (m * k * m.adjoint() - k).cwiseAbs().maxCoeff() <= tol;
}

Matrix4c symplectic_form() {
  Matrix4c k = Matrix4c::Zero();
  k(0, 0) = 1.0;
  k(1, 1) = 1.0;
  k(2, 2) = -1.0;
  k(3, 3) = -1.0;
  return k;
}

SymplecticMatrix phase_shift_1(double phi) {
  Matrix4c m = Matrix4c::Identity();
  m(0, 0) = std::polar(1.0, -phi);
  m(2, 2) = std::polar(1.0, phi);
  return {m};
}

SymplecticMatrix phase_shift_2(double phi) {
  Matrix4c m = Matrix4c::Identity();
  m(1, 1) = std::polar(1.0, -phi);
  m(3, 3) = std::polar(1.0, phi);
  return {m};
}

SymplecticMatrix beam_splitter(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix4c m = Matrix4c::Zero();
  m(0, 0) = c;
  m(0, 1) = s;
  m(1, 0) = -s;
  m(1, 1) = c;
  m(2, 2) = c;
  m(2, 3) = s;
  m(3, 2) = -s;
  m(3, 3) = c;
  return {m};
}

SymplecticMatrix asym_phase(double psi) {
  Matrix4c m = Matrix4c::Zero();
  m(0, 0) = std::polar(1.0, -psi);
  m(1, 1) = std::polar(1.0, psi);
  m(2, 2) = std::polar(1.0, psi);
  m(3, 3) = std::polar(1.0, -psi);
  return {m};
}

// The printed single-mode squeezers have all-zero rows for the untouched
// mode; the identity is restored there so the matrix stays symplectic.
SymplecticMatrix squeeze_1(double r) {
  Matrix4c m = Matrix4c::Identity();
  m(0, 0) = std::cosh(r);
  m(0, 2) = -std::sinh(r);
  m(2, 0) = -std::sinh(r);
  m(2, 2) = std::cosh(r);
  return {m};
}

SymplecticMatrix squeeze_2(double r) {
  Matrix4c m = Matrix4c::Identity();
  m(1, 1) = std::cosh(r);
  m(1, 3) = -std::sinh(r);
  m(3, 1) = -std::sinh(r);
  m(3, 3) = std::cosh(r);
  return {m};
}

SymplecticMatrix symplectic_factory(SymplecticKind kind, double x) {
  if (!finite(x)) throw std::invalid_argument("non-finite symplectic parameter");
  switch (kind) {
    case SymplecticKind::phase_mode1:
      return phase_shift_1(x);
    case SymplecticKind::phase_mode2:
      return phase_shift_2(x);
    case SymplecticKind::beam_splitter:
      return beam_splitter(x);
    case SymplecticKind::asym_phase:
      return asym_phase(x);
    case SymplecticKind::squeeze_mode1:
      return squeeze_1(x);
    case SymplecticKind::squeeze_mode2:
      return squeeze_2(x);
  }
  throw std::invalid_argument("unknown symplectic kind");
}

PhaseSpaceState build_state(const IsotropicGaussianParams& p) {
  p.validate();
  const Matrix4c m = phase_shift_1(p.phi_1).m * phase_shift_2(p.phi_2).m *
                     beam_splitter(p.theta).m * asym_phase(p.psi).m *
                     squeeze_1(p.r_1).m * squeeze_2(p.r_2).m;
  PhaseSpaceState s;
  s.sigma = hermitize(p.nu * m * m.adjoint());
  const complexd g1 = p.gamma1();
  const complexd g2 = p.gamma2();
  s.d << g1, g2, std::conj(g1), std::conj(g2);
  return s;
}

std::pair<double, double> symplectic_eigenvalues(const PhaseSpaceState& s) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(hermitize(s.sigma));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("covariance eigendecomposition failed");
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("covariance matrix is not positive definite");
  const Matrix4c root = es.operatorSqrt();
  Eigen::SelfAdjointEigenSolver<Matrix4c> ek(root * symplectic_form() * root);
  if (ek.info() != Eigen::Success)
    throw std::runtime_error("symplectic eigenvalue problem failed");
  Eigen::Vector4d v = ek.eigenvalues().cwiseAbs();
  std::sort(v.data(), v.data() + 4);
  const double n1 = 0.5 * (v(0) + v(1));
  const double n2 = 0.5 * (v(2) + v(3));
  if (n1 < 1.0 - 1e-6)
    throw std::invalid_argument("non-physical state: symplectic eigenvalue < 1");
  return {n1, n2};
}

double mean_photon_number(const PhaseSpaceState& s) {
  const double gamma_sq = std::norm(s.d(0)) + std::norm(s.d(1));
  return 0.25 * s.sigma.trace().real() - 1.0 + gamma_sq;
}

double mean_photon_number(const IsotropicGaussianParams& p) {
  const double s1 = std::sinh(p.r_1);
  const double s2 = std::sinh(p.r_2);
  return p.nu * (s1 * s1 + s2 * s2) + p.gamma_abs * p.gamma_abs + (p.nu - 1.0);
}

double purity(const PhaseSpaceState& s) {
  auto [n1, n2] = symplectic_eigenvalues(s);
  return 1.0 / (n1 * n2);
}

PhaseSpaceState apply_symplectic(const PhaseSpaceState& s,
                                 const SymplecticMatrix& m,
                                 const Vector4c& shift) {
  if (!m.m.allFinite() || !m.is_symplectic())
    throw std::invalid_argument("matrix is not symplectic");
  if (std::abs(shift(2) - std::conj(shift(0))) > 1e-10 ||
      std::abs(shift(3) - std::conj(shift(1))) > 1e-10)
    throw std::invalid_argument("shift lacks (gamma, conj gamma) pairing");
  PhaseSpaceState out;
  out.sigma = hermitize(m.m * s.sigma * m.m.adjoint());
  out.d = m.m * s.d + shift;
  return out;
}

IsotropicGaussianParams extract_params(const PhaseSpaceState& s) {
  auto [n1, n2] = symplectic_eigenvalues(s);
  if (std::abs(n1 - n2) > 1e-8 * std::max(n1, n2))
    throw std::invalid_argument("state is not isotropic");
  // Physical states can land a hair below 1 through solver noise.
  const double nu = std::max(0.5 * (n1 + n2), 1.0);

  IsotropicGaussianParams p;
  p.nu = nu;

  // Williamson step: sigma/nu = P S1(2 r1) S2(2 r2) P^dagger with P passive,
  // so its spectrum is {e^{2r1}, e^{2r2}, e^{-2r2}, e^{-2r1}} and the
  // eigenvectors carry the passive factor's columns.
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(hermitize(s.sigma / nu));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("covariance eigendecomposition failed");
  const Eigen::Vector4d lam = es.eigenvalues();
  if (lam.minCoeff() <= 0.0)
    throw std::invalid_argument("covariance matrix is not positive definite");

  double r1 = 0.25 * (std::log(lam(3)) - std::log(lam(0)));
  double r2 = 0.25 * (std::log(lam(2)) - std::log(lam(1)));
  if (r1 < kSqueezeZeroTol) r1 = 0.0;
  if (r2 < kSqueezeZeroTol) r2 = 0.0;
  p.r_1 = r1;
  p.r_2 = r2;

  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  if (r1 > 0.0) {
    const Vector4c w1 = fix_conjugate_structure(es.eigenvectors().col(3));
    Eigen::Vector2cd u1 = w1.head<2>();
    u1.normalize();

    Eigen::Vector2cd u2;
    if (r2 > 0.0) {
      Vector4c w2 = fix_conjugate_structure(es.eigenvectors().col(2));
      // Degenerate rates leave a real rotation of freedom inside the
      // eigenspace; a real Gram-Schmidt sweep restores u1+ u2 = 0.
      const double overlap = w1.dot(w2).real();
      w2 -= overlap * w1;
      if (w2.norm() > 1e-6) {
        w2.normalize();
        u2 = w2.head<2>();
        u2.normalize();
      } else {
        u2 << -std::conj(u1(1)), std::conj(u1(0));
      }
    } else {
      u2 << -std::conj(u1(1)), std::conj(u1(0));
    }
    u2 -= u1.dot(u2) * u1;
    u2.normalize();
    u.col(0) = u1;
    u.col(1) = u2;
  }

  double phi1, phi2, theta, psi;
  euler_split_u2(u, phi1, phi2, theta, psi);
  p.phi_1 = reduce_angle(phi1);
  p.phi_2 = reduce_angle(phi2);
  p.theta = reduce_angle(theta);
  p.psi = reduce_angle(psi);

  const complexd g1 = s.d(0);
  const complexd g2 = s.d(1);
  const double gamma = std::sqrt(std::norm(g1) + std::norm(g2));
  p.gamma_abs = gamma;
  if (gamma > kGammaZeroTol) {
    p.alpha = std::atan2(std::abs(g2), std::abs(g1));
    p.phi_d1 = (std::abs(g1) > kGammaZeroTol * gamma) ? reduce_angle(std::arg(g1)) : 0.0;
    p.phi_d2 = (std::abs(g2) > kGammaZeroTol * gamma) ? reduce_angle(std::arg(g2)) : 0.0;
  }
  return p;
}

}  // namespace gqfi
