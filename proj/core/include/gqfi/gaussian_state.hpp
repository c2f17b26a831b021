#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace gqfi {

using complexd = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// Reduces an angle into [0, 2*pi).
double reduce_angle(double phi);

// The 11-parameter description (nu, |gamma|, alpha, phi_d1, phi_d2, phi_1,
// phi_2, theta, psi, r_1, r_2) of an isotropic two-mode Gaussian state.
// The state is D(gamma) R1(phi_1) R2(phi_2) B(theta) Ras(psi) S1(r_1) S2(r_2)
// applied to a two-mode thermal state with equal symplectic eigenvalue nu.
struct IsotropicGaussianParams {
  double nu = 1.0;         // symplectic eigenvalue, >= 1 (1 = pure)
  double gamma_abs = 0.0;  // displacement magnitude |gamma| >= 0
  double alpha = 0.0;      // displacement mode-split angle
  double phi_d1 = 0.0;     // displacement phase, mode 1
  double phi_d2 = 0.0;     // displacement phase, mode 2
  double phi_1 = 0.0;      // phase shift, mode 1
  double phi_2 = 0.0;      // phase shift, mode 2
  double theta = 0.0;      // mode-mixing angle
  double psi = 0.0;        // asymmetric phase angle
  double r_1 = 0.0;        // squeezing, mode 1 (canonical form keeps r >= 0)
  double r_2 = 0.0;        // squeezing, mode 2

  // Throws std::invalid_argument on non-finite fields, nu < 1 or |gamma| < 0.
  void validate() const;

  // Same state, all angles reduced into [0, 2*pi).
  IsotropicGaussianParams reduced() const;

  // Complex displacement amplitudes (gamma_1, gamma_2).
  complexd gamma1() const;
  complexd gamma2() const;
};

// Phase-space form: complex 4x4 covariance matrix in the (a1, a2, a1+, a2+)
// ordering plus the displacement vector d = (gamma, conj gamma).
struct PhaseSpaceState {
  Matrix4c sigma;
  Vector4c d;

  // Hermiticity of sigma, conjugate pairing of d, symplectic eigenvalues
  // >= 1 - 1e-9. Throws std::invalid_argument on violation.
  void validate() const;
};

struct SymplecticMatrix {
  Matrix4c m;

  // m K m^dagger == K within tol (entrywise), K = diag(1,1,-1,-1).
  bool is_symplectic(double tol = 1e-10) const;
};

enum class SymplecticKind {
  phase_mode1,
  phase_mode2,
  beam_splitter,
  asym_phase,
  squeeze_mode1,
  squeeze_mode2,
};

// K = diag(1,1,-1,-1).
Matrix4c symplectic_form();

SymplecticMatrix phase_shift_1(double phi);
SymplecticMatrix phase_shift_2(double phi);
SymplecticMatrix beam_splitter(double theta);
SymplecticMatrix asym_phase(double psi);
SymplecticMatrix squeeze_1(double r);
SymplecticMatrix squeeze_2(double r);

// Dispatch by kind; throws std::invalid_argument on an unknown kind or a
// non-finite parameter.
SymplecticMatrix symplectic_factory(SymplecticKind kind, double x);

// sigma = nu * M M^dagger with M = R1 R2 B Ras S1 S2, d = (gamma, conj gamma).
PhaseSpaceState build_state(const IsotropicGaussianParams& p);

// The two absolute values of the eigenvalues of K*sigma, sorted ascending.
// Throws when any falls below 1 - 1e-6 (non-physical covariance).
std::pair<double, double> symplectic_eigenvalues(const PhaseSpaceState& s);

// <N> = tr[sigma]/4 - 1 + |gamma|^2.
double mean_photon_number(const PhaseSpaceState& s);

// Closed form nu*(sinh^2 r1 + sinh^2 r2) + |gamma|^2 + (nu - 1).
double mean_photon_number(const IsotropicGaussianParams& p);

// tr(rho^2) = 1/(nu1*nu2).
double purity(const PhaseSpaceState& s);

// sigma -> s sigma s^dagger, d -> s d + shift. Rejects non-symplectic s and
// a shift without the (x, conj x) pairing.
PhaseSpaceState apply_symplectic(const PhaseSpaceState& s,
                                 const SymplecticMatrix& m,
                                 const Vector4c& shift = Vector4c::Zero());

// Inverse of build_state on isotropic states: returns params with
// r_1 >= r_2 >= 0 and angles in [0, 2*pi) such that build_state reproduces
// sigma and d within 1e-8. Throws on anisotropic input
// (|nu1 - nu2| > 1e-8 * max).
IsotropicGaussianParams extract_params(const PhaseSpaceState& s);

}  // namespace gqfi
