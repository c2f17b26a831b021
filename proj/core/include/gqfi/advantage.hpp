#pragma once

#include "gqfi/gaussian_state.hpp"
#include "gqfi/plo.hpp"

namespace gqfi {

// One-mode Gaussian state D(gamma) R(phi) S(r) rho_th(nu).
struct OneModeParams {
  double nu = 1.0;
  double gamma_abs = 0.0;
  double phi = 0.0;
  double phi_d = 0.0;
  double r = 0.0;
};

// Displaced squeezed mode against a bare thermal mode
// (theta = psi = alpha = r_2 = 0); phi_tilde = phi_d + phi_1 is the relative
// squeezing-displacement orientation.
struct SpecialFamilyParams {
  double nu = 1.0;
  double gamma_abs = 0.0;
  double r1 = 0.0;
  double phi_tilde = 0.0;
};

// The one-mode QFI appears in two readings: the literal printed form with
// unsquared trigonometric weights, and the squared form that matches the
// two-mode family at nu = 1, a = b = pi/4. The squared form is the default;
// the one-mode Fock oracle arbitrates (see tests).
enum class OneModeQfiForm { squared, printed };

struct SpecialFamilyOpt {
  double i_f_opt = 0.0;
  int regime = 0;  // 1, 2 or 3
};

// Max(I_F^opt - FTQL, 0) via the passive-operation optimizer.
double metrological_advantage(const IsotropicGaussianParams& p);

// Full 11-parameter embedding of the family (phi_1 = phi_tilde, phi_d1 = 0).
IsotropicGaussianParams embed_special_family(const SpecialFamilyParams& p);

// Closed-form QFI of the family after U = Ras(a) B(b) Ras(c); c drops out.
double special_family_qfi(const SpecialFamilyParams& p, double a, double b);

// Closed-form optimum over (a, b) with the regime that attains it:
// regimes 1-2 at a = b = pi/4, regime 3 straight into the interferometer.
SpecialFamilyOpt special_family_qfi_opt(const SpecialFamilyParams& p);

double one_mode_qfi(const OneModeParams& p,
                    OneModeQfiForm form = OneModeQfiForm::squared);

// Reference bound for the one-mode problem (same closed form restricted to
// a single squeezed mode).
double one_mode_ftql(const OneModeParams& p);

// Displacement of the two-mode state by delta_gamma (the limiting form of
// mixing with a strong coherent ancilla); covariance unchanged.
IsotropicGaussianParams ancilla_displace(const IsotropicGaussianParams& p,
                                         complexd delta_gamma1,
                                         complexd delta_gamma2);

// (I_F^opt - FTQL)/FTQL. Throws when the reference vanishes (neither
// squeezing nor displacement present).
double renormalized_advantage(const IsotropicGaussianParams& p);

}  // namespace gqfi
