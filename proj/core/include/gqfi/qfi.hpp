#pragma once

#include "gqfi/gaussian_state.hpp"

namespace gqfi {

// The seven angle coefficients entering the closed-form QFI, plus the
// combined squeezing-displacement angles. They obey two exact identities:
// m^2 + o^2 + p^2 = 1 and kappa^2 + delta^2 + upsilon^2 + lambda^2 = 1.
struct AuxiliaryParams {
  double m = 0.0, o = 0.0, p = 0.0;
  double kappa = 0.0, delta = 0.0, upsilon = 0.0, lambda = 0.0;
  double phi1_tilde = 0.0;  // phi_1 + phi_d2
  double phi2_tilde = 0.0;  // phi_2 + phi_d1
};

// Squeezing-temperature functionals. For nu >= 1 and r1, r2 >= 0 they
// satisfy z >= x >= |y| >= 0.
struct Xyz {
  double x = 0.0, y = 0.0, z = 0.0;
};

AuxiliaryParams auxiliary_params(const IsotropicGaussianParams& p);

Xyz xyz(double nu, double r1, double r2);

// Quantum Fisher information of the Mach-Zehnder phase channel for the
// state described by p (closed form; same value the Fock oracle computes
// spectrally).
double qfi_jy(const IsotropicGaussianParams& p);

// Finite-temperature quantum limit 4(<N>+1)/nu - 4, evaluated through the
// equivalent cancellation-free form 4(sinh^2 r1 + sinh^2 r2) + 4|gamma|^2/nu.
double ftql(const IsotropicGaussianParams& p);

// qfi_jy - ftql through the independent rewriting
// 2[m^2 Z + o^2 X + p^2 Y] + (4|gamma|^2/nu) V. Agrees with the direct
// difference to 1e-9 relative.
double advantage_gap(const IsotropicGaussianParams& p);

}  // namespace gqfi
