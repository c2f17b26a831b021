#pragma once

#include <optional>
#include <string>
#include <utility>

#include "gqfi/gaussian_state.hpp"

namespace gqfi {

// Euler angles of a passive linear operation U = Ras(a) B(b) Ras(c).
struct PloAngles {
  double a = 0.0, b = 0.0, c = 0.0;
  PloAngles reduced() const;
};

enum class Theorem1Case {
  v_positive,
  v_negative_small_gamma,
  v_negative_large_gamma,
  v_zero_mode1,
  v_zero_mode2,
  displaced_thermal,
};

std::string to_string(Theorem1Case c);

// Outcome of the constructive strategy: the case taken, the passive
// operation it composes, and the advantage gap that operation achieves.
struct Theorem1Certificate {
  Theorem1Case case_tag = Theorem1Case::displaced_thermal;
  PloAngles chosen_plo;
  std::optional<double> gamma_threshold;  // |gamma_s|, set on the V < 0 branch
  double achieved_gap = 0.0;
  // Pure-state exception: nu = 1 with gap = 0 attains the reference bound
  // without surpassing it.
  bool ftql_attained_not_surpassed = false;
};

struct OptimizeResult {
  double i_f_opt = 0.0;
  PloAngles best;
  int evaluations = 0;          // objective evaluations spent
  int multistart_count = 0;     // local refinements launched
  double best_second_spread = 0.0;  // best minus runner-up refined value
};

// 2x2 block of the phase-space representation (the conjugate block is its
// complex conjugate). Determinant one by construction.
Eigen::Matrix2cd plo_unitary(const PloAngles& u);

// Euler angles of a det-1 unitary; inverse of plo_unitary up to the usual
// representation redundancies.
PloAngles plo_from_unitary(const Eigen::Matrix2cd& u);

PloAngles compose(const PloAngles& outer, const PloAngles& inner);

SymplecticMatrix plo_symplectic(const PloAngles& u);

// Parameters of U rho U+: build, transform in phase space, re-extract.
IsotropicGaussianParams apply_plo(const IsotropicGaussianParams& p,
                                  const PloAngles& u);

// Passive operation mapping any isotropic state onto the working form
// theta = 0, psi = 0, phi_1 - phi_2 = pi/2 (so m = p = 0, o = 1). Returns
// the transformed parameters and the operation used.
std::pair<IsotropicGaussianParams, PloAngles> canonical_map(
    const IsotropicGaussianParams& p);

// Constructive advantage strategy: canonicalize, branch on the sign of the
// displacement bracket V, and return the composed operation together with
// the gap it achieves. Positive for every squeezed non-pure state, zero for
// displaced thermal states.
Theorem1Certificate theorem1_strategy(const IsotropicGaussianParams& p);

// Global maximum of qfi_jy(apply_plo(p, u)) over the Euler cube, by a
// deterministic 12x12x12 grid multistart with Nelder-Mead refinement.
OptimizeResult optimize_qfi(const IsotropicGaussianParams& p);

}  // namespace gqfi
