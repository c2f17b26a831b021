#include "gqfi/advantage.hpp"

#include <cmath>
#include <stdexcept>

#include "gqfi/qfi.hpp"

namespace gqfi {

namespace {

double sq(double x) { return x * x; }

double nu_factor(double nu) { return 1.0 / (1.0 + 1.0 / (nu * nu)); }

void validate_one_mode(const OneModeParams& p) {
  const double fields[] = {p.nu, p.gamma_abs, p.phi, p.phi_d, p.r};
  for (double f : fields) {
    if (!std::isfinite(f)) throw std::invalid_argument("non-finite parameter");
  }
  if (p.nu < 1.0) throw std::invalid_argument("nu must be >= 1");
  if (p.gamma_abs < 0.0) throw std::invalid_argument("|gamma| must be >= 0");
}

void validate_family(const SpecialFamilyParams& p) {
  const double fields[] = {p.nu, p.gamma_abs, p.r1, p.phi_tilde};
  for (double f : fields) {
    if (!std::isfinite(f)) throw std::invalid_argument("non-finite parameter");
  }
  if (p.nu < 1.0) throw std::invalid_argument("nu must be >= 1");
  if (p.gamma_abs < 0.0) throw std::invalid_argument("|gamma| must be >= 0");
}

// e^{2r} sin^2(phi) + e^{-2r} cos^2(phi) - 1, exact near r = 0.
double orientation_bracket(double r, double phi) {
  const double s = std::sin(phi), c = std::cos(phi);
  return s * s * std::expm1(2.0 * r) + c * c * std::expm1(-2.0 * r);
}

}  // namespace

double metrological_advantage(const IsotropicGaussianParams& p) {
  const double gap = optimize_qfi(p).i_f_opt - ftql(p);
  return std::max(gap, 0.0);
}

IsotropicGaussianParams embed_special_family(const SpecialFamilyParams& p) {
  validate_family(p);
  IsotropicGaussianParams q;
  q.nu = p.nu;
  q.gamma_abs = p.gamma_abs;
  q.r_1 = p.r1;
  q.phi_1 = reduce_angle(p.phi_tilde);  // phi_d1 = 0, so phi_tilde = phi_1
  return q;
}

double special_family_qfi(const SpecialFamilyParams& p, double a, double b) {
  validate_family(p);
  const double c = nu_factor(p.nu);
  const double s1 = std::sinh(p.r1);
  const double base = 8.0 * c * s1 * s1 + 4.0 * sq(p.gamma_abs) / p.nu;
  const double knob = sq(std::sin(2.0 * b)) * sq(std::sin(2.0 * a));
  const double squeeze_gain = 4.0 * c * (sq(std::sinh(2.0 * p.r1)) - 2.0 * s1 * s1);
  const double disp_gain =
      4.0 * sq(p.gamma_abs) / p.nu * orientation_bracket(p.r1, p.phi_tilde);
  return base + knob * (squeeze_gain + disp_gain);
}

SpecialFamilyOpt special_family_qfi_opt(const SpecialFamilyParams& p) {
  validate_family(p);
  const double c = nu_factor(p.nu);
  const double s1 = std::sinh(p.r1);
  const double v = orientation_bracket(p.r1, p.phi_tilde);

  SpecialFamilyOpt out;
  const double balanced =
      4.0 * c * sq(std::sinh(2.0 * p.r1)) + 4.0 * sq(p.gamma_abs) / p.nu * (v + 1.0);
  const double straight = 8.0 * c * s1 * s1 + 4.0 * sq(p.gamma_abs) / p.nu;
  if (v >= 0.0) {
    out.regime = 1;
    out.i_f_opt = balanced;
  } else if (-4.0 * sq(p.gamma_abs) * v / p.nu <
             4.0 * c * (sq(std::sinh(2.0 * p.r1)) - 2.0 * s1 * s1)) {
    out.regime = 2;
    out.i_f_opt = balanced;
  } else {
    out.regime = 3;
    out.i_f_opt = straight;
  }
  return out;
}

double one_mode_qfi(const OneModeParams& p, OneModeQfiForm form) {
  validate_one_mode(p);
  const double c = nu_factor(p.nu);
  const double phi_t = p.phi_d + p.phi;
  double weight = 0.0;
  switch (form) {
    case OneModeQfiForm::printed:
      // Appendix-style literal reading: unsquared trigonometric weights.
      weight = std::exp(2.0 * p.r) * std::cos(phi_t) +
               std::exp(-2.0 * p.r) * std::sin(phi_t);
      break;
    case OneModeQfiForm::squared:
      weight = 1.0 + orientation_bracket(p.r, phi_t);
      break;
  }
  return 4.0 * c * sq(std::sinh(2.0 * p.r)) +
         4.0 * sq(p.gamma_abs) / p.nu * weight;
}

double one_mode_ftql(const OneModeParams& p) {
  validate_one_mode(p);
  const double s = std::sinh(p.r);
  return 4.0 * s * s + 4.0 * sq(p.gamma_abs) / p.nu;
}

IsotropicGaussianParams ancilla_displace(const IsotropicGaussianParams& p,
                                         complexd delta_gamma1,
                                         complexd delta_gamma2) {
  PhaseSpaceState s = build_state(p);
  Vector4c shift;
  shift << delta_gamma1, delta_gamma2, std::conj(delta_gamma1),
      std::conj(delta_gamma2);
  s.d += shift;
  return extract_params(s);
}

double renormalized_advantage(const IsotropicGaussianParams& p) {
  const double ref = ftql(p);
  if (ref <= 0.0)
    throw std::domain_error("reference bound vanishes: state has neither squeezing nor displacement");
  return (optimize_qfi(p).i_f_opt - ref) / ref;
}

}  // namespace gqfi
