#include "gqfi/plo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gqfi/qfi.hpp"

namespace gqfi {

namespace {

constexpr double kRateTol = 1e-9;      // squeezing rates below this are zero
constexpr double kVZeroTol = 1e-10;    // |V| below this takes the V = 0 branch

double sq(double x) { return x * x; }

double nu_factor(double nu) { return 1.0 / (1.0 + 1.0 / (nu * nu)); }

struct Objective {
  const IsotropicGaussianParams& params;
  mutable int evals = 0;
  double operator()(const PloAngles& u) const {
    ++evals;
    return qfi_jy(apply_plo(params, u));
  }
};

// Nelder-Mead ascent on the 3-torus of Euler angles. The objective is
// smooth and 2*pi-periodic, so an unconstrained simplex works; angles are
// reduced on output only.
PloAngles nelder_mead_max(const Objective& f, const PloAngles& start,
                          double& fbest) {
  using Point = std::array<double, 3>;
  constexpr int kMaxIter = 600;
  constexpr double kStep = 0.26;  // ~ 2*pi/24 initial simplex edge

  auto eval = [&](const Point& x) {
    return f(PloAngles{x[0], x[1], x[2]});
  };

  std::array<Point, 4> xs;
  std::array<double, 4> fs;
  xs[0] = {start.a, start.b, start.c};
  for (int i = 1; i < 4; ++i) {
    xs[i] = xs[0];
    xs[i][i - 1] += kStep;
  }
  for (int i = 0; i < 4; ++i) fs[i] = eval(xs[i]);

  for (int iter = 0; iter < kMaxIter; ++iter) {
    std::array<int, 4> idx = {0, 1, 2, 3};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return fs[i] > fs[j]; });
    std::array<Point, 4> oxs;
    std::array<double, 4> ofs;
    for (int i = 0; i < 4; ++i) {
      oxs[i] = xs[idx[i]];
      ofs[i] = fs[idx[i]];
    }
    xs = oxs;
    fs = ofs;

    double size = 0.0;
    for (int i = 1; i < 4; ++i)
      for (int k = 0; k < 3; ++k) size = std::max(size, std::abs(xs[i][k] - xs[0][k]));
    if (fs[0] - fs[3] <= 1e-13 * (1.0 + std::abs(fs[0])) || size <= 1e-12) break;

    Point centroid = {0, 0, 0};
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) centroid[k] += xs[i][k] / 3.0;

    auto blend = [&](double t) {
      Point p;
      for (int k = 0; k < 3; ++k) p[k] = centroid[k] + t * (centroid[k] - xs[3][k]);
      return p;
    };

    const Point xr = blend(1.0);
    const double fr = eval(xr);
    if (fr > fs[0]) {
      const Point xe = blend(2.0);
      const double fe = eval(xe);
      if (fe > fr) {
        xs[3] = xe;
        fs[3] = fe;
      } else {
        xs[3] = xr;
        fs[3] = fr;
      }
    } else if (fr > fs[2]) {
      xs[3] = xr;
      fs[3] = fr;
    } else {
      const Point xc = blend(fr > fs[3] ? 0.5 : -0.5);
      const double fc = eval(xc);
      if (fc > std::max(fr, fs[3])) {
        xs[3] = xc;
        fs[3] = fc;
      } else {
        for (int i = 1; i < 4; ++i) {
          for (int k = 0; k < 3; ++k) xs[i][k] = xs[0][k] + 0.5 * (xs[i][k] - xs[0][k]);
          fs[i] = eval(xs[i]);
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (fs[i] > fs[best]) best = i;
  fbest = fs[best];
  return PloAngles{xs[best][0], xs[best][1], xs[best][2]};
}

bool lex_less(const PloAngles& u, const PloAngles& v) {
  if (u.a != v.a) return u.a < v.a;
  if (u.b != v.b) return u.b < v.b;
  return u.c < v.c;
}

}  // namespace

PloAngles PloAngles::reduced() const {
  return {reduce_angle(a), reduce_angle(b), reduce_angle(c)};
}

std::string to_string(Theorem1Case c) {
  switch (c) {
    case Theorem1Case::v_positive:
      return "V_positive";
    case Theorem1Case::v_negative_small_gamma:
      return "V_negative_small_gamma";
    case Theorem1Case::v_negative_large_gamma:
      return "V_negative_large_gamma";
    case Theorem1Case::v_zero_mode1:
      return "V_zero_mode1";
    case Theorem1Case::v_zero_mode2:
      return "V_zero_mode2";
    case Theorem1Case::displaced_thermal:
      return "displaced_thermal";
  }
  return "unknown";
}

Eigen::Matrix2cd plo_unitary(const PloAngles& u) {
  const double cb = std::cos(u.b), sb = std::sin(u.b);
  Eigen::Matrix2cd m;
  m(0, 0) = cb * std::polar(1.0, -(u.a + u.c));
  m(0, 1) = sb * std::polar(1.0, -(u.a - u.c));
  m(1, 0) = -sb * std::polar(1.0, (u.a - u.c));
  m(1, 1) = cb * std::polar(1.0, (u.a + u.c));
  return m;
}

PloAngles plo_from_unitary(const Eigen::Matrix2cd& u_in) {
  // Strip any numerical determinant phase so the det-1 parameterization applies.
  Eigen::Matrix2cd u = u_in;
  const complexd det = u.determinant();
  if (std::abs(det) < 1e-12) throw std::invalid_argument("singular PLO block");
  u *= std::polar(1.0, -0.5 * std::arg(det)) / std::sqrt(std::abs(det));

  const double cb = std::abs(u(0, 0));
  const double sb = std::abs(u(0, 1));
  PloAngles r;
  r.b = std::atan2(sb, cb);
  double apc = 0.0, amc = 0.0;
  if (cb >= 1e-12) apc = -std::arg(u(0, 0));
  if (sb >= 1e-12) amc = -std::arg(u(0, 1));
  r.a = 0.5 * (apc + amc);
  r.c = 0.5 * (apc - amc);
  return r.reduced();
}

PloAngles compose(const PloAngles& outer, const PloAngles& inner) {
  return plo_from_unitary(plo_unitary(outer) * plo_unitary(inner));
}

SymplecticMatrix plo_symplectic(const PloAngles& u) {
  return {asym_phase(u.a).m * beam_splitter(u.b).m * asym_phase(u.c).m};
}

IsotropicGaussianParams apply_plo(const IsotropicGaussianParams& p,
                                  const PloAngles& u) {
  const PhaseSpaceState s = apply_symplectic(build_state(p), plo_symplectic(u));
  return extract_params(s);
}

std::pair<IsotropicGaussianParams, PloAngles> canonical_map(
    const IsotropicGaussianParams& p) {
  PloAngles uc{0.0, 0.0, 0.0};
  const AuxiliaryParams in = auxiliary_params(p);
  if (!(std::abs(in.m) <= 1e-12 && std::abs(in.p) <= 1e-12 && in.o >= 1.0 - 1e-12)) {
    // Normalize to the extraction convention first (r_1 >= r_2 >= 0), so the
    // working form below is computed against a fixed representative.
    const IsotropicGaussianParams base = extract_params(build_state(p));
    uc = PloAngles{-base.psi + kPi / 4.0, -base.theta,
                   0.5 * (base.phi_2 - base.phi_1)}
             .reduced();
  }
  IsotropicGaussianParams q = apply_plo(p, uc);

  // Gauge fixes. None of these change the state: with r_2 = 0 the mode-2
  // phase is free, with r_1 = r_2 a trailing beam-splitter commutes out, and
  // a pi shift of phi_1 is a column sign.
  if (q.r_1 <= kRateTol) {
    q.phi_1 = kPi / 2.0;
    q.phi_2 = 0.0;
    q.theta = 0.0;
    q.psi = 0.0;
  } else {
    if (std::abs(q.r_1 - q.r_2) <= 1e-11 * (1.0 + q.r_1)) q.theta = 0.0;
    if (q.r_2 <= kRateTol) {
      q.phi_2 = reduce_angle(q.phi_1 - kPi / 2.0);
    } else if (std::sin(q.phi_1 - q.phi_2) < 0.0) {
      q.phi_1 = reduce_angle(q.phi_1 + kPi);
    }
  }
  return {q, uc};
}

Theorem1Certificate theorem1_strategy(const IsotropicGaussianParams& p) {
  p.validate();
  const auto [q, uc] = canonical_map(p);

  Theorem1Certificate cert;
  PloAngles chosen = uc;

  if (q.r_1 <= kRateTol) {
    cert.case_tag = Theorem1Case::displaced_thermal;
  } else {
    const AuxiliaryParams a = auxiliary_params(q);
    const double v = sq(a.kappa) * std::expm1(2.0 * q.r_1) +
                     sq(a.delta) * std::expm1(-2.0 * q.r_1) +
                     sq(a.upsilon) * std::expm1(2.0 * q.r_2) +
                     sq(a.lambda) * std::expm1(-2.0 * q.r_2);
    const Xyz w = xyz(q.nu, q.r_1, q.r_2);

    if (std::abs(v) <= kVZeroTol) {
      // Mode-reduction subcases; the tag follows which input mode carried
      // the squeezing (canonicalization reorders the rates).
      cert.case_tag = (std::abs(p.r_1) <= kRateTol && std::abs(p.r_2) > kRateTol)
                          ? Theorem1Case::v_zero_mode2
                          : Theorem1Case::v_zero_mode1;
      const double leak = sq(a.kappa) + sq(a.delta);
      const bool mode_reduced = q.r_2 <= kRateTol && leak <= 1e-16;
      // With no displacement and nu > 1 the canonical phase shift already
      // certifies gap = 2X > 0; the balanced protocol is only needed when a
      // displacement competes or the state is pure (X may vanish there).
      if (mode_reduced && (q.gamma_abs > 1e-12 || q.nu <= 1.0 + 1e-9)) {
        const double phi_t = q.phi_1 + q.phi_d1;
        const double st = std::sin(phi_t), ct = std::cos(phi_t);
        const double vd = st * st * std::expm1(2.0 * q.r_1) +
                          ct * ct * std::expm1(-2.0 * q.r_1);
        const double s1 = std::sinh(q.r_1);
        const double mix_gain = 8.0 * nu_factor(q.nu) * s1 * s1 * std::cosh(2.0 * q.r_1);
        const double disp_loss = -4.0 * sq(q.gamma_abs) * vd / q.nu;
        if (vd >= 0.0 || disp_loss < mix_gain)
          chosen = compose(PloAngles{kPi / 4.0, kPi / 4.0, 0.0}, uc);
      }
      // Otherwise (balanced cancellation with both modes squeezed) the
      // canonical form already achieves gap = 2X.
    } else if (v > 0.0) {
      cert.case_tag = Theorem1Case::v_positive;
    } else {
      const double gamma_s = std::sqrt(q.nu * w.x / (2.0 * std::abs(v)));
      cert.gamma_threshold = gamma_s;
      if (q.gamma_abs < gamma_s) {
        cert.case_tag = Theorem1Case::v_negative_small_gamma;
      } else {
        cert.case_tag = Theorem1Case::v_negative_large_gamma;
        chosen = compose(PloAngles{kPi / 4.0, 0.0, 0.0}, uc);
      }
    }
  }

  cert.chosen_plo = chosen.reduced();
  // the regrouped gap formula stays exact where qfi - ftql would cancel
  cert.achieved_gap = advantage_gap(apply_plo(p, cert.chosen_plo));
  cert.ftql_attained_not_surpassed =
      (p.nu <= 1.0 + 1e-9) && (cert.achieved_gap <= 1e-9);
  return cert;
}

OptimizeResult optimize_qfi(const IsotropicGaussianParams& p) {
  p.validate();
  Objective f{p};

  constexpr int kGrid = 12;
  struct Seed {
    double value;
    PloAngles u;
  };
  std::vector<Seed> grid;
  grid.reserve(kGrid * kGrid * kGrid);
  for (int ia = 0; ia < kGrid; ++ia) {
    for (int ib = 0; ib < kGrid; ++ib) {
      for (int ic = 0; ic < kGrid; ++ic) {
        const PloAngles u{kTwoPi * ia / kGrid, kTwoPi * ib / kGrid,
                          kTwoPi * ic / kGrid};
        grid.push_back({f(u), u});
      }
    }
  }
  std::sort(grid.begin(), grid.end(), [](const Seed& x, const Seed& y) {
    if (x.value != y.value) return x.value > y.value;
    return lex_less(x.u, y.u);
  });

  std::vector<Seed> starts(grid.begin(), grid.begin() + 8);
  // The constructive strategy is a known lower bound; refine from it too so
  // the optimizer never reports less than the certificate.
  const Theorem1Certificate cert = theorem1_strategy(p);
  starts.push_back({f(cert.chosen_plo), cert.chosen_plo});

  std::vector<Seed> refined;
  for (const Seed& s : starts) {
    double fb = s.value;
    PloAngles u = nelder_mead_max(f, s.u, fb);
    refined.push_back({fb, u.reduced()});
  }
  std::sort(refined.begin(), refined.end(), [](const Seed& x, const Seed& y) {
    if (x.value != y.value) return x.value > y.value;
    return lex_less(x.u, y.u);
  });

  OptimizeResult out;
  out.i_f_opt = refined[0].value;
  out.best = refined[0].u;
  out.multistart_count = static_cast<int>(refined.size());
  out.best_second_spread = refined[0].value - refined[1].value;
  out.evaluations = f.evals;
  return out;
}

}  // namespace gqfi
