#include "gqfi/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

namespace gqfi {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Padding above the requested cutoff. Truncating the generator corrupts the
// exponential near the boundary while staying exactly unitary, so the state
// is built in a padded space and projected down; the pad absorbs the
// corrupted band and the projection measures the true out-of-box weight.
constexpr int kPad = 16;
constexpr double kWeightCut = 1e-16;  // thermal columns below this are dropped
constexpr int kMaxColumns = 4096;

int idx(int n1, int n2, int d) { return n1 * d + n2; }

MatrixXd annihilation(int d) {
  MatrixXd a = MatrixXd::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// exp((r/2)(a^2 - a+^2)), the single-mode squeezer.
MatrixXd squeezer(double r, int d) {
  const MatrixXd a = annihilation(d);
  const MatrixXd g = 0.5 * r * (a * a - (a * a).transpose());
  return g.exp();
}

// exp(g a+ - conj(g) a), the single-mode displacement.
MatrixXcd displacer(complexd g, int d) {
  const MatrixXcd a = annihilation(d).cast<complexd>();
  const MatrixXcd m = g * a.adjoint() - std::conj(g) * a;
  return m.exp();
}

// M <- (op x I) M, contracting the mode-1 index. M has d*d rows.
void apply_mode1(MatrixXcd& m, const MatrixXcd& op, int d) {
  const auto cols = m.cols();
  MatrixXcd strip(d, cols);
  for (int n2 = 0; n2 < d; ++n2) {
    for (int n1 = 0; n1 < d; ++n1) strip.row(n1) = m.row(idx(n1, n2, d));
    strip = op * strip;
    for (int n1 = 0; n1 < d; ++n1) m.row(idx(n1, n2, d)) = strip.row(n1);
  }
}

// M <- (I x op) M.
void apply_mode2(MatrixXcd& m, const MatrixXcd& op, int d) {
  for (int n1 = 0; n1 < d; ++n1)
    m.middleRows(n1 * d, d) = op * m.middleRows(n1 * d, d);
}

// M <- B(theta) M with B = exp(theta (a1+ a2 - a1 a2+)). The generator
// conserves the total photon number, so it exponentiates block by block.
void apply_beam_splitter(MatrixXcd& m, double theta, int d) {
  if (theta == 0.0) return;
  const auto cols = m.cols();
  for (int n = 0; n <= 2 * (d - 1); ++n) {
    const int lo = std::max(0, n - (d - 1));
    const int hi = std::min(n, d - 1);
    const int bs = hi - lo + 1;
    if (bs < 2) continue;
    MatrixXd g = MatrixXd::Zero(bs, bs);
    for (int k = lo; k < hi; ++k) {
      // a1+ a2 : |k, n-k> -> sqrt((k+1)(n-k)) |k+1, n-k-1>
      const double amp = std::sqrt(static_cast<double>((k + 1) * (n - k)));
      g(k + 1 - lo, k - lo) = theta * amp;
      g(k - lo, k + 1 - lo) = -theta * amp;
    }
    const MatrixXd b = g.exp();
    MatrixXcd strip(bs, cols);
    for (int k = lo; k <= hi; ++k) strip.row(k - lo) = m.row(idx(k, n - k, d));
    strip = b.cast<complexd>() * strip;
    for (int k = lo; k <= hi; ++k) m.row(idx(k, n - k, d)) = strip.row(k - lo);
  }
}

// sqrt-weighted state factor in the padded space: the state is F F+ up to
// the weight dropped by the column cut (folded into the leakage figure).
struct PaddedFactor {
  MatrixXcd f;        // (d_work^2) x K
  int d_work = 0;
  double weight_dropped = 0.0;
};

PaddedFactor build_factor(const IsotropicGaussianParams& p, int d_work) {
  p.validate();
  const int dim = d_work * d_work;
  // nu = coth(hw/2kT) = (e^x + 1)/(e^x - 1) with x = hw/kT inverts to the
  // Boltzmann ratio theta = e^{-x} = (nu - 1)/(nu + 1); no absolute units
  // are needed anywhere else.
  const double th = (p.nu - 1.0) / (p.nu + 1.0);

  struct Col {
    int n1, n2;
    double w;
  };
  std::vector<Col> cols;
  if (th == 0.0) {
    cols.push_back({0, 0, 1.0});
  } else {
    const double norm1 = 1.0 - th;
    for (int n1 = 0; n1 < d_work; ++n1) {
      for (int n2 = 0; n2 < d_work; ++n2) {
        const double w = norm1 * norm1 * std::pow(th, n1 + n2);
        if (w > kWeightCut) cols.push_back({n1, n2, w});
      }
    }
    std::sort(cols.begin(), cols.end(),
              [](const Col& a, const Col& b) { return a.w > b.w; });
    if (cols.size() > kMaxColumns) cols.resize(kMaxColumns);
  }

  double kept = 0.0;
  for (const Col& c : cols) kept += c.w;

  PaddedFactor out;
  out.d_work = d_work;
  out.weight_dropped = std::max(0.0, 1.0 - kept);
  out.f = MatrixXcd::Zero(dim, static_cast<int>(cols.size()));
  for (size_t k = 0; k < cols.size(); ++k)
    out.f(idx(cols[k].n1, cols[k].n2, d_work), static_cast<int>(k)) =
        std::sqrt(cols[k].w);

  if (p.r_1 != 0.0) apply_mode1(out.f, squeezer(p.r_1, d_work).cast<complexd>(), d_work);
  if (p.r_2 != 0.0) apply_mode2(out.f, squeezer(p.r_2, d_work).cast<complexd>(), d_work);
  if (p.psi != 0.0) {
    for (int n1 = 0; n1 < d_work; ++n1)
      for (int n2 = 0; n2 < d_work; ++n2)
        out.f.row(idx(n1, n2, d_work)) *= std::polar(1.0, -p.psi * (n1 - n2));
  }
  apply_beam_splitter(out.f, p.theta, d_work);
  if (p.phi_1 != 0.0 || p.phi_2 != 0.0) {
    for (int n1 = 0; n1 < d_work; ++n1)
      for (int n2 = 0; n2 < d_work; ++n2)
        out.f.row(idx(n1, n2, d_work)) *=
            std::polar(1.0, -(p.phi_1 * n1 + p.phi_2 * n2));
  }
  const complexd g1 = p.gamma1();
  const complexd g2 = p.gamma2();
  if (g1 != complexd(0.0)) apply_mode1(out.f, displacer(g1, d_work), d_work);
  if (g2 != complexd(0.0)) apply_mode2(out.f, displacer(g2, d_work), d_work);
  return out;
}

// Rows of the padded factor that live inside the requested d x d box.
MatrixXcd project_to_box(const PaddedFactor& pf, int d) {
  MatrixXcd sel(d * d, pf.f.cols());
  for (int n1 = 0; n1 < d; ++n1)
    for (int n2 = 0; n2 < d; ++n2)
      sel.row(idx(n1, n2, d)) = pf.f.row(idx(n1, n2, pf.d_work));
  return sel;
}

// I_F = 2 sum (p_i - p_j)^2/(p_i + p_j) |<i|h|j>|^2 from an eigensystem,
// splitting off the exact-kernel cross terms: a zero-weight partner
// contributes 4 p_j (|h v_j|^2 - sum_i |<v_i|h|v_j>|^2).
double spectral_qfi_from_factor(const MatrixXcd& vs, const VectorXd& ps,
                                const MatrixXcd& hvs, double eps) {
  const int k = static_cast<int>(ps.size());
  const MatrixXcd m = vs.adjoint() * hvs;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double s = ps(i) + ps(j);
      if (s <= eps) continue;
      const double diff = ps(i) - ps(j);
      total += 2.0 * diff * diff / s * std::norm(m(i, j));
    }
  }
  for (int j = 0; j < k; ++j) {
    const double inside = m.col(j).squaredNorm();
    const double outside = std::max(0.0, hvs.col(j).squaredNorm() - inside);
    total += 4.0 * ps(j) * outside;
  }
  return total;
}

// h V with h = i(a1+ a2 - a1 a2+), assembled from the two hopping bands.
MatrixXcd mode_mix_generator_times(const MatrixXcd& v, int d) {
  MatrixXcd hv = MatrixXcd::Zero(v.rows(), v.cols());
  const complexd iunit(0.0, 1.0);
  for (int n1 = 0; n1 < d; ++n1) {
    for (int n2 = 0; n2 < d; ++n2) {
      const int row = idx(n1, n2, d);
      if (n1 > 0 && n2 < d - 1) {
        const double amp = std::sqrt(static_cast<double>(n1 * (n2 + 1)));
        hv.row(row) += iunit * amp * v.row(idx(n1 - 1, n2 + 1, d));
      }
      if (n1 < d - 1 && n2 > 0) {
        const double amp = std::sqrt(static_cast<double>((n1 + 1) * n2));
        hv.row(row) -= iunit * amp * v.row(idx(n1 + 1, n2 - 1, d));
      }
    }
  }
  return hv;
}

}  // namespace

FockState fock_build(const IsotropicGaussianParams& p, int cutoff,
                     const FockBuildOptions& opts) {
  if (cutoff < 2) throw std::invalid_argument("cutoff must be at least 2");
  const PaddedFactor pf = build_factor(p, cutoff + kPad);
  MatrixXcd sel = project_to_box(pf, cutoff);

  const double trace = sel.squaredNorm();
  if (trace <= 0.0) throw std::runtime_error("truncated state has no weight left");
  sel /= std::sqrt(trace);

  const int dim = cutoff * cutoff;
  FockState out;
  out.cutoff = cutoff;
  out.leakage = 1.0 - trace + pf.weight_dropped;
  out.converged = out.leakage <= opts.leakage_cap;
  out.factor = std::move(sel);
  out.rho = MatrixXcd::Zero(dim, dim);
  out.rho.selfadjointView<Eigen::Lower>().rankUpdate(out.factor);
  out.rho = out.rho.selfadjointView<Eigen::Lower>();
  return out;
}

double fock_qfi_jy(const FockState& state, double eigenvalue_floor) {
  const int d = state.cutoff;
  const int dim = static_cast<int>(state.rho.rows());
  if (d * d != dim) throw std::invalid_argument("inconsistent cutoff");

  MatrixXcd vs;
  VectorXd ps;
  if (state.factor.size() > 0) {
    // rho = F F+: the Gram matrix F+F carries the nonzero spectrum and the
    // eigenvectors lift back through F.
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eg(state.factor.adjoint() *
                                                state.factor);
    if (eg.info() != Eigen::Success)
      throw std::runtime_error("gram matrix eigendecomposition failed");
    std::vector<int> keep;
    for (int i = 0; i < eg.eigenvalues().size(); ++i)
      if (eg.eigenvalues()(i) > eigenvalue_floor) keep.push_back(i);
    vs.resize(dim, static_cast<int>(keep.size()));
    ps.resize(static_cast<int>(keep.size()));
    for (size_t k = 0; k < keep.size(); ++k) {
      const double lam = eg.eigenvalues()(keep[k]);
      ps(static_cast<int>(k)) = lam;
      vs.col(static_cast<int>(k)) =
          state.factor * eg.eigenvectors().col(keep[k]) / std::sqrt(lam);
    }
  } else {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(state.rho);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("density matrix eigendecomposition failed");
    std::vector<int> keep;
    for (int i = 0; i < dim; ++i)
      if (es.eigenvalues()(i) > eigenvalue_floor) keep.push_back(i);
    vs.resize(dim, static_cast<int>(keep.size()));
    ps.resize(static_cast<int>(keep.size()));
    for (size_t k = 0; k < keep.size(); ++k) {
      ps(static_cast<int>(k)) = es.eigenvalues()(keep[k]);
      vs.col(static_cast<int>(k)) = es.eigenvectors().col(keep[k]);
    }
  }
  const MatrixXcd hvs = mode_mix_generator_times(vs, d);
  return spectral_qfi_from_factor(vs, ps, hvs, eigenvalue_floor);
}

double fock_mean_photon(const FockState& state) {
  const int d = state.cutoff;
  double total = 0.0;
  for (int n1 = 0; n1 < d; ++n1)
    for (int n2 = 0; n2 < d; ++n2)
      total += (n1 + n2) * state.rho(idx(n1, n2, d), idx(n1, n2, d)).real();
  return total;
}

double fock_purity(const FockState& state) { return state.rho.squaredNorm(); }

double fock_leakage(const IsotropicGaussianParams& p, int cutoff) {
  if (cutoff < 2) throw std::invalid_argument("cutoff must be at least 2");
  const PaddedFactor pf = build_factor(p, cutoff + kPad);
  double inside = 0.0;
  for (int n1 = 0; n1 < cutoff; ++n1)
    for (int n2 = 0; n2 < cutoff; ++n2)
      inside += pf.f.row(idx(n1, n2, pf.d_work)).squaredNorm();
  return 1.0 - inside + pf.weight_dropped;
}

int cutoff_search(const IsotropicGaussianParams& p, double target_leakage,
                  int d_max) {
  if (!(target_leakage > 0.0) || target_leakage > 1e-2)
    throw std::invalid_argument("target leakage must lie in (0, 1e-2]");
  if (d_max < 2) throw std::invalid_argument("d_max must be at least 2");

  // Leakage falls monotonically with the cutoff for these states; bracket
  // with doubling probes, then bisect for the smallest adequate cutoff.
  int hi = 2;
  double leak = fock_leakage(p, hi);
  while (leak > target_leakage) {
    if (hi >= d_max)
      throw std::runtime_error("cutoff exhausted: state out of oracle range");
    hi = std::min(2 * hi, d_max);
    leak = fock_leakage(p, hi);
  }
  int lo = std::max(2, hi / 2);
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (fock_leakage(p, mid) <= target_leakage)
      hi = mid;
    else
      lo = mid + 1;
  }
  return hi;
}

Eigen::MatrixXcd one_mode_fock_density(double nu, double gamma_abs, double phi,
                                       double phi_d, double r, int cutoff,
                                       double* leakage) {
  if (cutoff < 2) throw std::invalid_argument("cutoff must be at least 2");
  if (nu < 1.0) throw std::invalid_argument("nu must be >= 1");
  const int d = cutoff + kPad;

  MatrixXcd u = squeezer(r, d).cast<complexd>();
  for (int n = 0; n < d; ++n) u.row(n) *= std::polar(1.0, -phi * n);
  u = displacer(std::polar(gamma_abs, phi_d), d) * u;

  const double th = (nu - 1.0) / (nu + 1.0);
  VectorXd w = VectorXd::Zero(d);
  if (th == 0.0) {
    w(0) = 1.0;
  } else {
    for (int n = 0; n < d; ++n) w(n) = (1.0 - th) * std::pow(th, n);
  }

  MatrixXcd e = u;
  for (int n = 0; n < d; ++n) e.col(n) *= std::sqrt(w(n));
  const MatrixXcd boxed = e.topRows(cutoff);
  MatrixXcd rho = boxed * boxed.adjoint();
  const double trace = rho.trace().real();
  if (leakage) *leakage = 1.0 - trace;
  return rho / trace;
}

double one_mode_fock_qfi(const Eigen::MatrixXcd& rho, double eigenvalue_floor) {
  const int d = static_cast<int>(rho.rows());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("density matrix eigendecomposition failed");
  std::vector<int> keep;
  for (int i = 0; i < d; ++i)
    if (es.eigenvalues()(i) > eigenvalue_floor) keep.push_back(i);
  MatrixXcd vs(d, static_cast<int>(keep.size()));
  VectorXd ps(static_cast<int>(keep.size()));
  for (size_t k = 0; k < keep.size(); ++k) {
    ps(static_cast<int>(k)) = es.eigenvalues()(keep[k]);
    vs.col(static_cast<int>(k)) = es.eigenvectors().col(keep[k]);
  }
  MatrixXcd hvs = vs;
  for (int n = 0; n < d; ++n) hvs.row(n) *= static_cast<double>(n);
  return spectral_qfi_from_factor(vs, ps, hvs, eigenvalue_floor);
}

}  // namespace gqfi
