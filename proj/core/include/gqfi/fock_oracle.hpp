#pragma once

#include <Eigen/Dense>

#include "gqfi/gaussian_state.hpp"

namespace gqfi {

// Truncated two-mode density matrix, d Fock levels per mode (dimension d^2).
struct FockState {
  Eigen::MatrixXcd rho;   // unit trace after renormalization
  int cutoff = 0;         // d
  double leakage = 0.0;   // 1 - trace before renormalization
  bool converged = false; // leakage at or below the configured cap
  // Cached low-rank factor with rho = factor * factor^+; lets the spectral
  // QFI run on the Gram matrix instead of the full density matrix.
  Eigen::MatrixXcd factor;
};

struct FockBuildOptions {
  double leakage_cap = 1e-8;
};

// Builds the state by exponentiating the truncated generators of the
// squeezing, mode-mixing, phase and displacement factors (in the same order
// and sign conventions as the phase-space construction) and conjugating the
// two-mode thermal state with Boltzmann weight theta = (nu-1)/(nu+1) per
// mode. The construction runs in a padded space and is projected onto the
// requested cutoff; all weight outside the box, including weight lost to
// truncation, lands in the leakage figure.
FockState fock_build(const IsotropicGaussianParams& p, int cutoff,
                     const FockBuildOptions& opts = {});

// Spectral quantum Fisher information of the interferometer rotation,
// I_F = 2 sum_{p_i + p_j > eps} (p_i - p_j)^2/(p_i + p_j) |<i|h|j>|^2 with
// h = i(a1+ a2 - a1 a2+). The normalization makes a coherent probe attain
// 4<N>, the standard quantum limit.
double fock_qfi_jy(const FockState& state, double eigenvalue_floor = 1e-12);

double fock_mean_photon(const FockState& state);
double fock_purity(const FockState& state);

// Smallest cutoff <= d_max whose leakage is at or below target_leakage.
// Throws std::runtime_error when no cutoff in range suffices.
int cutoff_search(const IsotropicGaussianParams& p, double target_leakage,
                  int d_max = 64);

// Leakage a given cutoff would incur, without forming the density matrix.
double fock_leakage(const IsotropicGaussianParams& p, int cutoff);

// One-mode counterpart used to pin down the one-mode QFI reading: the state
// D(gamma) R(phi) S(r) rho_th(nu) truncated to `cutoff` levels, and the
// spectral QFI of the plain number-operator phase channel.
Eigen::MatrixXcd one_mode_fock_density(double nu, double gamma_abs, double phi,
                                       double phi_d, double r, int cutoff,
                                       double* leakage = nullptr);
double one_mode_fock_qfi(const Eigen::MatrixXcd& rho,
                         double eigenvalue_floor = 1e-12);

}  // namespace gqfi
