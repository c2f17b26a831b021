#pragma once

#include <array>
#include <optional>

#include <Eigen/Dense>

#include "gqfi/gaussian_state.hpp"

namespace gqfi {

// Closed-form coefficients of the N = 2 component of a two-mode displaced
// thermal state, thermal weight theta_i per mode and displacement beta_i.
struct TwoPhotonCoefficients {
  double c_norm = 0.0;  // overall factor C (positive)
  double lambda1 = 0.0, lambda2 = 0.0, omega = 0.0;
  complexd upsilon1, upsilon2, xi;
};

struct PptReport {
  std::array<double, 4> eigenvalues{};  // partial-transpose spectrum, ascending
  bool separable_in_n2 = false;
  // Omega/2 - Xi, the eigenvalue that decouples in the fully symmetric case.
  std::optional<double> isolated_eigenvalue;
  // Relative residuals of the three characteristic-polynomial identities
  // (trace, pairwise sum, product), available in the symmetric case.
  std::optional<std::array<double, 3>> identity_residuals;
};

// Throws std::invalid_argument unless theta_i lies in [0, 1) and beta_i is
// finite.
TwoPhotonCoefficients two_photon_coefficients(complexd beta1, complexd beta2,
                                              double theta1, double theta2);

// The (unnormalized) N = 2 density matrix in the single-particle basis
// (|11>, |12>, |21>, |22>), Hermitian by construction. Matches the
// displaced-Fock summation entrywise.
Eigen::Matrix4cd single_particle_matrix(const TwoPhotonCoefficients& c);

// Peres-Horodecki check: spectrum of the partial transpose over the second
// particle. Separability verdicts use the eigenvalue sign only, so the
// missing normalization is irrelevant.
PptReport partial_transpose_spectrum(const TwoPhotonCoefficients& c);

// Brute-force rebuild of the same matrix by thermal summation over displaced
// Fock kets, including the overall factor C. Throws when theta^p_max exceeds
// 1e-12 (truncation insufficient).
Eigen::Matrix4cd displaced_fock_oracle_n2(complexd beta1, complexd beta2,
                                          double theta1, double theta2,
                                          int p_max, int q_max);

}  // namespace gqfi
