#pragma once

#include <random>

#include "gqfi/gaussian_state.hpp"

namespace gqfi::test {

template <typename A, typename B>
double max_abs_diff(const A& a, const B& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

struct ParamSampler {
  std::mt19937_64 rng;
  explicit ParamSampler(uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }

  IsotropicGaussianParams draw(double nu_max = 5.0, double r_max = 2.0,
                               double gamma_max = 3.0) {
    IsotropicGaussianParams p;
    p.nu = uniform(1.0, nu_max);
    p.gamma_abs = uniform(0.0, gamma_max);
    p.alpha = uniform(0.0, kTwoPi);
    p.phi_d1 = uniform(0.0, kTwoPi);
    p.phi_d2 = uniform(0.0, kTwoPi);
    p.phi_1 = uniform(0.0, kTwoPi);
    p.phi_2 = uniform(0.0, kTwoPi);
    p.theta = uniform(0.0, kTwoPi);
    p.psi = uniform(0.0, kTwoPi);
    p.r_1 = uniform(0.0, r_max);
    p.r_2 = uniform(0.0, r_max);
    return p;
  }
};

}  // namespace gqfi::test
