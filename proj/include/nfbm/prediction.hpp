#pragma once

#include <Eigen/Core>
#include <functional>
#include <utility>
#include <vector>

#include "nfbm/kernels.hpp"
#include "nfbm/rng.hpp"
#include "nfbm/simulation.hpp"

namespace nfbm {

// Law of (B(t_1), ..., B(t_k)) given the driving increments on [0,u].
struct ConditionalLaw {
    double u = 0.0;
    Eigen::VectorXd targets;
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
};

// Conditioning happens inside the discrete model B = K dW, so u and the
// targets must be grid points. With J = u/Delta:
//   mean_i = B(u) + sum_{j<=J} (K[t_i][j] - K[J][j]) dW_j
//   cov_ik = Delta sum_{J<j<=min} K[t_i][j] K[t_k][j]
// The covariance is the model covariance minus its part explained by [0,u].
ConditionalLaw predict(const HurstOrder& ho, const SamplePath& path, double u, const Eigen::VectorXd& targets);

// Continuum counterpart of the covariance: r(t,s) - int_0^u k(t,v) k(s,v) dv.
double conditional_covariance(const HurstOrder& ho, double u, double t, double s);

struct GaussianBlock {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
};

// Schur complement of a zero-mean Gaussian vector:
//   mu = S_to S_oo^{-1} y,  S_c = S_tt - S_to S_oo^{-1} S_ot.
GaussianBlock gaussian_conditioning_oracle(const Eigen::MatrixXd& joint_cov, const std::vector<int>& observed_idx,
                                           const Eigen::VectorXd& observed_vals, const std::vector<int>& target_idx);

// E f(X), X ~ N(mean_i, cov_ii), by Gauss-Hermite with `nodes` points.
double predict_functional(const ConditionalLaw& law, const std::function<double(double)>& f, int target_index,
                          int nodes = 64);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

McEstimate predict_functional_multi(const ConditionalLaw& law, const std::function<double(const Eigen::VectorXd&)>& f,
                                    RngStream& rng, int samples);

}  // namespace nfbm
