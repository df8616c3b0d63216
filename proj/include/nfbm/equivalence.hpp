#pragma once

#include <Eigen/Core>
#include <functional>

#include "nfbm/kernels.hpp"
#include "nfbm/simulation.hpp"

namespace nfbm {

// Drift a and Volterra kernel b sampled on a grid at left cell points:
//   a[l]   = a(t_l),             l = 0..m-1
//   b(l,j) = b(t_l, t_j),        j < l (zero on and above the diagonal)
struct DriftModel {
    Grid grid;
    Eigen::VectorXd a;
    Eigen::MatrixXd b;

    static DriftModel sample(const Grid& grid, const std::function<double(double)>& a,
                             const std::function<double(double, double)>& b);
    static DriftModel constant(const Grid& grid, double alpha, double beta);
    static DriftModel zero(const Grid& grid) { return constant(grid, 0.0, 0.0); }
};

// W~(t_i) = W(t_i) - sum_{l<=i} [sum_{j<l} b_lj dW_j] Delta + sum_{l<=i} a_l Delta
SamplePath hitsuda_transform(const SamplePath& W, const DriftModel& model);

// Recovers W from W~ with the resolvent: dW = (I - B*)(dW~ - a Delta).
SamplePath inverse_hitsuda_transform(const SamplePath& Wt, const DriftModel& model);

// B~ = K dW~, the equivalent process of order ho.
SamplePath nfbm_equivalent_path(const SamplePath& W, const DriftModel& model, const HurstOrder& ho);

// Discrete resolvent of a strictly lower kernel table: with B = Delta b,
// B* = I - (I - B)^{-1}, returned as b* = B*/Delta. Satisfies b* + b = Delta b b*.
Eigen::MatrixXd resolvent(const Eigen::MatrixXd& b, double delta);
// Same through -sum_{k>=1} B^k, stopped when a term drops below tol.
Eigen::MatrixXd resolvent_neumann(const Eigen::MatrixXd& b, double delta, double tol = 1e-12);
// (b . c)(i,l) = Delta sum_{l<j<i} b(i,j) c(j,l)
Eigen::MatrixXd triangle_convolution(const Eigen::MatrixXd& b, const Eigen::MatrixXd& c, double delta);

// theta_l = sum_{j<l} b_lj dW_j + a_l, the non-anticipating drift read off W
Eigen::VectorXd likelihood_drift(const SamplePath& W, const DriftModel& model);

// l(t_i) = sum_{l<=i} theta_l dW_l - 1/2 sum_{l<=i} theta_l^2 Delta for i = 0..m
Eigen::VectorXd log_likelihood_path(const SamplePath& W, const DriftModel& model);
double log_likelihood(const SamplePath& W, const DriftModel& model, double t);

// The model whose likelihood is the density of hitsuda_transform(., model)
// against Wiener measure: kernel b*, drift (I - B*) a.
DriftModel likelihood_model(const DriftModel& model);

int default_drift_window(int m);

// Least-squares slope through the origin over the first `window` grid points;
// estimates alpha in B^{(n)} + alpha t for n >= 2. window <= 0 picks ceil(sqrt(m)).
double recover_drift(const SamplePath& path, int window = 0);

}  // namespace nfbm
