#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nfbm/covariance.hpp"
#include "nfbm/kernels.hpp"
#include "nfbm/rng.hpp"

namespace nfbm {

enum class Method { VOLTERRA, CHOLESKY, FFT_INTEGRATED };

std::string to_string(Method m);

struct SamplePath {
    Grid grid;
    Eigen::VectorXd values;  // length m+1, values[0] = 0
    HurstOrder ho;
    Method method = Method::VOLTERRA;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::optional<Eigen::VectorXd> increments;  // driving dW, length m
};

// i.i.d. N(0, Delta) increments
Eigen::VectorXd brownian_increments(const Grid& grid, RngStream& rng);

// B = K dW for given increments; keeps dW on the path.
SamplePath volterra_path(const KernelMatrix& K, const Eigen::VectorXd& dW);

SamplePath simulate_volterra(const HurstOrder& ho, const Grid& grid, RngStream& rng);

// Lower Cholesky factor with the escalating diagonal jitter
// eps = 1e-14 trace/m, x10 per retry, up to 1e-8 trace/m.
Eigen::MatrixXd jittered_cholesky(const Eigen::MatrixXd& C);

// Exact sampling at the grid points from the closed-form covariance.
// The factor is computed once, so ensembles reuse it.
class CholeskySampler {
public:
    CholeskySampler(const HurstOrder& ho, const Grid& grid, NormalizationMode mode = NormalizationMode::MG_UNIT);
    SamplePath sample(RngStream& rng) const;
    const Eigen::MatrixXd& factor() const { return L_; }

private:
    HurstOrder ho_;
    Grid grid_;
    Eigen::MatrixXd L_;
};

SamplePath simulate_cholesky(const HurstOrder& ho, const Grid& grid, RngStream& rng,
                             NormalizationMode mode = NormalizationMode::MG_UNIT);

// Davies-Harte circulant embedding of fractional Gaussian noise (size 2m).
class FgnSampler {
public:
    FgnSampler(double H, const Grid& grid);
    // fBm path, unit variance at t = 1
    SamplePath sample(RngStream& rng) const;
    const Eigen::VectorXd& eigenvalues() const { return lambda_; }

private:
    double H_;
    Grid grid_;
    Eigen::VectorXd lambda_;
};

SamplePath simulate_fgn_fft(double H, const Grid& grid, RngStream& rng);

// Cumulative trapezoid; order (n,H) -> (n+1,H+1). Drops stored increments,
// which no longer generate the result through a kernel matrix.
SamplePath integrate_path(const SamplePath& path);

// k-fold central differences, one-sided second-order at the right end.
// The left value stays 0 because every derivative of B^{(n)} below order n vanishes at 0.
SamplePath differentiate_path(const SamplePath& path, int k);

Eigen::VectorXd invert_kernel_matrix(const KernelMatrix& K, const SamplePath& path);

// Log-log slope of max_i |k-th forward difference| against the spacing, with
// the path subsampled to each step count in `steps` (each must divide m).
// Paths that are smooth of order H have slope about min(H, order).
double difference_scaling_exponent(const SamplePath& path, int order, const std::vector<int>& steps);

// Runs body(i) for i in [0, count) on `threads` workers (0 = hardware concurrency).
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace nfbm
