#include "nfbm/simulation.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <mutex>
#include <thread>
#include <unsupported/Eigen/FFT>
#include <vector>

#include "nfbm/errors.hpp"

namespace nfbm {

std::string to_string(Method m) {
    switch (m) {
        case Method::VOLTERRA: return "volterra";
        case Method::CHOLESKY: return "cholesky";
        case Method::FFT_INTEGRATED: return "fft";
    }
    return "unknown";
}

Eigen::VectorXd brownian_increments(const Grid& grid, RngStream& rng) {
    return std::sqrt(grid.step()) * rng.normals(grid.m);
}

SamplePath volterra_path(const KernelMatrix& K, const Eigen::VectorXd& dW) {
    SamplePath p;
    p.grid = K.grid();
    p.ho = K.order();
    p.method = Method::VOLTERRA;
    p.values.resize(p.grid.m + 1);
    p.values[0] = 0.0;
    p.values.tail(p.grid.m) = K.apply(dW);
    p.increments = dW;
    return p;
}

SamplePath simulate_volterra(const HurstOrder& ho, const Grid& grid, RngStream& rng) {
    const KernelMatrix K = kernel_matrix(ho, grid);
    SamplePath p = volterra_path(K, brownian_increments(grid, rng));
    p.seed = rng.seed();
    p.stream = rng.stream();
    return p;
}

Eigen::MatrixXd jittered_cholesky(const Eigen::MatrixXd& C) {
    const Eigen::Index m = C.rows();
    Eigen::LLT<Eigen::MatrixXd> llt(C);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    const double scale = C.trace() / double(m);
    for (double eps = 1e-14; eps <= 1e-8 * (1 + 1e-9); eps *= 10.0) {
        llt.compute(C + eps * scale * Eigen::MatrixXd::Identity(m, m));
        if (llt.info() == Eigen::Success) return llt.matrixL();
    }
    throw ConditioningError("Cholesky failed after jitter 1e-8 trace/m");
}

CholeskySampler::CholeskySampler(const HurstOrder& ho, const Grid& grid, NormalizationMode mode)
    : ho_(ho), grid_(grid) {
    L_ = jittered_cholesky(covariance_matrix(ho, grid.points().tail(grid.m), mode));
}

SamplePath CholeskySampler::sample(RngStream& rng) const {
    SamplePath p;
    p.grid = grid_;
    p.ho = ho_;
    p.method = Method::CHOLESKY;
    p.seed = rng.seed();
    p.stream = rng.stream();
    p.values.resize(grid_.m + 1);
    p.values[0] = 0.0;
    p.values.tail(grid_.m) = L_.triangularView<Eigen::Lower>() * rng.normals(grid_.m);
    return p;
}

SamplePath simulate_cholesky(const HurstOrder& ho, const Grid& grid, RngStream& rng, NormalizationMode mode) {
    return CholeskySampler(ho, grid, mode).sample(rng);
}

FgnSampler::FgnSampler(double H, const Grid& grid) : H_(H), grid_(grid) {
    if (!(H > 0.0 && H < 1.0)) throw DomainError("simulate_fgn_fft: H must lie in (0,1)");
    const int m = grid.m;
    const double e = 2.0 * H;
    auto gamma = [e](double k) {
        return 0.5 * (std::pow(std::abs(k + 1.0), e) - 2.0 * std::pow(std::abs(k), e) + std::pow(std::abs(k - 1.0), e));
    };
    std::vector<double> c(2 * m);
    for (int k = 0; k <= m; ++k) c[k] = gamma(k);
    for (int k = 1; k < m; ++k) c[2 * m - k] = gamma(k);
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spectrum;
    fft.fwd(spectrum, c);
    lambda_.resize(2 * m);
    for (int k = 0; k < 2 * m; ++k) lambda_[k] = spectrum[k].real();
    const double top = lambda_.maxCoeff();
    if (lambda_.minCoeff() < -1e-10 * top)
        throw EmbeddingError("circulant embedding has a negative eigenvalue " + std::to_string(lambda_.minCoeff()));
    // the remaining negatives are rounding noise
    lambda_ = lambda_.cwiseMax(0.0);
}

SamplePath FgnSampler::sample(RngStream& rng) const {
    const int m = grid_.m, N = 2 * m;
    std::vector<std::complex<double>> w(N), y;
    for (int k = 0; k < N; ++k) {
        const double re = rng.normal();
        const double im = rng.normal();
        w[k] = std::sqrt(lambda_[k] / N) * std::complex<double>(re, im);
    }
    Eigen::FFT<double> fft;
    fft.fwd(y, w);
    SamplePath p;
    p.grid = grid_;
    p.ho = HurstOrder(1, H_);
    p.method = Method::FFT_INTEGRATED;
    p.seed = rng.seed();
    p.stream = rng.stream();
    p.values.resize(m + 1);
    p.values[0] = 0.0;
    const double scale = std::pow(grid_.step(), H_);
    for (int i = 0; i < m; ++i) p.values[i + 1] = p.values[i] + scale * y[i].real();
    return p;
}

SamplePath simulate_fgn_fft(double H, const Grid& grid, RngStream& rng) { return FgnSampler(H, grid).sample(rng); }

SamplePath integrate_path(const SamplePath& path) {
    SamplePath out = path;
    out.ho = HurstOrder(path.ho.n + 1, path.ho.H + 1.0);
    out.increments.reset();
    const double d = path.grid.step();
    out.values[0] = 0.0;
    for (int i = 1; i <= path.grid.m; ++i)
        out.values[i] = out.values[i - 1] + 0.5 * d * (path.values[i - 1] + path.values[i]);
    return out;
}

SamplePath differentiate_path(const SamplePath& path, int k) {
    if (k < 0) throw DomainError("differentiate_path: k must be nonnegative");
    if (k == 0) return path;
    if (k >= path.ho.n)
        throw RoughnessError("differentiate_path: a path of order " + std::to_string(path.ho.n) +
                             " has only " + std::to_string(path.ho.n - 1) + " derivatives");
    const int m = path.grid.m;
    if (m < 3) throw DomainError("differentiate_path: need at least 3 steps");
    const double d = path.grid.step();
    Eigen::VectorXd v = path.values;
    for (int r = 0; r < k; ++r) {
        Eigen::VectorXd w(m + 1);
        w[0] = 0.0;
        for (int i = 1; i < m; ++i) w[i] = (v[i + 1] - v[i - 1]) / (2.0 * d);
        w[m] = (3.0 * v[m] - 4.0 * v[m - 1] + v[m - 2]) / (2.0 * d);
        v = std::move(w);
    }
    SamplePath out = path;
    out.values = std::move(v);
    out.ho = HurstOrder(path.ho.n - k, path.ho.H - k);
    out.increments.reset();
    return out;
}

Eigen::VectorXd invert_kernel_matrix(const KernelMatrix& K, const SamplePath& path) {
    if (!(path.grid == K.grid())) throw DomainError("invert_kernel_matrix: path and kernel grids differ");
    return invert_kernel_matrix(K, path.values);
}

double difference_scaling_exponent(const SamplePath& path, int order, const std::vector<int>& steps) {
    if (order < 1) throw DomainError("difference_scaling_exponent: order must be positive");
    if (steps.size() < 2) throw DomainError("difference_scaling_exponent: need at least two step counts");
    const int m = path.grid.m;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int c : steps) {
        if (c <= order || m % c != 0) throw DomainError("difference_scaling_exponent: step counts must divide m");
        const int stride = m / c;
        Eigen::VectorXd v(c + 1);
        for (int i = 0; i <= c; ++i) v[i] = path.values[i * stride];
        for (int r = 0; r < order; ++r) v = (v.tail(v.size() - 1) - v.head(v.size() - 1)).eval();
        const double x = std::log(path.grid.T / c), y = std::log(v.cwiseAbs().maxCoeff());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double k = double(steps.size());
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    int workers = threads > 0 ? threads : int(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min(workers, std::max(count, 1));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mu;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mu);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace nfbm
