#include "nfbm/prediction.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "nfbm/covariance.hpp"
#include "nfbm/errors.hpp"
#include "nfbm/quadrature.hpp"

namespace nfbm {

namespace {

int grid_index(const Grid& grid, double t, const char* what) {
    const double x = t / grid.step();
    const long i = std::lround(x);
    if (std::abs(x - double(i)) > 1e-9 || i < 0 || i > grid.m)
        throw DomainError(std::string("predict: ") + what + " must be a grid point in [0,T]");
    return int(i);
}

}  // namespace

ConditionalLaw predict(const HurstOrder& ho, const SamplePath& path, double u, const Eigen::VectorXd& targets) {
    if (!(path.ho == ho)) throw DomainError("predict: path was generated at a different order");
    const Grid& grid = path.grid;
    const int J = grid_index(grid, u, "conditioning time");
    std::vector<int> idx;
    for (Eigen::Index k = 0; k < targets.size(); ++k) {
        if (!(targets[k] > u)) throw DomainError("predict: targets must lie after u");
        idx.push_back(grid_index(grid, targets[k], "target"));
    }
    const KernelMatrix Km = kernel_matrix(ho, grid);
    const Eigen::MatrixXd& K = Km.dense();
    const Eigen::VectorXd dW = path.increments ? *path.increments : invert_kernel_matrix(Km, path);
    const double d = grid.step();
    const double Bu = path.values[J];

    ConditionalLaw law;
    law.u = u;
    law.targets = targets;
    const int k = int(idx.size());
    law.mean.resize(k);
    law.covariance.resize(k, k);
    for (int a = 0; a < k; ++a) {
        const int i = idx[a];
        double s = 0.0;
        for (int j = 0; j < J; ++j) s += (K(i - 1, j) - K(J - 1, j)) * dW[j];
        law.mean[a] = Bu + s;
        for (int b = 0; b <= a; ++b) {
            const int top = std::min(i, idx[b]);
            double c = 0.0;
            for (int j = J; j < top; ++j) c += K(i - 1, j) * K(idx[b] - 1, j);
            law.covariance(a, b) = law.covariance(b, a) = d * c;
        }
    }
    return law;
}

double conditional_covariance(const HurstOrder& ho, double u, double t, double s) {
    if (!(t > 0.0 && s > 0.0)) throw DomainError("conditional_covariance: need t, s > 0");
    if (u < 0.0 || u > std::min(t, s)) throw DomainError("conditional_covariance: need 0 <= u <= min(t,s)");
    const double r = nfbm_cov_closed(ho, t, s);
    if (u == 0.0) return r;
    const double a = ho.base() - 0.5;
    const double lead_u = u == std::min(t, s) ? (t == s ? 2.0 : 1.0) * (a + ho.n - 1) : 0.0;
    auto f = [&](double v) {
        const double kt = v < t ? nfbm_kernel(ho, t, v) : 0.0;
        const double ks = v < s ? nfbm_kernel(ho, s, v) : 0.0;
        return kt * ks;
    };
    auto res = quad::converge([&](int n) { return quad::graded_both(f, 0.0, u, -2.0 * std::abs(a), lead_u, n); }, 8, 1e-10, 128);
    if (!res.converged) throw AccuracyError("conditional_covariance", res.error / std::abs(res.value));
    return r - res.value;
}

GaussianBlock gaussian_conditioning_oracle(const Eigen::MatrixXd& joint_cov, const std::vector<int>& observed_idx,
                                           const Eigen::VectorXd& observed_vals, const std::vector<int>& target_idx) {
    const int no = int(observed_idx.size()), nt = int(target_idx.size());
    if (observed_vals.size() != no) throw DomainError("gaussian_conditioning_oracle: one value per observed index");
    Eigen::MatrixXd Soo(no, no), Sto(nt, no), Stt(nt, nt);
    for (int i = 0; i < no; ++i)
        for (int j = 0; j < no; ++j) Soo(i, j) = joint_cov(observed_idx[i], observed_idx[j]);
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < no; ++j) Sto(i, j) = joint_cov(target_idx[i], observed_idx[j]);
        for (int j = 0; j < nt; ++j) Stt(i, j) = joint_cov(target_idx[i], target_idx[j]);
    }
    GaussianBlock out;
    if (no == 0) {
        out.mean = Eigen::VectorXd::Zero(nt);
        out.covariance = Stt;
        return out;
    }
    const Eigen::MatrixXd L = jittered_cholesky(0.5 * (Soo + Soo.transpose()));
    const auto Lv = L.triangularView<Eigen::Lower>();
    // A = L^{-1} S_ot, so S_to S_oo^{-1} S_ot = A^T A
    const Eigen::MatrixXd A = Lv.solve(Eigen::MatrixXd(Sto.transpose()));
    const Eigen::VectorXd z = Lv.solve(observed_vals);
    out.mean = A.transpose() * z;
    out.covariance = Stt - A.transpose() * A;
    out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
    return out;
}

double predict_functional(const ConditionalLaw& law, const std::function<double(double)>& f, int target_index,
                          int nodes) {
    if (target_index < 0 || target_index >= law.mean.size()) throw DomainError("predict_functional: bad target index");
    const double mu = law.mean[target_index];
    const double var = law.covariance(target_index, target_index);
    if (!(var > 0.0)) return f(mu);
    const quad::Rule& r = quad::gauss_hermite(nodes);
    const double sd = std::sqrt(2.0 * var);
    double s = 0.0;
    for (int k = 0; k < nodes; ++k) s += r.w[k] * f(mu + sd * r.x[k]);
    return s / std::sqrt(std::numbers::pi);
}

McEstimate predict_functional_multi(const ConditionalLaw& law, const std::function<double(const Eigen::VectorXd&)>& f,
                                    RngStream& rng, int samples) {
    if (samples < 2) throw DomainError("predict_functional_multi: need at least 2 samples");
    const Eigen::MatrixXd L = jittered_cholesky(law.covariance);
    double sum = 0.0, sumsq = 0.0;
    for (int s = 0; s < samples; ++s) {
        const Eigen::VectorXd x = law.mean + L.triangularView<Eigen::Lower>() * rng.normals(law.mean.size());
        const double y = f(x);
        sum += y;
        sumsq += y * y;
    }
    McEstimate e;
    e.estimate = sum / samples;
    const double var = std::max(0.0, (sumsq - samples * e.estimate * e.estimate) / (samples - 1));
    e.std_error = std::sqrt(var / samples);
    return e;
}

}  // namespace nfbm
