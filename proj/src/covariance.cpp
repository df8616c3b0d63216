#include "nfbm/covariance.hpp"

#include <algorithm>
#include <cmath>

#include "nfbm/errors.hpp"
#include "nfbm/special_functions.hpp"

namespace nfbm {

double fbm_cov(double H, double t, double s) {
    if (!(H > 0.0 && H < 1.0)) throw DomainError("fbm_cov: H must lie in (0,1)");
    const double e = 2.0 * H;
    return 0.5 * (std::pow(std::abs(t), e) + std::pow(std::abs(s), e) - std::pow(std::abs(t - s), e));
}

double reconciliation_factor(const HurstOrder& ho) { return 1.0 / perrin_constant(ho.base()); }

namespace {
double mode_constant(const HurstOrder& ho, NormalizationMode mode) {
    const double C = perrin_constant(ho.H);
    return mode == NormalizationMode::MG_UNIT ? C * reconciliation_factor(ho) : C;
}
}  // namespace

double nfbm_cov_closed(const HurstOrder& ho, double t, double s, NormalizationMode mode) {
    if (t < 0.0 || s < 0.0) throw DomainError("nfbm_cov_closed: times must be nonnegative");
    if (t == 0.0 || s == 0.0) return 0.0;
    const double e = 2.0 * ho.H;
    const double ts = std::pow(t, e), ss = std::pow(s, e);
    double sum = 0.0;
    double rt = 1.0, rs = 1.0;  // (t/s)^j, (s/t)^j
    for (int j = 0; j < ho.n; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        sum += sign * gen_binom(e, j) * (rt * ss + rs * ts);
        rt *= t / s;
        rs *= s / t;
    }
    const double sign_n = (ho.n % 2 == 0) ? 1.0 : -1.0;
    return sign_n * mode_constant(ho, mode) / 2.0 * (std::pow(std::abs(t - s), e) - sum);
}

double nfbm_var(const HurstOrder& ho, double t, NormalizationMode mode) {
    if (t < 0.0) throw DomainError("nfbm_var: time must be nonnegative");
    return mode_constant(ho, mode) * gen_binom(2.0 * ho.H - 1.0, ho.n - 1) * std::pow(t, 2.0 * ho.H);
}

quad::Result nfbm_cov_quadrature_result(const HurstOrder& ho, double t, double s, double rtol) {
    if (!(t > 0.0 && s > 0.0)) throw DomainError("nfbm_cov_quadrature: need t, s > 0");
    const double M = std::min(t, s);
    const double a = ho.base() - 0.5;
    // k(t,v) k(s,v) ~ v^{-2|a|} near 0; near v = M the kernel of the shorter
    // time vanishes (or blows up) like (M-v)^{a+n-1}, doubled when t == s
    const double lead0 = -2.0 * std::abs(a);
    const double leadM = (t == s ? 2.0 : 1.0) * (a + ho.n - 1);
    auto f = [&](double v) {
        const double kt = v < t ? nfbm_kernel(ho, t, v) : 0.0;
        const double ks = v < s ? nfbm_kernel(ho, s, v) : 0.0;
        return kt * ks;
    };
    return quad::converge(
        [&](int nodes) { return quad::graded_both(f, 0.0, M, lead0, leadM, nodes); }, 8, rtol, 128);
}

double nfbm_cov_quadrature(const HurstOrder& ho, double t, double s) {
    auto r = nfbm_cov_quadrature_result(ho, t, s);
    if (!r.converged) throw AccuracyError("nfbm_cov_quadrature", r.error / std::abs(r.value));
    return r.value;
}

Eigen::MatrixXd covariance_matrix(const HurstOrder& ho, const Eigen::VectorXd& times, NormalizationMode mode) {
    const Eigen::Index k = times.size();
    Eigen::MatrixXd C(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) C(i, j) = nfbm_cov_closed(ho, times[i], times[j], mode);
    return 0.5 * (C + C.transpose());
}

}  // namespace nfbm
