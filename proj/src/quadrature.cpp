#include "nfbm/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

namespace nfbm::quad {
namespace {

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix, weights come
// from the first eigenvector components.
Rule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag_sq, double mu0) {
    const int n = static_cast<int>(diag.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) J(k, k) = diag[k];
    for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(offdiag_sq[k]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Rule r;
    r.x = es.eigenvalues();
    r.w = mu0 * es.eigenvectors().row(0).transpose().array().square();
    return r;
}

Rule make_jacobi(int n, double alpha, double beta) {
    if (n < 1) throw DomainError("gauss_jacobi: need at least one node");
    if (!(alpha > -1.0 && beta > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");
    const double ab = alpha + beta;
    Eigen::VectorXd a(n), b2 = Eigen::VectorXd::Zero(n);
    a[0] = (beta - alpha) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        a[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        if (k == 1) {
            // (k+ab)/(s-1) cancels to 1 here, which also covers ab = -1
            b2[k] = 4.0 * (1.0 + alpha) * (1.0 + beta) / (s * s * (s + 1.0));
        } else {
            b2[k] = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        }
    }
    const double mu0 = std::pow(2.0, ab + 1.0) * boost::math::tgamma(alpha + 1.0) *
                       boost::math::tgamma(beta + 1.0) / boost::math::tgamma(ab + 2.0);
    return golub_welsch(a, b2, mu0);
}

Rule make_hermite(int n) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n), b2 = Eigen::VectorXd::Zero(n);
    for (int k = 1; k < n; ++k) b2[k] = 0.5 * k;
    return golub_welsch(a, b2, std::sqrt(std::numbers::pi));
}

std::mutex cache_mutex;

}  // namespace

const Rule& gauss_jacobi(int n, double alpha, double beta) {
    static std::map<std::tuple<int, double, double>, std::unique_ptr<Rule>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& slot = cache[{n, alpha, beta}];
    if (!slot) slot = std::make_unique<Rule>(make_jacobi(n, alpha, beta));
    return *slot;
}

const Rule& gauss_hermite(int n) {
    static std::map<int, std::unique_ptr<Rule>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Rule>(make_hermite(n));
    return *slot;
}

}  // namespace nfbm::quad
