#include "nfbm/kernels.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "nfbm/errors.hpp"
#include "nfbm/quadrature.hpp"
#include "nfbm/special_functions.hpp"

namespace nfbm {

HurstOrder::HurstOrder(int order, double hurst) : n(order), H(hurst) {
    if (n < 1) throw DomainError("order n must be at least 1");
    if (!(H > n - 1 && H < n))
        throw DomainError("H = " + std::to_string(H) + " is outside " + interval() + " for n = " +
                          std::to_string(n));
}

std::string HurstOrder::interval() const {
    std::ostringstream os;
    os << "(" << n - 1 << "," << n << ")";
    return os.str();
}

Grid::Grid(double horizon, int steps) : T(horizon), m(steps) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("grid horizon T must be positive");
    if (m < 1) throw DomainError("grid needs at least one step");
}

Eigen::VectorXd Grid::points() const {
    Eigen::VectorXd t(m + 1);
    for (int i = 0; i <= m; ++i) t[i] = at(i);
    return t;
}

namespace {

constexpr int kKernelNodes = 16;
constexpr int kKernelMaxNodes = 256;
constexpr double kKernelRtol = 1e-10;

void check_pair(double t, double s, const char* who) {
    if (!(s > 0.0 && s < t) || !std::isfinite(t))
        throw DomainError(std::string(who) + ": need 0 < s < t");
}

void check_base(double H, const char* who) {
    if (!(H > 0.0 && H < 1.0)) throw DomainError(std::string(who) + ": H must lie in (0,1)");
}

template <typename G>
double converged(const G& g, const char* who) {
    auto r = quad::converge(g, kKernelNodes, kKernelRtol, kKernelMaxNodes, 1e-300);
    if (!r.converged) throw AccuracyError(who, r.error / std::max(std::abs(r.value), 1e-300));
    return r.value;
}

}  // namespace

double mg_kernel(double H, double t, double s) {
    check_base(H, "mg_kernel");
    check_pair(t, s, "mg_kernel");
    const double a = H - 0.5;
    if (a == 0.0) return 1.0;
    // int_s^t z^{a-1} (z-s)^a dz, the (z-s)^a factor goes into the Jacobi weight
    const double inner = converged(
        [&](int n) {
            return quad::away_from_pole([a](double z) { return std::pow(z, a - 1.0); }, s, t, 0.0, a,
                                        0.0, n);
        },
        "mg_kernel: inner integral");
    return mg_constant(H) * (std::pow(t / s, a) * std::pow(t - s, a) - a * std::pow(s, -a) * inner);
}

double mg_kernel_closed(double H, double t, double s) {
    check_base(H, "mg_kernel_closed");
    check_pair(t, s, "mg_kernel_closed");
    const double a = H - 0.5;
    if (a == 0.0) return 1.0;
    const double r = s / t;
    const double tail = boost::math::beta(1.0 - 2.0 * a, 1.0 + a) * std::pow(r, a) *
                        boost::math::ibetac(1.0 - 2.0 * a, 1.0 + a, r);
    return mg_constant(H) * std::pow(t, a) *
           (std::pow(r, -a) * std::pow(1.0 - r, a) * (1.0 + r) / 2.0 + (1.0 - a) / 2.0 * tail);
}

double mg_kernel_dt(double H, double t, double s) {
    check_base(H, "mg_kernel_dt");
    check_pair(t, s, "mg_kernel_dt");
    const double a = H - 0.5;
    if (a == 0.0) return 0.0;
    return mg_constant(H) * a * std::pow(t / s, a) * std::pow(t - s, a - 1.0);
}

double mg_kernel_antiderivative(double H, double t, double u) {
    check_base(H, "mg_kernel_antiderivative");
    if (!(t > 0.0) || u < 0.0 || u > t) throw DomainError("mg_kernel_antiderivative: need 0 <= u <= t");
    const double a = H - 0.5;
    if (a == 0.0) return u;
    if (u == 0.0) return 0.0;
    const double rho = u / t;
    const double B1 = boost::math::beta(1.0 - a, 1.0 + a, rho);
    const double B2 = boost::math::beta(2.0 - a, 1.0 + a, rho);
    const double tail = boost::math::beta(1.0 - 2.0 * a, 1.0 + a) * std::pow(rho, a + 1.0) *
                        boost::math::ibetac(1.0 - 2.0 * a, 1.0 + a, rho);
    return mg_constant(H) * std::pow(t, a + 1.0) *
           (0.5 * (B1 + B2) + (1.0 - a) / (2.0 * (a + 1.0)) * (tail + B2));
}

double nfbm_kernel(const HurstOrder& ho, double t, double u) {
    check_pair(t, u, "nfbm_kernel");
    const int n = ho.n;
    const double h = ho.base();
    if (n == 1) return mg_kernel(h, t, u);
    const double a = h - 0.5;
    double fact = 1.0;
    for (int k = 2; k < n; ++k) fact *= k;  // (n-1)!
    if (a == 0.0) return std::pow(t - u, n - 1) / fact;
    // (s-u)^a (t-s)^{n-2} sit in the Jacobi weight, so nodes next to the
    // diagonal keep their relative precision
    auto P = [&](double s) { return (n - 1) * std::pow(s, a) - a * std::pow(s, a - 1.0) * (t - s); };
    const double I = converged(
        [&](int nodes) { return quad::away_from_pole(P, u, t, 0.0, a, double(n - 2), nodes); }, "nfbm_kernel");
    return mg_constant(h) * std::pow(u, -a) / fact * I;
}

// ---------------------------------------------------------------------------
// KernelMatrix

namespace {

// kappa(i,j) = int_{j-1}^{j} k_h(i,x) dx on the unit-step lattice. The scaled
// base matrix is Delta^{h-1/2} kappa, so one table serves every T and every
// m up to its size.
struct BaseCache {
    std::mutex mu;
    std::map<double, std::shared_ptr<const Eigen::MatrixXd>> tables;
};

BaseCache& base_cache() {
    static BaseCache c;
    return c;
}

std::shared_ptr<const Eigen::MatrixXd> build_kappa(double h, int m) {
    auto K = std::make_shared<Eigen::MatrixXd>(Eigen::MatrixXd::Zero(m, m));
    for (int i = 1; i <= m; ++i) {
        double prev = 0.0;
        for (int j = 1; j <= i; ++j) {
            const double F = mg_kernel_antiderivative(h, double(i), double(j));
            (*K)(i - 1, j - 1) = F - prev;
            prev = F;
        }
    }
    return K;
}

std::shared_ptr<const Eigen::MatrixXd> kappa(double h, int m) {
    auto& c = base_cache();
    std::lock_guard<std::mutex> lock(c.mu);
    auto& slot = c.tables[h];
    if (!slot || slot->rows() < m) slot = build_kappa(h, m);
    if (slot->rows() == m) return slot;
    return std::make_shared<const Eigen::MatrixXd>(slot->topLeftCorner(m, m));
}

}  // namespace

void clear_kernel_cache() {
    auto& c = base_cache();
    std::lock_guard<std::mutex> lock(c.mu);
    c.tables.clear();
}

KernelMatrix::KernelMatrix(const HurstOrder& ho, const Grid& grid) : ho_(ho), grid_(grid) {
    const double h = ho.base();
    if (h != 0.5) {
        scale_ = std::pow(grid.step(), h - 0.5);
        base_ = kappa(h, grid.m);
    }
}

KernelMatrix kernel_matrix(const HurstOrder& ho, const Grid& grid) { return KernelMatrix(ho, grid); }

KernelMatrix KernelMatrix::from_dense(const HurstOrder& ho, const Grid& grid, const Eigen::MatrixXd& K) {
    if (K.rows() != grid.m || K.cols() != grid.m) throw DomainError("from_dense: size does not match grid");
    KernelMatrix out;
    out.ho_ = ho;
    out.grid_ = grid;
    const double d = grid.step();
    Eigen::MatrixXd B = K.triangularView<Eigen::Lower>();
    for (int r = 1; r < ho.n; ++r) {
        for (int i = grid.m - 1; i >= 1; --i) B.row(i) = (B.row(i) - B.row(i - 1)) / d;
        B.row(0) /= d;
        B = B.triangularView<Eigen::Lower>();
    }
    out.base_ = std::make_shared<const Eigen::MatrixXd>(std::move(B));
    out.dense_ = std::make_shared<const Eigen::MatrixXd>(K.triangularView<Eigen::Lower>());
    return out;
}

const Eigen::MatrixXd& KernelMatrix::dense() const {
    if (!dense_) {
        const int m = grid_.m;
        const double d = grid_.step();
        Eigen::MatrixXd D = base_ ? Eigen::MatrixXd(scale_ * *base_)
                                  : Eigen::MatrixXd(Eigen::MatrixXd::Ones(m, m).triangularView<Eigen::Lower>());
        for (int r = 1; r < ho_.n; ++r) {
            D.row(0) *= d;
            for (int i = 1; i < m; ++i) D.row(i) = D.row(i - 1) + d * D.row(i);
        }
        dense_ = std::make_shared<const Eigen::MatrixXd>(std::move(D));
    }
    return *dense_;
}

double KernelMatrix::entry(int i, int j) const {
    if (i < 1 || i > grid_.m || j < 1 || j > grid_.m) throw DomainError("KernelMatrix::entry: index out of range");
    return j > i ? 0.0 : dense()(i - 1, j - 1);
}

Eigen::VectorXd KernelMatrix::apply(const Eigen::VectorXd& dW) const {
    const int m = grid_.m;
    if (dW.size() != m) throw DomainError("KernelMatrix::apply: expected m increments");
    const double d = grid_.step();
    Eigen::VectorXd x;
    if (base_) {
        x = base_->triangularView<Eigen::Lower>() * dW;
        x *= scale_;
    } else {
        x = dW;
        for (int i = 1; i < m; ++i) x[i] += x[i - 1];
    }
    for (int r = 1; r < ho_.n; ++r) {
        x[0] *= d;
        for (int i = 1; i < m; ++i) x[i] = x[i - 1] + d * x[i];
    }
    return x;
}

Eigen::VectorXd KernelMatrix::solve(const Eigen::VectorXd& values) const {
    const int m = grid_.m;
    if (values.size() != m) throw DomainError("KernelMatrix::solve: expected m values");
    const double d = grid_.step();
    Eigen::VectorXd x = values;
    for (int r = 1; r < ho_.n; ++r) {
        for (int i = m - 1; i >= 1; --i) x[i] = (x[i] - x[i - 1]) / d;
        x[0] /= d;
    }
    if (!base_) {
        for (int i = m - 1; i >= 1; --i) x[i] -= x[i - 1];
        return x;
    }
    for (int i = 0; i < m; ++i) {
        const double row_max = base_->row(i).head(i + 1).cwiseAbs().maxCoeff();
        if (!(std::abs((*base_)(i, i)) >= 1e-14 * row_max) || row_max == 0.0)
            throw SingularityError("kernel matrix has a vanishing pivot in row " + std::to_string(i + 1));
    }
    x = base_->triangularView<Eigen::Lower>().solve(x);
    return x / scale_;
}

Eigen::VectorXd invert_kernel_matrix(const KernelMatrix& K, const Eigen::VectorXd& values) {
    const int m = K.grid().m;
    if (values.size() == m + 1) return K.solve(values.tail(m));
    return K.solve(values);
}

}  // namespace nfbm
