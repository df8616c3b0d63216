#include "nfbm/equivalence.hpp"

#include <cmath>

#include "nfbm/errors.hpp"

namespace nfbm {

namespace {

const Eigen::VectorXd& increments_of(const SamplePath& W, const char* who) {
    if (!W.increments) throw PreconditionError(std::string(who) + ": path carries no increments");
    return *W.increments;
}

void check_grid(const SamplePath& W, const DriftModel& model, const char* who) {
    if (!(W.grid == model.grid)) throw DomainError(std::string(who) + ": path and model grids differ");
}

SamplePath brownian_from(const SamplePath& like, const Eigen::VectorXd& dW) {
    SamplePath out = like;
    out.ho = HurstOrder(1, 0.5);
    out.values.resize(dW.size() + 1);
    out.values[0] = 0.0;
    for (Eigen::Index i = 0; i < dW.size(); ++i) out.values[i + 1] = out.values[i] + dW[i];
    out.increments = dW;
    return out;
}

}  // namespace

DriftModel DriftModel::sample(const Grid& grid, const std::function<double(double)>& a,
                              const std::function<double(double, double)>& b) {
    DriftModel d;
    d.grid = grid;
    d.a.resize(grid.m);
    d.b = Eigen::MatrixXd::Zero(grid.m, grid.m);
    for (int l = 0; l < grid.m; ++l) {
        d.a[l] = a ? a(grid.at(l)) : 0.0;
        if (b)
            for (int j = 0; j < l; ++j) d.b(l, j) = b(grid.at(l), grid.at(j));
    }
    if (!d.a.allFinite() || !d.b.allFinite()) throw DomainError("DriftModel: non-finite drift or kernel value");
    return d;
}

DriftModel DriftModel::constant(const Grid& grid, double alpha, double beta) {
    DriftModel d;
    d.grid = grid;
    d.a = Eigen::VectorXd::Constant(grid.m, alpha);
    d.b = Eigen::MatrixXd::Constant(grid.m, grid.m, beta).triangularView<Eigen::StrictlyLower>();
    return d;
}

SamplePath hitsuda_transform(const SamplePath& W, const DriftModel& model) {
    check_grid(W, model, "hitsuda_transform");
    const Eigen::VectorXd& dW = increments_of(W, "hitsuda_transform");
    const double d = W.grid.step();
    const Eigen::VectorXd inner = model.b.triangularView<Eigen::StrictlyLower>() * dW;
    return brownian_from(W, dW - d * inner + d * model.a);
}

SamplePath inverse_hitsuda_transform(const SamplePath& Wt, const DriftModel& model) {
    check_grid(Wt, model, "inverse_hitsuda_transform");
    const Eigen::VectorXd& dWt = increments_of(Wt, "inverse_hitsuda_transform");
    const double d = Wt.grid.step();
    const Eigen::MatrixXd bstar = resolvent(model.b, d);
    const Eigen::VectorXd x = dWt - d * model.a;
    const Eigen::VectorXd inner = bstar.triangularView<Eigen::StrictlyLower>() * x;
    return brownian_from(Wt, x - d * inner);
}

SamplePath nfbm_equivalent_path(const SamplePath& W, const DriftModel& model, const HurstOrder& ho) {
    const SamplePath Wt = hitsuda_transform(W, model);
    SamplePath out = volterra_path(kernel_matrix(ho, W.grid), *Wt.increments);
    out.seed = W.seed;
    out.stream = W.stream;
    return out;
}

Eigen::MatrixXd resolvent(const Eigen::MatrixXd& b, double delta) {
    const Eigen::Index m = b.rows();
    const Eigen::MatrixXd B = delta * Eigen::MatrixXd(b.triangularView<Eigen::StrictlyLower>());
    const Eigen::MatrixXd IminusB = Eigen::MatrixXd::Identity(m, m) - B;
    // (I - B) is unit lower triangular, so the solve never divides by a small pivot
    const Eigen::MatrixXd inv = IminusB.triangularView<Eigen::UnitLower>().solve(Eigen::MatrixXd::Identity(m, m));
    Eigen::MatrixXd Bstar = Eigen::MatrixXd::Identity(m, m) - inv;
    return Eigen::MatrixXd(Bstar.triangularView<Eigen::StrictlyLower>()) / delta;
}

Eigen::MatrixXd resolvent_neumann(const Eigen::MatrixXd& b, double delta, double tol) {
    const Eigen::Index m = b.rows();
    const Eigen::MatrixXd B = delta * Eigen::MatrixXd(b.triangularView<Eigen::StrictlyLower>());
    Eigen::MatrixXd term = B, sum = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index k = 1; k <= 10 * m; ++k) {
        sum -= term;
        if (term.cwiseAbs().maxCoeff() < tol) return sum / delta;
        term = (term * B).eval();
    }
    throw ConvergenceError("resolvent_neumann: series did not converge within 10 m terms");
}

Eigen::MatrixXd triangle_convolution(const Eigen::MatrixXd& b, const Eigen::MatrixXd& c, double delta) {
    const Eigen::MatrixXd bs = b.triangularView<Eigen::StrictlyLower>();
    const Eigen::MatrixXd cs = c.triangularView<Eigen::StrictlyLower>();
    return delta * bs * cs;
}

Eigen::VectorXd likelihood_drift(const SamplePath& W, const DriftModel& model) {
    check_grid(W, model, "log_likelihood");
    const Eigen::VectorXd& dW = increments_of(W, "log_likelihood");
    return model.b.triangularView<Eigen::StrictlyLower>() * dW + model.a;
}

Eigen::VectorXd log_likelihood_path(const SamplePath& W, const DriftModel& model) {
    const Eigen::VectorXd theta = likelihood_drift(W, model);
    const Eigen::VectorXd& dW = *W.increments;
    const double d = W.grid.step();
    Eigen::VectorXd ell(W.grid.m + 1);
    ell[0] = 0.0;
    for (int l = 0; l < W.grid.m; ++l) ell[l + 1] = ell[l] + theta[l] * dW[l] - 0.5 * theta[l] * theta[l] * d;
    return ell;
}

double log_likelihood(const SamplePath& W, const DriftModel& model, double t) {
    const double x = t / W.grid.step();
    const long i = std::lround(x);
    if (std::abs(x - double(i)) > 1e-9 || i < 0 || i > W.grid.m)
        throw DomainError("log_likelihood: t must be a grid point in [0,T]");
    // only increments up to t enter, so later ones are never read
    const Eigen::VectorXd& dW = increments_of(W, "log_likelihood");
    check_grid(W, model, "log_likelihood");
    const double d = W.grid.step();
    double ell = 0.0;
    for (long l = 0; l < i; ++l) {
        const double theta = model.a[l] + model.b.row(l).head(l).dot(dW.head(l));
        ell += theta * dW[l] - 0.5 * theta * theta * d;
    }
    return ell;
}

DriftModel likelihood_model(const DriftModel& model) {
    const double d = model.grid.step();
    DriftModel out;
    out.grid = model.grid;
    out.b = resolvent(model.b, d);
    const Eigen::VectorXd ba = out.b.triangularView<Eigen::StrictlyLower>() * model.a;
    out.a = model.a - d * ba;
    return out;
}

int default_drift_window(int m) { return int(std::ceil(std::sqrt(double(m)))); }

double recover_drift(const SamplePath& path, int window) {
    if (path.ho.n < 2)
        throw UnsupportedOrderError("recover_drift: the drift is identifiable from the derivative at 0 only for n >= 2");
    const int m = path.grid.m;
    if (window <= 0) window = default_drift_window(m);
    if (window > m) throw DomainError("recover_drift: window exceeds the grid");
    double num = 0.0, den = 0.0;
    for (int i = 1; i <= window; ++i) {
        const double t = path.grid.at(i);
        num += t * path.values[i];
        den += t * t;
    }
    return num / den;
}

}  // namespace nfbm
