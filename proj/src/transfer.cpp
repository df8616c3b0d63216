#include "nfbm/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "nfbm/errors.hpp"
#include "nfbm/quadrature.hpp"
#include "nfbm/special_functions.hpp"

namespace nfbm {

namespace {

constexpr double kRtol = 1e-10;
// looser than the pointwise images it integrates
constexpr double kImageRtol = 1e-8;

template <typename G>
double settle(const G& g, const char* who, int n0 = 8, double rtol = kRtol) {
    auto r = quad::converge(g, n0, rtol, 256, 1e-300);
    if (!r.converged) throw AccuracyError(who, r.error / std::max(std::abs(r.value), 1e-300));
    return r.value;
}

void check_u(double u, double T, const char* who) {
    if (!(u > 0.0 && u < T)) throw DomainError(std::string(who) + ": evaluation point must lie in (0,T)");
}

}  // namespace

StepFunction::StepFunction(std::vector<double> b, std::vector<double> v) : breakpoints(std::move(b)), values(std::move(v)) {
    if (values.empty()) throw DomainError("StepFunction: need at least one piece");
    if (breakpoints.size() != values.size() + 1) throw DomainError("StepFunction: need K+1 breakpoints for K values");
    if (breakpoints.front() != 0.0) throw DomainError("StepFunction: first breakpoint must be 0");
    for (std::size_t k = 1; k < breakpoints.size(); ++k)
        if (!(breakpoints[k] > breakpoints[k - 1])) throw DomainError("StepFunction: breakpoints must increase");
}

StepFunction StepFunction::indicator(double t) { return StepFunction({0.0, t}, {1.0}); }
StepFunction StepFunction::zero(double T) { return StepFunction({0.0, T}, {0.0}); }

double StepFunction::operator()(double u) const {
    if (u <= 0.0 || u > end()) return 0.0;
    auto it = std::lower_bound(breakpoints.begin() + 1, breakpoints.end(), u);
    return values[std::size_t(it - breakpoints.begin()) - 1];
}

StepFunction combine(double alpha, const StepFunction& f, double beta, const StepFunction& g) {
    std::set<double> pts(f.breakpoints.begin(), f.breakpoints.end());
    pts.insert(g.breakpoints.begin(), g.breakpoints.end());
    std::vector<double> b(pts.begin(), pts.end()), v;
    for (std::size_t k = 1; k < b.size(); ++k) v.push_back(alpha * f(b[k]) + beta * g(b[k]));
    return StepFunction(std::move(b), std::move(v));
}

// ---------------------------------------------------------------------------
// n = 1

namespace {

// int_c^e d/dv k_H(v,u) dv for u < c < e
double dk_integral(double H, double u, double c, double e) {
    return settle(
        [&](int n) {
            return quad::away_from_pole([&](double v) { return mg_kernel_dt(H, v, u); }, c, e, u, 0.0, 0.0, n);
        },
        "dual_operator_fbm");
}

// Pieces of f restricted to (u, T], including the zero tail beyond f.end().
struct Piece {
    double lo, hi, value;
};

std::vector<Piece> pieces_after(const StepFunction& f, double u, double T) {
    std::vector<Piece> out;
    for (int k = 0; k < f.pieces(); ++k) {
        const double lo = std::max(f.breakpoints[k], u), hi = std::min(f.breakpoints[k + 1], T);
        if (hi > lo) out.push_back({lo, hi, f.values[k]});
    }
    if (T > f.end() && T > u) out.push_back({std::max(f.end(), u), T, 0.0});
    return out;
}

}  // namespace

double dual_fbm_general(const StepFunction& f, double H, double T, double u) {
    check_u(u, T, "dual_operator_fbm");
    if (H == 0.5) return f(u);
    const double fu = f(u);
    double s = mg_kernel(H, T, u) * fu;
    for (const auto& p : pieces_after(f, u, T)) {
        if (p.value == fu || p.lo <= u) continue;  // the difference vanishes on u's own piece
        s += (p.value - fu) * dk_integral(H, u, p.lo, p.hi);
    }
    return s;
}

double dual_fbm_simplified(const StepFunction& f, double H, double T, double u) {
    check_u(u, T, "dual_operator_fbm");
    if (!(H > 0.5)) throw DomainError("dual_fbm_simplified: needs H > 1/2");
    const double a = H - 0.5, d = mg_constant(H);
    double s = 0.0;
    for (const auto& p : pieces_after(f, u, T)) {
        if (p.value == 0.0) continue;
        if (p.lo <= u) {
            // (v-u)^{a-1} is integrable for H > 1/2; put it in the Jacobi weight
            const double I = settle(
                [&](int n) {
                    return quad::away_from_pole([&](double v) { return d * a * std::pow(v / u, a); }, u, p.hi, 0.0,
                                                a - 1.0, 0.0, n);
                },
                "dual_operator_fbm");
            s += p.value * I;
        } else {
            s += p.value * dk_integral(H, u, p.lo, p.hi);
        }
    }
    return s;
}

RealFunction dual_operator_fbm(const StepFunction& f, double H, double T) {
    if (!(H > 0.0 && H < 1.0)) throw DomainError("dual_operator_fbm: H must lie in (0,1)");
    if (H > 0.5) return [f, H, T](double u) { return dual_fbm_simplified(f, H, T, u); };
    return [f, H, T](double u) { return dual_fbm_general(f, H, T, u); };
}

// ---------------------------------------------------------------------------
// n >= 2

namespace {

// Each piece contributes v int_{max(lo,u)}^{hi} k^{(n-1)}(t,u) dt. The
// t-antiderivative of k^{(n-1)} vanishing at t = u is k^{(n)}(., u), so the
// integral is a difference of two collapsed-kernel quadratures.
double dual_nfbm_at(const StepFunction& f, const HurstOrder& ho, double T, double u) {
    check_u(u, T, "dual_operator_nfbm");
    auto K = [&](double t) { return t <= u ? 0.0 : nfbm_kernel(ho, t, u); };
    double s = 0.0;
    for (const auto& pc : pieces_after(f, u, T))
        if (pc.value != 0.0) s += pc.value * (K(pc.hi) - K(pc.lo));
    return s;
}

}  // namespace

RealFunction dual_operator_nfbm(const StepFunction& f, const HurstOrder& ho, double T) {
    if (ho.n < 2)
        throw UnsupportedOrderError("dual_operator_nfbm: the integral form needs n >= 2, use dual_operator_fbm for n = 1");
    return [f, ho, T](double u) { return dual_nfbm_at(f, ho, T, u); };
}

RealFunction dual_operator(const StepFunction& f, const HurstOrder& ho, double T) {
    return ho.n == 1 ? dual_operator_fbm(f, ho.H, T) : dual_operator_nfbm(f, ho, T);
}

// ---------------------------------------------------------------------------

double inner_product_H(const StepFunction& f, const StepFunction& g, const HurstOrder& ho, NormalizationMode mode) {
    double s = 0.0;
    for (int k = 0; k < f.pieces(); ++k) {
        if (f.values[k] == 0.0) continue;
        const double x = f.breakpoints[k], y = f.breakpoints[k + 1];
        for (int l = 0; l < g.pieces(); ++l) {
            if (g.values[l] == 0.0) continue;
            const double z = g.breakpoints[l], w = g.breakpoints[l + 1];
            const double block = nfbm_cov_closed(ho, y, w, mode) - nfbm_cov_closed(ho, y, z, mode) -
                                 nfbm_cov_closed(ho, x, w, mode) + nfbm_cov_closed(ho, x, z, mode);
            s += f.values[k] * g.values[l] * block;
        }
    }
    return s;
}

double dual_image_inner(const StepFunction& f, const StepFunction& g, const HurstOrder& ho, double T) {
    const RealFunction kf = dual_operator(f, ho, T);
    const RealFunction kg = dual_operator(g, ho, T);
    std::set<double> cuts{0.0, T};
    for (double b : f.breakpoints)
        if (b < T) cuts.insert(b);
    for (double b : g.breakpoints)
        if (b < T) cuts.insert(b);
    const std::vector<double> c(cuts.begin(), cuts.end());
    const double a = ho.base() - 0.5;
    // near 0 both images behave like u^{-|a|} (u^{-a} from the prefactor for
    // a > 0, u^{a} from the s^{a-1} term for a < 0); at breakpoints they have
    // power-type kinks (for n = 1 and H < 1/2 an integrable blow-up (b-u)^{a})
    const double lead0 = -2.0 * std::abs(a);
    const double kink = ho.n == 1 ? std::min(0.0, 2.0 * a) : 0.0;
    auto h = [&](double u) { return kf(u) * kg(u); };
    return settle(
        [&](int n) {
            double s = 0.0;
            for (std::size_t i = 1; i < c.size(); ++i)
                s += quad::graded_both(h, c[i - 1], c[i], i == 1 ? lead0 : kink, kink, n, 12);
            return s;
        },
        "dual_image_inner", 8, kImageRtol);
}

double l2_embedding_constant_sq(const HurstOrder& ho, double T) {
    if (ho.n < 2) throw UnsupportedOrderError("l2_embedding_constant_sq: needs n >= 2");
    const HurstOrder lower(ho.n - 1, ho.H - 1.0);
    // t -> r^{(n-1)}(t,t) is a pure power t^{2H-2}; the Jacobi weight carries it
    const double e = 2.0 * lower.H;
    return quad::jacobi([&](double t) { return nfbm_cov_quadrature(lower, t, t) * std::pow(t, -e); }, 0.0, T, e, 0.0,
                        4);
}

Eigen::VectorXd wiener_integral_weights(const StepFunction& f, const HurstOrder& ho, const Grid& grid) {
    const RealFunction kf = dual_operator(f, ho, grid.T);
    Eigen::VectorXd w(grid.m);
    for (int j = 0; j < grid.m; ++j) w[j] = kf(0.5 * (grid.at(j) + grid.at(j + 1)));
    return w;
}

double wiener_integral_nfbm(const StepFunction& f, const SamplePath& path) {
    if (!path.increments) throw PreconditionError("wiener_integral_nfbm: path carries no increments");
    return wiener_integral_weights(f, path.ho, path.grid).dot(*path.increments);
}

}  // namespace nfbm
