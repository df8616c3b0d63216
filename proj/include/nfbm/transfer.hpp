#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "nfbm/covariance.hpp"
#include "nfbm/kernels.hpp"
#include "nfbm/simulation.hpp"

namespace nfbm {

using RealFunction = std::function<double(double)>;

// f = sum_k values[k-1] 1_{(b_{k-1}, b_k]} with b_0 = 0.
struct StepFunction {
    std::vector<double> breakpoints;  // b_0 = 0 < b_1 < ... < b_K
    std::vector<double> values;       // K values

    StepFunction(std::vector<double> b, std::vector<double> v);

    // 1 on (0, t]; the indicator 1_t up to a null set
    static StepFunction indicator(double t);
    static StepFunction zero(double T);

    double operator()(double u) const;
    int pieces() const { return int(values.size()); }
    double end() const { return breakpoints.back(); }
};

// alpha f + beta g on the union of both breakpoint sets
StepFunction combine(double alpha, const StepFunction& f, double beta, const StepFunction& g);

// k_H^* f for n = 1. H > 1/2 uses int_u^T f(v) d/dv k(v,u) dv,
// otherwise k(T,u) f(u) + int_u^T [f(v) - f(u)] d/dv k(v,u) dv.
RealFunction dual_operator_fbm(const StepFunction& f, double H, double T);
double dual_fbm_general(const StepFunction& f, double H, double T, double u);
double dual_fbm_simplified(const StepFunction& f, double H, double T, double u);

// k^{(n)*} f (u) = int_u^T f(t) k^{(n-1)}_{H-1}(t,u) dt, n >= 2, summed over the
// pieces of f as differences of k^{(n)}(., u) at the piece ends.
RealFunction dual_operator_nfbm(const StepFunction& f, const HurstOrder& ho, double T);

// Dispatches on the order.
RealFunction dual_operator(const StepFunction& f, const HurstOrder& ho, double T);

// <f,g>_H through the covariance of the indicators.
double inner_product_H(const StepFunction& f, const StepFunction& g, const HurstOrder& ho,
                       NormalizationMode mode = NormalizationMode::MG_UNIT);

// int_0^T (k^* f)(u) (k^* g)(u) du by graded quadrature between breakpoints.
double dual_image_inner(const StepFunction& f, const StepFunction& g, const HurstOrder& ho, double T);

// C^2 = int_0^T int_0^t k^{(n-1)}_{H-1}(t,u)^2 du dt, the constant in
// ||f||_H <= C ||f||_{L^2}, n >= 2.
double l2_embedding_constant_sq(const HurstOrder& ho, double T);

// w_j = (k^* f)(midpoint of cell j)
Eigen::VectorXd wiener_integral_weights(const StepFunction& f, const HurstOrder& ho, const Grid& grid);

// sum_j (k^* f)(mid_j) dW_j; the path must carry its increments.
double wiener_integral_nfbm(const StepFunction& f, const SamplePath& path);

}  // namespace nfbm
