#pragma once

#include <Eigen/Core>

#include "nfbm/kernels.hpp"
#include "nfbm/quadrature.hpp"

namespace nfbm {

// MG_UNIT: the Volterra construction built on a unit-variance fBm.
// MVN_PERRIN: the moving-average normalization with constant C_H.
enum class NormalizationMode { MG_UNIT, MVN_PERRIN };

double fbm_cov(double H, double t, double s);

// Factor turning MVN_PERRIN values into MG_UNIT values, 1 / C_{H-n+1}.
double reconciliation_factor(const HurstOrder& ho);

// ((-1)^n C/2) { |t-s|^{2H} - sum_{j=0}^{n-1} (-1)^j binom(2H,j) [(t/s)^j s^{2H} + (s/t)^j t^{2H}] }
double nfbm_cov_closed(const HurstOrder& ho, double t, double s,
                       NormalizationMode mode = NormalizationMode::MG_UNIT);

double nfbm_var(const HurstOrder& ho, double t, NormalizationMode mode = NormalizationMode::MG_UNIT);

// int_0^{min(t,s)} k(t,v) k(s,v) dv. Throws AccuracyError when the node
// doubling does not settle to 1e-8.
double nfbm_cov_quadrature(const HurstOrder& ho, double t, double s);
quad::Result nfbm_cov_quadrature_result(const HurstOrder& ho, double t, double s, double rtol = 1e-8);

// Symmetric covariance matrix of B(times[0..]) from the closed form.
Eigen::MatrixXd covariance_matrix(const HurstOrder& ho, const Eigen::VectorXd& times,
                                  NormalizationMode mode = NormalizationMode::MG_UNIT);

}  // namespace nfbm
