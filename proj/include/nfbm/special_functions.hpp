#pragma once

namespace nfbm {

// Gamma function; throws DomainError at the poles 0, -1, -2, ...
double gamma_fn(double x);

double beta_fn(double a, double b);

// alpha (alpha-1) ... (alpha-j+1) / j!
template <typename Scalar>
Scalar gen_binom(Scalar alpha, int j) {
    Scalar r(1);
    for (int i = 0; i < j; ++i) r *= (alpha - Scalar(i)) / Scalar(i + 1);
    return r;
}

// d_H, normalizes the Molchan-Golosov kernel so that Var B_H(1) = 1.
double mg_constant(double H);

// C_H = 1 / (Gamma(2H+1) |sin(pi H)|). Independent of the order n.
double perrin_constant(double H);

}  // namespace nfbm
