#include "nfbm/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "nfbm/errors.hpp"

namespace nfbm {

double gamma_fn(double x) {
    if (!std::isfinite(x)) throw DomainError("gamma_fn: non-finite argument");
    if (x <= 0.0 && x == std::floor(x))
        throw DomainError("gamma_fn: pole at " + std::to_string(x));
    return std::tgamma(x);
}

double beta_fn(double a, double b) {
    if (a <= 0.0 || b <= 0.0) throw DomainError("beta_fn: arguments must be positive");
    return boost::math::beta(a, b);
}

double mg_constant(double H) {
    if (!(H > 0.0 && H < 1.0)) throw DomainError("mg_constant: H must lie in (0,1)");
    return std::sqrt(2.0 * H * gamma_fn(1.5 - H) / (gamma_fn(H + 0.5) * gamma_fn(2.0 - 2.0 * H)));
}

double perrin_constant(double H) {
    if (!(H > 0.0)) throw DomainError("perrin_constant: H must be positive");
    if (H == std::floor(H)) throw DomainError("perrin_constant: sin(pi H) vanishes at integer H");
    return 1.0 / (gamma_fn(2.0 * H + 1.0) * std::abs(std::sin(std::numbers::pi * H)));
}

}  // namespace nfbm
