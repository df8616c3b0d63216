#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>

#include "nfbm/errors.hpp"
#include "nfbm/special_functions.hpp"
#include "support.hpp"

using namespace nfbm;
using testsupport::rel_err;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {
// d_H evaluated in 50-digit arithmetic
double mg_constant_oracle(double H) {
    const Big h(H);
    const Big v = 2 * h * boost::math::tgamma(Big(1.5) - h) / (boost::math::tgamma(h + Big(0.5)) * boost::math::tgamma(2 - 2 * h));
    return static_cast<double>(boost::multiprecision::sqrt(v));
}
}  // namespace

TEST_SUITE("special_functions") {
    TEST_CASE("gamma at classical points") {
        CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(rel_err(gamma_fn(0.5), std::sqrt(std::numbers::pi)) < 1e-14);
        CHECK(rel_err(gamma_fn(4.0), 6.0) < 1e-15);
    }

    TEST_CASE("gamma poles are rejected") {
        CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
        CHECK_THROWS_AS(gamma_fn(-3.0), DomainError);
        CHECK_NOTHROW(gamma_fn(-2.5));
    }

    TEST_CASE("gamma matches 50 digit arithmetic on (0,30)") {
        for (double x : {0.01, 0.1, 0.37, 1.5, 2.25, 7.7, 13.1, 29.9}) {
            const double ref = static_cast<double>(boost::math::tgamma(Big(x)));
            CHECK(rel_err(gamma_fn(x), ref) < 1e-12);
        }
    }

    TEST_CASE("gamma recurrence") {
        for (double x : {0.1, 0.5, 1.3, 2.7, 5.5}) CHECK(rel_err(gamma_fn(x + 1) / gamma_fn(x), x) < 1e-12);
    }

    TEST_CASE("beta relation") {
        for (auto [a, b] : {std::pair{0.5, 0.5}, {1.25, 3.5}, {0.1, 2.0}, {4.0, 6.5}})
            CHECK(rel_err(beta_fn(a, b), gamma_fn(a) * gamma_fn(b) / gamma_fn(a + b)) < 1e-12);
    }

    TEST_CASE("generalized binomial") {
        CHECK(gen_binom(2.7, 0) == 1.0);
        CHECK(gen_binom(3.0, 1) == 3.0);
        CHECK(gen_binom(3.0, 2) == 3.0);
        CHECK(gen_binom(3.0, 4) == 0.0);
        CHECK(rel_err(gen_binom(0.5, 3), 0.0625) < 1e-15);
    }

    TEST_CASE("alternating sum identity") {
        for (double alpha : {0.5, 1.5, 3.0, 4.2}) {
            for (int m = 0; m <= 4; ++m) {
                double lhs = 0.0;
                for (int j = 0; j <= m; ++j) lhs += (j % 2 ? -1.0 : 1.0) * gen_binom(alpha, j);
                const double rhs = (m % 2 ? -1.0 : 1.0) * gen_binom(alpha - 1.0, m);
                if (rhs == 0.0)
                    CHECK(std::abs(lhs) < 1e-13);
                else
                    CHECK(rel_err(lhs, rhs) < 1e-12);
            }
        }
    }

    TEST_CASE("mg constant") {
        CHECK(mg_constant(0.5) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(rel_err(mg_constant(0.75), mg_constant_oracle(0.75)) < 1e-12);
        CHECK(rel_err(mg_constant(0.25), mg_constant_oracle(0.25)) < 1e-12);
        CHECK_THROWS_AS(mg_constant(1.0), DomainError);
        CHECK_THROWS_AS(mg_constant(0.0), DomainError);
    }

    TEST_CASE("perrin constant") {
        CHECK(rel_err(perrin_constant(0.5), 1.0) < 1e-14);
        CHECK(rel_err(perrin_constant(1.5), 1.0 / 6.0) < 1e-14);
        CHECK(rel_err(perrin_constant(2.5), 1.0 / 120.0) < 1e-14);
        CHECK_THROWS_AS(perrin_constant(2.0), DomainError);
    }
}
