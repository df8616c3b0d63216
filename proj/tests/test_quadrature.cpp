#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nfbm/quadrature.hpp"
#include "nfbm/special_functions.hpp"
#include "support.hpp"

using namespace nfbm;
using testsupport::rel_err;

TEST_SUITE("quadrature") {
    TEST_CASE("Gauss-Jacobi integrates the weight and low moments exactly") {
        for (auto [al, be] : {std::pair{0.0, 0.0}, {-0.25, 0.5}, {0.75, -0.4}, {-0.5, -0.5}}) {
            const auto& r = quad::gauss_jacobi(12, al, be);
            // int (1-x)^al (1+x)^be x^0 dx = 2^{al+be+1} B(al+1, be+1)
            const double mu0 = std::pow(2.0, al + be + 1) * beta_fn(al + 1, be + 1);
            CHECK(rel_err(r.w.sum(), mu0) < 1e-13);
            // (1+x) raises beta by one
            const double mu1 = std::pow(2.0, al + be + 2) * beta_fn(al + 1, be + 2);
            CHECK(rel_err(r.w.dot((r.x.array() + 1.0).matrix()), mu1) < 1e-13);
        }
    }

    TEST_CASE("Gauss-Hermite moments") {
        const auto& r = quad::gauss_hermite(64);
        const double sp = std::sqrt(std::numbers::pi);
        CHECK(rel_err(r.w.sum(), sp) < 1e-13);
        CHECK(rel_err(r.w.dot(r.x.array().square().matrix()), sp / 2) < 1e-12);
        CHECK(rel_err(r.w.dot(r.x.array().pow(8).matrix()), sp * 105.0 / 16.0) < 1e-12);
    }

    TEST_CASE("algebraic endpoint weights and an exterior pole") {
        // int_1^3 (x-1)^{-0.3} (3-x)^{0.6} / x dx, pole at 0
        auto f = [](double x) { return 1.0 / x; };
        const double got = quad::away_from_pole(f, 1.0, 3.0, 0.0, -0.3, 0.6, 24);
        // 30-digit adaptive quadrature split at x = 2
        const double ref = 1.66627615311684793458;
        CHECK(rel_err(got, ref) < 1e-13);
        // a pole close to the left end needs many panels
        const double got2 = quad::away_from_pole([](double x) { return std::pow(x, -0.7); }, 1e-9, 1.0, 0.0, 0.0, 0.0, 16);
        CHECK(rel_err(got2, (1.0 - std::pow(1e-9, 0.3)) / 0.3) < 1e-12);
    }

    TEST_CASE("graded rule handles mixed powers at the end") {
        // sqrt(x) + x^{-0.4} + x^{0.3} on (0,1)
        auto f = [](double x) { return std::sqrt(x) + std::pow(x, -0.4) + std::pow(x, 0.3); };
        const double exact = 2.0 / 3.0 + 1.0 / 0.6 + 1.0 / 1.3;
        CHECK(rel_err(quad::graded_left(f, 0.0, 1.0, -0.4, 16), exact) < 1e-10);
        CHECK(rel_err(quad::graded_right([&](double x) { return f(1 - x); }, 0.0, 1.0, -0.4, 16), exact) < 1e-10);
    }

    TEST_CASE("node doubling reports convergence") {
        auto r = quad::converge([](int n) { return quad::jacobi([](double x) { return std::exp(x); }, 0.0, 1.0, 0.0, 0.0, n); },
                                4, 1e-12, 64);
        CHECK(r.converged);
        CHECK(rel_err(r.value, std::exp(1.0) - 1.0) < 1e-13);
        auto bad = quad::converge([](int n) { return double(n); }, 4, 1e-12, 64);
        CHECK_FALSE(bad.converged);
    }
}
