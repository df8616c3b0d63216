#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "nfbm/covariance.hpp"
#include "nfbm/errors.hpp"
#include "nfbm/kernels.hpp"
#include "nfbm/rng.hpp"
#include "nfbm/simulation.hpp"
#include "nfbm/special_functions.hpp"
#include "support.hpp"

using namespace nfbm;
using testsupport::rel_err;

namespace {

// The defining expression with both integrals done by tanh-sinh, written in
// the offset d = t - s so that nodes near the diagonal keep full precision.
double mg_oracle_offset(double H, double s, double d) {
    const double a = H - 0.5, t = s + d;
    boost::math::quadrature::tanh_sinh<double> ts;
    const double inner = ts.integrate([&](double x) { return std::pow(s + x, a - 1) * std::pow(x, a); }, 0.0, d, 1e-14);
    return mg_constant(H) * (std::pow(t / s, a) * std::pow(d, a) - a * std::pow(s, -a) * inner);
}

double mg_oracle(double H, double t, double s) { return mg_oracle_offset(H, s, t - s); }

// Literal recursion k^{(2)}(t,u) = int_u^t k_h(s,u) ds, nested adaptive quadrature.
double second_order_oracle(double H, double t, double u) {
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate([&](double x) { return x <= 0 ? 0.0 : mg_oracle_offset(H - 1, u, x); }, 0.0, t - u, 1e-11);
}

// Repeated-integration form int_u^t (t-s)^{n-2}/(n-2)! k_h(s,u) ds.
double cauchy_oracle(const HurstOrder& ho, double t, double u) {
    double fact = 1;
    for (int k = 2; k <= ho.n - 2; ++k) fact *= k;
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate([&](double s) { return std::pow(t - s, ho.n - 2) / fact * mg_kernel_closed(ho.base(), s, u); }, u, t,
                        1e-12);
}

}  // namespace

TEST_SUITE("kernels") {
    TEST_CASE("HurstOrder validation") {
        CHECK_NOTHROW(HurstOrder(2, 1.25));
        CHECK_THROWS_AS(HurstOrder(1, 1.5), DomainError);
        CHECK_THROWS_AS(HurstOrder(2, 2.0), DomainError);
        CHECK_THROWS_AS(HurstOrder(0, 0.5), DomainError);
        CHECK(HurstOrder(3, 2.25).base() == doctest::Approx(0.25));
    }

    TEST_CASE("mg kernel at H = 1/2 is identically one") {
        for (double s : {0.01, 0.3, 0.99}) CHECK(mg_kernel(0.5, 1.0, s) == 1.0);
    }

    TEST_CASE("mg kernel against adaptive quadrature of the definition") {
        for (double H : {0.75, 0.25, 0.1, 0.9}) {
            CHECK(rel_err(mg_kernel(H, 1.0, 0.5), mg_oracle(H, 1.0, 0.5)) < 1e-8);
            CHECK(rel_err(mg_kernel(H, 2.0, 0.03), mg_oracle(H, 2.0, 0.03)) < 1e-8);
        }
    }

    TEST_CASE("closed form of the mg kernel agrees with quadrature") {
        for (double H : {0.05, 0.25, 0.4, 0.6, 0.75, 0.95})
            for (double s : {1e-6, 0.2, 0.5, 0.9, 0.999})
                CHECK(rel_err(mg_kernel_closed(H, 1.0, s), mg_kernel(H, 1.0, s)) < 1e-10);
    }

    TEST_CASE("mg kernel blows up like (t-s)^{H-1/2} on the diagonal") {
        const double H = 0.25;
        const double e1 = 1e-6, e2 = 1e-8;
        const double slope = std::log(mg_kernel(H, 1.0, 1.0 - e2) / mg_kernel(H, 1.0, 1.0 - e1)) / std::log(e2 / e1);
        CHECK(slope == doctest::Approx(-0.25).epsilon(0.01));
        // eps^{1/2-H} k(t, t-eps) -> d_H
        for (double h : {0.25, 0.75}) {
            const double lim = std::pow(1e-9, 0.5 - h) * mg_kernel(h, 1.0, 1.0 - 1e-9);
            CHECK(rel_err(lim, mg_constant(h)) < 1e-3);
        }
    }

    TEST_CASE("t-derivative of the mg kernel") {
        for (double H : {0.3, 0.8}) {
            const double t = 0.9, s = 0.4, h = 1e-4;
            const double fd = (mg_kernel_closed(H, t + h, s) - mg_kernel_closed(H, t - h, s)) / (2 * h);
            CHECK(rel_err(mg_kernel_dt(H, t, s), fd) < 1e-6);
        }
    }

    TEST_CASE("antiderivative of the mg kernel") {
        boost::math::quadrature::tanh_sinh<double> ts;
        for (double H : {0.2, 0.7})
            for (double u : {0.3, 1.0}) {
                const double ref = ts.integrate([&](double v) { return mg_kernel_closed(H, 1.0, v); }, 0.0, u, 1e-13);
                CHECK(rel_err(mg_kernel_antiderivative(H, 1.0, u), ref) < 1e-10);
            }
        // unit variance at t = 1 through the antiderivative identity
        CHECK(mg_kernel_antiderivative(0.5, 1.0, 0.4) == doctest::Approx(0.4));
    }

    TEST_CASE("nfbm kernel special cases") {
        CHECK(nfbm_kernel({1, 0.3}, 1.0, 0.4) == doctest::Approx(mg_kernel(0.3, 1.0, 0.4)).epsilon(1e-14));
        CHECK(nfbm_kernel({2, 1.5}, 0.9, 0.2) == doctest::Approx(0.7).epsilon(1e-14));
        CHECK(nfbm_kernel({3, 2.5}, 0.9, 0.3) == doctest::Approx(0.18).epsilon(1e-14));
        CHECK_THROWS_AS(nfbm_kernel({2, 1.5}, 0.5, 0.6), DomainError);
    }

    TEST_CASE("collapsed kernel agrees with the nested recursion") {
        for (double H : {1.25, 1.75}) {
            const HurstOrder ho(2, H);
            for (int i = 1; i <= 5; ++i)
                for (int j = 1; j < i; ++j) {
                    const double t = 0.2 * i, u = 0.2 * j;
                    CHECK(rel_err(nfbm_kernel(ho, t, u), second_order_oracle(H, t, u)) < 1e-7);
                }
        }
        for (double H : {2.5, 2.25, 2.8}) {
            const HurstOrder ho(3, H);
            for (int i = 1; i <= 5; ++i)
                for (int j = 1; j < i; ++j) {
                    const double t = 0.2 * i, u = 0.2 * j;
                    CHECK(rel_err(nfbm_kernel(ho, t, u), cauchy_oracle(ho, t, u)) < 1e-7);
                }
        }
    }

    TEST_CASE("t-derivative of k^(n) is k^(n-1), second order in the step") {
        for (auto ho : {HurstOrder(2, 1.25), HurstOrder(2, 1.75), HurstOrder(3, 2.3)}) {
            const HurstOrder lower(ho.n - 1, ho.H - 1);
            const double t = 0.8, u = 0.3;
            const double exact = nfbm_kernel(lower, t, u);
            auto err = [&](double h) {
                return std::abs((nfbm_kernel(ho, t + h, u) - nfbm_kernel(ho, t - h, u)) / (2 * h) - exact);
            };
            const double e1 = err(0.04), e2 = err(0.02);
            CHECK(e2 < 1e-3);
            CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
        }
    }

    TEST_CASE("smoothness across the diagonal") {
        // extended by 0 for t < u, k^{(n)}(., u) has n-2 continuous derivatives,
        // and an (n-1)th continuous one exactly when the base index exceeds 1/2
        const double u = 0.5;
        auto dq = [](const HurstOrder& ho, double t, double u, int k, double h) {
            auto K = [&](double x) { return x <= u ? 0.0 : nfbm_kernel(ho, x, u); };
            double s = 0.0, c = 1.0;
            for (int r = 0; r <= k; ++r) {
                s += ((k - r) % 2 ? -1.0 : 1.0) * c * K(t + r * h);
                c = c * (k - r) / (r + 1);
            }
            return s / std::pow(h, k);
        };
        for (auto ho : {HurstOrder(2, 1.75), HurstOrder(3, 2.8)}) {
            const double h = 1e-6;
            const double left = dq(ho, u - (ho.n - 1) * h - 1e-3 * h, u, ho.n - 1, h);
            const double right = dq(ho, u + 1e-3 * h, u, ho.n - 1, h);
            CHECK(std::abs(right - left) < 0.1);
            const double right_small = dq(ho, u + 1e-3 * h / 16, u, ho.n - 1, h / 16);
            CHECK(std::abs(right_small) < std::abs(right));
        }
        for (auto ho : {HurstOrder(3, 2.25), HurstOrder(3, 2.5)}) {
            const double h = 1e-5;
            CHECK(std::abs(dq(ho, u + 1e-3 * h, u, 1, h)) < 1e-3);
        }
    }

    TEST_CASE("kernel matrix special cases") {
        const Grid g(1.0, 16);
        const KernelMatrix K1 = kernel_matrix({1, 0.5}, g);
        for (int i = 1; i <= 16; ++i)
            for (int j = 1; j <= 16; ++j) CHECK(K1.entry(i, j) == (j <= i ? 1.0 : 0.0));
        // right-endpoint composition gives t_i - t_{j-1}, the cell average t_i - mid_j plus Delta/2
        const KernelMatrix K2 = kernel_matrix({2, 1.5}, g);
        const double d = g.step();
        for (int i = 1; i <= 16; ++i)
            for (int j = 1; j <= i; ++j) {
                CHECK(K2.entry(i, j) == doctest::Approx(g.at(i) - g.at(j - 1)).epsilon(1e-14));
                CHECK(K2.entry(i, j) - (g.at(i) - 0.5 * (g.at(j - 1) + g.at(j))) == doctest::Approx(d / 2).epsilon(1e-12));
            }
    }

    TEST_CASE("base cell averages match quadrature of the kernel") {
        boost::math::quadrature::tanh_sinh<double> ts;
        for (double H : {0.25, 0.75}) {
            const Grid g(2.0, 8);
            const KernelMatrix K = kernel_matrix({1, H}, g);
            for (int i : {1, 5, 8})
                for (int j = 1; j <= i; ++j) {
                    const double ref = ts.integrate([&](double s) { return mg_kernel_closed(H, g.at(i), s); }, g.at(j - 1),
                                                    g.at(j), 1e-13) /
                                       g.step();
                    CHECK(rel_err(K.entry(i, j), ref) < 1e-9);
                }
        }
    }

    TEST_CASE("Gram product approaches the fBm covariance") {
        auto worst = [](int m) {
            const Grid g(1.0, m);
            const KernelMatrix K = kernel_matrix({1, 0.75}, g);
            const Eigen::MatrixXd G = g.step() * K.dense() * K.dense().transpose();
            double w = 0;
            for (int i = m / 4; i <= m; i += m / 4)
                for (int k = m / 4; k <= m; k += m / 4)
                    w = std::max(w, rel_err(G(i - 1, k - 1), fbm_cov(0.75, g.at(i), g.at(k))));
            return w;
        };
        const double w16 = worst(16), w64 = worst(64);
        CHECK(w16 < 5e-2);
        CHECK(w64 < 1.5e-2);
        CHECK(w64 < w16);
    }

    TEST_CASE("higher-order entries converge to cell averages of k^(n) at first order") {
        const HurstOrder ho(2, 1.25);
        auto err = [&](int m) {
            const Grid g(1.0, m);
            const KernelMatrix K = kernel_matrix(ho, g);
            boost::math::quadrature::tanh_sinh<double> ts;
            const int i = m, j = m / 2;
            const double avg = ts.integrate([&](double s) { return nfbm_kernel(ho, 1.0, s); }, g.at(j - 1), g.at(j), 1e-12) / g.step();
            return std::abs(K.entry(i, j) - avg);
        };
        const double e1 = err(32), e2 = err(64), e3 = err(128);
        CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.15));
        CHECK(e2 / e3 == doctest::Approx(2.0).epsilon(0.15));
    }

    TEST_CASE("inversion round trip") {
        RngStream rng(11, 3);
        for (auto ho : {HurstOrder(1, 0.25), HurstOrder(1, 0.75), HurstOrder(2, 1.25), HurstOrder(2, 1.75), HurstOrder(3, 2.5)}) {
            const Grid g(1.0, 256);
            const KernelMatrix K = kernel_matrix(ho, g);
            const Eigen::VectorXd dW = brownian_increments(g, rng);
            Eigen::VectorXd vals(257);
            vals[0] = 0;
            vals.tail(256) = K.apply(dW);
            CHECK((invert_kernel_matrix(K, vals) - dW).cwiseAbs().maxCoeff() < 1e-10);
            // the factored apply agrees with the dense table
            CHECK((K.dense() * dW - vals.tail(256)).cwiseAbs().maxCoeff() < 1e-12);
        }
    }

    TEST_CASE("Brownian inversion is differencing, integrated Brownian inversion recovers W") {
        RngStream rng(5);
        const SamplePath p = simulate_volterra({1, 0.5}, Grid(1.0, 64), rng);
        const Eigen::VectorXd dW = invert_kernel_matrix(kernel_matrix({1, 0.5}, p.grid), p);
        for (int j = 0; j < 64; ++j) CHECK(dW[j] == doctest::Approx(p.values[j + 1] - p.values[j]).epsilon(1e-13));

        const SamplePath q = simulate_volterra({2, 1.5}, Grid(1.0, 256), rng);
        const Eigen::VectorXd r = invert_kernel_matrix(kernel_matrix({2, 1.5}, q.grid), q);
        double w = 0, wr = 0, worst = 0;
        for (int j = 0; j < 256; ++j) {
            w += (*q.increments)[j];
            wr += r[j];
            worst = std::max(worst, std::abs(w - wr));
        }
        CHECK(worst < 1e-9);
    }

    TEST_CASE("vanishing pivot is reported") {
        const Grid g(1.0, 4);
        Eigen::MatrixXd D = kernel_matrix({1, 0.75}, g).dense();
        D(2, 2) = 0.0;
        const KernelMatrix K = KernelMatrix::from_dense({1, 0.75}, g, D);
        CHECK_THROWS_AS(K.solve(Eigen::VectorXd::Ones(4)), SingularityError);
    }

    TEST_CASE("cache file round trip") {
        const HurstOrder ho(2, 1.25);
        const Grid g(1.5, 32);
        const KernelMatrix K = kernel_matrix(ho, g);
        const auto path = (std::filesystem::temp_directory_path() / "nfbm_kernel_test.bin").string();
        save_kernel_matrix(path, K);
        const KernelMatrix L = load_kernel_matrix(path, ho, g);
        CHECK((L.dense() - K.dense()).cwiseAbs().maxCoeff() == 0.0);
        Eigen::VectorXd v = K.apply(Eigen::VectorXd::LinSpaced(32, -1, 1));
        CHECK((L.solve(v) - Eigen::VectorXd::LinSpaced(32, -1, 1)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK_THROWS_AS(load_kernel_matrix(path, HurstOrder(2, 1.3), g), DomainError);
        std::filesystem::remove(path);
    }
}
