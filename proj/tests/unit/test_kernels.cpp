#include <doctest.h>

#include <cmath>

#include "hypokol/quadrature.hpp"

using namespace hypokol;

namespace {

// Tensor Gauss-Legendre moments of K over a +-10 sigma box around its mean.
std::array<double, 6> moments(const FrozenPoint& pt, double t) {
    const GaussianStats g = frozen_stats(pt, t);
    const double sx = std::sqrt(g.D[0][0]), sy = std::sqrt(g.D[1][1]);
    const GaussRule& r = gauss_legendre(40);
    std::array<double, 6> m{};
    for (int px = -5; px < 5; ++px)
        for (int py = -5; py < 5; ++py)
            for (std::size_t i = 0; i < r.x.size(); ++i)
                for (std::size_t j = 0; j < r.x.size(); ++j) {
                    const double x = g.mu1 + sx * (2 * px + 1 + r.x[i]);
                    const double y = g.mu2 + sy * (2 * py + 1 + r.x[j]);
                    const double w = r.w[i] * r.w[j] * sx * sy * kernel_K(pt, t, x, y);
                    m[0] += w;
                    m[1] += w * x;
                    m[2] += w * y;
                    m[3] += w * (x - g.mu1) * (x - g.mu1);
                    m[4] += w * (x - g.mu1) * (y - g.mu2);
                    m[5] += w * (y - g.mu2) * (y - g.mu2);
                }
    return m;
}

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("K is a probability density with the frozen statistics") {
    const FrozenPoint pt = make_frozen(1.2, -0.3, -2.4, 0.6, 0.8);
    for (double t : {0.01, 0.3, 1.0}) {
        CAPTURE(t);
        const GaussianStats g = frozen_stats(pt, t);
        const auto m = moments(pt, t);
        CHECK(m[0] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(m[1] == doctest::Approx(g.mu1).epsilon(1e-9));
        CHECK(m[2] == doctest::Approx(g.mu2).epsilon(1e-9));
        CHECK(m[3] == doctest::Approx(g.D[0][0]).epsilon(1e-8));
        CHECK(m[4] == doctest::Approx(g.D[0][1]).epsilon(1e-8));
        CHECK(m[5] == doctest::Approx(g.D[1][1]).epsilon(1e-8));
    }
}

TEST_CASE("frozen statistics have the hypoelliptic scaling") {
    const FrozenPoint pt = make_frozen(0.0, 0.0, -1.0, 0.0, 1.0);
    const GaussianStats g = frozen_stats(pt, 0.5);
    CHECK(g.D[0][0] == doctest::Approx(0.125 / 3.0));
    CHECK(g.D[1][1] == doctest::Approx(0.5));
    CHECK(std::abs(g.D[0][1]) == doctest::Approx(0.125));
    CHECK(g.detD == doctest::Approx(0.125 / 3.0 * 0.5 - 0.125 * 0.125));
}

TEST_CASE("energy is nonnegative and vanishes at the mean") {
    const FrozenPoint pt = make_frozen(1.0, 0.5, -2.0, 0.3, 1.5);
    const GaussianStats g = frozen_stats(pt, 0.2);
    CHECK(std::abs(energy(pt, 0.2, g.mu1, g.mu2)) < 1e-12);
    for (double dx : {-0.3, 0.0, 0.4})
        for (double dy : {-1.0, 0.2})
            CHECK(energy(pt, 0.2, g.mu1 + dx, g.mu2 + dy) >= 0.0);
}

TEST_CASE("linearized operator annihilates K up to finite-difference error") {
    const FrozenPoint pt = make_frozen(1.0, 0.2, -2.5, 0.4, 1.2);
    auto K = [&pt](double t, double x, double y) { return kernel_K(pt, t, x, y); };
    const GaussianStats g = frozen_stats(pt, 0.6);
    const double x = g.mu1 + 0.1, y = g.mu2 - 0.2;
    const double r1 = std::abs(apply_PL(pt, K, 0.6, x, y, 0.005));
    const double r2 = std::abs(apply_PL(pt, K, 0.6, x, y, 0.0025));
    CHECK(r2 < 1e-2 * K(0.6, x, y));
    CHECK(std::log(r1 / r2) / std::log(2.0) > 1.8);
}

TEST_CASE("kernels reject nonpositive time") {
    const FrozenPoint pt = make_frozen(1.0, 0.0, -2.0, 0.0, 1.0);
    CHECK_THROWS_AS(kernel_K(pt, 0.0, 1.0, 0.0), Error);
    CHECK_THROWS_AS(coords(pt, -1.0, 1.0, 0.0), Error);
}

TEST_CASE("bound kernel dominates K up to a constant") {
    const FrozenPoint pt = make_frozen(1.0, 0.0, -2.0, 0.0, 1.0);
    double worst = 0.0;
    for (double t : {0.01, 0.1, 1.0})
        for (double xs : {-3.0, -1.0, 0.0, 2.0})
            for (double ys : {-2.0, 0.0, 1.5}) {
                const double x = pt.x0 - pt.b1v * t + pt.Bv * t * std::sqrt(t) * xs;
                const double y = pt.y0 + std::sqrt(t) * ys;
                worst = std::max(worst, kernel_K(pt, t, x, y) / bound_kernel_hat(pt, 1.0 / 12.0, t, x, y));
            }
    CHECK(worst < 10.0);
}

}
