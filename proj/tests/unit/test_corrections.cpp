#include <doctest.h>

#include <cmath>

#include "hypokol/problem_io.hpp"

using namespace hypokol;

TEST_SUITE("corrections") {

TEST_CASE("chi solves the projected corrector equation exactly") {
    for (auto [a1, a2] : {std::pair{Rational(0), Rational(0)}, {Rational(3, 7), Rational(-2, 5)},
                          {Rational(-11, 3), Rational(13, 2)}}) {
        CHECK(projected_residual(a1, a2).is_zero());
    }
}

TEST_CASE("chi is linear in the data") {
    const auto a = solve_chi_exact(Rational(1), Rational(0));
    const auto b = solve_chi_exact(Rational(0), Rational(1));
    const auto c = solve_chi_exact(Rational(2), Rational(-3));
    for (int i = 0; i < 6; ++i) CHECK(c[i] == 2 * a[i] - 3 * b[i]);
    const ChiCoefficients d = solve_chi(2.0, -3.0);
    for (int i = 0; i < 6; ++i) CHECK(d.chi[i] == doctest::Approx(static_cast<double>(c[i])));
}

TEST_CASE("Xi split agrees with the direct evaluation") {
    const ProblemSpec spec = tanh_benchmark().spec;
    const FrozenPoint pt = make_frozen(spec, 1.0, 0.4);
    for (double t : {0.05, 0.3})
        for (double dx : {-0.1, 0.05})
            for (double dy : {-0.3, 0.2}) {
                const double x = pt.x0 - pt.b1v * t + dx, y = pt.y0 + dy;
                CHECK(xi_split(spec, pt, t, x, y) ==
                      doctest::Approx(xi_full(spec, pt, t, x, y)).epsilon(1e-9).scale(1e-12));
            }
}

TEST_CASE("closed-form P(KQ) matches finite differences") {
    const ProblemSpec spec = tanh_benchmark().spec;
    const CorrectedFrame fr(spec, 1.2, -0.3);
    const FrozenPoint& pt = fr.point();
    auto kq = [&fr](double t, double x, double y) { return fr.KQ(t, x, y); };
    const double t = 0.2;
    const GaussianStats g = frozen_stats(pt, t);
    for (double dx : {-0.05, 0.03})
        for (double dy : {-0.2, 0.3}) {
            const double x = g.mu1 + dx, y = g.mu2 + dy;
            // the x scale of K is B t^{3/2} ~ 0.1 here, so the step has to be small
            const double fd = apply_P_fd(spec, kq, t, x, y, 3e-5);
            CHECK(fr.PKQ(spec, t, x, y) == doctest::Approx(fd).epsilon(3e-3).scale(1e-2));
        }
}

TEST_CASE("correction lowers the residual order") {
    const ProblemSpec spec = tanh_benchmark().spec;
    const CorrectedFrame fr(spec, 1.0, 0.3);
    const FrozenPoint& pt = fr.point();
    std::vector<double> rk, rq;
    for (int k = 4; k <= 8; ++k) {
        const double t = std::ldexp(1.0, -k);
        const double x = pt.x0 - pt.b1v * t + pt.Bv * t * std::sqrt(t) * 0.4;
        const double y = pt.y0 + std::sqrt(t) * 0.7;
        const double hat = bound_kernel_hat(pt, 1.0 / 12.0, t, x, y);
        rk.push_back(std::abs(apply_P_K(spec, pt, t, x, y)) / hat);
        rq.push_back(std::abs(fr.PKQ(spec, t, x, y)) / hat);
    }
    // over four halvings the uncorrected residual grows like t^{-1/2}, the corrected one stays flat
    CHECK(rk.back() / rk.front() > 2.5);
    CHECK(rq.back() / rq.front() < 1.6);
}

TEST_CASE("Q vanishes without b1 variation") {
    const FrozenPoint pt = make_frozen(1.0, 0.0, -2.0, 0.0, 1.0);
    CHECK(alpha1_of(pt) == 0.0);
    CHECK(alpha2_of(pt) == 0.0);
    CHECK(build_Q(pt).poly.is_zero());
}

}
