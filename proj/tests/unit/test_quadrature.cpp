#include <doctest.h>

#include <cmath>

#include "hypokol/problem_io.hpp"

using namespace hypokol;

TEST_SUITE("quadrature") {

TEST_CASE("Gauss-Legendre is exact on polynomials") {
    const GaussRule& r = gauss_legendre(8);
    CHECK(gl_integrate(r, 0.0, 2.0, [](double x) { return std::pow(x, 15); }) ==
          doctest::Approx(std::pow(2.0, 16) / 16).epsilon(1e-13));
    for (std::size_t i = 1; i < r.x.size(); ++i) CHECK(r.x[i] > r.x[i - 1]);
}

TEST_CASE("Gauss-Hermite reproduces normal moments") {
    const GaussRule& r = gauss_hermite(12);
    double m0 = 0, m2 = 0, m4 = 0, m6 = 0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        const double x2 = r.x[i] * r.x[i];
        m0 += r.w[i];
        m2 += r.w[i] * x2;
        m4 += r.w[i] * x2 * x2;
        m6 += r.w[i] * x2 * x2 * x2;
    }
    CHECK(m0 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(m2 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(m4 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(m6 == doctest::Approx(15.0).epsilon(1e-12));
}

TEST_CASE("interior integral of K against one is one away from the boundary") {
    const ProblemSpec spec = tanh_benchmark().spec;
    const RegionConstants rc = region_constants(spec, validate_assumptions(spec));
    for (double t : {1e-3, 0.05, 0.2}) {
        CAPTURE(t);
        const QuadResult q = integrate_interior(spec, rc, InteriorKernel::K,
                                                [](double, double) { return 1.0; }, t, 3.0, 0.3);
        CHECK(q.value == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("interior integral reproduces a smooth function as t shrinks") {
    const ProblemSpec spec = tanh_benchmark().spec;
    const RegionConstants rc = region_constants(spec, validate_assumptions(spec));
    auto g = [](double x0, double y0) { return std::cos(y0) * std::exp(-0.5 * x0); };
    const double e1 = std::abs(integrate_interior(spec, rc, InteriorKernel::K, g, 0.04, 1.5, 0.2).value - g(1.5, 0.2));
    const double e2 = std::abs(integrate_interior(spec, rc, InteriorKernel::K, g, 0.01, 1.5, 0.2).value - g(1.5, 0.2));
    CHECK(e2 < e1);
    CHECK(e2 < 0.02);
}

TEST_CASE("zero integrands integrate to zero") {
    const ProblemSpec spec = tanh_benchmark().spec;
    const RegionConstants rc = region_constants(spec, validate_assumptions(spec));
    CHECK(integrate_boundary(spec, rc, BoundaryKernel::K, [](double, double) { return 0.0; }, 0.3, 0.5, 0.0).value == 0.0);
    CHECK(integrate_interior(spec, rc, InteriorKernel::KQ, [](double, double) { return 0.0; }, 0.3, 0.5, 0.0).value == 0.0);
    CHECK(laplace_model_integral(0.05, [](double) { return 0.0; }) == 0.0);
}

TEST_CASE("time convolution of K with one gives t") {
    const ProblemSpec spec = tanh_benchmark().spec;
    const RegionConstants rc = region_constants(spec, validate_assumptions(spec));
    const QuadResult q = convolve_time(spec, rc, InteriorKernel::K,
                                       [](double, double, double) { return 1.0; }, 0.05, 3.0, 0.0);
    CHECK(q.value == doctest::Approx(0.05).epsilon(1e-4));
}

TEST_CASE("Laplace model integral matches adaptive quadrature") {
    auto g = [](double s) { return std::cos(s); };
    for (double x : {0.1, 0.02}) {
        auto f = [&](double s) {
            return s > 0 ? std::pow(s, -1.5) * std::exp(-(x - s) * (x - s) / (s * s * s)) * g(s) : 0.0;
        };
        const double ref = adaptive_1d(f, 0.0, x / 2) + adaptive_1d(f, x / 2, 2 * x) + adaptive_1d(f, 2 * x, 1.0);
        CHECK(laplace_model_integral(x, g) == doctest::Approx(ref).epsilon(1e-8));
    }
    CHECK_THROWS_AS(laplace_model_integral(0.0, g), Error);
}

TEST_CASE("invalid arguments are rejected") {
    const ProblemSpec spec = tanh_benchmark().spec;
    const RegionConstants rc = region_constants(spec, validate_assumptions(spec));
    CHECK_THROWS_AS(integrate_interior(spec, rc, InteriorKernel::K, [](double, double) { return 1.0; }, 0.0, 0.5, 0.0), Error);
    CHECK_THROWS_AS(integrate_boundary(spec, rc, BoundaryKernel::K, [](double, double) { return 1.0; }, 0.0, 0.5, 0.0), Error);
    CHECK_THROWS_AS(integrate_boundary(spec, rc, BoundaryKernel::K, [](double, double) { return 1.0; }, 0.1, -0.5, 0.0), Error);
    // x = 0 itself is allowed: the side equation evaluates there.
    CHECK_NOTHROW(integrate_boundary(spec, rc, BoundaryKernel::K, [](double, double) { return 1.0; }, 0.1, 0.0, 0.0));
}

}
