#include <doctest.h>

#include <cmath>

#include "hypokol/problem_io.hpp"

using namespace hypokol;

TEST_SUITE("mc") {

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using P = Philox4x32;
    CHECK(P::block({0, 0, 0, 0}, {0, 0}) == P::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(P::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          P::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(P::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          P::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("engine discard matches drawing") {
    Philox4x32 a(5, 2), b(5, 2);
    for (int i = 0; i < 7; ++i) a();
    b.discard(7);
    CHECK(a() == b());
}

TEST_CASE("normal stream has unit variance") {
    NormalStream ns(3, 0);
    double s = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = ns.next();
        s += z;
        s2 += z * z;
    }
    CHECK(std::abs(s / n) < 4.0 / std::sqrt(n));
    CHECK(std::abs(s2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("estimates do not depend on the thread count") {
    const ProblemFile pf = tanh_benchmark();
    PathConfig a;
    a.paths = 3000;
    a.dt = 0.01;
    a.threads = 1;
    PathConfig b = a;
    b.threads = 3;
    const Estimate ea = feynman_kac_estimate(pf.spec, 0.5, 1.0, 0.2, a);
    const Estimate eb = feynman_kac_estimate(pf.spec, 0.5, 1.0, 0.2, b);
    CHECK(ea.mean == eb.mean);
    CHECK(ea.std_error == eb.std_error);
    a.seed = 2;
    CHECK(feynman_kac_estimate(pf.spec, 0.5, 1.0, 0.2, a).mean != ea.mean);
}

TEST_CASE("constant data gives exactly one") {
    const ProblemFile pf = constant_problem();
    PathConfig c;
    c.paths = 2000;
    c.dt = 0.01;
    const Estimate e = feynman_kac_estimate(pf.spec, 0.5, 0.5, 0.0, c);
    CHECK(e.mean == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.std_error < 1e-12);
}

TEST_CASE("Kolmogorov moments") {
    PathConfig c;
    c.paths = 40000;
    const double t = 1.0;
    const LinearSample s = simulate_kolmogorov(0.5, 0.2, t, c);
    const SampleMoments m = sample_moments(s.x, s.y);
    CHECK(std::abs(m.mean[0] - (0.5 + 0.2 * t)) < 4 * m.mean_se[0]);
    CHECK(std::abs(m.mean[1] - 0.2) < 4 * m.mean_se[1]);
    CHECK(std::abs(m.cov[0][0] - t * t * t / 3) < 4 * m.cov_se[0][0]);
    CHECK(std::abs(m.cov[0][1] - t * t / 2) < 4 * m.cov_se[0][1]);
    CHECK(std::abs(m.cov[1][1] - t) < 4 * m.cov_se[1][1]);
}

TEST_CASE("Kolmogorov exits happen only from negative velocity") {
    PathConfig c;
    c.paths = 4000;
    c.dt = 1e-3;
    const ExitSample e = kolmogorov_exit_sample(0.2, 0.0, 1.0, c);
    CHECK(e.paths == 4000);
    REQUIRE(!e.tau.empty());
    for (std::size_t k = 0; k < e.tau.size(); ++k) {
        CHECK(e.tau[k] > 0.0);
        CHECK(e.tau[k] <= 1.0);
    }
    double neg = 0;
    for (double v : e.y_exit) neg += v < 0 ? 1 : 0;
    CHECK(neg / e.y_exit.size() > 0.95);
}

TEST_CASE("path configuration is validated") {
    PathConfig c;
    c.dt = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c.dt = 1e-3;
    c.paths = 0;
    CHECK_THROWS_AS(c.validate(), Error);
}

}
