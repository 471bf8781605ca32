#include <doctest.h>

#include <cmath>

#include "hypokol/problem_io.hpp"

using namespace hypokol;

namespace {

SolverConfig small_grid(const ProblemFile& pf) {
    SolverConfig c = pf.solver;
    c.nt = 4;
    c.nx = 8;
    c.ny = 8;
    c.nt_side = 8;
    c.ny_side = 12;
    c.throw_on_nonconvergence = false;
    return c;
}

} // namespace

TEST_SUITE("volterra") {

TEST_CASE("density interpolation is exact on linear data and clamps outside") {
    DensityPair d;
    d.t = {0.0, 1.0};
    d.x = {0.0, 1.0, 2.0};
    d.y = {-1.0, 1.0};
    d.ts = d.t;
    d.ys = d.y;
    d.psi.resize(2 * 3 * 2);
    d.psi_side.resize(2 * 2);
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 2; ++j) d.at(k, i, j) = d.t[k] + 2 * d.x[i] - d.y[j];
    CHECK(d.interior(0.5, 1.5, 0.25) == doctest::Approx(0.5 + 3.0 - 0.25));
    CHECK(d.interior(0.5, 5.0, 0.0) == doctest::Approx(0.5 + 4.0));
    CHECK(d.sup_interior() == doctest::Approx(6.0));
    DensityPair z = d.zeros_like();
    CHECK(z.same_grid(d));
    z += d;
    z *= 0.5;
    CHECK(z.at(1, 2, 0) == doctest::Approx(3.0));
}

TEST_CASE("envelope dominates the norms it was fitted to") {
    std::vector<double> norms = {1.0, 0.8, 0.2, 0.03, 0.003, 2e-4};
    const Envelope e = fit_envelope(norms, 0.5);
    CHECK(e.dominates(norms, 2));
    CHECK(e.tail_after(5) < e.at(5));
    CHECK(e.tail_after(8) < e.tail_after(6));
}

TEST_CASE("zero data gives an identically zero solution") {
    const ProblemFile pf = zero_problem();
    SolverConfig cfg = small_grid(pf);
    const VolterraSolver s(pf.spec, cfg);
    const Solution sol = s.solve();
    CHECK(sol.converged);
    for (const auto& p : pf.probes) CHECK(s.evaluate(sol, p.t, p.x, p.y).value == 0.0);
}

TEST_CASE("constant data is reproduced on a coarse grid") {
    const ProblemFile pf = constant_problem();
    SolverConfig cfg = small_grid(pf);
    cfg.threads = 1;
    const VolterraSolver s(pf.spec, cfg);
    const Solution sol = s.solve();
    CHECK(sol.converged);
    CHECK(sol.norm_side.size() == sol.norm_interior.size());
    for (const auto& p : pf.probes) {
        CAPTURE(p.x);
        CHECK(s.evaluate(sol, p.t, p.x, p.y).value == doctest::Approx(1.0).epsilon(2e-2));
    }
    CHECK_THROWS_AS(s.evaluate(sol, 0.6, 1.0, 0.0), Error);
    CHECK_THROWS_AS(s.evaluate(sol, 0.3, 0.0, 0.0), Error);
}

TEST_CASE("solver configuration is validated") {
    const ProblemFile pf = tanh_benchmark();
    SolverConfig cfg = pf.solver;
    cfg.nx = 0;
    CHECK_THROWS_AS(VolterraSolver(pf.spec, cfg), Error);
    const ProblemFile bad = parse_problem(R"({"horizon": 1, "b1": {"type": "constant", "value": 1},
        "u_init": {"name": "zero"}, "u_side": {"name": "zero"}})");
    try {
        VolterraSolver s(bad.spec, bad.solver);
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidSpec);
    }
}

TEST_CASE("one Volterra step on zero densities adds only the data terms") {
    const ProblemFile pf = zero_problem();
    const SolverConfig cfg = small_grid(pf);
    const DensityPair d0 = initial_difference(pf.spec, cfg);
    CHECK(d0.sup_interior() == 0.0);
    CHECK(d0.sup_side() == 0.0);
    const DensityPair d1 = volterra_step(pf.spec, cfg, d0);
    CHECK(d1.sup_interior() == 0.0);
}

}
