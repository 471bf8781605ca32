#include <doctest.h>

#include <cmath>
#include <fstream>

#include "hypokol/problem_io.hpp"

using namespace hypokol;

TEST_SUITE("problem") {

TEST_CASE("tanh drift derivatives are analytic") {
    const CoefficientField b1 = fields::tanh_drift();
    const double y = 0.7, th = std::tanh(y), s2 = 1 - th * th;
    CHECK(b1.value(1.0, y) == doctest::Approx(-2 + th).epsilon(1e-14));
    CHECK(b1.deriv(0, 1, 1.0, y) == doctest::Approx(s2).epsilon(1e-14));
    CHECK(b1.deriv(0, 2, 1.0, y) == doctest::Approx(-2 * th * s2).epsilon(1e-13));
    CHECK(b1.deriv(1, 0, 1.0, y) == 0.0);
}

TEST_CASE("value-only fields differentiate by central differences") {
    const auto f = CoefficientField::from_values(
        "poly", 3, [](double x, double y) { return x * x * y + std::sin(y); });
    CHECK(f.deriv(1, 0, 0.5, 0.3) == doctest::Approx(2 * 0.5 * 0.3).epsilon(1e-6));
    CHECK(f.deriv(0, 2, 0.5, 0.3) == doctest::Approx(-std::sin(0.3)).epsilon(1e-5));
    CHECK(f.deriv(1, 1, 0.5, 0.3) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("linear field has no second-order Taylor remainder") {
    const CoefficientField f = fields::linear(0.5, -1.0, 2.0, 3);
    CHECK(std::abs(taylor_remainder(f, 2, 0.1, 0.2, 0.9, -0.4)) < 1e-12);
}

TEST_CASE("make_spec rejects a nonpositive horizon") {
    auto zero3 = [](double, double, double) { return 0.0; };
    auto zero2 = [](double, double) { return 0.0; };
    CHECK_THROWS_AS(make_spec("bad", fields::tanh_drift(), fields::constant(0, 3),
                              fields::constant(0, 3), zero3, zero2, zero2, 0.0),
                    Error);
}

TEST_CASE("tanh benchmark passes every assumption check") {
    const ProblemFile pf = tanh_benchmark();
    const AssumptionReport rep = validate_assumptions(pf.spec);
    CHECK(rep.pass_basics);
    CHECK(rep.pass_boundedness);
    CHECK(rep.pass_hypobound);
    CHECK(rep.b_lower == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(pf.probes.size() == 10);
    CHECK_FALSE(pf.spec.zero_data);
}

TEST_CASE("sign-changing b1 fails the basics check") {
    const ProblemFile pf = parse_problem(R"({"horizon": 1, "b1": {"type": "linear", "a0": 0, "ax": 0, "ay": 1},
        "u_init": {"name": "zero"}, "u_side": {"name": "zero"}})");
    const AssumptionReport rep = validate_assumptions(pf.spec);
    CHECK_FALSE(rep.pass_basics);
    try {
        require_basics(rep, "test");
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidSpec);
    }
    CHECK(pf.spec.zero_data);
}

TEST_CASE("problem parser reports malformed input as parse errors") {
    auto code_of = [](const std::string& text) {
        try {
            parse_problem(text);
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::InvalidSpec;
    };
    CHECK(code_of("{") == Errc::Parse);
    CHECK(code_of(R"({"horizon": 1, "u_init": {"name": "zero"}, "u_side": {"name": "zero"}})") == Errc::Parse);
    CHECK(code_of(R"({"horizon": 1, "b1": {"type": "tanh"}, "u_init": {"name": "zero"},
                      "u_side": {"name": "zero"}, "colour": 3})") == Errc::Parse);
    CHECK(code_of(R"({"horizon": 1, "b1": {"type": "wavy"}, "u_init": {"name": "zero"},
                      "u_side": {"name": "zero"}})") == Errc::Parse);
}

TEST_CASE("shipped problem files load") {
    const std::string dir = HYPOKOL_SOURCE_DIR "/problems/";
    for (const char* f : {"tanh_benchmark.json", "constant.json", "zero.json", "kolmogorov.json"}) {
        CAPTURE(f);
        CHECK_NOTHROW(load_problem(dir + f));
    }
    const ProblemFile a = load_problem(dir + "tanh_benchmark.json");
    const ProblemFile b = tanh_benchmark();
    CHECK(a.spec.u_init(0.3, 0.2) == b.spec.u_init(0.3, 0.2));
    CHECK(a.probes.size() == b.probes.size());
    CHECK(a.oracle.paths == 200000);
    const auto probes = load_probes(dir + "probes.csv");
    REQUIRE(probes.size() == 3);
    CHECK(probes[1].x == 0.75);
}

TEST_CASE("probe files must contain numbers") {
    const std::string path = "probe_bad.csv";
    {
        std::ofstream f(path);
        f << "t,x,y\n0.5,1,0\nfoo,bar,baz\n";
    }
    CHECK_THROWS_AS(load_probes(path), Error);
    std::remove(path.c_str());
}

}
