#include <doctest.h>

#include "hypokol/corrections.hpp"
#include "hypokol/verify.hpp"

using namespace hypokol;

TEST_SUITE("monomial") {

TEST_CASE("corrector matrix is the expected integer matrix") {
    const IntMatrix6 m = assemble_operator_matrix();
    CHECK(m == expected_operator_matrix());
    std::vector<std::vector<Rational>> a(6, std::vector<Rational>(6));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) a[i][j] = m[i][j];
    CHECK(determinant(a) == Rational(240));
}

TEST_CASE("degree bookkeeping") {
    CHECK(degree(mono(1, 0, -2)) == Degree{1, 1});
    CHECK(degree(mono(0, 1, 0)) == Degree{1, 1});
    CHECK(degree(mono(3, 0, -8)) == Degree{3, 1});
    const SPoly p = SPoly(mono(2, 1, -2), Rational(3)) + SPoly(mono(0, 3, 0), Rational(1, 2));
    const SPoly dx = apply_diff(DiffOp::VX, p);
    CHECK(dx.coeff(mono(1, 1, -2)) == Rational(6));
    const SPoly dy = apply_diff(DiffOp::DY, p);
    CHECK(dy.coeff(mono(0, 2, 0)) == Rational(3, 2));
    CHECK(dy.coeff(mono(2, 0, -2)) == Rational(3));
    const SPoly dt = apply_diff(DiffOp::VT, p);
    CHECK(dt.coeff(mono(2, 1, -4)) == Rational(-3));
}

TEST_CASE("polynomial arithmetic is exact") {
    const SPoly a = SPoly(mono(1, 0, 0), Rational(1, 3)) + SPoly(mono(0, 1, 0), Rational(1));
    const SPoly sq = a.pow(2);
    CHECK(sq.coeff(mono(2, 0, 0)) == Rational(1, 9));
    CHECK(sq.coeff(mono(1, 1, 0)) == Rational(2, 3));
    CHECK((a - a).is_zero());
    CHECK(project(sq, Projection::Main, 2).size() == 1);
}

TEST_CASE("evaluation matches the closed form") {
    const DPoly p = DPoly(mono(1, 2, -2), 2.0) + DPoly(mono(0, 1, 0), -1.0);
    const double xs = 0.3, ys = -0.7, t = 0.25;
    const EvalPoint ep(xs, ys, t);
    const double ref = 2.0 * xs * ys * ys * std::pow(t, -1 + 2.5) - ys * std::pow(t, 0.5);
    CHECK(eval_at(p, ep) == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("linear solve recovers a known vector") {
    std::vector<std::vector<Rational>> a = {{2, 1}, {1, 3}};
    const auto x = solve_linear(a, {Rational(5), Rational(10)});
    CHECK(x[0] == Rational(1));
    CHECK(x[1] == Rational(3));
    CHECK(to_string(Rational(-3, 4)) == "-3/4");
}

}
