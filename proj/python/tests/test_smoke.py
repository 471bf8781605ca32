import math
import pathlib

import pytest

import hypokol

PROBLEMS = pathlib.Path(__file__).resolve().parents[2] / "problems"


def test_operator_matrix_has_determinant_240():
    import sympy

    assert sympy.Matrix(hypokol.operator_matrix()).det() == 240


def test_kernel_is_normalized():
    # midpoint sum over a box much wider than the kernel
    t, b1, B = 0.3, -2.0, 1.0
    mx, my = 1.0 - b1 * t, 0.0
    n, hx, hy = 200, 0.01, 0.04
    total = 0.0
    for i in range(n):
        x = mx - n * hx / 2 + (i + 0.5) * hx
        for j in range(n):
            y = my - n * hy / 2 + (j + 0.5) * hy
            total += hypokol.kernel(1.0, 0.0, b1, 0.0, B, t, x, y) * hx * hy
    assert total == pytest.approx(1.0, abs=1e-3)


def test_builtin_and_file_problems_agree():
    a = hypokol.load_problem("tanh_benchmark")
    b = hypokol.load_problem(str(PROBLEMS / "tanh_benchmark.json"))
    assert a.name == b.name == "tanh_benchmark"
    assert len(a.probes) == 10
    assert a.u_init(0.3, 0.2) == b.u_init(0.3, 0.2)
    assert a.b1(0.0, 0.0) == pytest.approx(-2.0)


def test_parse_errors_raise():
    with pytest.raises(hypokol.HypokolError):
        hypokol.parse_problem("{not json")


def test_zero_problem_solves_to_zero():
    p = hypokol.load_problem("zero")
    out = hypokol.solve(p, grid=(3, 6, 6, 6, 8))
    assert out["converged"]
    assert all(v == 0.0 for v in out["u"])


def test_kolmogorov_problem_is_rejected_by_the_solver():
    p = hypokol.load_problem(str(PROBLEMS / "kolmogorov.json"))
    assert not p.basics_ok()
    with pytest.raises(hypokol.HypokolError):
        hypokol.solve(p, grid=(3, 6, 6, 6, 8))


def test_oracle_is_deterministic():
    p = hypokol.load_problem("tanh_benchmark")
    pts = [(0.5, 1.0, 0.0)]
    a = hypokol.oracle(p, probes=pts, paths=2000, dt=0.01, seed=5)
    b = hypokol.oracle(p, probes=pts, paths=2000, dt=0.01, seed=5, threads=2)
    assert a == b
    mean, se = a[0]
    assert 0.0 < mean < 1.0 and 0.0 < se < 0.05


def test_matrix_suite_passes():
    rows = hypokol.run_suite("matrix")
    assert rows and all(r["pass"] for r in rows)


def test_cli_usage_error():
    code, _, err = hypokol.run_cli(["solve", "--nope"])
    assert code == 2
    assert "nope" in err


def test_chi_vanishes_without_variation():
    assert all(math.isclose(c, 0.0, abs_tol=0.0) for c in hypokol.chi(0.0, 0.0))
