#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypokol/problem_io.hpp"

namespace hypokol {

struct CheckRow {
    std::string check;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

struct SuiteResult {
    std::string name;
    std::vector<CheckRow> rows;
    std::string text;  // free-form report (matrix, chi, residual polynomials, ...)
    double seconds = 0.0;
    bool pass() const;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    std::int64_t paths = 200000;
    double dt = 1e-3;
    std::optional<SolverConfig> solver;  // grids for the solver-based suites
    int threads = 0;
};

// matrix, projected, normalization, annihilation, correction, dirac, laplace, jump,
// decay, special, compare, statistics, determinism
const std::vector<std::string>& suite_names();
SuiteResult run_suite(const std::string& name, const VerifyOptions& opt = {});

// Least-squares slope and correlation of ys against xs.
struct LineFit {
    double slope = 0.0, intercept = 0.0, corr = 0.0;
};
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

// Expected integer matrix of the corrector system, row-major.
const std::array<std::array<long long, 6>, 6>& expected_operator_matrix();

} // namespace hypokol
