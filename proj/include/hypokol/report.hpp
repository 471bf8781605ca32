#pragma once

#include <string>
#include <vector>

#include "hypokol/mc.hpp"
#include "hypokol/volterra.hpp"

namespace hypokol {

// 17 significant digits, so CSV round-trips exactly.
std::string fmt17(double v);

struct SolutionRow {
    Probe p;
    double u = 0.0, est_error = 0.0;
};
struct OracleRow {
    Probe p;
    Estimate e;
};
struct CompareRow {
    Probe p;
    double u = 0.0;
    Estimate e;
    double diff = 0.0, tolerance = 0.0;
    bool pass = false;
};

std::string solution_csv(const std::vector<SolutionRow>& rows);
std::string oracle_csv(const std::vector<OracleRow>& rows);
std::string compare_csv(const std::vector<CompareRow>& rows);
// Line-oriented "key: value" report of a solve.
std::string diagnostics_text(const ProblemSpec& spec, const SolverConfig& cfg, const Solution& sol,
                             const std::vector<SolutionRow>& rows);

std::vector<SolutionRow> evaluate_probes(const VolterraSolver& solver, const Solution& sol,
                                         const std::vector<Probe>& probes);
std::vector<OracleRow> oracle_probes(const ProblemSpec& spec, const std::vector<Probe>& probes,
                                     const PathConfig& cfg);
// |u - mean| <= max(2 stderr, floor) per probe.
std::vector<CompareRow> compare_rows(const std::vector<SolutionRow>& sol,
                                     const std::vector<OracleRow>& mc, double floor);

} // namespace hypokol
