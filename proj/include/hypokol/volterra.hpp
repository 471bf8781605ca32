#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "hypokol/parallel.hpp"
#include "hypokol/quadrature.hpp"

namespace hypokol {

struct Probe {
    double t, x, y;
};

// Interior field on (t, x, y) plus side field on (t, y). Bilinear in space, linear in time.
struct DensityPair {
    std::vector<double> t, x, y;     // interior grid
    std::vector<double> ts, ys;      // side grid
    std::vector<double> psi;         // [k][i][j]
    std::vector<double> psi_side;    // [k][j]

    double& at(std::size_t k, std::size_t i, std::size_t j) {
        return psi[(k * x.size() + i) * y.size() + j];
    }
    double at(std::size_t k, std::size_t i, std::size_t j) const {
        return psi[(k * x.size() + i) * y.size() + j];
    }
    double& side_at(std::size_t k, std::size_t j) { return psi_side[k * ys.size() + j]; }
    double side_at(std::size_t k, std::size_t j) const { return psi_side[k * ys.size() + j]; }

    // Values outside the grid are clamped to the nearest grid value.
    double interior(double s, double x0, double y0) const;
    double side(double s, double y0) const;

    double sup_interior() const;
    double sup_side() const;
    bool same_grid(const DensityPair& o) const;
    DensityPair zeros_like() const;
    DensityPair& operator+=(const DensityPair& o);
    DensityPair& operator*=(double a);
};

struct SolverConfig {
    int nt = 12;         // interior time nodes after t ~ 0
    int nx = 24;
    int ny = 24;
    int nt_side = 24;
    int ny_side = 48;
    double x_max = 0.0;  // 0: derived from the probes
    double y_max = 0.0;  // 0: derived from the probes
    double t_floor = 1e-6;  // relative to the horizon; stands in for t = 0
    int max_iter = 12;
    double tail_tol = 1e-6;
    bool throw_on_nonconvergence = true;
    int threads = 0;     // 0: hardware concurrency
    QuadConfig quad;
    std::vector<Probe> probes;

    void validate() const;
};

// Builds empty grids (domain sizes from the config and the coefficient bounds).
DensityPair make_grids(const ProblemSpec& spec, const AssumptionReport& rep,
                       const SolverConfig& cfg);

struct Envelope {
    double K1 = 0.0, K2 = 0.0, T = 0.0;
    double at(int n) const;       // K1 K2^{2 ceil(n/2)} T^{floor(n/2)} / floor(n/2)!
    double tail_after(int n) const;  // sum over m > n
    bool dominates(const std::vector<double>& norms, int from) const;
};
// Least-squares fit of the log envelope shape, then lifted to dominate norms[n], n >= from.
Envelope fit_envelope(const std::vector<double>& norms, double T, int from = 2);

struct Solution {
    DensityPair pair;
    std::vector<double> norm_interior, norm_side;  // sup norms per iterate
    Envelope envelope;
    double tail = 0.0;
    int iterations = 0;
    bool converged = false;
    double seconds = 0.0;
    std::vector<std::string> notes;
};

class VolterraSolver {
public:
    VolterraSolver(const ProblemSpec& spec, SolverConfig cfg);

    const ProblemSpec& spec() const { return spec_; }
    const SolverConfig& config() const { return cfg_; }
    const AssumptionReport& report() const { return rep_; }
    const RegionConstants& regions() const { return rc_; }

    DensityPair initial_difference() const;
    DensityPair step(const DensityPair& pair_n) const;
    Solution solve() const;
    // u by variation of parameters; error is the summed quadrature discrepancy.
    QuadResult evaluate(const Solution& sol, double t, double x, double y) const;

private:
    ProblemSpec spec_;
    SolverConfig cfg_;
    AssumptionReport rep_;
    RegionConstants rc_;
    DensityPair grids_;
};

DensityPair initial_difference(const ProblemSpec& spec, const SolverConfig& cfg);
DensityPair volterra_step(const ProblemSpec& spec, const SolverConfig& cfg,
                          const DensityPair& pair_n);
Solution solve_densities(const ProblemSpec& spec, const SolverConfig& cfg);
QuadResult evaluate_solution(const ProblemSpec& spec, const SolverConfig& cfg,
                             const Solution& sol, double t, double x, double y);

struct ResidualRow {
    Probe p;
    double pde = 0.0;       // finite-difference P u + f
    double boundary = 0.0;  // u(t, 0+, y) - u_side(t, y), extrapolated
    double initial = 0.0;   // u(0+, x, y) - u_init(x, y), extrapolated
};
std::vector<ResidualRow> residual_report(const VolterraSolver& solver, const Solution& sol,
                                         const std::vector<Probe>& points, double h);

} // namespace hypokol
