#include "hypokol/report.hpp"

#include <cstdio>
#include <sstream>

namespace hypokol {

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string solution_csv(const std::vector<SolutionRow>& rows) {
    std::string s = "t,x,y,u,est_error\n";
    for (const auto& r : rows)
        s += fmt17(r.p.t) + "," + fmt17(r.p.x) + "," + fmt17(r.p.y) + "," + fmt17(r.u) + "," +
             fmt17(r.est_error) + "\n";
    return s;
}

std::string oracle_csv(const std::vector<OracleRow>& rows) {
    std::string s = "t,x,y,estimate,stderr\n";
    for (const auto& r : rows)
        s += fmt17(r.p.t) + "," + fmt17(r.p.x) + "," + fmt17(r.p.y) + "," + fmt17(r.e.mean) + "," +
             fmt17(r.e.std_error) + "\n";
    return s;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::string s = "t,x,y,u_solver,u_oracle,stderr,abs_diff,tolerance,pass\n";
    for (const auto& r : rows)
        s += fmt17(r.p.t) + "," + fmt17(r.p.x) + "," + fmt17(r.p.y) + "," + fmt17(r.u) + "," +
             fmt17(r.e.mean) + "," + fmt17(r.e.std_error) + "," + fmt17(r.diff) + "," +
             fmt17(r.tolerance) + "," + (r.pass ? "1" : "0") + "\n";
    return s;
}

namespace {

std::string list17(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + fmt17(v[k]);
    return s + "]";
}

} // namespace

std::string diagnostics_text(const ProblemSpec& spec, const SolverConfig& cfg, const Solution& sol,
                             const std::vector<SolutionRow>& rows) {
    std::ostringstream os;
    os << "problem: " << spec.name << "\n";
    os << "horizon: " << fmt17(spec.horizon) << "\n";
    os << "grid: nt=" << cfg.nt << " nx=" << cfg.nx << " ny=" << cfg.ny << " nt_side=" << cfg.nt_side
       << " ny_side=" << cfg.ny_side << "\n";
    os << "domain: x_max=" << fmt17(sol.pair.x.empty() ? 0.0 : sol.pair.x.back())
       << " y_max=" << fmt17(sol.pair.y.empty() ? 0.0 : sol.pair.y.back()) << "\n";
    os << "iterations: " << sol.iterations << "\n";
    os << "converged: " << (sol.converged ? "true" : "false") << "\n";
    os << "norm_interior: " << list17(sol.norm_interior) << "\n";
    os << "norm_side: " << list17(sol.norm_side) << "\n";
    os << "envelope_K1: " << fmt17(sol.envelope.K1) << "\n";
    os << "envelope_K2: " << fmt17(sol.envelope.K2) << "\n";
    os << "tail_bound: " << fmt17(sol.tail) << "\n";
    double qmax = 0.0;
    for (const auto& r : rows) qmax = std::max(qmax, r.est_error);
    os << "max_quadrature_error: " << fmt17(qmax) << "\n";
    for (const auto& n : sol.notes) os << "note: " << n << "\n";
    return os.str();
}

std::vector<SolutionRow> evaluate_probes(const VolterraSolver& solver, const Solution& sol,
                                         const std::vector<Probe>& probes) {
    std::vector<SolutionRow> rows(probes.size());
    parallel_for(probes.size(), solver.config().threads, [&](std::size_t k) {
        const QuadResult r = solver.evaluate(sol, probes[k].t, probes[k].x, probes[k].y);
        rows[k] = {probes[k], r.value, r.error};
    });
    return rows;
}

std::vector<OracleRow> oracle_probes(const ProblemSpec& spec, const std::vector<Probe>& probes,
                                     const PathConfig& cfg) {
    std::vector<OracleRow> rows;
    for (const auto& p : probes) rows.push_back({p, feynman_kac_estimate(spec, p.t, p.x, p.y, cfg)});
    return rows;
}

std::vector<CompareRow> compare_rows(const std::vector<SolutionRow>& sol,
                                     const std::vector<OracleRow>& mc, double floor) {
    if (sol.size() != mc.size()) throw Error(Errc::GridMismatch, "compare: probe lists differ");
    std::vector<CompareRow> rows;
    for (std::size_t k = 0; k < sol.size(); ++k) {
        CompareRow r;
        r.p = sol[k].p;
        r.u = sol[k].u;
        r.e = mc[k].e;
        r.diff = std::abs(r.u - r.e.mean);
        r.tolerance = std::max(2.0 * r.e.std_error, floor);
        r.pass = r.diff <= r.tolerance;
        rows.push_back(r);
    }
    return rows;
}

} // namespace hypokol
