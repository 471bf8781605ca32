#include "hypokol/volterra.hpp"

#include <chrono>

namespace hypokol {

namespace {

// Index k with g[k] <= v < g[k+1] and the linear weight, clamped at both ends.
inline void locate(const std::vector<double>& g, double v, std::size_t& k, double& w) {
    const std::size_t n = g.size();
    if (n == 1 || v <= g.front()) {
        k = 0;
        w = 0.0;
        return;
    }
    if (v >= g.back()) {
        k = n - 2;
        w = 1.0;
        return;
    }
    k = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), v) - g.begin()) - 1;
    w = (v - g[k]) / (g[k + 1] - g[k]);
}

double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
}

} // namespace

double DensityPair::interior(double s, double x0, double y0) const {
    std::size_t k, i, j;
    double wt, wx, wy;
    locate(t, s, k, wt);
    locate(x, x0, i, wx);
    locate(y, y0, j, wy);
    const std::size_t nx = x.size(), ny = y.size();
    const std::size_t k1 = std::min(k + 1, t.size() - 1);
    const std::size_t i1 = std::min(i + 1, nx - 1), j1 = std::min(j + 1, ny - 1);
    auto plane = [&](std::size_t kk) {
        const double* p = psi.data() + kk * nx * ny;
        const double a = p[i * ny + j] + wy * (p[i * ny + j1] - p[i * ny + j]);
        const double b = p[i1 * ny + j] + wy * (p[i1 * ny + j1] - p[i1 * ny + j]);
        return a + wx * (b - a);
    };
    const double lo = plane(k);
    return wt == 0.0 ? lo : lo + wt * (plane(k1) - lo);
}

double DensityPair::side(double s, double y0) const {
    std::size_t k, j;
    double wt, wy;
    locate(ts, s, k, wt);
    locate(ys, y0, j, wy);
    const std::size_t ny = ys.size();
    const std::size_t k1 = std::min(k + 1, ts.size() - 1), j1 = std::min(j + 1, ny - 1);
    auto row = [&](std::size_t kk) {
        const double* p = psi_side.data() + kk * ny;
        return p[j] + wy * (p[j1] - p[j]);
    };
    const double lo = row(k);
    return wt == 0.0 ? lo : lo + wt * (row(k1) - lo);
}

double DensityPair::sup_interior() const { return sup_abs(psi); }
double DensityPair::sup_side() const { return sup_abs(psi_side); }

bool DensityPair::same_grid(const DensityPair& o) const {
    return t == o.t && x == o.x && y == o.y && ts == o.ts && ys == o.ys &&
           psi.size() == o.psi.size() && psi_side.size() == o.psi_side.size();
}

DensityPair DensityPair::zeros_like() const {
    DensityPair z = *this;
    std::fill(z.psi.begin(), z.psi.end(), 0.0);
    std::fill(z.psi_side.begin(), z.psi_side.end(), 0.0);
    return z;
}

DensityPair& DensityPair::operator+=(const DensityPair& o) {
    if (!same_grid(o)) throw Error(Errc::GridMismatch, "DensityPair += on different grids");
    for (std::size_t k = 0; k < psi.size(); ++k) psi[k] += o.psi[k];
    for (std::size_t k = 0; k < psi_side.size(); ++k) psi_side[k] += o.psi_side[k];
    return *this;
}

DensityPair& DensityPair::operator*=(double a) {
    for (double& v : psi) v *= a;
    for (double& v : psi_side) v *= a;
    return *this;
}

void SolverConfig::validate() const {
    if (nt < 1 || nx < 2 || ny < 2 || nt_side < 1 || ny_side < 2)
        throw Error(Errc::GridMismatch, "solver grids need nt >= 1 and at least 2 nodes in x, y");
    if (!(tail_tol > 0.0)) throw Error(Errc::InvalidSpec, "tail tolerance must be positive");
    if (max_iter < 1) throw Error(Errc::InvalidSpec, "max_iter must be >= 1");
    if (!(t_floor > 0.0 && t_floor < 1.0)) throw Error(Errc::InvalidSpec, "t_floor must be in (0, 1)");
}

DensityPair make_grids(const ProblemSpec& spec, const AssumptionReport& rep,
                       const SolverConfig& cfg) {
    cfg.validate();
    const double T = spec.horizon;
    double px = 0.0, py = 0.0;
    for (const auto& p : cfg.probes) {
        px = std::max(px, p.x);
        py = std::max(py, std::abs(p.y));
    }
    if (cfg.probes.empty()) {
        px = 2.0;
        py = 1.0;
    }
    const double xm = cfg.x_max > 0.0
                          ? cfg.x_max
                          : px + rep.b1_abs_max * T + 6.0 * rep.B_max * T * std::sqrt(T);
    const double ym = cfg.y_max > 0.0 ? cfg.y_max : py + 6.0 * std::sqrt(T);

    DensityPair d;
    const double t0 = cfg.t_floor * T;
    d.t.push_back(t0);
    for (int k = 1; k <= cfg.nt; ++k) d.t.push_back(T * k / cfg.nt);
    // graded toward x = 0 where the boundary layer sits
    for (int i = 0; i < cfg.nx; ++i) {
        const double r = static_cast<double>(i + 1) / cfg.nx;
        d.x.push_back(xm * r * r);
    }
    for (int j = 0; j < cfg.ny; ++j) d.y.push_back(-ym + 2.0 * ym * j / (cfg.ny - 1));
    d.ts.push_back(t0);
    for (int k = 1; k <= cfg.nt_side; ++k) d.ts.push_back(T * k / cfg.nt_side);
    for (int j = 0; j < cfg.ny_side; ++j) d.ys.push_back(-ym + 2.0 * ym * j / (cfg.ny_side - 1));
    d.psi.assign(d.t.size() * d.x.size() * d.y.size(), 0.0);
    d.psi_side.assign(d.ts.size() * d.ys.size(), 0.0);
    return d;
}

double Envelope::at(int n) const {
    const int h = n / 2, c = (n + 1) / 2;
    return K1 * std::exp(2.0 * c * std::log(K2) + h * std::log(T) - std::lgamma(h + 1.0));
}

double Envelope::tail_after(int n) const {
    if (K1 == 0.0) return 0.0;
    double s = 0.0;
    for (int m = n + 1; m < n + 2000; ++m) {
        const double a = at(m);
        s += a;
        if (m > n + 4 && a < 1e-18 * s) break;
        if (!std::isfinite(s)) return s;
    }
    return s;
}

bool Envelope::dominates(const std::vector<double>& norms, int from) const {
    for (int n = from; n < static_cast<int>(norms.size()); ++n)
        if (norms[n] > at(n) * (1.0 + 1e-12)) return false;
    return true;
}

Envelope fit_envelope(const std::vector<double>& norms, double T, int from) {
    Envelope e;
    e.T = T;
    const int n_all = static_cast<int>(norms.size());
    // an exactly vanishing iterate ends the series
    for (int n = 0; n < n_all; ++n)
        if (norms[n] == 0.0 && n >= std::min(from, n_all - 1)) {
            e.K1 = 0.0;
            e.K2 = 1.0;
            return e;
        }
    // log N_n + log floor(n/2)! - floor(n/2) log T = log K1 + 2 ceil(n/2) log K2
    std::vector<double> a, l;
    for (int n = std::max(1, std::min(from - 1, n_all - 1)); n < n_all; ++n) {
        if (!(norms[n] > 0.0)) continue;
        a.push_back(2.0 * ((n + 1) / 2));
        l.push_back(std::log(norms[n]) + std::lgamma(n / 2 + 1.0) - (n / 2) * std::log(T));
    }
    double slope = 0.0;
    if (a.size() >= 2) {
        double ma = 0, ml = 0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            ma += a[k];
            ml += l[k];
        }
        ma /= a.size();
        ml /= a.size();
        double sxx = 0, sxy = 0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            sxx += (a[k] - ma) * (a[k] - ma);
            sxy += (a[k] - ma) * (l[k] - ml);
        }
        if (sxx > 0) slope = sxy / sxx;
    }
    e.K2 = std::exp(slope);
    double lk1 = -std::numeric_limits<double>::infinity();
    for (int n = std::min(from, n_all - 1); n < n_all; ++n) {
        if (!(norms[n] > 0.0)) continue;
        const double ln = std::log(norms[n]) + std::lgamma(n / 2 + 1.0) - (n / 2) * std::log(T) -
                          2.0 * ((n + 1) / 2) * slope;
        lk1 = std::max(lk1, ln);
    }
    e.K1 = std::isfinite(lk1) ? std::exp(lk1) : 0.0;
    return e;
}

VolterraSolver::VolterraSolver(const ProblemSpec& spec, SolverConfig cfg)
    : spec_(spec), cfg_(std::move(cfg)) {
    cfg_.validate();
    rep_ = validate_assumptions(spec_);
    require_basics(rep_, "volterra solver");
    rc_ = region_constants(spec_, rep_);
    grids_ = make_grids(spec_, rep_, cfg_);
}

namespace {

QuadConfig inner(const QuadConfig& q) {
    QuadConfig c = q;
    c.error_estimate = false;
    return c;
}

} // namespace

DensityPair VolterraSolver::initial_difference() const {
    DensityPair d = grids_;
    const QuadConfig q = inner(cfg_.quad);
    const std::size_t nx = d.x.size(), ny = d.y.size();
    auto u0 = [this](double x0, double y0) { return spec_.u_init(x0, y0); };
    parallel_for(d.psi.size(), cfg_.threads, [&](std::size_t idx) {
        const std::size_t k = idx / (nx * ny), i = (idx / ny) % nx, j = idx % ny;
        const double t = d.t[k], x = d.x[i], y = d.y[j];
        double v = spec_.f(t, x, y);
        if (!spec_.zero_data)
            v += integrate_interior(spec_, rc_, InteriorKernel::PKQ, u0, t, x, y, q).value;
        d.psi[idx] = v;
    });
    const std::size_t nys = d.ys.size();
    parallel_for(d.psi_side.size(), cfg_.threads, [&](std::size_t idx) {
        const double t = d.ts[idx / nys], y = d.ys[idx % nys];
        double v = spec_.u_side(t, y);
        if (!spec_.zero_data)
            v -= integrate_interior(spec_, rc_, InteriorKernel::KQ, u0, t, 0.0, y, q).value;
        d.psi_side[idx] = v;
    });
    return d;
}

DensityPair VolterraSolver::step(const DensityPair& pn) const {
    if (!pn.same_grid(grids_)) throw Error(Errc::GridMismatch, "volterra step on foreign grids");
    DensityPair d = grids_;
    if (pn.sup_interior() == 0.0 && pn.sup_side() == 0.0) return d;
    const QuadConfig q = inner(cfg_.quad);
    const std::size_t nx = d.x.size(), ny = d.y.size();
    auto psi = [&pn](double s, double x0, double y0) { return pn.interior(s, x0, y0); };
    parallel_for(d.psi.size(), cfg_.threads, [&](std::size_t idx) {
        const std::size_t k = idx / (nx * ny), i = (idx / ny) % nx, j = idx % ny;
        const double t = d.t[k], x = d.x[i], y = d.y[j];
        double v = convolve_time(spec_, rc_, InteriorKernel::PKQ, psi, t, x, y, q).value;
        v += integrate_boundary(
                 spec_, rc_, BoundaryKernel::PKQ,
                 [&](double tau, double y0) { return pn.side(t - tau, y0); }, t, x, y, q)
                 .value;
        d.psi[idx] = v;
    });
    const std::size_t nys = d.ys.size();
    parallel_for(d.psi_side.size(), cfg_.threads, [&](std::size_t idx) {
        const double t = d.ts[idx / nys], y = d.ys[idx % nys];
        double v = -convolve_time(spec_, rc_, InteriorKernel::KQ, psi, t, 0.0, y, q).value;
        v -= integrate_boundary(
                 spec_, rc_, BoundaryKernel::KQ,
                 [&](double tau, double y0) { return pn.side(t - tau, y0); }, t, 0.0, y, q)
                 .value;
        d.psi_side[idx] = v;
    });
    return d;
}

Solution VolterraSolver::solve() const {
    const auto start = std::chrono::steady_clock::now();
    Solution sol;
    DensityPair cur = initial_difference();
    sol.pair = cur;
    std::vector<double> norms;
    auto record = [&](const DensityPair& p) {
        sol.norm_interior.push_back(p.sup_interior());
        sol.norm_side.push_back(p.sup_side());
        norms.push_back(std::max(sol.norm_interior.back(), sol.norm_side.back()));
    };
    record(cur);
    sol.iterations = 1;
    const double T = spec_.horizon;
    while (true) {
        const int n = static_cast<int>(norms.size()) - 1;
        if (norms.back() == 0.0) {
            sol.envelope = fit_envelope(norms, T);
            sol.tail = 0.0;
            sol.converged = true;
            break;
        }
        if (n >= 2) {
            sol.envelope = fit_envelope(norms, T);
            sol.tail = sol.envelope.tail_after(n);
            if (sol.tail < cfg_.tail_tol) {
                sol.converged = true;
                break;
            }
        }
        if (sol.iterations >= cfg_.max_iter) break;
        cur = step(cur);
        sol.pair += cur;
        record(cur);
        ++sol.iterations;
    }
    sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!sol.converged) {
        sol.notes.push_back("series tail " + std::to_string(sol.tail) + " above tolerance after " +
                            std::to_string(sol.iterations) + " iterates");
        if (cfg_.throw_on_nonconvergence)
            throw Error(Errc::NonConvergence, sol.notes.back());
    }
    return sol;
}

QuadResult VolterraSolver::evaluate(const Solution& sol, double t, double x, double y) const {
    require_positive_time(t, "evaluate_solution");
    if (!(x > 0.0) || t > spec_.horizon * (1.0 + 1e-12))
        throw Error(Errc::OutOfDomain, "evaluate_solution needs 0 < t <= T and x > 0");
    const DensityPair& pr = sol.pair;
    if (!pr.same_grid(grids_)) throw Error(Errc::GridMismatch, "solution on foreign grids");
    QuadResult out;
    if (spec_.zero_data) return out;
    const QuadConfig& q = cfg_.quad;
    auto add = [&out](const QuadResult& r) {
        out.value += r.value;
        out.error += r.error;
    };
    add(convolve_time(
        spec_, rc_, InteriorKernel::KQ,
        [&pr](double s, double x0, double y0) { return pr.interior(s, x0, y0); }, t, x, y, q));
    add(integrate_boundary(
        spec_, rc_, BoundaryKernel::KQ, [&](double tau, double y0) { return pr.side(t - tau, y0); },
        t, x, y, q));
    add(integrate_interior(
        spec_, rc_, InteriorKernel::KQ,
        [this](double x0, double y0) { return spec_.u_init(x0, y0); }, t, x, y, q));
    return out;
}

DensityPair initial_difference(const ProblemSpec& spec, const SolverConfig& cfg) {
    return VolterraSolver(spec, cfg).initial_difference();
}

DensityPair volterra_step(const ProblemSpec& spec, const SolverConfig& cfg,
                          const DensityPair& pair_n) {
    return VolterraSolver(spec, cfg).step(pair_n);
}

Solution solve_densities(const ProblemSpec& spec, const SolverConfig& cfg) {
    return VolterraSolver(spec, cfg).solve();
}

QuadResult evaluate_solution(const ProblemSpec& spec, const SolverConfig& cfg,
                             const Solution& sol, double t, double x, double y) {
    return VolterraSolver(spec, cfg).evaluate(sol, t, x, y);
}

std::vector<ResidualRow> residual_report(const VolterraSolver& solver, const Solution& sol,
                                         const std::vector<Probe>& points, double h) {
    const ProblemSpec& spec = solver.spec();
    std::vector<ResidualRow> rows;
    for (const auto& p : points) {
        if (!(h > 0.0) || p.x < 2.0 * h || p.t < 2.0 * h || p.t + h > spec.horizon * (1.0 + 1e-12))
            throw Error(Errc::MarginViolation, "residual point needs margin 2h from x = 0, t = 0 and t + h <= T");
        auto u = [&](double t, double x, double y) { return solver.evaluate(sol, t, x, y).value; };
        const double u0 = u(p.t, p.x, p.y);
        const double uxp = u(p.t, p.x + h, p.y), uxm = u(p.t, p.x - h, p.y);
        const double uyp = u(p.t, p.x, p.y + h), uym = u(p.t, p.x, p.y - h);
        const double utp = u(p.t + h, p.x, p.y), utm = u(p.t - h, p.x, p.y);
        ResidualRow r;
        r.p = p;
        r.pde = 0.5 * (uyp - 2.0 * u0 + uym) / (h * h) +
                spec.b1.value(p.x, p.y) * (uxp - uxm) / (2.0 * h) +
                spec.b2.value(p.x, p.y) * (uyp - uym) / (2.0 * h) + spec.c.value(p.x, p.y) * u0 -
                (utp - utm) / (2.0 * h) + spec.f(p.t, p.x, p.y);
        // linear extrapolation from x = h, h/2 and from t = h, h/2
        r.boundary = 2.0 * u(p.t, 0.5 * h, p.y) - u(p.t, h, p.y) - spec.u_side(p.t, p.y);
        r.initial = 2.0 * u(0.5 * h, p.x, p.y) - u(h, p.x, p.y) - spec.u_init(p.x, p.y);
        rows.push_back(r);
    }
    return rows;
}

} // namespace hypokol
