#include "hypokol/verify.hpp"

#include <chrono>
#include <sstream>

#include "hypokol/report.hpp"

namespace hypokol {

bool SuiteResult::pass() const {
    if (rows.empty()) return false;
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    LineFit f;
    const std::size_t n = xs.size();
    if (n < 2 || ys.size() != n) return f;
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < n; ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        syy += (ys[k] - my) * (ys[k] - my);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    f.slope = sxx > 0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    f.corr = (sxx > 0 && syy > 0) ? sxy / std::sqrt(sxx * syy) : 0.0;
    return f;
}

const std::array<std::array<long long, 6>, 6>& expected_operator_matrix() {
    static const std::array<std::array<long long, 6>, 6> m = {{{-4, 1, 3, 0, 0, 0},
                                                              {-6, 1, 0, 1, 0, 0},
                                                              {0, 0, -11, 1, 0, 0},
                                                              {0, 0, -18, -6, 2, 0},
                                                              {0, 0, 0, -12, -1, 3},
                                                              {0, 0, 0, 0, -6, 4}}};
    return m;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "matrix", "projected", "normalization", "annihilation", "correction", "dirac", "laplace",
        "jump",   "decay",     "special",       "compare",      "statistics", "determinism"};
    return names;
}

namespace {

CheckRow row(std::string check, double measured, double expected, double tol, bool pass,
             std::string detail = {}) {
    return {std::move(check), measured, expected, tol, pass, std::move(detail)};
}

// Uniforms in [lo, hi) from a Philox stream.
class Uniform {
public:
    Uniform(std::uint64_t seed, std::uint64_t stream) : eng_(seed, stream) {}
    double operator()(double lo, double hi) {
        return lo + (hi - lo) * ((eng_() + 0.5) * 2.3283064365386962890625e-10);
    }
    std::uint32_t bits() { return eng_(); }

private:
    Philox4x32 eng_;
};

ProblemSpec tanh_spec() { return tanh_benchmark().spec; }

SolverConfig solver_for(const ProblemFile& pf, const VerifyOptions& opt) {
    SolverConfig cfg = opt.solver ? *opt.solver : pf.solver;
    cfg.probes = pf.probes;
    cfg.threads = opt.threads;
    cfg.throw_on_nonconvergence = false;
    return cfg;
}

void suite_matrix(SuiteResult& r) {
    const IntMatrix6 m = assemble_operator_matrix();
    const auto& ex = expected_operator_matrix();
    std::ostringstream os;
    int mismatches = 0;
    std::vector<std::vector<Rational>> a(6, std::vector<Rational>(6));
    for (int i = 0; i < 6; ++i) {
        os << "row " << i << ":";
        for (int j = 0; j < 6; ++j) {
            os << " " << m[i][j];
            a[i][j] = m[i][j];
            if (m[i][j] != ex[i][j]) ++mismatches;
        }
        os << "\n";
    }
    const Rational det = determinant(a);
    os << "det: " << to_string(det) << "\n";
    r.text = os.str();
    r.rows.push_back(row("entries equal the reference matrix", mismatches, 0, 0, mismatches == 0));
    r.rows.push_back(row("determinant", static_cast<double>(det), 240, 0, det == 240, to_string(det)));
}

void suite_projected(SuiteResult& r, std::uint64_t seed) {
    Uniform u(seed, 17);
    std::ostringstream os;
    int nonzero = 0;
    for (int k = 0; k < 20; ++k) {
        const Rational a1(static_cast<int>(u.bits() % 201) - 100, static_cast<int>(u.bits() % 37) + 1);
        const Rational a2(static_cast<int>(u.bits() % 201) - 100, static_cast<int>(u.bits() % 37) + 1);
        const SPoly res = projected_residual(a1, a2);
        const std::string txt = dump(res);
        if (!res.is_zero()) ++nonzero;
        if (k == 0) {
            const auto chi = solve_chi_exact(a1, a2);
            os << "alpha: " << to_string(a1) << " " << to_string(a2) << "\nchi:";
            for (const auto& c : chi) os << " " << to_string(c);
            os << "\nQ: " << dump(build_Q_exact(a1, a2)) << "\n";
        }
        os << "residual(" << to_string(a1) << ", " << to_string(a2) << "): " << txt << "\n";
        r.rows.push_back(row("residual for alpha pair " + std::to_string(k), res.is_zero() ? 0 : 1, 0,
                             0, res.is_zero(), txt));
    }
    r.text = os.str();
}

// Integral of K_pt(t, ., .) over the (x, y) plane by nested adaptive Gauss-Kronrod,
// with limits from the conditional Gaussian structure.
double kernel_mass_adaptive(const FrozenPoint& pt, double t) {
    const GaussianStats g = frozen_stats(pt, t);
    const double sy = std::sqrt(g.D[1][1]);
    const double sxc = std::sqrt(g.D[0][0] - g.D[0][1] * g.D[0][1] / g.D[1][1]);
    auto inner = [&](double y) {
        const double mx = g.mu1 + g.D[0][1] / g.D[1][1] * (y - g.mu2);
        return adaptive_1d([&](double x) { return kernel_K(pt, t, x, y); }, mx - 12 * sxc,
                           mx + 12 * sxc, 1e-11, 8);
    };
    return adaptive_1d(inner, g.mu2 - 12 * sy, g.mu2 + 12 * sy, 1e-11, 8);
}

void suite_normalization(SuiteResult& r, std::uint64_t seed) {
    Uniform u(seed, 23);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const FrozenPoint pt = make_frozen(u(0.5, 3.0), u(-2.0, 2.0), u(-3.0, -0.5), u(-1.0, 1.0),
                                           u(0.2, 2.0));
        const double t = std::exp(u(std::log(1e-3), 0.0));
        const double m = kernel_mass_adaptive(pt, t);
        worst = std::max(worst, std::abs(m - 1.0));
        r.rows.push_back(row("plane mass of K, config " + std::to_string(k), m, 1.0, 1e-6,
                             std::abs(m - 1.0) <= 1e-6));
    }
    const ProblemSpec spec = tanh_spec();
    const RegionConstants rc = region_constants(spec, validate_assumptions(spec));
    for (int k = 0; k < 10; ++k) {
        const double t = std::exp(u(std::log(1e-3), std::log(0.25)));
        const double x = u(2.5, 3.5), y = u(-1.0, 1.0);
        const QuadResult q = integrate_interior(spec, rc, InteriorKernel::K,
                                                [](double, double) { return 1.0; }, t, x, y);
        r.rows.push_back(row("base-plane mass of K on the tanh spec, point " + std::to_string(k),
                             q.value, 1.0, 1e-6, std::abs(q.value - 1.0) <= 1e-6));
    }
    (void)worst;
}

void suite_annihilation(SuiteResult& r, std::uint64_t seed) {
    Uniform u(seed, 29);
    const std::vector<double> hs = {0.02, 0.01, 0.005, 0.0025};
    for (int k = 0; k < 20; ++k) {
        const FrozenPoint pt = make_frozen(u(0.5, 3.0), u(-2.0, 2.0), u(-3.0, -0.5), u(-1.0, 1.0),
                                           u(0.5, 2.0));
        const double t = u(0.4, 1.0);
        const double xs = u(-1.0, 1.0), ys = u(-1.0, 1.0);
        const double x = pt.x0 - pt.b1v * t + 0.5 * pt.Bv * pt.b2v * t * t +
                         pt.Bv * t * std::sqrt(t) * xs;
        const double y = pt.y0 - pt.b2v * t + std::sqrt(t) * ys;
        auto K = [&pt](double tt, double xx, double yy) { return kernel_K(pt, tt, xx, yy); };
        std::vector<double> lh, lr;
        for (double h : hs) {
            lh.push_back(std::log(h));
            lr.push_back(std::log(std::abs(apply_PL(pt, K, t, x, y, h)) + 1e-300));
        }
        const LineFit f = fit_line(lh, lr);
        r.rows.push_back(row("finite-difference residual slope, point " + std::to_string(k), f.slope,
                             2.0, 0.1, f.slope >= 1.9));
    }
}

void suite_correction(SuiteResult& r) {
    const ProblemSpec spec = tanh_spec();
    const std::vector<std::array<double, 4>> pts = {
        {1.0, 0.3, 0.4, 0.7}, {1.5, -0.5, -0.6, 0.3}, {0.8, 1.0, 0.2, -0.9}};
    for (const auto& p : pts) {
        const CorrectedFrame fr(spec, p[0], p[1]);
        const FrozenPoint& pt = fr.point();
        std::vector<double> lt, lk, lq;
        for (int k = 3; k <= 9; ++k) {
            const double t = std::ldexp(1.0, -k);
            const double x = pt.x0 - pt.b1v * t + pt.Bv * t * std::sqrt(t) * p[2];
            const double y = pt.y0 + std::sqrt(t) * p[3];
            const double hat = bound_kernel_hat(pt, 1.0 / 12.0, t, x, y);
            lt.push_back(std::log(t));
            lk.push_back(std::log(std::abs(apply_P_K(spec, pt, t, x, y)) / hat));
            lq.push_back(std::log(std::abs(fr.PKQ(spec, t, x, y)) / hat));
        }
        const LineFit fk = fit_line(lt, lk), fq = fit_line(lt, lq);
        char where[96];
        std::snprintf(where, sizeof where, " at base (%g, %g), standardized (%g, %g)", p[0], p[1],
                      p[2], p[3]);
        r.rows.push_back(row(std::string("uncorrected residual slope") + where, fk.slope, -0.5, 0.1,
                             fk.slope <= -0.4));
        r.rows.push_back(row(std::string("corrected residual slope") + where, fq.slope, 0.0, 0.1,
                             fq.slope >= -0.1));
    }
}

void suite_dirac(SuiteResult& r) {
    const ProblemSpec spec = tanh_spec();
    const RegionConstants rc = region_constants(spec, validate_assumptions(spec));
    const double x = 1.5, y = 0.2;
    const std::vector<std::pair<std::string, PlaneFn>> gs = {
        {"cos(y)", [](double, double y0) { return std::cos(y0); }},
        {"exp(-(x-1.5)^2) sin(y+0.5)",
         [](double x0, double y0) { return std::exp(-(x0 - 1.5) * (x0 - 1.5)) * std::sin(y0 + 0.5); }},
        {"x/(1+x^2) + y/10", [](double x0, double y0) { return x0 / (1.0 + x0 * x0) + 0.1 * y0; }}};
    for (const auto& [name, g] : gs) {
        std::vector<double> ls, le;
        double C = 0.0;
        for (int k = 2; k <= 10; ++k) {
            const double t = std::ldexp(1.0, -k);
            const double v = integrate_interior(spec, rc, InteriorKernel::KQ, g, t, x, y).value;
            const double err = std::abs(v - g(x, y));
            C = std::max(C, err / std::sqrt(t));
            ls.push_back(0.5 * std::log(t));
            le.push_back(std::log(err + 1e-300));
        }
        const LineFit f = fit_line(ls, le);
        r.rows.push_back(row("log-error vs log sqrt(t) correlation, g = " + name, f.corr, 1.0, 0.05,
                             f.corr > 0.95, "C = " + fmt17(C) + ", slope = " + fmt17(f.slope)));
    }
}

void suite_laplace(SuiteResult& r) {
    const std::vector<std::pair<std::string, std::function<double(double)>>> gs = {
        {"1", [](double) { return 1.0; }},
        {"s", [](double s) { return s; }},
        {"cos(s)", [](double s) { return std::cos(s); }}};
    for (const auto& [name, g] : gs) {
        const double lim = laplace_model_limit(g);
        const double lim_ref =
            std::sqrt(kPi) * g(0.0) +
            adaptive_1d([&](double s) { return s > 0 ? std::pow(s, -1.5) * std::exp(-1.0 / s) * g(s) : 0.0; },
                        0.0, 1.0, 1e-12);
        r.rows.push_back(row("limit vs adaptive oracle, g = " + name, lim, lim_ref, 1e-8,
                             std::abs(lim - lim_ref) <= 1e-8 * std::max(1.0, std::abs(lim_ref))));
        double prev = std::numeric_limits<double>::infinity();
        bool monotone = true;
        double last = 0.0;
        for (double x : {0.1, 0.05, 0.025, 0.0125}) {
            const double v = laplace_model_integral(x, g);
            auto f = [&](double s) {
                const double d = x - s;
                return s > 0 ? std::pow(s, -1.5) * std::exp(-d * d / (s * s * s)) * g(s) : 0.0;
            };
            const double a = std::min(0.5 * x, 1.0), b = std::min(2.0 * x, 1.0);
            const double ref = adaptive_1d(f, 0.0, a, 1e-12) + adaptive_1d(f, a, b, 1e-12) +
                               adaptive_1d(f, b, 1.0, 1e-12);
            r.rows.push_back(row("model integral vs adaptive oracle, g = " + name + ", x = " + fmt17(x),
                                 v, ref, 1e-6, std::abs(v - ref) <= 1e-6 * std::max(1.0, std::abs(ref))));
            const double e = std::abs(v - lim);
            if (e > prev) monotone = false;
            prev = e;
            last = v;
        }
        const double rel = std::abs(last - lim) / std::abs(lim);
        r.rows.push_back(row("relative gap to the limit at x = 0.0125, g = " + name, rel, 0.0, 0.02,
                             rel <= 0.02, monotone ? "gap decreasing in x" : "gap not monotone"));
    }
}

void suite_jump(SuiteResult& r) {
    const ProblemSpec spec = tanh_spec();
    const RegionConstants rc = region_constants(spec, validate_assumptions(spec));
    const double t = 0.5, y = 0.3;
    const BoundaryFn g = [](double tau, double y0) {
        return 1.0 + 0.5 * std::cos(y0) * std::exp(-tau);
    };
    for (BoundaryKernel k : {BoundaryKernel::K, BoundaryKernel::KQ}) {
        const std::string kn = k == BoundaryKernel::K ? "K" : "KQ";
        const std::vector<double> xs = {0.04, 0.02, 0.01, 0.005};
        std::vector<double> vs;
        for (double x : xs) vs.push_back(integrate_boundary(spec, rc, k, g, t, x, y).value);
        // error ~ x: linear extrapolation from the two finest points
        const double extrap = 2.0 * vs[3] - vs[2];
        const double expect = g(0.0, y) + integrate_boundary(spec, rc, k, g, t, 0.0, y).value;
        const double rel = std::abs(extrap - expect) / std::abs(expect);
        std::string detail = "values:";
        for (double v : vs) detail += " " + fmt17(v);
        r.rows.push_back(row("jump decomposition, kernel " + kn, extrap, expect, 0.05, rel <= 0.05,
                             detail));
    }
}

struct BenchmarkRun {
    ProblemFile pf;
    SolverConfig cfg;
    std::unique_ptr<VolterraSolver> solver;
    Solution sol;
};

BenchmarkRun solve_problem(ProblemFile pf, const VerifyOptions& opt, int min_iter) {
    BenchmarkRun b;
    b.cfg = solver_for(pf, opt);
    b.cfg.max_iter = std::max(b.cfg.max_iter, min_iter);
    b.pf = std::move(pf);
    b.solver = std::make_unique<VolterraSolver>(b.pf.spec, b.cfg);
    b.sol = b.solver->solve();
    return b;
}

void suite_decay(SuiteResult& r, const VerifyOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    BenchmarkRun b = solve_problem(tanh_benchmark(), opt, 9);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::vector<double> norms;
    for (std::size_t n = 0; n < b.sol.norm_interior.size(); ++n)
        norms.push_back(std::max(b.sol.norm_interior[n], b.sol.norm_side[n]));
    std::ostringstream os;
    os << "K1: " << fmt17(b.sol.envelope.K1) << "\nK2: " << fmt17(b.sol.envelope.K2) << "\n";
    for (std::size_t n = 0; n < norms.size(); ++n) {
        os << "n=" << n << " interior " << fmt17(b.sol.norm_interior[n]) << " side "
           << fmt17(b.sol.norm_side[n]) << " envelope " << fmt17(b.sol.envelope.at(static_cast<int>(n)))
           << "\n";
        if (n >= 2)
            r.rows.push_back(row("iterate " + std::to_string(n) + " under the envelope", norms[n],
                                 b.sol.envelope.at(static_cast<int>(n)), 0.0,
                                 norms[n] <= b.sol.envelope.at(static_cast<int>(n)) * (1.0 + 1e-12)));
    }
    r.text = os.str();
    const int last = static_cast<int>(norms.size()) - 1;
    r.rows.push_back(row("series tail bound", b.sol.tail, 0.0, 1e-6, b.sol.converged && b.sol.tail < 1e-6));
    r.rows.push_back(row("iterations to reach the tail tolerance", last, 8, 0, b.sol.converged && last <= 8));
    r.rows.push_back(row("solve seconds", secs, 0.0, 600.0, secs < 600.0));
}

void suite_special(SuiteResult& r, const VerifyOptions& opt) {
    {
        BenchmarkRun b = solve_problem(zero_problem(), opt, 1);
        for (const auto& s : evaluate_probes(*b.solver, b.sol, b.pf.probes))
            r.rows.push_back(row("zero data, u at (" + fmt17(s.p.t) + ", " + fmt17(s.p.x) + ", " +
                                     fmt17(s.p.y) + ")",
                                 s.u, 0.0, 1e-10, std::abs(s.u) <= 1e-10));
    }
    {
        BenchmarkRun b = solve_problem(constant_problem(), opt, 1);
        for (const auto& s : evaluate_probes(*b.solver, b.sol, b.pf.probes))
            r.rows.push_back(row("constant data, u at (" + fmt17(s.p.t) + ", " + fmt17(s.p.x) + ", " +
                                     fmt17(s.p.y) + ")",
                                 s.u, 1.0, 5e-3, std::abs(s.u - 1.0) <= 5e-3));
    }
}

void suite_compare(SuiteResult& r, const VerifyOptions& opt) {
    BenchmarkRun b = solve_problem(tanh_benchmark(), opt, 1);
    const auto srows = evaluate_probes(*b.solver, b.sol, b.pf.probes);
    PathConfig pc;
    pc.paths = opt.paths;
    pc.dt = opt.dt;
    pc.seed = opt.seed;
    pc.threads = opt.threads;
    const auto mrows = oracle_probes(b.pf.spec, b.pf.probes, pc);
    const auto cmp = compare_rows(srows, mrows, 2e-2);
    r.text = compare_csv(cmp);
    for (const auto& c : cmp)
        r.rows.push_back(row("solver vs oracle at (" + fmt17(c.p.t) + ", " + fmt17(c.p.x) + ", " +
                                 fmt17(c.p.y) + ")",
                             c.u, c.e.mean, c.tolerance, c.pass,
                             "stderr " + fmt17(c.e.std_error)));
}

void moment_rows(SuiteResult& r, const std::string& label, const LinearSample& s, double m1,
                 double m2, double c11, double c12, double c22) {
    const SampleMoments m = sample_moments(s.x, s.y);
    auto add = [&](const std::string& what, double meas, double ex, double se) {
        r.rows.push_back(row(label + " " + what, meas, ex, 3.0 * se, std::abs(meas - ex) <= 3.0 * se));
    };
    add("mean x", m.mean[0], m1, m.mean_se[0]);
    add("mean y", m.mean[1], m2, m.mean_se[1]);
    add("cov xx", m.cov[0][0], c11, m.cov_se[0][0]);
    add("cov xy", m.cov[0][1], c12, m.cov_se[0][1]);
    add("cov yy", m.cov[1][1], c22, m.cov_se[1][1]);
}

void suite_statistics(SuiteResult& r, const VerifyOptions& opt) {
    const ProblemSpec spec = tanh_spec();
    const FrozenPoint pt = make_frozen(spec, 1.0, 0.25, 2);
    PathConfig pc;
    pc.paths = std::min<std::int64_t>(opt.paths, 200000);
    pc.dt = 0.01;
    pc.seed = opt.seed;
    pc.threads = opt.threads;
    for (double t : {0.25, 1.0}) {
        const GaussianStats g = frozen_stats(pt, t);
        moment_rows(r, "frozen tanh process, t = " + fmt17(t), simulate_linearized(pt, t, pc), g.mu1,
                    g.mu2, g.D[0][0], g.D[0][1], g.D[1][1]);
        const double x = 1.0, y = 0.5;
        moment_rows(r, "Kolmogorov process, t = " + fmt17(t), simulate_kolmogorov(x, y, t, pc),
                    x + y * t, y, t * t * t / 3.0, t * t / 2.0, t);
    }
}

void suite_determinism(SuiteResult& r, const VerifyOptions& opt) {
    const ProblemFile pf = tanh_benchmark();
    PathConfig pc;
    pc.paths = 20000;
    pc.dt = opt.dt;
    pc.seed = opt.seed;
    pc.threads = opt.threads;
    const std::vector<Probe> probes(pf.probes.begin(), pf.probes.begin() + 3);
    const std::string a = oracle_csv(oracle_probes(pf.spec, probes, pc));
    const std::string b = oracle_csv(oracle_probes(pf.spec, probes, pc));
    r.rows.push_back(row("oracle CSV identical across runs", a == b ? 1 : 0, 1, 0, a == b));
    pc.threads = 3;
    const std::string c = oracle_csv(oracle_probes(pf.spec, probes, pc));
    r.rows.push_back(row("oracle CSV independent of thread count", a == c ? 1 : 0, 1, 0, a == c));
    SolverConfig sc = pf.solver;
    sc.nt = 4;
    sc.nx = 8;
    sc.ny = 8;
    sc.nt_side = 8;
    sc.ny_side = 12;
    sc.probes = probes;
    sc.throw_on_nonconvergence = false;
    sc.threads = opt.threads;
    const VolterraSolver s1(pf.spec, sc);
    const std::string u1 = solution_csv(evaluate_probes(s1, s1.solve(), probes));
    const std::string u2 = solution_csv(evaluate_probes(s1, s1.solve(), probes));
    r.rows.push_back(row("solution CSV identical across runs", u1 == u2 ? 1 : 0, 1, 0, u1 == u2));
}

} // namespace

SuiteResult run_suite(const std::string& name, const VerifyOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    SuiteResult r;
    r.name = name;
    if (name == "matrix") suite_matrix(r);
    else if (name == "projected") suite_projected(r, opt.seed);
    else if (name == "normalization") suite_normalization(r, opt.seed);
    else if (name == "annihilation") suite_annihilation(r, opt.seed);
    else if (name == "correction") suite_correction(r);
    else if (name == "dirac") suite_dirac(r);
    else if (name == "laplace") suite_laplace(r);
    else if (name == "jump") suite_jump(r);
    else if (name == "decay") suite_decay(r, opt);
    else if (name == "special") suite_special(r, opt);
    else if (name == "compare") suite_compare(r, opt);
    else if (name == "statistics") suite_statistics(r, opt);
    else if (name == "determinism") suite_determinism(r, opt);
    else throw Error(Errc::Parse, "unknown suite '" + name + "'");
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace hypokol
