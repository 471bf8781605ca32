#include "hypokol/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

namespace hypokol {

const GaussRule& gauss_legendre(int n) {
    if (n < 1 || n > 200) throw Error(Errc::RuleUndersized, "Gauss-Legendre order out of range");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) {
        auto rule = std::make_unique<GaussRule>();
        const auto zeros = boost::math::legendre_p_zeros<double>(n);
        std::vector<std::pair<double, double>> nw;
        for (double z : zeros) {
            const double dp = boost::math::legendre_p_prime(n, z);
            const double w = 2.0 / ((1.0 - z * z) * dp * dp);
            nw.emplace_back(z, w);
            if (z != 0.0) nw.emplace_back(-z, w);
        }
        std::sort(nw.begin(), nw.end());
        for (auto& [z, w] : nw) {
            rule->x.push_back(z);
            rule->w.push_back(w);
        }
        slot = std::move(rule);
    }
    return *slot;
}

namespace {

// Physicists' Hermite zeros by Newton iteration on the orthonormal recurrence.
GaussRule hermite_rule(int n) {
    std::vector<double> xs(n), ws(n);
    const int m = (n + 1) / 2;
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0) z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1) z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2) z = 1.86 * z - 0.86 * xs[0];
        else if (i == 3) z = 1.91 * z - 0.91 * xs[1];
        else z = 2.0 * z - xs[i - 2];
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (k + 1)) * p2 - std::sqrt(static_cast<double>(k) / (k + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        xs[i] = z;
        xs[n - 1 - i] = -z;
        ws[i] = ws[n - 1 - i] = 2.0 / (pp * pp);
    }
    GaussRule r;
    for (int i = n - 1; i >= 0; --i) {
        r.x.push_back(std::sqrt(2.0) * xs[i]);
        r.w.push_back(ws[i] / std::sqrt(kPi));
    }
    return r;
}

} // namespace

const GaussRule& gauss_hermite(int n) {
    if (n < 1 || n > 200) throw Error(Errc::RuleUndersized, "Gauss-Hermite order out of range");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussRule>(hermite_rule(n));
    return *slot;
}

QuadConfig QuadConfig::coarser() const {
    QuadConfig c = *this;
    auto shrink = [](int n) { return std::max(3, (2 * n) / 3); };
    c.n_u = shrink(n_u);
    c.n_v = shrink(n_v);
    c.n_far = shrink(n_far);
    c.n_time = shrink(n_time);
    c.n_panel = std::max(3, n_panel - 2);
    c.error_estimate = false;
    return c;
}

RegionConstants region_constants(const ProblemSpec& spec, const AssumptionReport& rep) {
    RegionConstants rc;
    rc.K1 = std::max(rep.coeff_bound, 1e-12);
    rc.b_lower = rep.b_lower;
    rc.horizon = spec.horizon;
    rc.b1_abs_max = rep.b1_abs_max;
    rc.B_max = rep.B_max;
    return rc;
}

namespace detail {

std::vector<double> geometric_breaks(double lo, double hi, double center, double scale,
                                     int levels) {
    std::vector<double> br = {lo, hi};
    auto push = [&](double v) {
        if (v > lo && v < hi) br.push_back(v);
    };
    push(center);
    double d = scale;
    for (int k = 0; k < levels; ++k, d *= 2.0) {
        push(center - d);
        push(center + d);
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    return br;
}

} // namespace detail

double interior_kernel(InteriorKernel k, const ProblemSpec& spec, const CorrectedFrame& fr,
                       double t, double x, double y) {
    switch (k) {
    case InteriorKernel::K:
    case InteriorKernel::KQ: return fr.KQ(t, x, y);
    case InteriorKernel::PK:
    case InteriorKernel::PKQ: return fr.PKQ(spec, t, x, y);
    }
    return 0.0;
}

double boundary_kernel(BoundaryKernel k, const ProblemSpec& spec, const CorrectedFrame& fr,
                       double t, double x, double y) {
    const double ab = std::abs(fr.point().b1v);
    switch (k) {
    case BoundaryKernel::K: {
        const CorrectedFrame plain(fr.point(), false);
        return ab * plain.KQ(t, x, y);
    }
    case BoundaryKernel::KQ: return ab * fr.KQ(t, x, y);
    case BoundaryKernel::PKQ: return ab * fr.PKQ(spec, t, x, y);
    }
    return 0.0;
}

namespace {

bool corrected(InteriorKernel k) { return k == InteriorKernel::KQ || k == InteriorKernel::PKQ; }

double interior_once(const ProblemSpec& spec, const RegionConstants& rc, InteriorKernel k,
                     const PlaneFn& g, double t, double x, double y, const QuadConfig& cfg) {
    double sum = 0.0;
    interior_nodes(spec, rc, t, x, y, cfg, [&](double x0, double y0, double w) {
        if (!(x0 > 0.0)) return;
        const double gv = g(x0, y0);
        if (gv == 0.0) return;
        const CorrectedFrame fr(make_frozen(spec, x0, y0, 2), corrected(k));
        sum += w * interior_kernel(k, spec, fr, t, x, y) * gv;
    });
    return sum;
}

double boundary_once(const ProblemSpec& spec, const RegionConstants& rc, BoundaryKernel k,
                     const BoundaryFn& g, double t, double x, double y, const QuadConfig& cfg) {
    double sum = 0.0;
    boundary_nodes(spec, rc, t, x, y, cfg,
                   [&](const CorrectedFrame& fr, double tau, double y0, double w) {
                       const double gv = g(tau, y0);
                       if (gv == 0.0) return;
                       sum += w * boundary_kernel(k, spec, fr, tau, x, y) * gv;
                   });
    return sum;
}

double convolve_once(const ProblemSpec& spec, const RegionConstants& rc, InteriorKernel k,
                     const SpaceTimeDensity& psi, double t, double x, double y,
                     const QuadConfig& cfg) {
    const GaussRule& gw = gauss_legendre(cfg.n_time);
    double sum = 0.0;
    for (std::size_t i = 0; i < gw.x.size(); ++i) {
        const double w = 0.5 * (1.0 + gw.x[i]);
        const double tau = t * std::pow(w, cfg.grading);
        const double jac = 0.5 * gw.w[i] * cfg.grading * t * std::pow(w, cfg.grading - 1.0);
        const double s = t - tau;
        sum += jac * interior_once(
                         spec, rc, k, [&](double x0, double y0) { return psi(s, x0, y0); }, tau, x,
                         y, cfg);
    }
    return sum;
}

} // namespace

QuadResult integrate_interior(const ProblemSpec& spec, const RegionConstants& rc,
                              InteriorKernel k, const PlaneFn& g, double t, double x, double y,
                              const QuadConfig& cfg) {
    require_positive_time(t, "integrate_interior");
    QuadResult r;
    r.value = interior_once(spec, rc, k, g, t, x, y, cfg);
    if (cfg.error_estimate)
        r.error = std::abs(r.value - interior_once(spec, rc, k, g, t, x, y, cfg.coarser()));
    return r;
}

QuadResult integrate_boundary(const ProblemSpec& spec, const RegionConstants& rc,
                              BoundaryKernel k, const BoundaryFn& g, double t, double x, double y,
                              const QuadConfig& cfg) {
    require_positive_time(t, "integrate_boundary");
    if (x < 0.0) throw Error(Errc::NonPositiveCoordinate, "integrate_boundary needs x >= 0");
    QuadResult r;
    r.value = boundary_once(spec, rc, k, g, t, x, y, cfg);
    if (cfg.error_estimate)
        r.error = std::abs(r.value - boundary_once(spec, rc, k, g, t, x, y, cfg.coarser()));
    return r;
}

QuadResult convolve_time(const ProblemSpec& spec, const RegionConstants& rc, InteriorKernel k,
                         const SpaceTimeDensity& psi, double t, double x, double y,
                         const QuadConfig& cfg) {
    require_positive_time(t, "convolve_time");
    QuadResult r;
    r.value = convolve_once(spec, rc, k, psi, t, x, y, cfg);
    if (cfg.error_estimate)
        r.error = std::abs(r.value - convolve_once(spec, rc, k, psi, t, x, y, cfg.coarser()));
    return r;
}

namespace {

double composite(const std::vector<double>& br, const GaussRule& rule,
                 const std::function<double(double)>& f) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) s += gl_integrate(rule, br[i], br[i + 1], f);
    return s;
}

std::vector<double> doubling(double lo, double hi, double first) {
    std::vector<double> br = {lo};
    for (double s = lo + first; s < hi; s = lo + 2.0 * (s - lo)) br.push_back(s);
    br.push_back(hi);
    return br;
}

} // namespace

double laplace_model_integral(double x, const std::function<double(double)>& g, int n_panel) {
    if (!(x > 0.0)) throw Error(Errc::NonPositiveCoordinate, "laplace_model_integral needs x > 0");
    const GaussRule& rule = gauss_legendre(n_panel);
    auto f = [&](double s) {
        if (!(s > 0.0)) return 0.0;
        const double d = x - s;
        return std::pow(s, -1.5) * std::exp(-d * d / (s * s * s)) * g(s);
    };
    const double a = std::min(0.5 * x, 1.0), b = std::min(2.0 * x, 1.0);
    double total = 0.0;
    // left region: exponent at least x^2 / (4 s^3), negligible except for large x
    if (a > 0.0) total += composite(doubling(0.0, a, a / 64.0), rule, f);
    if (b > a) {
        const double sig = std::pow(std::min(x, 1.0), 1.5) / std::sqrt(2.0);
        total += composite(detail::geometric_breaks(a, b, std::min(x, b), 0.5 * sig, 30), rule, f);
    }
    if (1.0 > b) total += composite(doubling(b, 1.0, b), rule, f);
    return total;
}

double laplace_model_limit(const std::function<double(double)>& g, int n_panel) {
    const GaussRule& rule = gauss_legendre(n_panel);
    auto f = [&](double s) {
        if (!(s > 0.0)) return 0.0;
        return std::pow(s, -1.5) * std::exp(-1.0 / s) * g(s);
    };
    std::vector<double> br = {0.0};
    for (int k = 10; k >= 0; --k) br.push_back(std::ldexp(1.0, -k));
    return std::sqrt(kPi) * g(0.0) + composite(br, rule, f);
}

double adaptive_1d(const std::function<double(double)>& f, double a, double b, double tol,
                   unsigned max_depth) {
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, tol);
}

double adaptive_2d(const std::function<double(double, double)>& f, double ax, double bx,
                   double ay, double by, double tol) {
    auto inner = [&](double x) {
        return adaptive_1d([&](double y) { return f(x, y); }, ay, by, tol);
    };
    return adaptive_1d(inner, ax, bx, tol);
}

} // namespace hypokol
