#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "hypokol/corrections.hpp"

namespace hypokol {

// Gauss-Legendre nodes/weights on [-1, 1], nodes ascending.
struct GaussRule {
    std::vector<double> x, w;
};
const GaussRule& gauss_legendre(int n);
// Gauss-Hermite rule for the standard normal weight: sum w_i f(x_i) ~ E[f(Z)].
const GaussRule& gauss_hermite(int n);

template <class F>
double gl_integrate(const GaussRule& rule, double a, double b, F&& f) {
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * f(m + h * rule.x[i]);
    return s * h;
}

struct QuadConfig {
    int n_u = 16;          // interior near region, sheared axis
    int n_v = 24;          // interior near region, y axis
    int n_far = 12;        // interior far region, per side and axis
    int n_time = 12;       // time convolution nodes
    double grading = 2.0;  // tau = t * w^grading
    int n_panel = 6;       // nodes per composite panel
    double radius = 8.0;   // truncation in standard deviations
    bool error_estimate = true;

    QuadConfig coarser() const;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

// Region thresholds taken from the assumption report.
struct RegionConstants {
    double K1 = 1.0;
    double b_lower = 1.0;
    double horizon = 1.0;
    double b1_abs_max = 1.0;
    double B_max = 1.0;
};
RegionConstants region_constants(const ProblemSpec& spec, const AssumptionReport& rep);

enum class InteriorKernel { K, KQ, PK, PKQ };
enum class BoundaryKernel { K, KQ, PKQ };

using PlaneFn = std::function<double(double x0, double y0)>;
using BoundaryFn = std::function<double(double tau, double y0)>;
using SpaceTimeDensity = std::function<double(double s, double x0, double y0)>;

// Visits every node (x0, y0, weight) of the base-point rule for kernels evaluated at (t, x, y).
// Weights include the Jacobians of the near (sheared) and far (compactified) substitutions.
template <class Visit>
void interior_nodes(const ProblemSpec& spec, const RegionConstants& rc, double t, double x,
                    double y, const QuadConfig& cfg, Visit&& visit);

// Visits (frame at (0, y0), tau, y0, weight) for boundary kernels evaluated at (tau, x, y), tau in (0, t].
template <class Visit>
void boundary_nodes(const ProblemSpec& spec, const RegionConstants& rc, double t, double x,
                    double y, const QuadConfig& cfg, Visit&& visit);

double interior_kernel(InteriorKernel k, const ProblemSpec& spec, const CorrectedFrame& fr,
                       double t, double x, double y);
double boundary_kernel(BoundaryKernel k, const ProblemSpec& spec, const CorrectedFrame& fr,
                       double t, double x, double y);

QuadResult integrate_interior(const ProblemSpec& spec, const RegionConstants& rc,
                              InteriorKernel k, const PlaneFn& g, double t, double x, double y,
                              const QuadConfig& cfg = {});
// Integral over tau in (0, t] and y0 of k_{y0}(tau, x, y) g(tau, y0).
QuadResult integrate_boundary(const ProblemSpec& spec, const RegionConstants& rc,
                              BoundaryKernel k, const BoundaryFn& g, double t, double x, double y,
                              const QuadConfig& cfg = {});
// Integral over s in (0, t) and the base plane of k(t - s, x, y) psi(s, x0, y0).
QuadResult convolve_time(const ProblemSpec& spec, const RegionConstants& rc, InteriorKernel k,
                         const SpaceTimeDensity& psi, double t, double x, double y,
                         const QuadConfig& cfg = {});

// Integral over (0, 1) of s^{-3/2} exp(-(x - s)^2 / s^3) g(s), split at x/2 and 2x.
double laplace_model_integral(double x, const std::function<double(double)>& g, int n_panel = 8);
// sqrt(pi) g(0) + integral over (0, 1) of s^{-3/2} exp(-1/s) g(s).
double laplace_model_limit(const std::function<double(double)>& g, int n_panel = 8);

// Reference adaptive integrals (Gauss-Kronrod), for tests.
// Depth caps the bisection; tails below roundoff would otherwise recurse to the limit.
double adaptive_1d(const std::function<double(double)>& f, double a, double b, double tol = 1e-10,
                   unsigned max_depth = 10);
double adaptive_2d(const std::function<double(double, double)>& f, double ax, double bx,
                   double ay, double by, double tol = 1e-8);

// ---------------------------------------------------------------------------

namespace detail {

// Composite panel breakpoints: center +- scale * 2^k clipped to [lo, hi].
std::vector<double> geometric_breaks(double lo, double hi, double center, double scale, int levels);

} // namespace detail

template <class Visit>
void interior_nodes(const ProblemSpec& spec, const RegionConstants& rc, double t, double x,
                    double y, const QuadConfig& cfg, Visit&& visit) {
    require_positive_time(t, "interior_nodes");
    const double st = std::sqrt(t);
    const double t32 = t * st;
    const double R = cfg.radius;
    const double split = 2.0 * rc.K1 * rc.horizon;

    // near region: x0 = x + b1(x,y0) t - B(x,y0) t^{3/2} u, y0 = y - sqrt(t) v.
    // (u, v) is close to the frozen (XS, YS) law, so Hermite nodes are used on both axes;
    // the weights are divided by that reference density.
    const double b2c = spec.b2.value(x, y);
    const double vc = -b2c * st;
    const GaussRule& hv = gauss_hermite(cfg.n_v);
    const GaussRule& hu = gauss_hermite(cfg.n_u);
    const GaussRule& gp = gauss_legendre(cfg.n_panel);
    const double su = 1.0 / kSqrt12;
    const double inv_sqrt2pi = 0.39894228040143267794;
    Jet j;
    for (std::size_t iv = 0; iv < hv.x.size(); ++iv) {
        const double z = hv.x[iv];
        if (std::abs(z) > R) continue;
        const double v = vc + z;
        const double y0 = y - st * v;
        spec.b1.jet(x, y0, 1, j);
        const double b1 = j(0, 0), B = j(0, 1);
        if (!(B > 0.0)) continue;
        const double wv = hv.w[iv] / (inv_sqrt2pi * std::exp(-0.5 * z * z)) * t * t * B;
        const double uc = -0.5 * v;
        // drift variation along x moves the sheared Gaussian off its reference centre
        const double drift = std::abs(j(1, 0) * b1) * st / B;
        double ulo = uc - R * su - drift, uhi = uc + R * su + drift;
        const double cut_hi = std::min((b1 * t + split) / (B * t32), (x + b1 * t) / (B * t32));
        const double cut_lo = (b1 * t - split) / (B * t32);
        auto emit = [&](double u, double w) { visit(x + b1 * t - B * t32 * u, y0, wv * w); };
        if (cut_hi >= uhi && cut_lo <= ulo && drift < 0.25 * su) {
            for (std::size_t iu = 0; iu < hu.x.size(); ++iu) {
                const double zu = hu.x[iu];
                if (std::abs(zu) > R) continue;
                emit(uc + su * zu, hu.w[iu] * su / (inv_sqrt2pi * std::exp(-0.5 * zu * zu)));
            }
            continue;
        }
        ulo = std::max(ulo, cut_lo);
        uhi = std::min(uhi, cut_hi);
        if (!(uhi > ulo)) continue;
        // clipped: composite Legendre, panels about two reference deviations wide
        const int np = std::clamp(static_cast<int>(std::ceil((uhi - ulo) / (2.0 * su))), 1, 16);
        const double pw = (uhi - ulo) / np;
        for (int p = 0; p < np; ++p) {
            const double m = ulo + (p + 0.5) * pw, h = 0.5 * pw;
            for (std::size_t iu = 0; iu < gp.x.size(); ++iu) emit(m + h * gp.x[iu], h * gp.w[iu]);
        }
    }

    // far region: u0 = x - x0 with |u0| >= split; skipped when the standardized
    // distance already exceeds the truncation radius
    const double xs_min = (split - rc.b1_abs_max * t) / (rc.B_max * t32);
    if (xs_min * std::sqrt(3.0) > R) return;
    const GaussRule& gf = gauss_legendre(cfg.n_far);
    const double vfh = 2.0 * R;
    auto far_v = [&](double x0, double wu) {
        for (std::size_t iv = 0; iv < gf.x.size(); ++iv) {
            const double v = vfh * gf.x[iv];
            visit(x0, y - st * v, wu * vfh * gf.w[iv] * st);
        }
    };
    if (x > split) {
        const double h = 0.5 * (x - split), m = 0.5 * (x + split);
        for (std::size_t iu = 0; iu < gf.x.size(); ++iu) far_v(x - (m + h * gf.x[iu]), h * gf.w[iu]);
    }
    for (std::size_t iu = 0; iu < gf.x.size(); ++iu) {
        const double s = 0.5 * (1.0 + gf.x[iu]);
        const double u0 = -split - s / (1.0 - s);
        far_v(x - u0, 0.5 * gf.w[iu] / ((1.0 - s) * (1.0 - s)));
    }
}

template <class Visit>
void boundary_nodes(const ProblemSpec& spec, const RegionConstants& rc, double t, double x,
                    double y, const QuadConfig& cfg, Visit&& visit) {
    require_positive_time(t, "boundary_nodes");
    if (x < 0.0) throw Error(Errc::NonPositiveCoordinate, "boundary integral needs x >= 0");
    if (!(rc.b_lower > 0.0)) throw Error(Errc::InvalidSpec, "boundary integral needs b_lower > 0");
    const double R = cfg.radius;
    // kernel negligible once x exceeds the reachable drift plus spread
    if (x > rc.b1_abs_max * t + R * rc.B_max * t * std::sqrt(t) + 1e-300) return;

    const GaussRule& gp = gauss_legendre(cfg.n_panel);
    Jet j;
    spec.b1.jet(0.0, y, 1, j);
    const double ratio = (j(0, 1) > 0.0) ? std::abs(j(0, 0)) / j(0, 1) : 2.0;
    const double L = R * std::sqrt(t) + 3.0 * std::min(ratio, 2.0);
    const double a = 0.5 * std::sqrt(std::max(x, 1e-4 * t));
    const std::vector<double> ybr = detail::geometric_breaks(y - L, y + L, y, a, 40);

    for (std::size_t p = 0; p + 1 < ybr.size(); ++p) {
        const double yh = 0.5 * (ybr[p + 1] - ybr[p]), ym = 0.5 * (ybr[p + 1] + ybr[p]);
        for (std::size_t iy = 0; iy < gp.x.size(); ++iy) {
            const double y0 = ym + yh * gp.x[iy];
            const double wy = yh * gp.w[iy];
            const CorrectedFrame fr(spec, 0.0, y0);
            const double b1 = fr.point().b1v, B = fr.point().Bv;
            if (!(b1 < 0.0) || !(B > 0.0))
                throw Error(Errc::InvalidSpec, "boundary kernel needs b1(0,y0) < 0 and B(0,y0) > 0");
            const double ab = -b1;
            auto panel = [&](double lo, double hi, double jac_scale, auto&& to_tau) {
                const double h = 0.5 * (hi - lo), m = 0.5 * (hi + lo);
                for (std::size_t k = 0; k < gp.x.size(); ++k) {
                    const double tau = to_tau(m + h * gp.x[k]);
                    if (tau > 0.0 && tau <= t) visit(fr, tau, y0, wy * h * gp.w[k] * jac_scale);
                }
            };
            auto ident = [](double s) { return s; };
            double r1_hi = 0.0, m_hi = 0.0;
            if (x > 0.0) {
                r1_hi = std::min(x / (2.0 * rc.K1), t);
                panel(0.0, r1_hi, 1.0, ident);
                m_hi = std::min(2.0 * x / rc.b_lower, t);
                if (m_hi > r1_hi) {
                    // r = (x - |b1| tau) / (B x^{3/2}); tau = zeta2(r)
                    const double x32 = x * std::sqrt(x);
                    const double r_lo = (x - ab * m_hi) / (B * x32);
                    const double r_hi = (x - ab * r1_hi) / (B * x32);
                    const double sig = 1.0 / (kSqrt12 * ab * std::sqrt(ab));
                    const auto rbr = detail::geometric_breaks(r_lo, r_hi, 0.0, sig, 8);
                    auto zeta2 = [&](double r) { return x / ab * (1.0 - B * std::sqrt(x) * r); };
                    for (std::size_t q = 0; q + 1 < rbr.size(); ++q)
                        panel(rbr[q], rbr[q + 1], B * x32 / ab, zeta2);
                }
            }
            const double lo3 = std::max(r1_hi, m_hi);
            if (t > lo3) {
                std::vector<double> br;
                if (lo3 > 0.0) {
                    for (double s = lo3; s < t; s *= 2.0) br.push_back(s);
                } else {
                    for (int k = 12; k >= 1; --k) br.push_back(std::ldexp(t, -k));
                    br.insert(br.begin(), 0.0);
                }
                br.push_back(t);
                for (std::size_t q = 0; q + 1 < br.size(); ++q) panel(br[q], br[q + 1], 1.0, ident);
            }
        }
    }
}

} // namespace hypokol
