#include "hypokol/kernels.hpp"

#include <algorithm>

namespace hypokol {

FrozenPoint make_frozen(const ProblemSpec& spec, double x0, double y0, int order) {
    FrozenPoint pt;
    pt.x0 = x0;
    pt.y0 = y0;
    Jet j1;
    spec.b1.jet(x0, y0, std::clamp(order, 1, 3), j1);
    pt.b1v = j1(0, 0);
    pt.Bv = j1(0, 1);
    pt.b2v = spec.b2.value(x0, y0);
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; i + j <= 3; ++j) pt.beta[i][j] = j1(i, j) / pt.Bv;
    pt.beta[0][1] = 1.0;
    return pt;
}

FrozenPoint make_frozen(double x0, double y0, double b1v, double b2v, double Bv) {
    FrozenPoint pt;
    pt.x0 = x0;
    pt.y0 = y0;
    pt.b1v = b1v;
    pt.b2v = b2v;
    pt.Bv = Bv;
    pt.beta[0][0] = b1v / Bv;
    pt.beta[0][1] = 1.0;
    return pt;
}

GaussianStats frozen_stats(const FrozenPoint& pt, double t) {
    require_positive_time(t, "frozen_stats");
    GaussianStats g;
    const double B = pt.Bv;
    g.t = t;
    g.mu1 = pt.x0 - pt.b1v * t + 0.5 * B * pt.b2v * t * t;
    g.mu2 = pt.y0 - pt.b2v * t;
    g.D = {{{B * B * t * t * t / 3.0, -B * t * t / 2.0}, {-B * t * t / 2.0, t}}};
    g.detD = t * t * t * t * B * B / 12.0;
    g.Dinv = {{{12.0 / (B * B * t * t * t), 6.0 / (B * t * t)}, {6.0 / (B * t * t), 4.0 / t}}};
    return g;
}

Coords coords(const FrozenPoint& pt, double t, double x, double y) {
    require_positive_time(t, "coords");
    return coords_unchecked(pt, t, x, y);
}

double energy(const FrozenPoint& pt, double t, double x, double y) {
    return energy_of(coords(pt, t, x, y));
}

double kernel_K(const FrozenPoint& pt, double t, double x, double y) {
    return kernel_prefactor(pt, t) * std::exp(-energy(pt, t, x, y));
}

EnergyGrad energy_grad(const FrozenPoint& pt, double t, double x, double y) {
    const Coords c = coords(pt, t, x, y);
    const double st = std::sqrt(t);
    return {(12.0 * c.XS + 6.0 * c.YS) / (pt.Bv * t * st), (6.0 * c.XS + 4.0 * c.YS) / st};
}

double kernel_boundary(const ProblemSpec& spec, double y0, double t, double x, double y) {
    require_positive_time(t, "kernel_boundary");
    const FrozenPoint pt = make_frozen(spec, 0.0, y0, 1);
    if (!(pt.b1v < 0.0) || !(pt.Bv > 0.0))
        throw Error(Errc::InvalidSpec, "kernel_boundary needs b1(0,y0) < 0 and B(0,y0) > 0");
    return std::abs(pt.b1v) * kernel_K(pt, t, x, y);
}

double bound_kernel_hat(const FrozenPoint& pt, double alpha, double t, double x, double y) {
    require_positive_time(t, "bound_kernel_hat");
    if (!(alpha > 0.0)) throw Error(Errc::InvalidSpec, "bound kernel exponent must be positive");
    const Coords c = coords_unchecked(pt, t, x, y);
    return std::exp(-alpha * c.xs * c.xs - alpha * c.ys * c.ys) / (std::abs(pt.Bv) * t * t);
}

double majorant_interior(const ProblemSpec& spec, const AssumptionReport& rep, double x0,
                         double y0, double t, double x, double y) {
    require_positive_time(t, "majorant_interior");
    const double K1 = rep.coeff_bound, K3 = rep.hypo_ratio, T = spec.horizon;
    const double yfac = std::exp(-(y - y0) * (y - y0) / (12.0 * t)) / std::sqrt(t);
    const double dx = x - x0;
    if (std::abs(dx) >= 2.0 * K1 * T) return t * std::sqrt(t) / (dx * dx + 1.0) * yfac;
    const double K2 = 48.0 * std::exp(4.0 * K1 * K3 * T);
    Jet j;
    spec.b1.jet(x, y0, 1, j);
    const double B = j(0, 1);
    const double u = (dx + j(0, 0) * t) / (B * t * std::sqrt(t));
    return std::exp(-u * u / K2) / (B * t * std::sqrt(t)) * yfac;
}

double majorant_boundary(const ProblemSpec& spec, const AssumptionReport& rep, double y0,
                         double t, double x, double y) {
    require_positive_time(t, "majorant_boundary");
    if (!(rep.b_lower > 0.0)) throw Error(Errc::InvalidSpec, "majorant_boundary needs b_lower > 0");
    if (x < 0.0) throw Error(Errc::NonPositiveCoordinate, "majorant_boundary needs x >= 0");
    const double K1 = rep.coeff_bound, bl = rep.b_lower;
    const double dy2 = (y - y0) * (y - y0);
    if (t <= x / (2.0 * K1) || t >= 2.0 * x / bl) return std::exp(-dy2 / (12.0 * t)) / std::sqrt(t);
    Jet j;
    spec.b1.jet(0.0, y0, 1, j);
    const double b1 = j(0, 0), B = j(0, 1);
    const double x32 = x * std::sqrt(x);
    const double z = x + b1 * t;
    return std::abs(b1) / (B * x32) * std::exp(-bl * bl * bl / 96.0 * z * z / (B * B * x * x * x)) /
           std::sqrt(x) * std::exp(-bl / 24.0 * dy2 / x);
}

double apply_PL(const FrozenPoint& pt, const SpaceTimeFn& fn, double t, double x, double y,
                double h) {
    if (!(h > 0.0) || !(t > h)) throw Error(Errc::StepTooLarge, "apply_PL needs t > h > 0");
    const double f0 = fn(t, x, y);
    const double fyy = (fn(t, x, y + h) - 2.0 * f0 + fn(t, x, y - h)) / (h * h);
    const double fx = (fn(t, x + h, y) - fn(t, x - h, y)) / (2.0 * h);
    const double fy = (fn(t, x, y + h) - fn(t, x, y - h)) / (2.0 * h);
    const double ft = (fn(t + h, x, y) - fn(t - h, x, y)) / (2.0 * h);
    const double b1L = pt.b1v + pt.Bv * (y - pt.y0);
    return 0.5 * fyy + b1L * fx + pt.b2v * fy - ft;
}

} // namespace hypokol
