#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "hypokol/problem.hpp"

namespace hypokol {

inline constexpr double kSqrt12 = 3.4641016151377545870548926830117;
inline constexpr double kPi = 3.1415926535897932384626433832795;

struct FrozenPoint {
    double x0 = 0, y0 = 0;
    double b1v = 0, b2v = 0, Bv = 1;
    // beta[i][j] = d^{i+j} b1 / (dx^i dy^j) / B at the base point
    std::array<std::array<double, 4>, 4> beta{};
    double beta_at(int i, int j) const { return beta[i][j]; }
};

// order limits the derivatives cached in beta (2 suffices for the corrector).
FrozenPoint make_frozen(const ProblemSpec& spec, double x0, double y0, int order = 3);
// Explicit coefficients; beta left zero except beta(0,1) = 1.
FrozenPoint make_frozen(double x0, double y0, double b1v, double b2v, double Bv);

struct GaussianStats {
    double t = 0;
    double mu1 = 0, mu2 = 0;
    std::array<std::array<double, 2>, 2> D{};
    std::array<std::array<double, 2>, 2> Dinv{};
    double detD = 0;
};

struct Coords {
    double xs, ys, XS, YS;
};

struct EnergyGrad {
    double dx, dy;
};

GaussianStats frozen_stats(const FrozenPoint& pt, double t);

inline Coords coords_unchecked(const FrozenPoint& pt, double t, double x, double y) {
    const double st = std::sqrt(t);
    const double xs = (x - pt.x0 + pt.b1v * t) / (pt.Bv * t * st);
    const double ys = (y - pt.y0) / st;
    return {xs, ys, xs - 0.5 * pt.b2v * st, ys + pt.b2v * st};
}

inline double energy_of(const Coords& c) {
    return 6.0 * c.XS * c.XS + 6.0 * c.XS * c.YS + 2.0 * c.YS * c.YS;
}

inline double kernel_prefactor(const FrozenPoint& pt, double t) {
    return kSqrt12 / (2.0 * kPi * std::abs(pt.Bv) * t * t);
}

Coords coords(const FrozenPoint& pt, double t, double x, double y);
double energy(const FrozenPoint& pt, double t, double x, double y);
double kernel_K(const FrozenPoint& pt, double t, double x, double y);
EnergyGrad energy_grad(const FrozenPoint& pt, double t, double x, double y);
double kernel_boundary(const ProblemSpec& spec, double y0, double t, double x, double y);
double bound_kernel_hat(const FrozenPoint& pt, double alpha, double t, double x, double y);

double majorant_interior(const ProblemSpec& spec, const AssumptionReport& rep, double x0,
                         double y0, double t, double x, double y);
double majorant_boundary(const ProblemSpec& spec, const AssumptionReport& rep, double y0,
                         double t, double x, double y);

using SpaceTimeFn = std::function<double(double t, double x, double y)>;

// Central-difference application of 1/2 d_yy + b1^L d_x + b2(pt) d_y - d_t.
double apply_PL(const FrozenPoint& pt, const SpaceTimeFn& fn, double t, double x, double y,
                double h);

// Default finite-difference step for an argument of the given magnitude.
inline double fd_default_step(double scale) { return 1e-4 * std::max(1.0, std::abs(scale)); }

} // namespace hypokol
