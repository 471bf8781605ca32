#include "hypokol/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hypokol {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::OrderExceeded: return "order-exceeded";
    case Errc::NonPositiveTime: return "nonpositive-time";
    case Errc::InvalidSpec: return "invalid-spec";
    case Errc::StepTooLarge: return "step-too-large";
    case Errc::GridMismatch: return "grid-mismatch";
    case Errc::NonConvergence: return "non-convergence";
    case Errc::OutOfDomain: return "out-of-domain";
    case Errc::MarginViolation: return "margin-violation";
    case Errc::NonPositiveCoordinate: return "nonpositive-coordinate";
    case Errc::RuleUndersized: return "rule-undersized";
    case Errc::Parse: return "parse-error";
    }
    return "error";
}

CoefficientField::CoefficientField(std::string name, int max_order, JetFn fn, bool analytic)
    : name_(std::move(name)), max_order_(max_order), analytic_(analytic), fn_(std::move(fn)) {
    if (max_order_ < 0 || max_order_ > 3)
        throw Error(Errc::OrderExceeded, "max_order must lie in [0, 3]");
}

namespace {

// Central-difference stencils for the k-th derivative, k <= 3.
// Step grows with order to keep roundoff below truncation error.
double fd_step(int order) { return 1e-5 * std::pow(10.0, std::max(0, order - 1)); }

template <class F>
double fd_axis(int k, double h, F&& f) {
    switch (k) {
    case 0: return f(0.0);
    case 1: return (f(h) - f(-h)) / (2 * h);
    case 2: return (f(h) - 2 * f(0.0) + f(-h)) / (h * h);
    default: return (f(2 * h) - 2 * f(h) + 2 * f(-h) - f(-2 * h)) / (2 * h * h * h);
    }
}

} // namespace

CoefficientField CoefficientField::from_values(std::string name, int max_order, ValueFn fn) {
    auto jetfn = [fn](double x, double y, int order, Jet& out) {
        for (int i = 0; i <= order; ++i)
            for (int j = 0; i + j <= order; ++j) {
                if (i + j == 0) {
                    out.d[0][0] = fn(x, y);
                    continue;
                }
                const double h = fd_step(i + j);
                out.d[i][j] = fd_axis(i, h, [&](double dx) {
                    return fd_axis(j, h, [&](double dy) { return fn(x + dx, y + dy); });
                });
            }
    };
    return CoefficientField(std::move(name), max_order, jetfn, false);
}

double CoefficientField::value(double x, double y) const {
    Jet j;
    fn_(x, y, 0, j);
    return j.d[0][0];
}

double CoefficientField::deriv(int i, int j, double x, double y) const {
    if (i < 0 || j < 0 || i + j > max_order_)
        throw Error(Errc::OrderExceeded, "derivative (" + std::to_string(i) + "," +
                                             std::to_string(j) + ") of " + name_);
    Jet out;
    fn_(x, y, i + j, out);
    return out.d[i][j];
}

void CoefficientField::jet(double x, double y, int order, Jet& out) const {
    if (order > max_order_) throw Error(Errc::OrderExceeded, "jet order of " + name_);
    fn_(x, y, order, out);
}

namespace fields {

CoefficientField constant(double v, int max_order) {
    return CoefficientField("constant", max_order, [v](double, double, int, Jet& out) {
        out = Jet{};
        out.d[0][0] = v;
    });
}

CoefficientField linear(double a0, double ax, double ay, int max_order) {
    return CoefficientField("linear", max_order, [=](double x, double y, int, Jet& out) {
        out = Jet{};
        out.d[0][0] = a0 + ax * x + ay * y;
        out.d[1][0] = ax;
        out.d[0][1] = ay;
    });
}

CoefficientField tanh_drift(double shift, double scale) {
    return CoefficientField("tanh", 3, [=](double, double y, int order, Jet& out) {
        out = Jet{};
        const double T = std::tanh(y);
        out.d[0][0] = shift + scale * T;
        if (order < 1) return;
        const double S = 1.0 / (std::cosh(y) * std::cosh(y));
        out.d[0][1] = scale * S;
        out.d[0][2] = scale * (-2.0 * T * S);
        out.d[0][3] = scale * (-2.0 * S * S + 4.0 * T * T * S);
    });
}

namespace {

// bump(s) = exp(-1/(1-s^2)) on |s|<1 and its first three derivatives
std::array<double, 4> bump_derivs(double s) {
    std::array<double, 4> r{};
    if (std::abs(s) >= 1.0) return r;
    const double w = 1.0 - s * s;
    const double phi = std::exp(-1.0 / w);
    if (phi == 0.0) return r;
    const double g1 = -2.0 * s / (w * w);
    const double g2 = -2.0 / (w * w) - 8.0 * s * s / (w * w * w);
    const double g3 = -24.0 * s / (w * w * w) - 48.0 * s * s * s / (w * w * w * w);
    r[0] = phi;
    r[1] = g1 * phi;
    r[2] = (g2 + g1 * g1) * phi;
    r[3] = (g3 + 3.0 * g1 * g2 + g1 * g1 * g1) * phi;
    return r;
}

} // namespace

CoefficientField tanh_perturbed(double delta, double cx, double cy, double radius) {
    auto base = tanh_drift(-2.0, 1.0);
    return CoefficientField("tanh_pert", 3, [=](double x, double y, int order, Jet& out) {
        base.jet(x, y, order, out);
        const auto bx = bump_derivs((x - cx) / radius);
        const auto by = bump_derivs((y - cy) / radius);
        double rp[4] = {1.0, 1.0 / radius, 1.0 / (radius * radius),
                        1.0 / (radius * radius * radius)};
        for (int i = 0; i <= order; ++i)
            for (int j = 0; i + j <= order; ++j)
                out.d[i][j] += delta * bx[i] * by[j] * rp[i + j];
    });
}

CoefficientField gaussian_cdf(double shift) {
    return CoefficientField("gaussian_cdf", 3, [=](double, double y, int order, Jet& out) {
        out = Jet{};
        out.d[0][0] = shift + 0.5 * std::erfc(-y / std::sqrt(2.0));
        if (order < 1) return;
        const double phi = std::exp(-0.5 * y * y) / std::sqrt(2.0 * M_PI);
        out.d[0][1] = phi;
        out.d[0][2] = -y * phi;
        out.d[0][3] = (y * y - 1.0) * phi;
    });
}

namespace {

struct Table {
    std::vector<double> xs, ys;
    std::vector<std::vector<double>> v;  // v[iy][ix]

    static double hermite1d(const std::vector<double>& g, const std::vector<double>& f, double x) {
        const int n = static_cast<int>(g.size());
        if (n == 1) return f[0];
        if (x <= g.front()) return f.front();
        if (x >= g.back()) return f.back();
        int i = static_cast<int>(std::upper_bound(g.begin(), g.end(), x) - g.begin()) - 1;
        i = std::clamp(i, 0, n - 2);
        auto slope = [&](int k) {
            const int a = std::max(k - 1, 0), b = std::min(k + 1, n - 1);
            return (f[b] - f[a]) / (g[b] - g[a]);
        };
        const double h = g[i + 1] - g[i];
        const double s = (x - g[i]) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
        return h00 * f[i] + h10 * h * slope(i) + h01 * f[i + 1] + h11 * h * slope(i + 1);
    }

    double operator()(double x, double y) const {
        std::vector<double> col(ys.size());
        for (size_t j = 0; j < ys.size(); ++j) col[j] = hermite1d(xs, v[j], x);
        return hermite1d(ys, col, y);
    }
};

} // namespace

CoefficientField tabulated(std::vector<double> xs, std::vector<double> ys,
                           std::vector<std::vector<double>> values, int max_order) {
    if (xs.empty() || ys.empty() || values.size() != ys.size())
        throw Error(Errc::InvalidSpec, "tabulated field shape");
    for (const auto& row : values)
        if (row.size() != xs.size()) throw Error(Errc::InvalidSpec, "tabulated field row length");
    if (!std::is_sorted(xs.begin(), xs.end()) || !std::is_sorted(ys.begin(), ys.end()))
        throw Error(Errc::InvalidSpec, "tabulated axes must be increasing");
    auto tab = std::make_shared<Table>(Table{std::move(xs), std::move(ys), std::move(values)});
    return CoefficientField::from_values("tabulated", max_order,
                                         [tab](double x, double y) { return (*tab)(x, y); });
}

} // namespace fields

ProblemSpec make_spec(std::string name, CoefficientField b1, CoefficientField b2,
                      CoefficientField c, std::function<double(double, double, double)> f,
                      std::function<double(double, double)> u_init,
                      std::function<double(double, double)> u_side, double horizon) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw Error(Errc::InvalidSpec, "horizon must be finite and positive");
    if (b1.max_order() < 3) throw Error(Errc::InvalidSpec, "b1 needs derivatives to order 3");
    if (b2.max_order() < 1) throw Error(Errc::InvalidSpec, "b2 needs derivatives to order 1");
    ProblemSpec s;
    s.name = std::move(name);
    s.b1 = std::move(b1);
    s.b2 = std::move(b2);
    s.c = std::move(c);
    s.f = std::move(f);
    s.u_init = std::move(u_init);
    s.u_side = std::move(u_side);
    s.horizon = horizon;
    return s;
}

double eval_coeff(const CoefficientField& field, int i, int j, double x, double y) {
    return field.deriv(i, j, x, y);
}

double hypo_B(const ProblemSpec& spec, double x, double y) { return spec.b1.deriv(0, 1, x, y); }

double beta(const ProblemSpec& spec, int i, int j, double x, double y) {
    if (i == 0 && j == 1) return 1.0;
    Jet jt;
    spec.b1.jet(x, y, std::max(1, i + j), jt);
    return jt(i, j) / jt(0, 1);
}

std::string SamplingGrid::describe() const {
    std::ostringstream os;
    os << nx << "x" << ny << " on [" << x_lo << "," << x_hi << "]x[" << y_lo << "," << y_hi
       << "]";
    return os.str();
}

std::string AssumptionReport::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "grid " << grid.describe() << "\n"
       << "coeff_bound " << coeff_bound << "\n"
       << "b_lower " << b_lower << "\n"
       << "hypo_ratio " << hypo_ratio << "\n"
       << "B_range " << B_min << " " << B_max << "\n"
       << "boundedness " << (pass_boundedness ? "pass" : "fail") << "\n"
       << "basics " << (pass_basics ? "pass" : "fail") << "\n"
       << "hypobound " << (pass_hypobound ? "pass" : "fail") << "\n"
       << "sandwich " << (pass_sandwich ? "pass" : "fail") << " (" << sandwich_violations
       << "/" << sandwich_pairs << " violations)\n";
    for (const auto& n : notes) os << "note " << n << "\n";
    return os.str();
}

namespace {

// Suprema over the full grid exceeding this multiple of the inner-half suprema are
// treated as unbounded growth.
constexpr double kGrowthFactor = 1.5;

bool grows(double full, double inner) { return full > kGrowthFactor * inner + 1e-12; }

} // namespace

AssumptionReport validate_assumptions(const ProblemSpec& spec, const SamplingGrid& grid) {
    AssumptionReport rep;
    rep.grid = grid;
    const double inf = std::numeric_limits<double>::infinity();
    const double x_inner = grid.x_lo + 0.5 * (grid.x_hi - grid.x_lo);
    const double y_mid = 0.5 * (grid.y_lo + grid.y_hi);
    const double y_q = 0.25 * (grid.y_hi - grid.y_lo);

    double bound_full = 0, bound_inner = 0, ratio_full = 0, ratio_inner = 0;
    double B_min = inf, B_max = 0;
    bool finite = true;
    std::vector<double> Bgrid(static_cast<size_t>(grid.nx) * grid.ny);

    for (int i = 0; i < grid.nx; ++i) {
        const double x = grid.x_at(i);
        for (int j = 0; j < grid.ny; ++j) {
            const double y = grid.y_at(j);
            const bool inner = x <= x_inner + 1e-12 && std::abs(y - y_mid) <= y_q + 1e-12;
            Jet jb1, jb2;
            spec.b1.jet(x, y, 3, jb1);
            spec.b2.jet(x, y, 1, jb2);
            const double cv = spec.c.value(x, y);
            double m = std::abs(cv);
            for (int a = 0; a <= 3; ++a)
                for (int b = 0; a + b <= 3; ++b) m = std::max(m, std::abs(jb1(a, b)));
            for (int a = 0; a <= 1; ++a)
                for (int b = 0; a + b <= 1; ++b) m = std::max(m, std::abs(jb2(a, b)));
            if (!std::isfinite(m)) finite = false;
            bound_full = std::max(bound_full, m);
            if (inner) bound_inner = std::max(bound_inner, m);
            rep.b1_abs_max = std::max(rep.b1_abs_max, std::abs(jb1(0, 0)));
            rep.b2_abs_max = std::max(rep.b2_abs_max, std::abs(jb2(0, 0)));

            const double B = jb1(0, 1);
            Bgrid[static_cast<size_t>(i) * grid.ny + j] = B;
            B_min = std::min(B_min, B);
            B_max = std::max(B_max, B);
            double r = 0;
            if (B > 0) {
                for (int a = 0; a <= 3; ++a)
                    for (int b = 0; a + b <= 3; ++b)
                        if (a + b >= 1) r = std::max(r, std::abs(jb1(a, b)) / B);
            } else {
                r = inf;
            }
            ratio_full = std::max(ratio_full, r);
            if (inner) ratio_inner = std::max(ratio_inner, r);
        }
    }

    double b_lower = inf;
    for (int j = 0; j < grid.ny; ++j) b_lower = std::min(b_lower, -spec.b1.value(0.0, grid.y_at(j)));

    rep.coeff_bound = bound_full;
    rep.hypo_ratio = ratio_full;
    rep.B_min = B_min;
    rep.B_max = B_max;
    rep.b_lower = b_lower;
    rep.pass_boundedness = finite && !grows(bound_full, bound_inner);
    if (!rep.pass_boundedness) rep.notes.push_back("coefficient suprema grow across the grid");
    rep.pass_basics = b_lower > 0 && B_min > 0;
    if (!(b_lower > 0)) rep.notes.push_back("b1(0,y) is not uniformly negative");
    if (!(B_min > 0)) rep.notes.push_back("B = db1/dy is not positive everywhere");
    rep.pass_hypobound = std::isfinite(ratio_full) && !grows(ratio_full, ratio_inner);
    if (!rep.pass_hypobound) rep.notes.push_back("derivative-to-B ratio grows across the grid");

    // log-sandwich spot check on neighbouring and skewed pairs
    const int offs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {2, 3}};
    const double K3 = rep.hypo_ratio;
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j)
            for (const auto& o : offs) {
                const int i2 = i + o[0], j2 = j + o[1];
                if (i2 >= grid.nx || j2 >= grid.ny) continue;
                const double Bb = Bgrid[static_cast<size_t>(i) * grid.ny + j];
                const double Be = Bgrid[static_cast<size_t>(i2) * grid.ny + j2];
                ++rep.sandwich_pairs;
                if (!(Bb > 0 && Be > 0)) {
                    ++rep.sandwich_violations;
                    continue;
                }
                const double rho = std::abs(grid.x_at(i2) - grid.x_at(i)) +
                                   std::abs(grid.y_at(j2) - grid.y_at(j));
                if (std::abs(std::log(Be / Bb)) > K3 * rho * (1 + 1e-9) + 1e-14)
                    ++rep.sandwich_violations;
            }
    rep.pass_sandwich = std::isfinite(K3) && rep.sandwich_violations == 0;
    return rep;
}

double taylor_remainder(const CoefficientField& field, int d, double bx, double by, double ex,
                        double ey) {
    if (d < 1 || d > field.max_order())
        throw Error(Errc::OrderExceeded, "taylor_remainder degree " + std::to_string(d));
    Jet jb;
    field.jet(bx, by, d - 1, jb);
    const double dx = ex - bx, dy = ey - by;
    static const double fact[4] = {1, 1, 2, 6};
    double poly = 0;
    for (int i = 0; i <= d - 1; ++i)
        for (int j = 0; i + j <= d - 1; ++j)
            poly += jb(i, j) / (fact[i] * fact[j]) * std::pow(dx, i) * std::pow(dy, j);
    return field.value(ex, ey) - poly;
}

void require_basics(const AssumptionReport& rep, const char* where) {
    if (!rep.pass_basics)
        throw Error(Errc::InvalidSpec, std::string(where) + " requires b1(0,y) < 0 and B > 0");
}

} // namespace hypokol
