#include "hypokol/corrections.hpp"

namespace hypokol {

double alpha1_of(const FrozenPoint& pt) { return pt.beta[1][0] * pt.b1v; }
double alpha2_of(const FrozenPoint& pt) { return pt.beta[0][2]; }

SPoly xi_main_exact(const Rational& alpha1, const Rational& alpha2) {
    SPoly p;
    p.add(mono(1, 0, -4), 12 * alpha1);
    p.add(mono(0, 1, -2), 6 * alpha1);
    p.add(mono(1, 2, -6), -6 * alpha2);
    p.add(mono(0, 3, -4), -3 * alpha2);
    return p;
}

SPoly xi_main(const FrozenPoint& pt) {
    return xi_main_exact(Rational(alpha1_of(pt)), Rational(alpha2_of(pt)));
}

namespace {

template <class C>
BasicPoly<C> xi_L_generic(const C& b10, const C& b20, const C& b11, const C& b02, const C& Bv,
                          const C& b1v) {
    using P = BasicPoly<C>;
    P dx(mono(1, 0, 0), Bv);
    dx.add(mono(0, 0, 2), -b1v);
    P dy(mono(0, 1, 0), C(1));
    P ex(mono(1, 0, -6), C(12));
    ex.add(mono(0, 1, -4), C(6));
    P taylor = dx * b10;
    taylor += dx.pow(2) * (b20 / C(2));
    taylor += dx * dy * b11;
    taylor += dy.pow(2) * (b02 / C(2));
    return taylor * ex * C(-1);
}

} // namespace

SPoly xi_L_exact(const Rational& beta10, const Rational& beta20, const Rational& beta11,
                 const Rational& beta02, const Rational& Bv, const Rational& b1v) {
    return xi_L_generic<Rational>(beta10, beta20, beta11, beta02, Bv, b1v);
}

DPoly xi_L(const FrozenPoint& pt) {
    return xi_L_generic<double>(pt.beta[1][0], pt.beta[2][0], pt.beta[1][1], pt.beta[0][2], pt.Bv,
                                pt.b1v);
}

double xi_full(const ProblemSpec& spec, const FrozenPoint& pt, double t, double x, double y) {
    const EnergyGrad g = energy_grad(pt, t, x, y);
    const double b1L = pt.b1v + pt.Bv * (y - pt.y0);
    return -(spec.b1.value(x, y) - b1L) * g.dx - (spec.b2.value(x, y) - pt.b2v) * g.dy +
           spec.c.value(x, y);
}

double xi_split(const ProblemSpec& spec, const FrozenPoint& pt, double t, double x, double y) {
    const EnergyGrad g = energy_grad(pt, t, x, y);
    const double lin = eval_spoly(xi_L(pt), pt, t, x, y);
    const double r3 = taylor_remainder(spec.b1, 3, pt.x0, pt.y0, x, y);
    const double r1 = taylor_remainder(spec.b2, 1, pt.x0, pt.y0, x, y);
    return lin - r3 * g.dx - r1 * g.dy + spec.c.value(x, y);
}

std::array<Rational, 6> chi_rhs(const Rational& alpha1, const Rational& alpha2) {
    const SPoly xm = xi_main_exact(alpha1, alpha2);
    std::array<Rational, 6> rhs;
    const auto& rows = corrector_rows();
    for (int i = 0; i < 6; ++i) rhs[i] = xm.coeff(rows[i]);
    return rhs;
}

namespace {

std::vector<std::vector<Rational>> matrix_rational() {
    static const IntMatrix6 m = assemble_operator_matrix();
    std::vector<std::vector<Rational>> a(6, std::vector<Rational>(6));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) a[i][j] = m[i][j];
    return a;
}

// chi is linear in alpha; columns for alpha = (1,0) and (0,1).
const std::array<std::array<double, 6>, 2>& chi_basis() {
    static const std::array<std::array<double, 6>, 2> basis = [] {
        std::array<std::array<double, 6>, 2> out{};
        for (int k = 0; k < 2; ++k) {
            auto chi = solve_chi_exact(Rational(k == 0 ? 1 : 0), Rational(k == 1 ? 1 : 0));
            for (int i = 0; i < 6; ++i) out[k][i] = static_cast<double>(chi[i]);
        }
        return out;
    }();
    return basis;
}

} // namespace

std::array<Rational, 6> solve_chi_exact(const Rational& alpha1, const Rational& alpha2) {
    const auto rhs = chi_rhs(alpha1, alpha2);
    std::vector<Rational> b(6);
    for (int i = 0; i < 6; ++i) b[i] = -rhs[i];
    const auto x = solve_linear(matrix_rational(), b);
    std::array<Rational, 6> out;
    for (int i = 0; i < 6; ++i) out[i] = x[i];
    return out;
}

ChiCoefficients solve_chi(double alpha1, double alpha2) {
    const auto& basis = chi_basis();
    ChiCoefficients c;
    c.alpha1 = alpha1;
    c.alpha2 = alpha2;
    for (int i = 0; i < 6; ++i) c.chi[i] = alpha1 * basis[0][i] + alpha2 * basis[1][i];
    return c;
}

SPoly build_Q_exact(const Rational& alpha1, const Rational& alpha2) {
    const auto chi = solve_chi_exact(alpha1, alpha2);
    SPoly q;
    const auto& cols = corrector_columns();
    for (int i = 0; i < 6; ++i) q.add(cols[i], chi[i]);
    return q;
}

SPoly projected_residual(const Rational& alpha1, const Rational& alpha2) {
    OperatorParams prm;
    prm.alpha1 = alpha1;
    prm.alpha2 = alpha2;
    const auto terms = operator_terms(prm);
    return apply_block(terms, {{0, -2}, {-2, -2}}, build_Q_exact(alpha1, alpha2)) +
           xi_main_exact(alpha1, alpha2);
}

CorrectionQ build_Q(const FrozenPoint& pt) {
    const ChiCoefficients chi = solve_chi(alpha1_of(pt), alpha2_of(pt));
    CorrectionQ q;
    q.alpha1 = chi.alpha1;
    q.alpha2 = chi.alpha2;
    const auto& cols = corrector_columns();
    for (int i = 0; i < 6; ++i) q.poly.add(cols[i], chi.chi[i]);
    return q;
}

FlatPoly flatten(const DPoly& poly) {
    FlatPoly out;
    for (const auto& [m, c] : poly.terms()) {
        if (m.p >= 8 || m.q >= 8) throw Error(Errc::OrderExceeded, "flatten supports degree < 8");
        out.push_back({m.p, m.q, degree(m).s2, c});
    }
    return out;
}

double eval_flat(const FlatPoly& poly, const EvalPoint& ep) {
    double sum = 0.0;
    for (const auto& term : poly) sum += term.c * ep.xs_pow[term.p] * ep.ys_pow[term.q] * ep.t_pow2(term.s2);
    return sum;
}

CorrectedFrame::CorrectedFrame(const ProblemSpec& spec, double x0, double y0)
    : CorrectedFrame(make_frozen(spec, x0, y0, 2)) {}

CorrectedFrame::CorrectedFrame(const FrozenPoint& pt, bool with_q) : pt_(pt), with_q_(with_q) {
    if (with_q_) chi_ = solve_chi(alpha1_of(pt_), alpha2_of(pt_)).chi;
}

CorrectionQ CorrectedFrame::correction() const {
    CorrectionQ q;
    q.alpha1 = alpha1_of(pt_);
    q.alpha2 = alpha2_of(pt_);
    if (!with_q_) return q;
    const auto& cols = corrector_columns();
    for (int i = 0; i < 6; ++i) q.poly.add(cols[i], chi_[i]);
    return q;
}

namespace {

// Every basis monomial has degree s = 1/2, so in standardized coordinates
// Q = sqrt(t) * sum chi_k xs^p ys^q and the derivatives follow by hand.
struct QParts {
    double q, qy, qyy, vx, vt;
};

QParts q_parts(const std::array<double, 6>& chi, const EvalPoint& ep) {
    const auto& cols = corrector_columns();
    double q = 0, qy = 0, qyy = 0, vx = 0, vt = 0;
    for (int k = 0; k < 6; ++k) {
        const int p = cols[k].p, qq = cols[k].q;
        const double c = chi[k];
        const double xp = ep.xs_pow[p];
        q += c * xp * ep.ys_pow[qq];
        if (qq >= 1) qy += c * qq * xp * ep.ys_pow[qq - 1];
        if (qq >= 2) qyy += c * qq * (qq - 1) * xp * ep.ys_pow[qq - 2];
        if (p >= 1) vx += c * p * ep.xs_pow[p - 1] * ep.ys_pow[qq];
        vt += c * 0.5 * cols[k].r2 * xp * ep.ys_pow[qq];
    }
    const double st = ep.sqrt_t;
    return {q * st, qy, qyy / st, vx / (st * st), vt / st};
}

} // namespace

double CorrectedFrame::Q(double t, double x, double y) const {
    if (!with_q_) return 0.0;
    const Coords c = coords(pt_, t, x, y);
    return q_parts(chi_, EvalPoint(c.xs, c.ys, t)).q;
}

double CorrectedFrame::KQ(double t, double x, double y) const {
    const Coords c = coords(pt_, t, x, y);
    const double k = kernel_prefactor(pt_, t) * std::exp(-energy_of(c));
    if (!with_q_) return k;
    const double st = std::sqrt(t);
    const auto& cols = corrector_columns();
    const double xp[4] = {1.0, c.xs, c.xs * c.xs, c.xs * c.xs * c.xs};
    const double yp[4] = {1.0, c.ys, c.ys * c.ys, c.ys * c.ys * c.ys};
    double q = 0.0;
    for (int i = 0; i < 6; ++i) q += chi_[i] * xp[cols[i].p] * yp[cols[i].q];
    return k * (1.0 + st * q);
}

std::array<double, 2> CorrectedFrame::both(const ProblemSpec& spec, double t, double x,
                                           double y) const {
    const Coords c = coords(pt_, t, x, y);
    const double k = kernel_prefactor(pt_, t) * std::exp(-energy_of(c));
    const double st = std::sqrt(t);
    const double ex = (12.0 * c.XS + 6.0 * c.YS) / (pt_.Bv * t * st);
    const double ey = (6.0 * c.XS + 4.0 * c.YS) / st;
    const double b1 = spec.b1.value(x, y);
    const double b2 = spec.b2.value(x, y);
    const double b1L = pt_.b1v + pt_.Bv * (y - pt_.y0);
    const double xi = -(b1 - b1L) * ex - (b2 - pt_.b2v) * ey + spec.c.value(x, y);
    if (!with_q_) return {k, k * xi};
    const QParts qp = q_parts(chi_, EvalPoint(c.xs, c.ys, t));
    const double pq = 0.5 * qp.qyy + (b1 - pt_.b1v) / pt_.Bv * qp.vx + (b2 - ey) * qp.qy - qp.vt +
                      xi * qp.q;
    return {k * (1.0 + qp.q), k * (pq + xi)};
}

double CorrectedFrame::PKQ(const ProblemSpec& spec, double t, double x, double y) const {
    return both(spec, t, x, y)[1];
}

double kernel_KQ(const ProblemSpec& spec, const FrozenPoint& pt, double t, double x, double y) {
    (void)spec;
    return CorrectedFrame(pt).KQ(t, x, y);
}

double kernel_KQ_boundary(const ProblemSpec& spec, double y0, double t, double x, double y) {
    require_positive_time(t, "kernel_KQ_boundary");
    const CorrectedFrame fr(spec, 0.0, y0);
    const FrozenPoint& pt = fr.point();
    if (!(pt.b1v < 0.0) || !(pt.Bv > 0.0))
        throw Error(Errc::InvalidSpec, "boundary kernel needs b1(0,y0) < 0 and B(0,y0) > 0");
    return std::abs(pt.b1v) * fr.KQ(t, x, y);
}

double apply_P_KQ(const ProblemSpec& spec, const FrozenPoint& pt, double t, double x, double y) {
    return CorrectedFrame(pt).PKQ(spec, t, x, y);
}

double apply_P_K(const ProblemSpec& spec, const FrozenPoint& pt, double t, double x, double y) {
    return CorrectedFrame(pt, false).PKQ(spec, t, x, y);
}

double apply_P_fd(const ProblemSpec& spec, const SpaceTimeFn& fn, double t, double x, double y,
                  double h) {
    if (!(h > 0.0) || !(t > h)) throw Error(Errc::StepTooLarge, "apply_P_fd needs t > h > 0");
    const double f0 = fn(t, x, y);
    const double fyp = fn(t, x, y + h), fym = fn(t, x, y - h);
    const double fyy = (fyp - 2.0 * f0 + fym) / (h * h);
    const double fx = (fn(t, x + h, y) - fn(t, x - h, y)) / (2.0 * h);
    const double fy = (fyp - fym) / (2.0 * h);
    const double ft = (fn(t + h, x, y) - fn(t - h, x, y)) / (2.0 * h);
    return 0.5 * fyy + spec.b1.value(x, y) * fx + spec.b2.value(x, y) * fy +
           spec.c.value(x, y) * f0 - ft;
}

} // namespace hypokol
