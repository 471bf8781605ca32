#include "hypokol/monomial.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace hypokol {

DPoly to_double(const SPoly& p) {
    DPoly out;
    for (const auto& [m, c] : p.terms()) out.add(m, static_cast<double>(c));
    return out;
}

EvalPoint::EvalPoint(double xs, double ys, double t) : sqrt_t(std::sqrt(t)) {
    xs_pow[0] = ys_pow[0] = 1.0;
    for (int k = 1; k < 8; ++k) {
        xs_pow[k] = xs_pow[k - 1] * xs;
        ys_pow[k] = ys_pow[k - 1] * ys;
    }
}

double EvalPoint::t_pow2(int s2) const {
    double base = s2 < 0 ? 1.0 / sqrt_t : sqrt_t;
    double out = 1.0;
    for (int k = std::abs(s2); k > 0; --k) out *= base;
    return out;
}

double eval_at(const DPoly& poly, const EvalPoint& ep) {
    double sum = 0.0;
    for (const auto& [m, c] : poly.terms()) {
        if (m.p >= 8 || m.q >= 8) throw Error(Errc::OrderExceeded, "eval_at supports degree < 8");
        sum += c * ep.xs_pow[m.p] * ep.ys_pow[m.q] * ep.t_pow2(degree(m).s2);
    }
    return sum;
}

double eval_spoly(const DPoly& poly, const FrozenPoint& pt, double t, double x, double y) {
    const Coords c = coords(pt, t, x, y);
    return eval_at(poly, EvalPoint(c.xs, c.ys, t));
}

double eval_spoly(const SPoly& poly, const FrozenPoint& pt, double t, double x, double y) {
    return eval_spoly(to_double(poly), pt, t, x, y);
}

const std::array<MonomialIndex, 6>& corrector_columns() {
    static const std::array<MonomialIndex, 6> cols = {
        mono(0, 1, 0), mono(1, 0, -2), mono(0, 3, -2),
        mono(1, 2, -4), mono(2, 1, -6), mono(3, 0, -8)};
    return cols;
}

const std::array<MonomialIndex, 6>& corrector_rows() {
    static const std::array<MonomialIndex, 6> rows = {
        mono(0, 1, -2), mono(1, 0, -4), mono(0, 3, -4),
        mono(1, 2, -6), mono(2, 1, -8), mono(3, 0, -10)};
    return rows;
}

namespace {

Degree op_shift(OpKind k) {
    switch (k) {
    case OpKind::Identity: return {0, 0};
    case OpKind::VX: return diff_shift(DiffOp::VX);
    case OpKind::DY: return diff_shift(DiffOp::DY);
    case OpKind::DYY: return {-2, -2};
    case OpKind::VT: return diff_shift(DiffOp::VT);
    }
    return {};
}

void push_split(std::vector<OperatorTerm>& out, const SPoly& mult, OpKind kind,
                const std::string& label) {
    for (auto& [deg, piece] : mult.components())
        out.push_back({piece, kind, deg + op_shift(kind), label});
}

} // namespace

std::vector<OperatorTerm> operator_terms(const OperatorParams& prm) {
    std::vector<OperatorTerm> out;
    push_split(out, SPoly(mono(0, 0, 0), Rational(1, 2)), OpKind::DYY, "1/2 DY^2");

    SPoly drift(mono(0, 1, 0), 1);
    drift.add(mono(1, 0, 0), prm.beta10 * prm.Bv);
    drift.add(mono(0, 0, 2), -prm.beta10 * prm.b1v);
    push_split(out, drift, OpKind::VX, "(b1 lin - b1v)/B VX");

    SPoly ey;
    ey.add(mono(1, 0, -4), -6);
    ey.add(mono(0, 1, -2), -4);
    ey.add(mono(0, 0, 1), -prm.b2v);
    push_split(out, ey, OpKind::DY, "-dE/dy DY");

    push_split(out, SPoly(mono(0, 0, 0), -1), OpKind::VT, "-VT");

    SPoly xi;
    xi.add(mono(1, 0, -4), 12 * prm.alpha1);
    xi.add(mono(0, 1, -2), 6 * prm.alpha1);
    xi.add(mono(1, 2, -6), -6 * prm.alpha2);
    xi.add(mono(0, 3, -4), -3 * prm.alpha2);
    push_split(out, xi, OpKind::Identity, "main Xi");
    return out;
}

SPoly apply_term(const OperatorTerm& term, const SPoly& g) {
    SPoly dg;
    switch (term.kind) {
    case OpKind::Identity: dg = g; break;
    case OpKind::VX: dg = apply_diff(DiffOp::VX, g); break;
    case OpKind::DY: dg = apply_diff(DiffOp::DY, g); break;
    case OpKind::DYY: dg = apply_diff(DiffOp::DY, apply_diff(DiffOp::DY, g)); break;
    case OpKind::VT: dg = apply_diff(DiffOp::VT, g); break;
    }
    SPoly out = term.mult * dg;
    for (const auto& [m, c] : out.terms()) {
        (void)c;
        bool ok = false;
        for (const auto& [mg, cg] : g.terms()) {
            (void)cg;
            if (degree(mg) + term.shift == degree(m)) ok = true;
        }
        if (!ok) throw Error(Errc::InvalidSpec, "degree bookkeeping mismatch in " + term.label);
    }
    return out;
}

SPoly apply_block(const std::vector<OperatorTerm>& terms, const std::vector<Degree>& shifts,
                  const SPoly& g) {
    SPoly out;
    for (const auto& term : terms)
        if (std::find(shifts.begin(), shifts.end(), term.shift) != shifts.end())
            out += apply_term(term, g);
    return out;
}

IntMatrix6 assemble_operator_matrix() {
    const auto terms = operator_terms(OperatorParams{});
    const std::vector<Degree> block = {{0, -2}, {-2, -2}};
    const auto& cols = corrector_columns();
    const auto& rows = corrector_rows();
    IntMatrix6 m{};
    for (int j = 0; j < 6; ++j) {
        SPoly img = apply_block(terms, block, SPoly(cols[j], 1));
        for (int i = 0; i < 6; ++i) {
            Rational c = img.coeff(rows[i]);
            if (denominator(c) != 1) throw Error(Errc::InvalidSpec, "non-integer matrix entry");
            m[i][j] = static_cast<long long>(numerator(c));
            img.add(rows[i], -c);
        }
        if (!img.is_zero())
            throw Error(Errc::InvalidSpec, "operator image leaves the row basis: " + dump(img));
    }
    return m;
}

Rational determinant(std::vector<std::vector<Rational>> a) {
    const std::size_t n = a.size();
    Rational det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a[piv][k] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != k) {
            std::swap(a[piv], a[k]);
            det = -det;
        }
        det *= a[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a[i][k] == 0) continue;
            Rational f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    return det;
}

std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a[piv][k] == 0) ++piv;
        if (piv == n) throw Error(Errc::InvalidSpec, "singular system");
        std::swap(a[piv], a[k]);
        std::swap(b[piv], b[k]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a[i][k] == 0) continue;
            Rational f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
    return b;
}

std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1) os << "/" << denominator(q);
    return os.str();
}

namespace {

std::string r_text(int r2) {
    if (r2 % 2 == 0) return std::to_string(r2 / 2);
    return std::to_string(r2) + "/2";
}

template <class C, class Fmt>
std::string dump_impl(const BasicPoly<C>& poly, Fmt fmt) {
    if (poly.is_zero()) return "0";
    std::vector<std::pair<MonomialIndex, C>> v(poly.terms().begin(), poly.terms().end());
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        const Degree da = degree(a.first), db = degree(b.first);
        if (da != db) return da < db;
        return a.first < b.first;
    });
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const auto& m = v[k].first;
        if (k) out += " + ";
        out += fmt(v[k].second) + " · X^" + std::to_string(m.p) + " Y^" + std::to_string(m.q) +
               " t^" + r_text(m.r2);
    }
    return out;
}

} // namespace

std::string dump(const SPoly& poly) {
    return dump_impl(poly, [](const Rational& c) { return to_string(c); });
}

std::string dump(const DPoly& poly) {
    return dump_impl(poly, [](double c) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", c);
        return std::string(buf);
    });
}

} // namespace hypokol
