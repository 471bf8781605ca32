#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hypokol/kernels.hpp"

namespace hypokol {

using Rational = boost::multiprecision::cpp_rational;

// M^{p,q,r} with r stored doubled so half-integers stay exact.
struct MonomialIndex {
    int p = 0, q = 0, r2 = 0;
    auto operator<=>(const MonomialIndex&) const = default;
    double r() const { return 0.5 * r2; }
};

inline MonomialIndex mono(int p, int q, int r2) { return {p, q, r2}; }

// (d, s) with s stored doubled.
struct Degree {
    int d = 0, s2 = 0;
    auto operator<=>(const Degree&) const = default;
    double s() const { return 0.5 * s2; }
    Degree operator+(const Degree& o) const { return {d + o.d, s2 + o.s2}; }
    Degree operator-(const Degree& o) const { return {d - o.d, s2 - o.s2}; }
};

inline MonomialIndex mono_mul(const MonomialIndex& a, const MonomialIndex& b) {
    return {a.p + b.p, a.q + b.q, a.r2 + b.r2};
}

inline Degree degree(const MonomialIndex& m) { return {m.p + m.q, m.r2 + 3 * m.p + m.q}; }

enum class DiffOp { VT, VX, DY };

// Degree shift of each differential operator.
inline Degree diff_shift(DiffOp op) {
    switch (op) {
    case DiffOp::VT: return {0, -2};
    case DiffOp::VX: return {-1, -3};
    case DiffOp::DY: return {-1, -1};
    }
    return {};
}

template <class C>
class BasicPoly {
public:
    using Terms = std::map<MonomialIndex, C>;

    BasicPoly() = default;
    BasicPoly(const MonomialIndex& m, const C& c) { add(m, c); }

    static BasicPoly one() { return BasicPoly(MonomialIndex{}, C(1)); }

    void add(const MonomialIndex& m, const C& c) {
        if (c == C(0)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
            return;
        }
        it->second += c;
        if (it->second == C(0)) terms_.erase(it);
    }

    C coeff(const MonomialIndex& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? C(0) : it->second;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    BasicPoly& operator+=(const BasicPoly& o) {
        for (const auto& [m, c] : o.terms_) add(m, c);
        return *this;
    }
    BasicPoly& operator-=(const BasicPoly& o) {
        for (const auto& [m, c] : o.terms_) add(m, -c);
        return *this;
    }
    BasicPoly& operator*=(const C& s) {
        if (s == C(0)) {
            terms_.clear();
            return *this;
        }
        for (auto& kv : terms_) kv.second *= s;
        return *this;
    }
    friend BasicPoly operator+(BasicPoly a, const BasicPoly& b) { return a += b; }
    friend BasicPoly operator-(BasicPoly a, const BasicPoly& b) { return a -= b; }
    friend BasicPoly operator*(BasicPoly a, const C& s) { return a *= s; }
    friend BasicPoly operator*(const C& s, BasicPoly a) { return a *= s; }
    friend BasicPoly operator*(const BasicPoly& a, const BasicPoly& b) {
        BasicPoly out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add(mono_mul(ma, mb), ca * cb);
        return out;
    }
    friend bool operator==(const BasicPoly& a, const BasicPoly& b) { return a.terms_ == b.terms_; }

    BasicPoly pow(int n) const {
        BasicPoly out = one();
        for (int k = 0; k < n; ++k) out = out * *this;
        return out;
    }

    // Keep terms whose degree satisfies pred.
    template <class Pred>
    BasicPoly filter(Pred pred) const {
        BasicPoly out;
        for (const auto& [m, c] : terms_)
            if (pred(m)) out.terms_.emplace(m, c);
        return out;
    }

    // Homogeneous components keyed by degree.
    std::map<Degree, BasicPoly> components() const {
        std::map<Degree, BasicPoly> out;
        for (const auto& [m, c] : terms_) out[degree(m)].terms_.emplace(m, c);
        return out;
    }

private:
    Terms terms_;
};

using SPoly = BasicPoly<Rational>;
using DPoly = BasicPoly<double>;

DPoly to_double(const SPoly& p);

enum class Projection { Main, Error };

// Threshold filter on s: Main keeps s <= threshold, Error keeps s >= threshold.
template <class C>
BasicPoly<C> project(const BasicPoly<C>& poly, Projection which, int threshold_s2 = 1) {
    if (which == Projection::Main)
        return poly.filter([&](const MonomialIndex& m) { return degree(m).s2 <= threshold_s2; });
    return poly.filter([&](const MonomialIndex& m) { return degree(m).s2 >= threshold_s2; });
}

// Throws InvalidSpec if a generated term does not shift degree as the operator should.
template <class C>
BasicPoly<C> apply_diff(DiffOp op, const BasicPoly<C>& poly) {
    BasicPoly<C> out;
    for (const auto& [m, c] : poly.terms()) {
        MonomialIndex n = m;
        C f(0);
        switch (op) {
        case DiffOp::VT:
            if (m.r2 == 0) continue;
            n.r2 -= 2;
            f = C(m.r2) / C(2);
            break;
        case DiffOp::VX:
            if (m.p == 0) continue;
            n.p -= 1;
            f = C(m.p);
            break;
        case DiffOp::DY:
            if (m.q == 0) continue;
            n.q -= 1;
            f = C(m.q);
            break;
        }
        if (degree(n) != degree(m) + diff_shift(op))
            throw Error(Errc::InvalidSpec, "degree bookkeeping mismatch in apply_diff");
        out.add(n, c * f);
    }
    return out;
}

// Standardized-coordinate power tables for fast evaluation.
struct EvalPoint {
    std::array<double, 8> xs_pow{}, ys_pow{};
    double sqrt_t = 1.0;
    EvalPoint(double xs, double ys, double t);
    double t_pow2(int s2) const;  // t^{s2/2}
};

// Sum of c * xs^p ys^q t^{r + (3p+q)/2}, for polynomials of degree < 8 in each variable.
double eval_at(const DPoly& poly, const EvalPoint& ep);
double eval_spoly(const DPoly& poly, const FrozenPoint& pt, double t, double x, double y);
double eval_spoly(const SPoly& poly, const FrozenPoint& pt, double t, double x, double y);

// The polynomial basis used by the corrector system, in matrix order.
const std::array<MonomialIndex, 6>& corrector_columns();
const std::array<MonomialIndex, 6>& corrector_rows();

// One term c(M)·Op of the linear part of the transformed operator.
enum class OpKind { Identity, VX, DY, DYY, VT };
struct OperatorTerm {
    SPoly mult;
    OpKind kind;
    Degree shift;
    std::string label;
};

// Parameters of the linear part, exact.
struct OperatorParams {
    Rational beta10 = 0, Bv = 1, b1v = 0, b2v = 0;
    Rational alpha1 = 0, alpha2 = 0;
};

// Homogeneous pieces of the linear part of the transformed operator.
std::vector<OperatorTerm> operator_terms(const OperatorParams& prm);
SPoly apply_term(const OperatorTerm& term, const SPoly& g);
// Sum of all terms whose shift is listed.
SPoly apply_block(const std::vector<OperatorTerm>& terms, const std::vector<Degree>& shifts,
                  const SPoly& g);

using IntMatrix6 = std::array<std::array<long long, 6>, 6>;
IntMatrix6 assemble_operator_matrix();

Rational determinant(std::vector<std::vector<Rational>> a);
std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> a, std::vector<Rational> b);

std::string to_string(const Rational& q);
// Terms "c · X^p Y^q t^r" joined by " + ", sorted by degree then index.
std::string dump(const SPoly& poly);
std::string dump(const DPoly& poly);

} // namespace hypokol
