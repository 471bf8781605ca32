#pragma once

#include <array>
#include <vector>

#include "hypokol/kernels.hpp"
#include "hypokol/monomial.hpp"

namespace hypokol {

struct ChiCoefficients {
    // order: (0,1,0), (1,0,-1), (0,3,-1), (1,2,-2), (2,1,-3), (3,0,-4)
    std::array<double, 6> chi{};
    double alpha1 = 0, alpha2 = 0;
};

struct CorrectionQ {
    DPoly poly;
    double alpha1 = 0, alpha2 = 0;
};

// alpha1 = beta(1,0)*b1, alpha2 = beta(0,2) at the base point.
double alpha1_of(const FrozenPoint& pt);
double alpha2_of(const FrozenPoint& pt);

SPoly xi_main_exact(const Rational& alpha1, const Rational& alpha2);
SPoly xi_main(const FrozenPoint& pt);

// Linear part of Xi from the second-order Taylor polynomial of b1.
SPoly xi_L_exact(const Rational& beta10, const Rational& beta20, const Rational& beta11,
                 const Rational& beta02, const Rational& Bv, const Rational& b1v);
DPoly xi_L(const FrozenPoint& pt);

double xi_full(const ProblemSpec& spec, const FrozenPoint& pt, double t, double x, double y);
// Same quantity as Xi^L + Xi^NL, evaluated through the split.
double xi_split(const ProblemSpec& spec, const FrozenPoint& pt, double t, double x, double y);

// Coefficient vector of xi_main in the row basis.
std::array<Rational, 6> chi_rhs(const Rational& alpha1, const Rational& alpha2);
std::array<Rational, 6> solve_chi_exact(const Rational& alpha1, const Rational& alpha2);
ChiCoefficients solve_chi(double alpha1, double alpha2);

SPoly build_Q_exact(const Rational& alpha1, const Rational& alpha2);
// Main-degree block of the linearized operator applied to Q, plus the main part of Xi.
// Identically zero when chi solves the corrector system.
SPoly projected_residual(const Rational& alpha1, const Rational& alpha2);
CorrectionQ build_Q(const FrozenPoint& pt);

struct FlatTerm {
    int p, q, s2;
    double c;
};
using FlatPoly = std::vector<FlatTerm>;
FlatPoly flatten(const DPoly& poly);
double eval_flat(const FlatPoly& poly, const EvalPoint& ep);

// Frozen point plus cached corrector and its derivatives.
class CorrectedFrame {
public:
    CorrectedFrame() = default;
    CorrectedFrame(const ProblemSpec& spec, double x0, double y0);
    CorrectedFrame(const FrozenPoint& pt, bool with_q = true);

    const FrozenPoint& point() const { return pt_; }
    const std::array<double, 6>& chi() const { return chi_; }
    bool corrected() const { return with_q_; }
    CorrectionQ correction() const;

    double Q(double t, double x, double y) const;
    double KQ(double t, double x, double y) const;
    // K * (breve P Q + Xi), closed form.
    double PKQ(const ProblemSpec& spec, double t, double x, double y) const;
    // Both at once; returns {KQ, PKQ}.
    std::array<double, 2> both(const ProblemSpec& spec, double t, double x, double y) const;

private:
    FrozenPoint pt_;
    std::array<double, 6> chi_{};
    bool with_q_ = false;
};

double kernel_KQ(const ProblemSpec& spec, const FrozenPoint& pt, double t, double x, double y);
double kernel_KQ_boundary(const ProblemSpec& spec, double y0, double t, double x, double y);
double apply_P_KQ(const ProblemSpec& spec, const FrozenPoint& pt, double t, double x, double y);
// Uncorrected residual K * Xi.
double apply_P_K(const ProblemSpec& spec, const FrozenPoint& pt, double t, double x, double y);

// Finite-difference application of the full operator to a space-time function (test oracle).
double apply_P_fd(const ProblemSpec& spec, const SpaceTimeFn& fn, double t, double x, double y,
                  double h);

} // namespace hypokol
