#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hypokol/error.hpp"

namespace hypokol {

// Partial derivatives d[i][j] = d^{i+j} g / dx^i dy^j, filled for i+j <= order.
struct Jet {
    std::array<std::array<double, 4>, 4> d{};
    double operator()(int i, int j) const { return d[i][j]; }
};

class CoefficientField {
public:
    using JetFn = std::function<void(double x, double y, int order, Jet& out)>;
    using ValueFn = std::function<double(double x, double y)>;

    CoefficientField() = default;
    CoefficientField(std::string name, int max_order, JetFn fn, bool analytic = true);

    // Value-only field; derivatives come from central differences.
    static CoefficientField from_values(std::string name, int max_order, ValueFn fn);

    double value(double x, double y) const;
    double deriv(int i, int j, double x, double y) const;
    void jet(double x, double y, int order, Jet& out) const;

    int max_order() const { return max_order_; }
    bool analytic() const { return analytic_; }
    const std::string& name() const { return name_; }

private:
    std::string name_ = "zero";
    int max_order_ = 0;
    bool analytic_ = true;
    JetFn fn_;
};

namespace fields {
CoefficientField constant(double v, int max_order);
CoefficientField linear(double a0, double ax, double ay, int max_order);
// shift + scale * tanh(y)
CoefficientField tanh_drift(double shift = -2.0, double scale = 1.0);
// -2 + tanh(y) + delta * bump((x-cx)/r) * bump((y-cy)/r)
CoefficientField tanh_perturbed(double delta, double cx, double cy, double radius);
// shift + Phi(y), Phi the standard normal cdf
CoefficientField gaussian_cdf(double shift = -2.0);
// Catmull-Rom bicubic through tabulated values, values[iy][ix].
CoefficientField tabulated(std::vector<double> xs, std::vector<double> ys,
                           std::vector<std::vector<double>> values, int max_order);
} // namespace fields

struct ProblemSpec {
    std::string name = "problem";
    CoefficientField b1;
    CoefficientField b2;
    CoefficientField c;
    std::function<double(double t, double x, double y)> f;
    std::function<double(double x, double y)> u_init;
    std::function<double(double t, double y)> u_side;
    double horizon = 1.0;
    // true when f, u_init, u_side are all identically zero (known by construction)
    bool zero_data = false;
};

// Valid-by-construction constructor; validates orders and horizon.
ProblemSpec make_spec(std::string name, CoefficientField b1, CoefficientField b2,
                      CoefficientField c,
                      std::function<double(double, double, double)> f,
                      std::function<double(double, double)> u_init,
                      std::function<double(double, double)> u_side, double horizon);

struct SamplingGrid {
    double x_lo = 0.0, x_hi = 10.0;
    int nx = 101;
    double y_lo = -10.0, y_hi = 10.0;
    int ny = 101;
    double x_at(int i) const { return nx == 1 ? x_lo : x_lo + (x_hi - x_lo) * i / (nx - 1); }
    double y_at(int j) const { return ny == 1 ? y_lo : y_lo + (y_hi - y_lo) * j / (ny - 1); }
    std::string describe() const;
};

struct AssumptionReport {
    double coeff_bound = 0.0;  // sup of checked derivatives of b1, b2, c
    double b_lower = 0.0;      // inf over y of -b1(0, y)
    double hypo_ratio = 0.0;   // sup |d^{i+j} b1| / B, i+j <= 3
    double B_max = 0.0;
    double B_min = 0.0;
    double b1_abs_max = 0.0;
    double b2_abs_max = 0.0;
    bool pass_boundedness = false;
    bool pass_basics = false;
    bool pass_hypobound = false;
    bool pass_sandwich = false;
    int sandwich_pairs = 0;
    int sandwich_violations = 0;
    SamplingGrid grid;
    std::vector<std::string> notes;

    bool all_pass() const {
        return pass_boundedness && pass_basics && pass_hypobound && pass_sandwich;
    }
    std::string describe() const;
};

double eval_coeff(const CoefficientField& field, int i, int j, double x, double y);
double hypo_B(const ProblemSpec& spec, double x, double y);
double beta(const ProblemSpec& spec, int i, int j, double x, double y);
AssumptionReport validate_assumptions(const ProblemSpec& spec, const SamplingGrid& grid = {});

// g(eval) minus the degree-(d-1) Taylor polynomial of g about base.
double taylor_remainder(const CoefficientField& field, int d, double bx, double by,
                        double ex, double ey);

// Throws InvalidSpec unless the report passes the basics check.
void require_basics(const AssumptionReport& rep, const char* where);

} // namespace hypokol
