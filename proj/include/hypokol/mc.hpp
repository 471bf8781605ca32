#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "hypokol/kernels.hpp"

namespace hypokol {

// Philox4x32-10 counter-based generator.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;
    using result_type = std::uint32_t;

    static Counter block(Counter ctr, Key key);

    Philox4x32(std::uint64_t seed = 0, std::uint64_t stream = 0);
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();
    void discard(unsigned long long z);

private:
    Key key_{};
    Counter ctr_{};
    Counter buf_{};
    int used_ = 4;
};

// Standard normals from one Philox substream, Box-Muller on pairs of 32-bit uniforms.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream);
    double next();

private:
    Philox4x32 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

enum class ExitMode { Endpoint, Interpolate };

struct PathConfig {
    double dt = 1e-3;
    std::int64_t paths = 10000;
    std::uint64_t seed = 1;
    ExitMode mode = ExitMode::Interpolate;
    bool antithetic = false;
    int threads = 0;
    void validate() const;
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample std / sqrt(n_effective)
    std::int64_t n_effective = 0;
};

struct PathSample {
    bool exited = false;
    double tau = 0.0;       // exit time, or the horizon
    double x = 0.0, y = 0.0;  // exit or terminal state
    double discount = 1.0;  // exp of the integrated c up to tau
    double source = 0.0;    // integrated discounted f
};

// Euler path of dX = b1 dt, dY = b2 dt + dW from (x, y), stopped at X <= 0.
// The source uses f(horizon - s, X_s, Y_s), matching the backward time of the PDE.
PathSample simulate_forward(const ProblemSpec& spec, double x, double y, double horizon,
                            const PathConfig& cfg, std::uint64_t path, bool negate = false);

Estimate feynman_kac_estimate(const ProblemSpec& spec, double t, double x, double y,
                              const PathConfig& cfg);

// Exit law of dX = Y dt, dY = dW started at (x, y): exit times below the horizon and the
// velocity Y at the crossing step.
struct ExitSample {
    std::vector<double> tau, y_exit;
    std::int64_t paths = 0;
};
ExitSample kolmogorov_exit_sample(double x, double y, double horizon, const PathConfig& cfg);

// Terminal states of dX = (p + q (Y - y0)) dt, dY = r dt + dW from (x0, y0), stepped exactly
// with the Gaussian pair (W increment, integral of W).
struct LinearSample {
    std::vector<double> x, y;
};
LinearSample simulate_linear_sde(double x0, double y0, double p, double q, double r, double t,
                                 const PathConfig& cfg);
// The frozen process whose transition density is K at pt (drift reversed, adjoint direction).
LinearSample simulate_linearized(const FrozenPoint& pt, double t, const PathConfig& cfg);
// dX = Y dt, dY = dW without a boundary.
LinearSample simulate_kolmogorov(double x, double y, double t, const PathConfig& cfg);

struct SampleMoments {
    std::array<double, 2> mean{};
    std::array<std::array<double, 2>, 2> cov{};
    std::array<double, 2> mean_se{};
    std::array<std::array<double, 2>, 2> cov_se{};
};
SampleMoments sample_moments(const std::vector<double>& x, const std::vector<double>& y);

} // namespace hypokol
