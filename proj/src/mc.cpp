#include "hypokol/mc.hpp"

#include <cmath>

#include "hypokol/parallel.hpp"

namespace hypokol {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInv2_32 = 2.3283064365386962890625e-10;

inline double u01(std::uint32_t a) { return (static_cast<double>(a) + 0.5) * kInv2_32; }

constexpr std::int64_t kBlock = 1024;

} // namespace

Philox4x32::Counter Philox4x32::block(Counter c, Key k) {
    for (int r = 0; r < 10; ++r) {
        if (r) {
            k[0] += kW0;
            k[1] += kW1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, c[0], hi0, lo0);
        mulhilo(kM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
}

Philox4x32::Philox4x32(std::uint64_t seed, std::uint64_t stream) {
    key_ = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    ctr_ = {0u, 0u, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
}

Philox4x32::result_type Philox4x32::operator()() {
    if (used_ == 4) {
        buf_ = block(ctr_, key_);
        if (++ctr_[0] == 0) ++ctr_[1];
        used_ = 0;
    }
    return buf_[used_++];
}

void Philox4x32::discard(unsigned long long z) {
    while (z > 0 && used_ < 4) {
        ++used_;
        --z;
    }
    const unsigned long long blocks = z / 4;
    const std::uint64_t c = (static_cast<std::uint64_t>(ctr_[1]) << 32 | ctr_[0]) + blocks;
    ctr_[0] = static_cast<std::uint32_t>(c);
    ctr_[1] = static_cast<std::uint32_t>(c >> 32);
    for (unsigned long long k = 0; k < z % 4; ++k) (*this)();
}

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t stream) : eng_(seed, stream) {}

double NormalStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double a = u01(eng_()), b = u01(eng_());
    const double r = std::sqrt(-2.0 * std::log(a));
    spare_ = r * std::sin(kTwoPi * b);
    has_spare_ = true;
    return r * std::cos(kTwoPi * b);
}

void PathConfig::validate() const {
    if (!(dt > 0.0)) throw Error(Errc::InvalidSpec, "path dt must be positive");
    if (paths < 1) throw Error(Errc::InvalidSpec, "path count must be >= 1");
}

PathSample simulate_forward(const ProblemSpec& spec, double x, double y, double horizon,
                            const PathConfig& cfg, std::uint64_t path, bool negate) {
    cfg.validate();
    PathSample s;
    s.x = x;
    s.y = y;
    if (!(horizon > 0.0)) return s;
    NormalStream rng(cfg.seed, path);
    const double sgn = negate ? -1.0 : 1.0;
    const auto nsteps = static_cast<std::int64_t>(std::ceil(horizon / cfg.dt - 1e-9));
    double logd = 0.0, src = 0.0, tnow = 0.0;
    double X = x, Y = y;
    for (std::int64_t n = 0; n < nsteps; ++n) {
        const double h = std::min(cfg.dt, horizon - tnow);
        const double dw = sgn * std::sqrt(h) * rng.next();
        const double Xn = X + spec.b1.value(X, Y) * h;
        const double Yn = Y + spec.b2.value(X, Y) * h + dw;
        double frac = 1.0;
        const bool out = Xn <= 0.0;
        if (out && cfg.mode == ExitMode::Interpolate) frac = X / (X - Xn);
        const double hh = frac * h;
        const double xm = X + 0.5 * frac * (Xn - X), ym = Y + 0.5 * frac * (Yn - Y);
        const double cm = spec.c.value(xm, ym);
        // midpoint rule for the discount and the discounted source
        src += std::exp(logd + 0.5 * cm * hh) * spec.f(horizon - (tnow + 0.5 * hh), xm, ym) * hh;
        logd += cm * hh;
        if (out) {
            s.exited = true;
            s.tau = tnow + hh;
            s.x = cfg.mode == ExitMode::Interpolate ? 0.0 : Xn;
            s.y = Y + frac * (Yn - Y);
            s.discount = std::exp(logd);
            s.source = src;
            return s;
        }
        X = Xn;
        Y = Yn;
        tnow += h;
    }
    s.tau = horizon;
    s.x = X;
    s.y = Y;
    s.discount = std::exp(logd);
    s.source = src;
    return s;
}

namespace {

double path_value(const ProblemSpec& spec, double t, const PathSample& s) {
    const double terminal = s.exited ? spec.u_side(t - s.tau, s.y) : spec.u_init(s.x, s.y);
    return s.discount * terminal + s.source;
}

} // namespace

Estimate feynman_kac_estimate(const ProblemSpec& spec, double t, double x, double y,
                              const PathConfig& cfg) {
    cfg.validate();
    require_positive_time(t, "feynman_kac_estimate");
    if (!(x > 0.0)) throw Error(Errc::OutOfDomain, "feynman_kac_estimate needs x > 0");
    const std::int64_t units = cfg.antithetic ? std::max<std::int64_t>(1, cfg.paths / 2) : cfg.paths;
    const std::int64_t nblocks = (units + kBlock - 1) / kBlock;
    std::vector<double> sum(nblocks, 0.0), sum2(nblocks, 0.0);
    parallel_for(static_cast<std::size_t>(nblocks), cfg.threads, [&](std::size_t b) {
        const std::int64_t lo = static_cast<std::int64_t>(b) * kBlock;
        const std::int64_t hi = std::min(units, lo + kBlock);
        double s1 = 0.0, s2 = 0.0;
        for (std::int64_t p = lo; p < hi; ++p) {
            const auto up = static_cast<std::uint64_t>(p);
            double v = path_value(spec, t, simulate_forward(spec, x, y, t, cfg, up, false));
            if (cfg.antithetic)
                v = 0.5 * (v + path_value(spec, t, simulate_forward(spec, x, y, t, cfg, up, true)));
            s1 += v;
            s2 += v * v;
        }
        sum[b] = s1;
        sum2[b] = s2;
    });
    double s1 = 0.0, s2 = 0.0;
    for (std::int64_t b = 0; b < nblocks; ++b) {
        s1 += sum[b];
        s2 += sum2[b];
    }
    Estimate e;
    e.n_effective = units;
    e.mean = s1 / units;
    const double var = units > 1 ? std::max(0.0, (s2 - units * e.mean * e.mean) / (units - 1)) : 0.0;
    e.std_error = std::sqrt(var / units);
    return e;
}

ExitSample kolmogorov_exit_sample(double x, double y, double horizon, const PathConfig& cfg) {
    cfg.validate();
    if (x < 0.0) throw Error(Errc::NonPositiveCoordinate, "kolmogorov_exit_sample needs x >= 0");
    const std::int64_t nblocks = (cfg.paths + kBlock - 1) / kBlock;
    std::vector<ExitSample> parts(nblocks);
    parallel_for(static_cast<std::size_t>(nblocks), cfg.threads, [&](std::size_t b) {
        const std::int64_t lo = static_cast<std::int64_t>(b) * kBlock;
        const std::int64_t hi = std::min(cfg.paths, lo + kBlock);
        for (std::int64_t p = lo; p < hi; ++p) {
            NormalStream rng(cfg.seed, static_cast<std::uint64_t>(p));
            double X = x, Y = y, tnow = 0.0;
            while (tnow < horizon) {
                const double h = std::min(cfg.dt, horizon - tnow);
                const double Xn = X + Y * h;
                if (Xn <= 0.0 && Y <= 0.0) {
                    const double frac = (cfg.mode == ExitMode::Interpolate && X > Xn) ? X / (X - Xn) : 1.0;
                    if (tnow + frac * h < horizon) {
                        parts[b].tau.push_back(tnow + frac * h);
                        parts[b].y_exit.push_back(Y);
                    }
                    break;
                }
                Y += std::sqrt(h) * rng.next();
                X = Xn;
                tnow += h;
            }
        }
    });
    ExitSample out;
    out.paths = cfg.paths;
    for (auto& p : parts) {
        out.tau.insert(out.tau.end(), p.tau.begin(), p.tau.end());
        out.y_exit.insert(out.y_exit.end(), p.y_exit.begin(), p.y_exit.end());
    }
    return out;
}

LinearSample simulate_linear_sde(double x0, double y0, double p, double q, double r, double t,
                                 const PathConfig& cfg) {
    cfg.validate();
    require_positive_time(t, "simulate_linear_sde");
    const auto nsteps = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(t / cfg.dt - 1e-9)));
    const double h = t / nsteps, sh = std::sqrt(h);
    LinearSample out;
    out.x.resize(cfg.paths);
    out.y.resize(cfg.paths);
    const std::int64_t nblocks = (cfg.paths + kBlock - 1) / kBlock;
    parallel_for(static_cast<std::size_t>(nblocks), cfg.threads, [&](std::size_t b) {
        const std::int64_t lo = static_cast<std::int64_t>(b) * kBlock;
        const std::int64_t hi = std::min(cfg.paths, lo + kBlock);
        for (std::int64_t k = lo; k < hi; ++k) {
            NormalStream rng(cfg.seed, static_cast<std::uint64_t>(k));
            double X = x0, Y = y0;
            for (std::int64_t n = 0; n < nsteps; ++n) {
                const double z1 = rng.next(), z2 = rng.next();
                const double dW = sh * z1;
                // integral of the increment over the step: variance h^3/3, covariance h^2/2
                const double I = h * sh * (0.5 * z1 + z2 / (2.0 * std::sqrt(3.0)));
                const double intY = (Y - y0) * h + 0.5 * r * h * h + I;
                X += p * h + q * intY;
                Y += r * h + dW;
            }
            out.x[k] = X;
            out.y[k] = Y;
        }
    });
    return out;
}

LinearSample simulate_linearized(const FrozenPoint& pt, double t, const PathConfig& cfg) {
    return simulate_linear_sde(pt.x0, pt.y0, -pt.b1v, -pt.Bv, -pt.b2v, t, cfg);
}

LinearSample simulate_kolmogorov(double x, double y, double t, const PathConfig& cfg) {
    return simulate_linear_sde(x, y, y, 1.0, 0.0, t, cfg);
}

SampleMoments sample_moments(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw Error(Errc::InvalidSpec, "sample_moments needs two equal samples of size >= 2");
    const double n = static_cast<double>(x.size());
    SampleMoments m;
    const std::vector<double>* v[2] = {&x, &y};
    for (int a = 0; a < 2; ++a) {
        double s = 0.0;
        for (double z : *v[a]) s += z;
        m.mean[a] = s / n;
    }
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double s = 0.0, s2 = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) {
                const double pr = ((*v[a])[k] - m.mean[a]) * ((*v[b])[k] - m.mean[b]);
                s += pr;
                s2 += pr * pr;
            }
            m.cov[a][b] = s / (n - 1.0);
            const double mp = s / n;
            m.cov_se[a][b] = std::sqrt(std::max(0.0, s2 / n - mp * mp) / n);
        }
    for (int a = 0; a < 2; ++a) m.mean_se[a] = std::sqrt(m.cov[a][a] / n);
    return m;
}

} // namespace hypokol
