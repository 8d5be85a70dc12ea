#pragma once

// Coupled Stuart-Landau network dynamics:
//
//   dz_j/dt = (mu + i w_j) z_j - |z_j|^2 z_j + c * sum_k a_jk (z_k - z_j)
//
// Trajectories are always integrated in complex (Cartesian) coordinates;
// the polar view (r_j, theta_j) is a derived diagnostic and is undefined
// where r_j vanishes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "slnet/graph.hpp"

namespace slnet {

using State = std::vector<std::complex<double>>;

// below this amplitude a phase is reported as undefined rather than noise
constexpr double kPhaseFloor = 1e-8;

struct SystemParams {
    double mu = 0.0;
    std::vector<double> omega;  // one natural frequency per node
    double c = 0.0;             // coupling strength, >= 0
    NetworkTopology topology;

    int n() const { return topology.n_nodes; }

    bool identical_frequencies() const {
        for (double w : omega)
            if (w != omega.front()) return false;
        return true;
    }

    void validate() const {
        if (c < 0.0) throw std::invalid_argument("params: coupling c must be >= 0");
        if (static_cast<int>(omega.size()) != topology.n_nodes)
            throw std::invalid_argument("params: omega list length must equal node count");
    }
};

struct DivergenceError : std::runtime_error {
    double time;
    explicit DivergenceError(double t)
        : std::runtime_error("non-finite state encountered at t = " + std::to_string(t)), time(t) {}
};

struct PhaseUndefinedError : std::runtime_error {
    int node;  // 1-based in the message and here
    double time;
    PhaseUndefinedError(int node_1based, double t)
        : std::runtime_error("phase undefined: amplitude of node " + std::to_string(node_1based) +
                             " below floor at t = " + std::to_string(t)),
          node(node_1based),
          time(t) {}
};

inline State rhs_complex(const State& z, const SystemParams& p) {
    p.validate();
    const int n = p.n();
    if (static_cast<int>(z.size()) != n) throw std::invalid_argument("rhs_complex: state size mismatch");
    State dz(n);
    for (int j = 0; j < n; ++j) {
        std::complex<double> coupling = 0.0;
        for (int k = 0; k < n; ++k)
            if (p.topology.adjacency(j, k) != 0.0) coupling += z[k] - z[j];
        dz[j] = std::complex<double>(p.mu, p.omega[j]) * z[j] - std::norm(z[j]) * z[j] + p.c * coupling;
    }
    return dz;
}

struct PolarRates {
    std::vector<double> dr;
    std::vector<double> dtheta;
};

/// Polar form of the vector field. Requires every r_j > 0; the polar
/// representation is undefined otherwise.
inline PolarRates rhs_polar(const std::vector<double>& r, const std::vector<double>& theta, const SystemParams& p) {
    p.validate();
    const int n = p.n();
    if (static_cast<int>(r.size()) != n || static_cast<int>(theta.size()) != n)
        throw std::invalid_argument("rhs_polar: state size mismatch");
    for (int j = 0; j < n; ++j)
        if (!(r[j] > 0.0)) throw std::domain_error("rhs_polar: r_" + std::to_string(j + 1) + " must be positive");
    PolarRates out;
    out.dr.resize(n);
    out.dtheta.resize(n);
    for (int j = 0; j < n; ++j) {
        double cr = 0.0, ct = 0.0;
        for (int k = 0; k < n; ++k) {
            if (p.topology.adjacency(j, k) == 0.0) continue;
            cr += r[k] * std::cos(theta[k] - theta[j]) - r[j];
            ct += (r[k] / r[j]) * std::sin(theta[k] - theta[j]);
        }
        out.dr[j] = (p.mu - r[j] * r[j]) * r[j] + p.c * cr;
        out.dtheta[j] = p.omega[j] + p.c * ct;
    }
    return out;
}

struct Rk4 {
    double dt = 1e-3;
};

struct Rkf45 {
    double atol = 1e-9;
    double rtol = 1e-9;
    // step-size controller: new_h = h * clamp(0.9 * err^(-1/5), 0.2, 5),
    // h itself clamped to [h_min, h_max]
    double h_min = 1e-8;
    double h_max = 0.1;
};

using Scheme = std::variant<Rk4, Rkf45>;

struct Trajectory {
    std::vector<double> times;  // strictly increasing, uniform spacing
    std::vector<State> states;
    SystemParams params;

    size_t size() const { return times.size(); }

    std::vector<std::vector<double>> amplitudes() const {
        std::vector<std::vector<double>> r(states.size(), std::vector<double>(params.n()));
        for (size_t i = 0; i < states.size(); ++i)
            for (int j = 0; j < params.n(); ++j) r[i][j] = std::abs(states[i][j]);
        return r;
    }

    /// Continuous per-node phase series theta_j(t) with e^{i theta} = z/|z|.
    /// Each increment is taken as the principal angle of z_{i+1}/z_i, so the
    /// caller must sample densely enough that the true increment stays
    /// below pi in magnitude. Throws PhaseUndefinedError if any amplitude
    /// drops below phase_floor, and on an ambiguous half-turn increment.
    std::vector<std::vector<double>> unwrapped_phases(double phase_floor = kPhaseFloor) const {
        const int n = params.n();
        std::vector<std::vector<double>> theta(states.size(), std::vector<double>(n));
        constexpr double pi = 3.14159265358979323846;
        for (int j = 0; j < n; ++j) {
            for (size_t i = 0; i < states.size(); ++i)
                if (std::abs(states[i][j]) <= phase_floor) throw PhaseUndefinedError(j + 1, times[i]);
            theta[0][j] = std::arg(states[0][j]);
            for (size_t i = 1; i < states.size(); ++i) {
                const double step = std::arg(states[i][j] * std::conj(states[i - 1][j]));
                if (std::abs(step) >= pi * (1.0 - 1e-12))
                    throw PhaseUndefinedError(j + 1, times[i]);  // half-turn between samples: unwrapping ambiguous
                theta[i][j] = theta[i - 1][j] + step;
            }
        }
        return theta;
    }
};

/// Free-function form of Trajectory::unwrapped_phases.
inline std::vector<std::vector<double>> unwrap_phases(const Trajectory& traj, double phase_floor = kPhaseFloor) {
    return traj.unwrapped_phases(phase_floor);
}

namespace detail {

class Stepper {
  public:
    Stepper(const SystemParams& p) : p_(p), n_(p.n()), neighbors_(p.n()) {
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k)
                if (p.topology.adjacency(j, k) != 0.0) neighbors_[j].push_back(k);
    }

    void rhs(const State& z, State& dz) const {
        for (int j = 0; j < n_; ++j) {
            std::complex<double> coupling = 0.0;
            for (int k : neighbors_[j]) coupling += z[k] - z[j];
            dz[j] = std::complex<double>(p_.mu, p_.omega[j]) * z[j] - std::norm(z[j]) * z[j] + p_.c * coupling;
        }
    }

    int n() const { return n_; }

  private:
    const SystemParams& p_;
    int n_;
    std::vector<std::vector<int>> neighbors_;
};

inline bool finite(const State& z) {
    for (const auto& v : z)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

// One classical RK4 step of size h, in place. k1..k4/tmp are scratch.
inline void rk4_step(const Stepper& st, State& y, double h, State& k1, State& k2, State& k3, State& k4, State& tmp) {
    const int n = st.n();
    st.rhs(y, k1);
    for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    st.rhs(tmp, k2);
    for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    st.rhs(tmp, k3);
    for (int i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    st.rhs(tmp, k4);
    for (int i = 0; i < n; ++i) y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

// Fehlberg 4(5) pair; advances with the 5th-order solution.
class Rkf45Stepper {
  public:
    Rkf45Stepper(const Stepper& st, const Rkf45& cfg) : st_(st), cfg_(cfg), h_(cfg.h_max) {
        const int n = st.n();
        for (State* s : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &tmp_, &y5_}) s->resize(n);
    }

    // integrate y over [0, span], landing exactly on the endpoint
    void advance(State& y, double span) {
        double t = 0.0;
        while (t < span) {
            double h = std::min(h_, span - t);
            h = std::max(h, cfg_.h_min);
            if (t + h > span) h = span - t;
            const double err = attempt(y, h);
            if (err <= 1.0 || h <= cfg_.h_min * (1.0 + 1e-12)) {
                y = y5_;
                t += h;
                const double factor = err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
                h_ = std::clamp(h * factor, cfg_.h_min, cfg_.h_max);
            } else {
                h_ = std::clamp(h * std::clamp(0.9 * std::pow(err, -0.25), 0.1, 1.0), cfg_.h_min, cfg_.h_max);
            }
        }
    }

  private:
    // returns scaled error norm of the proposed step; candidate in y5_
    double attempt(const State& y, double h) {
        const int n = st_.n();
        st_.rhs(y, k1_);
        for (int i = 0; i < n; ++i) tmp_[i] = y[i] + h * (k1_[i] / 4.0);
        st_.rhs(tmp_, k2_);
        for (int i = 0; i < n; ++i) tmp_[i] = y[i] + h * (3.0 / 32.0 * k1_[i] + 9.0 / 32.0 * k2_[i]);
        st_.rhs(tmp_, k3_);
        for (int i = 0; i < n; ++i)
            tmp_[i] = y[i] + h * (1932.0 / 2197.0 * k1_[i] - 7200.0 / 2197.0 * k2_[i] + 7296.0 / 2197.0 * k3_[i]);
        st_.rhs(tmp_, k4_);
        for (int i = 0; i < n; ++i)
            tmp_[i] = y[i] + h * (439.0 / 216.0 * k1_[i] - 8.0 * k2_[i] + 3680.0 / 513.0 * k3_[i] - 845.0 / 4104.0 * k4_[i]);
        st_.rhs(tmp_, k5_);
        for (int i = 0; i < n; ++i)
            tmp_[i] = y[i] + h * (-8.0 / 27.0 * k1_[i] + 2.0 * k2_[i] - 3544.0 / 2565.0 * k3_[i] +
                                  1859.0 / 4104.0 * k4_[i] - 11.0 / 40.0 * k5_[i]);
        st_.rhs(tmp_, k6_);
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            y5_[i] = y[i] + h * (16.0 / 135.0 * k1_[i] + 6656.0 / 12825.0 * k3_[i] + 28561.0 / 56430.0 * k4_[i] -
                                 9.0 / 50.0 * k5_[i] + 2.0 / 55.0 * k6_[i]);
            const std::complex<double> e = h * (1.0 / 360.0 * k1_[i] - 128.0 / 4275.0 * k3_[i] -
                                                2197.0 / 75240.0 * k4_[i] + 1.0 / 50.0 * k5_[i] + 2.0 / 55.0 * k6_[i]);
            const double scale = cfg_.atol + cfg_.rtol * std::max(std::abs(y[i]), std::abs(y5_[i]));
            err = std::max(err, std::abs(e) / scale);
        }
        return err;
    }

    const Stepper& st_;
    Rkf45 cfg_;
    double h_;
    State k1_, k2_, k3_, k4_, k5_, k6_, tmp_, y5_;
};

}  // namespace detail

/// Integrate from z0 to t_end, recording the state every sample_every time
/// units (t_i = i * sample_every exactly). RK4 uses the largest step that
/// divides the sample interval and does not exceed the requested dt.
inline Trajectory integrate(const State& z0, const SystemParams& p, double t_end, const Scheme& scheme = Rk4{},
                            double sample_every = 0.01) {
    p.validate();
    if (static_cast<int>(z0.size()) != p.n()) throw std::invalid_argument("integrate: state size mismatch");
    if (!(t_end > 0.0)) throw std::invalid_argument("integrate: t_end must be positive");
    if (!(sample_every > 0.0)) throw std::invalid_argument("integrate: sample_every must be positive");

    const double n_samples_d = std::floor(t_end / sample_every + 1e-9);
    if (!(n_samples_d >= 0.0) || n_samples_d > 2e8)
        throw std::invalid_argument("integrate: sample count out of range (check t_end / sample_every)");
    const long long n_samples = static_cast<long long>(n_samples_d);
    Trajectory traj;
    traj.params = p;
    traj.times.reserve(n_samples + 1);
    traj.states.reserve(n_samples + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(z0);

    detail::Stepper st(p);
    State y = z0;

    if (std::holds_alternative<Rk4>(scheme)) {
        const double dt_req = std::get<Rk4>(scheme).dt;
        if (!(dt_req > 0.0)) throw std::invalid_argument("integrate: RK4 dt must be positive");
        if (sample_every / dt_req > 1e12) throw std::invalid_argument("integrate: dt too small for the sample interval");
        const long long steps_per_sample = std::max(1LL, static_cast<long long>(std::ceil(sample_every / dt_req - 1e-9)));
        const double h = sample_every / static_cast<double>(steps_per_sample);
        State k1(p.n()), k2(p.n()), k3(p.n()), k4(p.n()), tmp(p.n());
        for (long long i = 1; i <= n_samples; ++i) {
            for (long long s = 0; s < steps_per_sample; ++s) {
                detail::rk4_step(st, y, h, k1, k2, k3, k4, tmp);
                if (!detail::finite(y)) throw DivergenceError((i - 1) * sample_every + (s + 1) * h);
            }
            traj.times.push_back(i * sample_every);
            traj.states.push_back(y);
        }
    } else {
        const Rkf45& cfg = std::get<Rkf45>(scheme);
        if (!(cfg.atol > 0.0) || !(cfg.rtol > 0.0)) throw std::invalid_argument("integrate: RKF45 tolerances must be positive");
        detail::Rkf45Stepper adaptive(st, cfg);
        for (long long i = 1; i <= n_samples; ++i) {
            adaptive.advance(y, sample_every);
            if (!detail::finite(y)) throw DivergenceError(i * sample_every);
            traj.times.push_back(i * sample_every);
            traj.states.push_back(y);
        }
    }
    return traj;
}

// ---------------------------------------------------------------------------
// Initial conditions and the PRNG they draw from.
//
// SplitMix64: state advances by the golden-ratio increment, output is the
// standard finalizer (Steele, Lea, Flood 2014). Fixed here so seeded runs
// are bit-reproducible across platforms.

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1) with 53 random bits
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }
};

inline State state_from_polar(const std::vector<double>& r, const std::vector<double>& theta) {
    if (r.size() != theta.size()) throw std::invalid_argument("state_from_polar: size mismatch");
    State z(r.size());
    for (size_t j = 0; j < r.size(); ++j) z[j] = std::polar(r[j], theta[j]);
    return z;
}

/// Radii given per node, phases drawn uniformly from (theta_min, theta_max)
/// with a seeded SplitMix64 stream (one draw per node, in node order).
inline State seeded_polar_state(const std::vector<double>& r, double theta_min, double theta_max, std::uint64_t seed) {
    if (!(theta_max > theta_min)) throw std::invalid_argument("seeded_polar_state: need theta_min < theta_max");
    SplitMix64 rng(seed);
    std::vector<double> theta(r.size());
    for (auto& t : theta) t = rng.uniform(theta_min, theta_max);
    return state_from_polar(r, theta);
}

inline State seeded_polar_state(int n, double r, double theta_min, double theta_max, std::uint64_t seed) {
    return seeded_polar_state(std::vector<double>(n, r), theta_min, theta_max, seed);
}

// ---------------------------------------------------------------------------
// CSV export, full double precision (17 significant digits).

namespace detail {
inline void write_g17(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}
}  // namespace detail

/// Header "t,x_1,y_1,...,x_N,y_N"; with polar_channels also
/// "r_1..r_N,theta_1..theta_N" where theta is the unwrapped phase series
/// (throws PhaseUndefinedError if any amplitude is below the floor).
inline void write_trajectory_csv(const Trajectory& traj, std::ostream& os, bool polar_channels = false) {
    const int n = traj.params.n();
    os << "t";
    for (int j = 1; j <= n; ++j) os << ",x_" << j << ",y_" << j;
    if (polar_channels) {
        for (int j = 1; j <= n; ++j) os << ",r_" << j;
        for (int j = 1; j <= n; ++j) os << ",theta_" << j;
    }
    os << "\n";
    std::vector<std::vector<double>> theta;
    if (polar_channels) theta = traj.unwrapped_phases();
    for (size_t i = 0; i < traj.size(); ++i) {
        detail::write_g17(os, traj.times[i]);
        for (int j = 0; j < n; ++j) {
            os << ',';
            detail::write_g17(os, traj.states[i][j].real());
            os << ',';
            detail::write_g17(os, traj.states[i][j].imag());
        }
        if (polar_channels) {
            for (int j = 0; j < n; ++j) {
                os << ',';
                detail::write_g17(os, std::abs(traj.states[i][j]));
            }
            for (int j = 0; j < n; ++j) {
                os << ',';
                detail::write_g17(os, theta[i][j]);
            }
        }
        os << "\n";
    }
}

}  // namespace slnet
