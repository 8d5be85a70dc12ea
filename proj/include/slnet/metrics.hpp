#pragma once

// Synchronization diagnostics: amplitude/phase spreads, rate spreads from
// the exact vector field (not finite differences), exponential-rate fits,
// and the cumulative energy functional
//
//   H(t) = int_0^t sum_j ( r_j'^2 + (r_j theta_j')^2 ) ds
//
// together with its balance decomposition.

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "slnet/dynamics.hpp"

namespace slnet {

/// Distance on the circle: min over integers m of |alpha - beta + 2 pi m|,
/// always in [0, pi].
inline double circular_distance(double alpha, double beta) {
    return std::abs(std::remainder(alpha - beta, 2.0 * 3.14159265358979323846));
}

struct RateFit {
    bool established = false;  // requires R^2 > 0.99 over >= 50 points
    double rate = 0.0;         // slope of log(spread) vs t (negative when decaying)
    double r_squared = 0.0;
    int points = 0;
};

struct SyncReport {
    double final_amplitude_spread = 0.0;   // max_{j,k} |r_j - r_k| at the last sample
    double final_phase_spread = 0.0;       // max pairwise circular distance at the last sample
    double final_rate_spread_r = 0.0;      // max_{j,k} |r_j' - r_k'| at the last sample
    double final_rate_spread_theta = 0.0;  // max_{j,k} |theta_j' - theta_k'|
    double common_phase_estimate = 0.0;    // circular mean of final phases, in [0, 2pi)
    double amplitude_target_error = 0.0;   // max_j |r_j - sqrt(mu)| at the last sample (target 0 if mu <= 0)
    bool phase_metrics_defined = true;     // false if amplitudes fell below the phase floor
    RateFit exp_rate;                      // fitted decay exponent of the phase spread
};

namespace detail {

inline double max_pairwise_circular(const State& z) {
    double spread = 0.0;
    for (size_t j = 0; j < z.size(); ++j)
        for (size_t k = j + 1; k < z.size(); ++k)
            spread = std::max(spread, circular_distance(std::arg(z[j]), std::arg(z[k])));
    return spread;
}

inline bool above_floor(const State& z, double floor) {
    for (const auto& v : z)
        if (std::abs(v) <= floor) return false;
    return true;
}

// ordinary least squares y = a + b x; returns {b, R^2}
inline std::pair<double, double> ols(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double sx = 0, sy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return {0.0, 0.0};
    const double b = sxy / sxx;
    const double r2 = (sxy * sxy) / (sxx * syy);
    return {b, r2};
}

}  // namespace detail

/// Evaluate the synchronization diagnostics of a trajectory. Spreads and
/// rate spreads are taken at the final sample; the exponential rate is
/// fitted to log(phase spread) over the samples where the spread lies in
/// [1e-10, 1e-2]. Rates come from the polar vector field evaluated at the
/// sampled states. The tail window (last tail_fraction of the samples)
/// must contain at least 100 samples.
inline SyncReport sync_report(const Trajectory& traj, double tail_fraction = 0.2) {
    const size_t n_samples = traj.size();
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw std::invalid_argument("sync_report: bad tail fraction");
    if (static_cast<size_t>(n_samples * tail_fraction) < 100)
        throw std::invalid_argument("sync_report: tail window shorter than 100 samples");
    const int n = traj.params.n();

    SyncReport rep;
    const State& zf = traj.states.back();

    std::vector<double> rf(n);
    for (int j = 0; j < n; ++j) rf[j] = std::abs(zf[j]);
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) rep.final_amplitude_spread = std::max(rep.final_amplitude_spread, std::abs(rf[j] - rf[k]));

    const double target = traj.params.mu > 0.0 ? std::sqrt(traj.params.mu) : 0.0;
    for (int j = 0; j < n; ++j) rep.amplitude_target_error = std::max(rep.amplitude_target_error, std::abs(rf[j] - target));

    rep.phase_metrics_defined = detail::above_floor(zf, kPhaseFloor);
    if (rep.phase_metrics_defined) {
        rep.final_phase_spread = detail::max_pairwise_circular(zf);
        std::vector<double> thetaf(n);
        double ssin = 0.0, scos = 0.0;
        for (int j = 0; j < n; ++j) {
            thetaf[j] = std::arg(zf[j]);
            ssin += std::sin(thetaf[j]);
            scos += std::cos(thetaf[j]);
        }
        constexpr double two_pi = 2.0 * 3.14159265358979323846;
        double mean = std::atan2(ssin, scos);
        if (mean < 0.0) mean += two_pi;
        rep.common_phase_estimate = mean < two_pi ? mean : 0.0;

        const PolarRates rates = rhs_polar(rf, thetaf, traj.params);
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                rep.final_rate_spread_r = std::max(rep.final_rate_spread_r, std::abs(rates.dr[j] - rates.dr[k]));
                rep.final_rate_spread_theta =
                    std::max(rep.final_rate_spread_theta, std::abs(rates.dtheta[j] - rates.dtheta[k]));
            }
    } else {
        rep.final_phase_spread = std::numeric_limits<double>::quiet_NaN();
        rep.final_rate_spread_r = std::numeric_limits<double>::quiet_NaN();
        rep.final_rate_spread_theta = std::numeric_limits<double>::quiet_NaN();
        rep.common_phase_estimate = std::numeric_limits<double>::quiet_NaN();
    }

    // exponential rate of the phase-spread decay
    std::vector<double> ts, logs;
    for (size_t i = 0; i < n_samples; ++i) {
        if (!detail::above_floor(traj.states[i], kPhaseFloor)) continue;
        const double spread = detail::max_pairwise_circular(traj.states[i]);
        if (spread >= 1e-10 && spread <= 1e-2) {
            ts.push_back(traj.times[i]);
            logs.push_back(std::log(spread));
        }
    }
    rep.exp_rate.points = static_cast<int>(ts.size());
    if (ts.size() >= 2) {
        const auto [slope, r2] = detail::ols(ts, logs);
        rep.exp_rate.rate = slope;
        rep.exp_rate.r_squared = r2;
        rep.exp_rate.established = ts.size() >= 50 && r2 > 0.99;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Energy functional

struct EnergyRecord {
    double t = 0.0;
    double H = 0.0;                 // cumulative integral of sum_j (r'^2 + (r theta')^2)
    double term_I_integral = 0.0;   // cumulative integral of sum_j ((mu - r^2) r - c d_j r) r'
    double term_II_integral = 0.0;  // (c/2) [Phi(t) - Phi(0)], Phi = sum_jk a_jk r_j r_k cos(theta_k - theta_j)
    double balance_residual = 0.0;  // |H - I - II|
};

/// Evaluate H(t), the two balance terms, and the residual at every sample.
/// Requires natural frequencies identically zero; a trajectory generated
/// with identical nonzero frequencies may be evaluated in the co-rotating
/// frame by passing corotating_frame = true (rates are then computed with
/// the common frequency removed, which leaves r and all phase differences
/// unchanged). Cumulative integrals use composite Simpson on even sample
/// pairs with a trapezoid closing odd intervals.
inline std::vector<EnergyRecord> energy_functional(const Trajectory& traj, bool corotating_frame = false) {
    SystemParams p = traj.params;
    const int n = p.n();
    bool zero_omega = true;
    for (double w : p.omega) zero_omega = zero_omega && w == 0.0;
    if (!zero_omega) {
        if (!corotating_frame)
            throw std::invalid_argument("energy_functional: nonzero natural frequencies; set corotating_frame");
        if (!p.identical_frequencies())
            throw std::invalid_argument("energy_functional: co-rotating frame requires identical frequencies");
        p.omega.assign(n, 0.0);
    }

    const size_t m = traj.size();
    std::vector<double> f_H(m), f_I(m), phi(m);
    for (size_t i = 0; i < m; ++i) {
        std::vector<double> r(n), theta(n);
        for (int j = 0; j < n; ++j) {
            r[j] = std::abs(traj.states[i][j]);
            if (r[j] <= kPhaseFloor) throw PhaseUndefinedError(j + 1, traj.times[i]);
            theta[j] = std::arg(traj.states[i][j]);
        }
        const PolarRates rates = rhs_polar(r, theta, p);
        double h = 0.0, gi = 0.0, ph = 0.0;
        for (int j = 0; j < n; ++j) {
            h += rates.dr[j] * rates.dr[j] + (r[j] * rates.dtheta[j]) * (r[j] * rates.dtheta[j]);
            gi += ((p.mu - r[j] * r[j]) * r[j] - p.c * p.topology.degrees[j] * r[j]) * rates.dr[j];
            for (int k = 0; k < n; ++k)
                if (p.topology.adjacency(j, k) != 0.0) ph += r[j] * r[k] * std::cos(theta[k] - theta[j]);
        }
        f_H[i] = h;
        f_I[i] = gi;
        phi[i] = ph;
    }

    std::vector<EnergyRecord> out(m);
    double acc_H = 0.0, acc_I = 0.0;
    double acc_H_even = 0.0, acc_I_even = 0.0;  // value at the last even index
    for (size_t i = 0; i < m; ++i) {
        const double t = traj.times[i];
        if (i == 0) {
            acc_H = acc_I = 0.0;
        } else if (i % 2 == 0) {
            const double h2 = (traj.times[i] - traj.times[i - 2]) / 2.0;
            acc_H_even += h2 / 3.0 * (f_H[i - 2] + 4.0 * f_H[i - 1] + f_H[i]);
            acc_I_even += h2 / 3.0 * (f_I[i - 2] + 4.0 * f_I[i - 1] + f_I[i]);
            acc_H = acc_H_even;
            acc_I = acc_I_even;
        } else {
            const double h = traj.times[i] - traj.times[i - 1];
            acc_H = acc_H_even + h / 2.0 * (f_H[i - 1] + f_H[i]);
            acc_I = acc_I_even + h / 2.0 * (f_I[i - 1] + f_I[i]);
        }
        out[i].t = t;
        out[i].H = acc_H;
        out[i].term_I_integral = acc_I;
        out[i].term_II_integral = p.c / 2.0 * (phi[i] - phi[0]);
        out[i].balance_residual = std::abs(out[i].H - out[i].term_I_integral - out[i].term_II_integral);
    }
    return out;
}

inline double state_norm_R(const State& z) {
    double s = 0.0;
    for (const auto& v : z) s += std::norm(v);
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Export

inline void write_sync_report(const SyncReport& rep, std::ostream& os) {
    auto kv = [&os](const char* key, double v) {
        os << key << " = ";
        detail::write_g17(os, v);
        os << "\n";
    };
    kv("final_amplitude_spread", rep.final_amplitude_spread);
    kv("final_phase_spread", rep.final_phase_spread);
    kv("final_rate_spread_r", rep.final_rate_spread_r);
    kv("final_rate_spread_theta", rep.final_rate_spread_theta);
    kv("common_phase_estimate", rep.common_phase_estimate);
    kv("amplitude_target_error", rep.amplitude_target_error);
    os << "phase_metrics_defined = " << (rep.phase_metrics_defined ? "true" : "false") << "\n";
    os << "exp_rate_established = " << (rep.exp_rate.established ? "true" : "false") << "\n";
    kv("exp_rate", rep.exp_rate.rate);
    kv("exp_rate_r_squared", rep.exp_rate.r_squared);
    os << "exp_rate_points = " << rep.exp_rate.points << "\n";
}

/// Per-sample spread diagnostics as CSV "t,phase_spread,amplitude_spread".
/// The phase column is empty where amplitudes sit below the phase floor.
inline void write_sync_series_csv(const Trajectory& traj, std::ostream& os) {
    const int n = traj.params.n();
    os << "t,phase_spread,amplitude_spread\n";
    for (size_t i = 0; i < traj.size(); ++i) {
        detail::write_g17(os, traj.times[i]);
        os << ',';
        if (detail::above_floor(traj.states[i], kPhaseFloor)) detail::write_g17(os, detail::max_pairwise_circular(traj.states[i]));
        os << ',';
        double amp_spread = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                amp_spread = std::max(amp_spread, std::abs(std::abs(traj.states[i][j]) - std::abs(traj.states[i][k])));
        detail::write_g17(os, amp_spread);
        os << "\n";
    }
}

inline void write_energy_csv(const std::vector<EnergyRecord>& records, std::ostream& os) {
    os << "t,H,term_I_integral,term_II_integral,balance_residual\n";
    for (const auto& r : records) {
        detail::write_g17(os, r.t);
        for (double v : {r.H, r.term_I_integral, r.term_II_integral, r.balance_residual}) {
            os << ',';
            detail::write_g17(os, v);
        }
        os << "\n";
    }
}

}  // namespace slnet
