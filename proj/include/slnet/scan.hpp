#pragma once

// Parameter sweep over mu: integrate from a small perturbation of the
// origin (or from a synchronous start), discard a transient, measure the
// branch amplitude as the maximum of one node's x (or y) coordinate over
// the measurement window, and classify the end state. Ring topologies get
// the analytic critical-value table attached as figure markers.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <vector>

#include "slnet/dynamics.hpp"
#include "slnet/metrics.hpp"
#include "slnet/spectral.hpp"

namespace slnet {

struct ScanConfig {
    std::vector<double> mu_grid;  // nonempty, strictly increasing

    // parameter template, mu excluded
    NetworkTopology topology;
    std::vector<double> omega;
    double c = 0.0;

    double transient_T = 50.0;
    double measure_T = 20.0;
    // when positive, the transient for mu > 0 is extended to at least
    // relax_multiple / mu (that many linear relaxation times), capped by
    // transient_cap since the relaxation time diverges at criticality
    double relax_multiple = 0.0;
    double transient_cap = 1e4;

    enum class Perturbation { SeededRandom, Synchronous } perturbation = Perturbation::SeededRandom;
    double perturbation_scale = 1e-3;
    std::uint64_t seed = 0;

    int observable_node = 1;  // 1-based
    enum class Coordinate { X, Y } observable = Coordinate::X;

    Scheme scheme = Rk4{0.01};
    double sample_every = 0.01;
    double decay_threshold = 1e-3;  // amplitudes below this count as decayed
};

struct BranchPoint {
    double mu = 0.0;
    double amplitude = 0.0;
    enum class Class { Synchronous, NonSynchronous, Decayed } classification = Class::Decayed;
    bool diverged = false;
};

struct ScanResult {
    std::vector<BranchPoint> points;
    std::optional<HopfCriticalityTable> markers;  // present for ring topologies
};

namespace detail {

// per-point PRNG stream: decorrelate grid points so results do not depend
// on evaluation order
inline std::uint64_t point_seed(std::uint64_t seed, size_t index) {
    return seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index + 1);
}

}  // namespace detail

inline void validate(const ScanConfig& cfg) {
    if (cfg.mu_grid.empty()) throw std::invalid_argument("scan: empty mu grid");
    for (size_t i = 1; i < cfg.mu_grid.size(); ++i)
        if (!(cfg.mu_grid[i] > cfg.mu_grid[i - 1])) throw std::invalid_argument("scan: mu grid must be increasing");
    if (!(cfg.transient_T > 0.0) || !(cfg.measure_T > 0.0))
        throw std::invalid_argument("scan: transient_T and measure_T must be positive");
    if (cfg.observable_node < 1 || cfg.observable_node > cfg.topology.n_nodes)
        throw std::invalid_argument("scan: observable node out of range");
}

inline ScanResult run_scan(const ScanConfig& cfg) {
    validate(cfg);
    ScanResult result;
    const int n = cfg.topology.n_nodes;
    const int node = cfg.observable_node - 1;

    for (size_t gi = 0; gi < cfg.mu_grid.size(); ++gi) {
        const double mu = cfg.mu_grid[gi];
        SystemParams p{mu, cfg.omega, cfg.c, cfg.topology};

        State z0;
        if (cfg.perturbation == ScanConfig::Perturbation::Synchronous) {
            z0.assign(n, std::polar(cfg.perturbation_scale, 0.5));
        } else {
            z0 = seeded_polar_state(n, cfg.perturbation_scale, 0.0, 2.0 * 3.14159265358979323846,
                                    detail::point_seed(cfg.seed, gi));
        }

        BranchPoint bp;
        bp.mu = mu;
        try {
            double transient = cfg.transient_T;
            if (cfg.relax_multiple > 0.0 && mu > 0.0)
                transient = std::max(transient, std::min(cfg.relax_multiple / mu, cfg.transient_cap));
            // transient: keep only the end state
            Trajectory warm = integrate(z0, p, transient, cfg.scheme, transient / 2.0);
            Trajectory traj = integrate(warm.states.back(), p, cfg.measure_T, cfg.scheme, cfg.sample_every);

            double amp = -std::numeric_limits<double>::infinity();
            double max_r = 0.0;
            for (const auto& state : traj.states) {
                const double obs = cfg.observable == ScanConfig::Coordinate::X ? state[node].real() : state[node].imag();
                amp = std::max(amp, obs);
                for (const auto& z : state) max_r = std::max(max_r, std::abs(z));
            }
            // a state parked at x < 0 (possible while decaying with omega = 0)
            // contributes no oscillation maximum; report 0, not a negative peak
            bp.amplitude = std::max(amp, 0.0);

            if (max_r < cfg.decay_threshold) {
                bp.classification = BranchPoint::Class::Decayed;
            } else {
                const SyncReport rep = sync_report(traj, 0.2);
                const bool sync = rep.phase_metrics_defined && rep.final_phase_spread < 1e-3 &&
                                  rep.final_amplitude_spread < 1e-3;
                bp.classification = sync ? BranchPoint::Class::Synchronous : BranchPoint::Class::NonSynchronous;
            }
        } catch (const DivergenceError&) {
            bp.diverged = true;
            bp.amplitude = std::numeric_limits<double>::quiet_NaN();
        }
        result.points.push_back(bp);
    }

    if (cfg.topology.kind == TopologyKind::Ring)
        result.markers = classify_criticalities(n, cfg.topology.ring_s, cfg.c);
    return result;
}

/// Estimate the onset of oscillation from branch data: on a square-root
/// branch amplitude^2 is locally linear in mu, so fit a line to
/// (mu, amplitude^2) over the oscillating points and return its zero
/// crossing. Requires the grid to bracket the onset (at least one point
/// below threshold before the first point above).
inline double onset_estimate(const std::vector<BranchPoint>& points, double threshold = 1e-3) {
    size_t first = points.size();
    for (size_t i = 0; i < points.size(); ++i) {
        if (points[i].diverged) continue;
        if (points[i].amplitude >= threshold) {
            first = i;
            break;
        }
    }
    if (first == points.size()) throw std::invalid_argument("onset_estimate: no oscillating points");
    if (first == 0) throw std::invalid_argument("onset_estimate: grid does not bracket the onset from below");

    std::vector<double> mus, amp2;
    for (size_t i = first; i < points.size(); ++i) {
        if (points[i].diverged || points[i].amplitude < threshold) continue;
        mus.push_back(points[i].mu);
        amp2.push_back(points[i].amplitude * points[i].amplitude);
    }
    if (mus.size() == 1) {
        // single oscillating point: interpolate against the last decayed one
        const BranchPoint& below = points[first - 1];
        const double a0 = below.diverged ? 0.0 : below.amplitude * below.amplitude;
        const double slope = (amp2[0] - a0) / (mus[0] - below.mu);
        return mus[0] - amp2[0] / slope;
    }
    const auto [slope, r2] = detail::ols(mus, amp2);
    (void)r2;
    if (!(slope > 0.0)) throw std::invalid_argument("onset_estimate: branch amplitudes do not grow with mu");
    double mean_mu = 0.0, mean_a2 = 0.0;
    for (size_t i = 0; i < mus.size(); ++i) {
        mean_mu += mus[i];
        mean_a2 += amp2[i];
    }
    mean_mu /= mus.size();
    mean_a2 /= mus.size();
    return mean_mu - mean_a2 / slope;
}

/// Plotter-friendly two-column "mu amplitude" file holding the points of
/// one classification.
inline void write_branch_columns(const std::vector<BranchPoint>& points, BranchPoint::Class cls, std::ostream& os) {
    for (const auto& bp : points) {
        if (bp.diverged || bp.classification != cls) continue;
        detail::write_g17(os, bp.mu);
        os << ' ';
        detail::write_g17(os, bp.amplitude);
        os << "\n";
    }
}

inline void write_branch_csv(const std::vector<BranchPoint>& points, std::ostream& os) {
    os << "mu,amplitude,classification\n";
    for (const auto& bp : points) {
        detail::write_g17(os, bp.mu);
        os << ',';
        detail::write_g17(os, bp.amplitude);
        os << ',';
        if (bp.diverged)
            os << "divergent";
        else
            os << (bp.classification == BranchPoint::Class::Synchronous      ? "synchronous"
                   : bp.classification == BranchPoint::Class::NonSynchronous ? "non-synchronous"
                                                                             : "decayed");
        os << "\n";
    }
}

}  // namespace slnet
