#include <doctest.h>

#include <cmath>
#include <complex>

#include "slnet/metrics.hpp"

using namespace slnet;

namespace {

const double kPi = std::acos(-1.0);

// independent oracle: search the integer shifts directly
double circular_distance_bruteforce(double a, double b) {
    double best = std::numeric_limits<double>::infinity();
    for (int m = -4; m <= 4; ++m) best = std::min(best, std::abs(a - b + 2.0 * kPi * m));
    return best;
}

SystemParams k3_params(double mu, double omega, double c) {
    return SystemParams{mu, std::vector<double>(3, omega), c, build_complete(3)};
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("circular distance basics") {
    CHECK(circular_distance(0.0, 2.0 * kPi) < 1e-12);
    CHECK(circular_distance(0.0, kPi) == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(circular_distance(0.1, 6.2) == doctest::Approx(2.0 * kPi - 6.1).epsilon(1e-12));
    CHECK(circular_distance(0.1, 6.2) == doctest::Approx(0.18318530717958623).epsilon(1e-10));
}

TEST_CASE("circular distance properties: symmetry, bound, shift invariance") {
    const double angles[] = {-7.3, -3.1, -0.4, 0.0, 0.9, 2.7, 3.2, 9.8};
    for (double a : angles)
        for (double b : angles) {
            const double d = circular_distance(a, b);
            CHECK(d >= 0.0);
            CHECK(d <= kPi + 1e-15);
            CHECK(std::abs(d - circular_distance(b, a)) < 1e-12);
            CHECK(std::abs(d - circular_distance(a + 2.0 * kPi, b)) < 1e-12);
            CHECK(std::abs(d - circular_distance(a, b - 2.0 * kPi)) < 1e-12);
            CHECK(std::abs(d - circular_distance_bruteforce(a, b)) < 1e-12);
        }
}

TEST_CASE("sync report on synchronous initial data") {
    const auto p = k3_params(1.0, 1.0, 0.2);
    const Trajectory traj = integrate(State(3, std::complex<double>(0.3, 0.4)), p, 20.0, Rk4{1e-3}, 0.01);
    const SyncReport rep = sync_report(traj);
    CHECK(rep.final_amplitude_spread < 1e-9);
    CHECK(rep.final_phase_spread < 1e-9);
    CHECK(rep.final_rate_spread_r < 1e-9);
    CHECK(rep.final_rate_spread_theta < 1e-9);
    CHECK(rep.phase_metrics_defined);
    CHECK(rep.amplitude_target_error < 1e-6);  // on the limit cycle by t = 20
}

TEST_CASE("two uncoupled oscillators keep their frequency mismatch") {
    SystemParams p{1.0, {1.0, 1.5}, 0.0, build_complete(2)};
    const Trajectory traj = integrate(state_from_polar({1.0, 1.0}, {0.2, 0.9}), p, 30.0, Rk4{1e-3}, 0.01);
    const SyncReport rep = sync_report(traj);
    CHECK(rep.final_rate_spread_theta == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(!rep.exp_rate.established);
}

TEST_CASE("sync report demands a tail of at least 100 samples") {
    const auto p = k3_params(1.0, 0.0, 0.1);
    const Trajectory traj = integrate(State(3, std::complex<double>(0.5, 0.0)), p, 1.0, Rk4{1e-3}, 0.01);
    CHECK_THROWS_AS(sync_report(traj), std::invalid_argument);
}

TEST_CASE("phase metrics flagged undefined when amplitudes vanish") {
    const auto p = k3_params(-1.0, 0.0, 0.0);
    const Trajectory traj = integrate(State(3, std::complex<double>(1e-4, 0.0)), p, 25.0, Rk4{1e-3}, 0.01);
    const SyncReport rep = sync_report(traj);
    CHECK(!rep.phase_metrics_defined);
    CHECK(std::isnan(rep.final_phase_spread));
    CHECK(rep.final_amplitude_spread < 1e-12);  // amplitude metrics still fine
}

TEST_CASE("common phase estimate lies in [0, 2pi) and matches a rigid cluster") {
    SystemParams p{1.0, {0.0}, 0.0, build_custom({}, 1)};
    const Trajectory traj = integrate({std::polar(1.0, 1.1)}, p, 2.0, Rk4{1e-3}, 0.01);
    const SyncReport rep = sync_report(traj, 1.0);
    CHECK(rep.common_phase_estimate == doctest::Approx(1.1).epsilon(1e-6));
}

TEST_CASE("energy functional vanishes identically on the synchronized equilibrium") {
    const auto p = k3_params(1.0, 0.0, 0.1);
    const Trajectory traj = integrate(State(3, std::complex<double>(1.0, 0.0)), p, 5.0, Rk4{1e-3}, 0.01);
    const auto records = energy_functional(traj);
    CHECK(records.back().H < 1e-20);
    CHECK(records.back().balance_residual < 1e-15);
}

TEST_CASE("energy balance identity on a generic trajectory") {
    const auto p = k3_params(1.0, 0.0, 0.1);
    const State z0 = seeded_polar_state(3, 0.5, 0.2, 1.3, 17);
    const Trajectory traj = integrate(z0, p, 20.0, Rk4{1e-3}, 0.01);
    const auto records = energy_functional(traj);
    const auto& final = records.back();
    CHECK(final.H > 0.0);
    CHECK(final.balance_residual / std::max(final.H, 1.0) < 1e-6);
}

TEST_CASE("H is nondecreasing") {
    const auto p = k3_params(1.0, 0.0, 0.1);
    const Trajectory traj = integrate(seeded_polar_state(3, 0.5, 0.2, 1.3, 23), p, 10.0, Rk4{1e-3}, 0.01);
    const auto records = energy_functional(traj);
    for (size_t i = 1; i < records.size(); ++i) CHECK(records[i].H >= records[i - 1].H - 1e-12);
}

TEST_CASE("energy functional contract on natural frequencies") {
    const auto p = k3_params(1.0, 1.0, 0.1);
    const Trajectory traj = integrate(seeded_polar_state(3, 0.5, 0.2, 1.3, 29), p, 10.0, Rk4{1e-3}, 0.01);
    CHECK_THROWS_AS(energy_functional(traj), std::invalid_argument);
    // co-rotating evaluation matches the omega = 0 run of the same system
    const auto rot = energy_functional(traj, true);
    const auto p0 = k3_params(1.0, 0.0, 0.1);
    const Trajectory traj0 = integrate(seeded_polar_state(3, 0.5, 0.2, 1.3, 29), p0, 10.0, Rk4{1e-3}, 0.01);
    const auto base = energy_functional(traj0);
    CHECK(rot.back().H == doctest::Approx(base.back().H).epsilon(1e-8));

    SystemParams mixed{1.0, {1.0, 2.0, 3.0}, 0.1, build_complete(3)};
    const Trajectory tm = integrate(seeded_polar_state(3, 0.5, 0.2, 1.3, 31), mixed, 10.0, Rk4{1e-3}, 0.01);
    CHECK_THROWS_AS(energy_functional(tm, true), std::invalid_argument);
}

TEST_CASE("rates die out for bounded co-rotating trajectories") {
    const auto p = k3_params(1.0, 0.0, 0.1);
    const Trajectory traj = integrate(seeded_polar_state(3, 0.5, 0.2, 1.3, 37), p, 200.0, Rk4{1e-3}, 0.01);
    std::vector<double> r(3), theta(3);
    for (int j = 0; j < 3; ++j) {
        r[j] = std::abs(traj.states.back()[j]);
        theta[j] = std::arg(traj.states.back()[j]);
    }
    const PolarRates rates = rhs_polar(r, theta, p);
    for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(rates.dr[j]) < 1e-6);
        CHECK(std::abs(rates.dtheta[j]) < 1e-6);
    }
}

TEST_CASE("monotone phase envelope in the co-rotating frame") {
    SystemParams p{1.0, std::vector<double>(6, 0.0), 0.02, build_ring(6, 2)};
    const State z0 = seeded_polar_state(6, 0.5, 0.3, 2.8, 41);
    const Trajectory traj = integrate(z0, p, 60.0, Rk4{1e-3}, 0.01);
    const auto theta = traj.unwrapped_phases();
    double prev_max = std::numeric_limits<double>::infinity();
    double prev_min = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < traj.size(); ++i) {
        double mx = -std::numeric_limits<double>::infinity();
        double mn = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 6; ++j) {
            mx = std::max(mx, theta[i][j]);
            mn = std::min(mn, theta[i][j]);
        }
        if (i > 0) {
            CHECK(mx <= prev_max + 1e-8);
            CHECK(mn >= prev_min - 1e-8);
        }
        prev_max = mx;
        prev_min = mn;
    }
}

TEST_CASE("state norm R") {
    CHECK(state_norm_R(State(4, 0.0)) == 0.0);
    const double mu = 0.49;
    State z(5);
    for (int j = 0; j < 5; ++j) z[j] = std::polar(std::sqrt(mu), 0.3 * j);
    CHECK(state_norm_R(z) == doctest::Approx(std::sqrt(5.0 * mu)).epsilon(1e-14));
}

TEST_CASE("R^2 stays below N mu along trajectories started inside") {
    const auto p = k3_params(1.0, 0.5, 0.1);
    // R^2(0) = 3 * 0.9^2 = 2.43 <= N mu = 3
    const Trajectory traj = integrate(seeded_polar_state(3, 0.9, 0.1, 2.9, 43), p, 50.0, Rk4{1e-3}, 0.01);
    for (size_t i = 1; i < traj.size(); ++i) {
        const double r2 = state_norm_R(traj.states[i]) * state_norm_R(traj.states[i]);
        CHECK(r2 < 3.0);
    }
}

TEST_CASE("sync series CSV carries the spread channels") {
    const auto p = k3_params(1.0, 0.0, 0.1);
    const Trajectory traj = integrate(seeded_polar_state(3, 0.5, 0.2, 1.3, 53), p, 2.0, Rk4{1e-3}, 0.01);
    std::ostringstream os;
    write_sync_series_csv(traj, os);
    const std::string text = os.str();
    CHECK(text.find("t,phase_spread,amplitude_spread") == 0);
    // one line per sample plus the header
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(traj.size()) + 1);
}

TEST_CASE("exponential rate fit on synthetic exact decay") {
    // hand-built trajectory: two nodes closing their phase gap at rate -0.25
    SystemParams p{1.0, {0.0, 0.0}, 0.0, build_complete(2)};
    Trajectory traj;
    traj.params = p;
    for (int i = 0; i <= 4000; ++i) {
        const double t = 0.01 * i;
        const double gap = 0.5 * std::exp(-0.25 * t);
        traj.times.push_back(t);
        traj.states.push_back({std::polar(1.0, 0.0), std::polar(1.0, gap)});
    }
    const SyncReport rep = sync_report(traj);
    CHECK(rep.exp_rate.established);
    CHECK(rep.exp_rate.rate == doctest::Approx(-0.25).epsilon(1e-3));
    CHECK(rep.exp_rate.r_squared > 0.999);
}

}  // TEST_SUITE
