#include <doctest.h>

#include <cmath>
#include <sstream>

#include "slnet/certificates.hpp"
#include "slnet/metrics.hpp"

using namespace slnet;

namespace {

// independent root locator: coarse sign scan with step 1e-4, then bisection
// on the first bracketing interval
double smallest_root_scan(double mu, int n, double c, double lambda_max) {
    const double rhs = c * std::sqrt(n * mu) * lambda_max;
    auto f = [&](double x) { return mu * x - x * x * x - rhs; };
    double prev = 0.0;
    for (double x = 1e-4; x < std::sqrt(mu); x += 1e-4) {
        if (f(prev) < 0.0 && f(x) >= 0.0) {
            double lo = prev, hi = x;
            for (int i = 0; i < 80; ++i) {
                const double mid = 0.5 * (lo + hi);
                (f(mid) < 0.0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev = x;
    }
    return -1.0;
}

SystemParams k3_params(double mu, double omega, double c) {
    return SystemParams{mu, std::vector<double>(3, omega), c, build_complete(3)};
}

double witness(const Certificate& cert, const std::string& name) {
    for (const auto& [k, v] : cert.witnesses)
        if (k == name) return v;
    FAIL("missing witness ", name);
    return 0.0;
}

}  // namespace

TEST_SUITE("certificates") {

TEST_CASE("c_star closed form and homogeneity") {
    CHECK(c_star(1.0, 3, 3.0) == doctest::Approx(2.0 / 27.0).epsilon(1e-15));
    CHECK(c_star(1.0, 6, 6.0) == doctest::Approx(0.0261891).epsilon(1e-4));
    for (double mu : {0.3, 1.0, 2.5}) CHECK(c_star(2.0 * mu, 5, 4.0) == doctest::Approx(2.0 * c_star(mu, 5, 4.0)).epsilon(1e-14));
    CHECK_THROWS_AS(c_star(-1.0, 3, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(c_star(1.0, 3, 0.0), std::invalid_argument);
}

TEST_CASE("r_star against the independent sign-scan oracle") {
    const double rs = r_star(1.0, 3, 0.01, 3.0);
    const double oracle = smallest_root_scan(1.0, 3, 0.01, 3.0);
    CHECK(rs == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(rs == doctest::Approx(0.05211).epsilon(1e-3));
    // f(r*) = 0 within 1e-10 and f < 0 strictly inside (0, r*)
    const double rhs = 0.01 * std::sqrt(3.0) * 3.0;
    auto f = [&](double x) { return x - x * x * x - rhs; };
    CHECK(std::abs(f(rs)) < 1e-10);
    for (int i = 1; i < 100; ++i) CHECK(f(rs * i / 100.0) < 0.0);
}

TEST_CASE("r_star edge cases and monotonicity") {
    CHECK(r_star(1.0, 3, 0.0, 3.0) == 0.0);
    const double cs = c_star(1.0, 3, 3.0);
    CHECK_THROWS_AS(r_star(1.0, 3, cs * 1.01, 3.0), std::invalid_argument);
    double prev = 0.0;
    for (int i = 1; i <= 10; ++i) {
        const double c = cs * i / 10.5;
        const double rs = r_star(1.0, 3, c, 3.0);
        CHECK(rs > prev);
        prev = rs;
    }
    // at c* itself the root sits at the cubic's maximum sqrt(mu/3)
    CHECK(r_star(1.0, 3, cs * (1.0 - 1e-9), 3.0) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-3));
}

TEST_CASE("antideath certificate: satisfied sample") {
    const auto p = k3_params(1.0, 0.0, 0.01);
    const State z0 = seeded_polar_state(3, 0.5, 0.2, 2.9, 3);
    const Certificate cert = check_antideath(z0, p);
    CHECK(cert.satisfied);
    CHECK(cert.violated_clauses.empty());
    CHECK(witness(cert, "c_star") == doctest::Approx(2.0 / 27.0));
    CHECK(witness(cert, "r_star") == doctest::Approx(0.05211).epsilon(1e-3));
    CHECK(witness(cert, "radius_margin") > 0.4);
}

TEST_CASE("antideath certificate: violated clauses") {
    const State z0 = seeded_polar_state(3, 0.5, 0.2, 2.9, 3);

    const Certificate too_strong = check_antideath(z0, k3_params(1.0, 0.0, 0.1));
    CHECK(!too_strong.satisfied);
    REQUIRE(!too_strong.violated_clauses.empty());
    CHECK(too_strong.violated_clauses.front().find("(i)") != std::string::npos);

    State small = z0;
    small[1] = std::polar(0.01, 1.0);  // below r* ~ 0.052
    const Certificate tiny = check_antideath(small, k3_params(1.0, 0.0, 0.01));
    CHECK(!tiny.satisfied);
    REQUIRE(tiny.violated_clauses.size() == 1);
    CHECK(tiny.violated_clauses.front().find("(iii)") != std::string::npos);

    State big(3, std::polar(1.2, 0.5));  // sum r^2 = 4.32 > N mu = 3
    const Certificate heavy = check_antideath(big, k3_params(1.0, 0.0, 0.01));
    CHECK(!heavy.satisfied);
    bool found = false;
    for (const auto& cl : heavy.violated_clauses) found = found || cl.find("(ii)") != std::string::npos;
    CHECK(found);
}

TEST_CASE("satisfied antideath certificate is confirmed by simulation") {
    const auto p = k3_params(1.0, 0.0, 0.01);
    const State z0 = seeded_polar_state(3, 0.5, 0.2, 2.9, 7);
    const Certificate cert = check_antideath(z0, p);
    REQUIRE(cert.satisfied);
    const double rs = witness(cert, "r_star");
    const Trajectory traj = integrate(z0, p, 100.0, Rk4{1e-3}, 0.01);
    const size_t skip = traj.size() / 4;  // transient discard
    for (size_t i = 0; i < traj.size(); ++i)
        for (const auto& z : traj.states[i]) {
            if (i >= skip) CHECK(std::abs(z) > rs * (1.0 - 1e-3));
            CHECK(std::abs(z) < 1.0 * (1.0 + 1e-6));
        }
}

TEST_CASE("origin instability certificate") {
    const Certificate sat = check_origin_unstable(k3_params(1.0, 0.5, 0.1));
    CHECK(sat.satisfied);
    CHECK(witness(sat, "spectral_margin") == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(witness(sat, "min_mode_growth_rate") == doctest::Approx(0.7).epsilon(1e-9));

    // boundary mu = c lambda_max is not sufficient (strict inequality)
    const Certificate boundary = check_origin_unstable(k3_params(0.3, 0.5, 0.1));
    CHECK(!boundary.satisfied);

    const Certificate uncoupled = check_origin_unstable(k3_params(0.2, 0.5, 0.0));
    CHECK(uncoupled.satisfied);
}

TEST_CASE("general-topology sync certificate on ring(6,2)") {
    SystemParams p{1.0, std::vector<double>(6, 1.0), 0.02, build_ring(6, 2)};
    const State z0 = seeded_polar_state(6, 0.5, 0.3, 2.8, 11);
    const Certificate cert = check_sync_general(z0, p);
    CHECK(cert.satisfied);
    CHECK(witness(cert, "lambda_max") == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(witness(cert, "c_star") == doctest::Approx(0.0261891).epsilon(1e-4));

    // a phase pinned at 0 violates the open interval
    State z_edge = z0;
    z_edge[2] = std::polar(0.5, 0.0);
    CHECK(!check_sync_general(z_edge, p).satisfied);

    // non-identical frequencies violate
    SystemParams p_mixed = p;
    p_mixed.omega[3] = 2.0;
    const Certificate mixed = check_sync_general(z0, p_mixed);
    CHECK(!mixed.satisfied);
    bool found = false;
    for (const auto& cl : mixed.violated_clauses) found = found || cl.find("identical") != std::string::npos;
    CHECK(found);
}

TEST_CASE("degree-condition sync certificate on K3") {
    const auto p = k3_params(1.0, 0.0, 0.1);
    const State z0 = seeded_polar_state(3, 0.5, 0.2, 1.3, 13);
    const Certificate cert = check_sync_degree(z0, p);
    CHECK(cert.satisfied);
    CHECK(witness(cert, "d_max") == 2.0);
    CHECK(witness(cert, "degree_margin") == doctest::Approx(0.8).epsilon(1e-12));

    // boundary mu = c d_max violated (strict)
    CHECK(!check_sync_degree(z0, k3_params(0.2, 0.0, 0.1)).satisfied);

    // a phase at pi/2 violates the open interval
    State z_edge = z0;
    z_edge[0] = std::polar(0.5, std::acos(-1.0) / 2.0);
    CHECK(!check_sync_degree(z_edge, p).satisfied);
}

TEST_CASE("degree + persistence clauses imply the general certificate") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        const auto p = k3_params(1.0, 0.0, 0.01);
        const State z0 = seeded_polar_state(3, 0.6, 0.1, 1.4, seed);
        const Certificate c32 = check_sync_degree(z0, p);
        const Certificate cad = check_antideath(z0, p);
        if (c32.satisfied && cad.satisfied) {
            CHECK(check_sync_general(z0, p).satisfied);
        }
    }
}

TEST_CASE("certificates for c = 0 degenerate coupling") {
    const auto p = k3_params(1.0, 0.0, 0.0);
    // all positive radii: satisfiable with r_star = 0
    const Certificate ok = check_antideath(seeded_polar_state(3, 0.3, 0.2, 1.0, 17), p);
    CHECK(ok.satisfied);
    CHECK(witness(ok, "r_star") == 0.0);
    // one node exactly at the origin violates the strict radius clause
    State z0 = seeded_polar_state(3, 0.3, 0.2, 1.0, 17);
    z0[0] = 0.0;
    CHECK(!check_antideath(z0, p).satisfied);
}

TEST_CASE("certificate serialization lists clauses and witnesses") {
    const auto p = k3_params(1.0, 0.0, 0.1);
    const Certificate cert = check_antideath(seeded_polar_state(3, 0.5, 0.2, 1.3, 19), p);
    std::ostringstream os;
    write_certificate(cert, os);
    const std::string text = os.str();
    CHECK(text.find("amplitude-persistence") != std::string::npos);
    CHECK(text.find("NOT SATISFIED") != std::string::npos);
    CHECK(text.find("c_star") != std::string::npos);
    CHECK(text.find("clause (i) c < c_star: VIOLATED") != std::string::npos);
    CHECK(text.find("clause (ii) sum_j r_j(0)^2 <= N mu: ok") != std::string::npos);
}

}  // TEST_SUITE
