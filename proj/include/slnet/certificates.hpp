#pragma once

// Machine-checkable sufficient conditions for the network: persistence of
// nonvanishing amplitudes, instability of the death equilibrium z = 0, and
// the two complete-synchronization criteria. Each check returns a
// Certificate listing every clause with its operands and margin; nothing
// throws on an unsatisfied clause.

#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "slnet/dynamics.hpp"
#include "slnet/graph.hpp"

namespace slnet {

enum class CertificateKind { AntiDeath, OriginUnstable, SyncGeneral, SyncDegree };

inline const char* certificate_name(CertificateKind k) {
    switch (k) {
        case CertificateKind::AntiDeath: return "amplitude-persistence";
        case CertificateKind::OriginUnstable: return "origin-instability";
        case CertificateKind::SyncGeneral: return "complete-sync-general";
        case CertificateKind::SyncDegree: return "complete-sync-degree";
    }
    return "?";
}

struct Certificate {
    CertificateKind kind;
    bool satisfied = false;
    std::vector<std::pair<std::string, double>> witnesses;
    std::vector<std::pair<std::string, bool>> clauses;  // every checked clause, in evaluation order
    std::vector<std::string> violated_clauses;

    void clause(const std::string& name, bool ok) {
        clauses.emplace_back(name, ok);
        if (!ok) violated_clauses.push_back(name);
    }
    void finish() { satisfied = violated_clauses.empty(); }
};

/// Coupling threshold c* = 2 mu / (3 sqrt(3N) lambda_max).
inline double c_star(double mu, int n, double lambda_max) {
    if (!(mu > 0.0)) throw std::invalid_argument("c_star: mu must be positive");
    if (n < 1) throw std::invalid_argument("c_star: n must be positive");
    if (!(lambda_max > 0.0)) throw std::invalid_argument("c_star: lambda_max must be positive");
    return 2.0 * mu / (3.0 * std::sqrt(3.0 * n) * lambda_max);
}

/// Smallest positive root of mu x - x^3 = c sqrt(N mu) lambda_max, located
/// by bisection on [0, sqrt(mu/3)] to 1e-12. Requires c < c*(mu, N,
/// lambda_max) so the root exists below the cubic's maximum; c = 0 returns
/// the degenerate limit 0.
inline double r_star(double mu, int n, double c, double lambda_max) {
    if (!(mu > 0.0)) throw std::invalid_argument("r_star: mu must be positive");
    if (c < 0.0) throw std::invalid_argument("r_star: c must be >= 0");
    if (c == 0.0) return 0.0;
    const double rhs = c * std::sqrt(n * mu) * lambda_max;
    auto f = [&](double x) { return mu * x - x * x * x - rhs; };
    double lo = 0.0, hi = std::sqrt(mu / 3.0);
    if (!(f(hi) > 0.0))
        throw std::invalid_argument("r_star: no root below the cubic maximum (requires c < c_star)");
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace detail {

// principal phase of z mapped to [0, 2pi); the open-interval clauses are
// evaluated on this representative
inline double phase_representative(const std::complex<double>& z) {
    constexpr double two_pi = 2.0 * 3.14159265358979323846;
    double a = std::arg(z);
    if (a < 0.0) a += two_pi;
    return a;
}

}  // namespace detail

/// Clauses: (i) c < c*, (ii) sum_j r_j(0)^2 <= N mu, (iii) r_j(0) > r* for
/// every j. When satisfied, amplitudes stay in (r*, sqrt(mu)) after a
/// transient and the polar form remains well-defined.
inline Certificate check_antideath(const State& z0, const SystemParams& p) {
    p.validate();
    if (!(p.mu > 0.0)) throw std::invalid_argument("check_antideath: mu must be positive");
    const int n = p.n();
    Certificate cert{CertificateKind::AntiDeath};

    const double lmax = laplacian_spectrum(laplacian(p.topology)).lambda_max;
    const double cs = c_star(p.mu, n, lmax);
    cert.witnesses.emplace_back("lambda_max", lmax);
    cert.witnesses.emplace_back("c_star", cs);
    cert.witnesses.emplace_back("c_margin", cs - p.c);
    cert.clause("(i) c < c_star", p.c < cs);

    double sum_r2 = 0.0;
    double min_r0 = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        sum_r2 += std::norm(z0[j]);
        min_r0 = std::min(min_r0, std::abs(z0[j]));
    }
    cert.witnesses.emplace_back("sum_r0_squared", sum_r2);
    cert.witnesses.emplace_back("energy_margin", n * p.mu - sum_r2);
    cert.clause("(ii) sum_j r_j(0)^2 <= N mu", sum_r2 <= n * p.mu);

    // r* is defined whenever clause (i) holds; report it when available
    if (p.c < cs) {
        const double rs = r_star(p.mu, n, p.c, lmax);
        cert.witnesses.emplace_back("r_star", rs);
        cert.witnesses.emplace_back("radius_margin", min_r0 - rs);
        cert.clause("(iii) r_j(0) > r_star for all j", min_r0 > rs);
    } else {
        cert.witnesses.emplace_back("min_r0", min_r0);
        cert.clause("(iii) r_j(0) > r_star for all j (r_star undefined: clause (i) failed)", false);
    }

    cert.finish();
    return cert;
}

/// Satisfied iff mu > c lambda_max(L): the linearization at z = 0 then has
/// an eigenvalue with positive real part in every Laplacian mode.
inline Certificate check_origin_unstable(const SystemParams& p) {
    p.validate();
    Certificate cert{CertificateKind::OriginUnstable};
    const LaplacianSpectrum spectrum = laplacian_spectrum(laplacian(p.topology));
    cert.witnesses.emplace_back("lambda_max", spectrum.lambda_max);
    cert.witnesses.emplace_back("spectral_margin", p.mu - p.c * spectrum.lambda_max);
    // same margin computed eigenvalue-by-eigenvalue, as a cross-route
    double min_re = std::numeric_limits<double>::infinity();
    for (double lam : spectrum.eigenvalues) min_re = std::min(min_re, p.mu - p.c * lam);
    cert.witnesses.emplace_back("min_mode_growth_rate", min_re);
    cert.clause("mu > c lambda_max", p.mu > p.c * spectrum.lambda_max);
    cert.finish();
    return cert;
}

/// Complete synchronization for arbitrary connected topology: the
/// amplitude-persistence clauses, identical natural frequencies, and all
/// initial phases strictly inside (0, pi).
inline Certificate check_sync_general(const State& z0, const SystemParams& p) {
    Certificate inner = check_antideath(z0, p);
    Certificate cert{CertificateKind::SyncGeneral};
    cert.witnesses = std::move(inner.witnesses);
    cert.clauses = std::move(inner.clauses);
    cert.violated_clauses = std::move(inner.violated_clauses);

    cert.clause("identical natural frequencies", p.identical_frequencies());

    constexpr double pi = 3.14159265358979323846;
    double lo = std::numeric_limits<double>::infinity(), hi = -std::numeric_limits<double>::infinity();
    for (const auto& z : z0) {
        const double th = detail::phase_representative(z);
        lo = std::min(lo, th);
        hi = std::max(hi, th);
    }
    cert.witnesses.emplace_back("min_initial_phase", lo);
    cert.witnesses.emplace_back("max_initial_phase", hi);
    cert.clause("initial phases in (0, pi)", lo > 0.0 && hi < pi);

    cert.finish();
    return cert;
}

/// Complete synchronization under the degree condition mu > c d_max with
/// initial phases strictly inside (0, pi/2). Does not require the c*/r*
/// clauses: the amplitude bound min{r_j(0), sqrt(mu - c d_max)} <= r_j(t)
/// < sqrt(mu) holds on its own.
inline Certificate check_sync_degree(const State& z0, const SystemParams& p) {
    p.validate();
    Certificate cert{CertificateKind::SyncDegree};
    const int dm = d_max(p.topology);
    cert.witnesses.emplace_back("d_max", static_cast<double>(dm));
    cert.witnesses.emplace_back("degree_margin", p.mu - p.c * dm);
    cert.clause("mu > c d_max", p.mu > p.c * dm);

    cert.clause("identical natural frequencies", p.identical_frequencies());

    constexpr double pi = 3.14159265358979323846;
    double lo = std::numeric_limits<double>::infinity(), hi = -std::numeric_limits<double>::infinity();
    for (const auto& z : z0) {
        const double th = detail::phase_representative(z);
        lo = std::min(lo, th);
        hi = std::max(hi, th);
    }
    cert.witnesses.emplace_back("min_initial_phase", lo);
    cert.witnesses.emplace_back("max_initial_phase", hi);
    cert.clause("initial phases in (0, pi/2)", lo > 0.0 && hi < pi / 2.0);

    cert.finish();
    return cert;
}

inline void write_certificate(const Certificate& cert, std::ostream& os) {
    os << "certificate " << certificate_name(cert.kind) << ": " << (cert.satisfied ? "SATISFIED" : "NOT SATISFIED")
       << "\n";
    for (const auto& [name, ok] : cert.clauses) os << "  clause " << name << ": " << (ok ? "ok" : "VIOLATED") << "\n";
    for (const auto& [name, value] : cert.witnesses) {
        os << "  " << name << " = ";
        detail::write_g17(os, value);
        os << "\n";
    }
}

}  // namespace slnet
