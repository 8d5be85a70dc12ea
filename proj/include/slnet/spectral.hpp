#pragma once

// Linear-stability structure of the origin for s-nearest-neighbor rings.
//
// The Jacobian at z = 0 in (x_j, y_j) coordinates is block-circulant of
// type (N, 2): row block j, column block k holds A_{1 + (k-j mod N)}. The
// unitary F_N (x) F_2 conjugates it to diag(M_1, ..., M_N); each 2x2 block
//
//   M_j = [[mu - mu_j, omega], [-omega, mu - mu_j]],   mu_1 := 0,
//
// has eigenvalues (mu - mu_j) +- i omega, so M_j turns critical exactly at
// mu = mu_j. The closed form for mu_j and its degeneracy pattern drive the
// criticality table, and everything is cross-checked numerically through
// the Fourier route.

#include <cassert>
#include <cmath>
#include <complex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "slnet/dynamics.hpp"
#include "slnet/graph.hpp"
#include "slnet/linalg.hpp"

namespace slnet {

struct Mat2 {
    double m[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

    static Mat2 scaled_identity(double v) {
        Mat2 r;
        r.m[0][0] = r.m[1][1] = v;
        return r;
    }
    static Mat2 rotationlike(double diag, double off) {
        // [[diag, -off], [off, diag]]
        Mat2 r;
        r.m[0][0] = r.m[1][1] = diag;
        r.m[0][1] = -off;
        r.m[1][0] = off;
        return r;
    }
};

/// DFT matrix of order n: F[j][k] = w^{jk} / sqrt(n), w = e^{-2 pi i / n}.
inline ComplexMatrix fourier_matrix(int n) {
    if (n < 1) throw std::invalid_argument("fourier_matrix: n must be >= 1");
    ComplexMatrix f(n, n);
    const double base = -2.0 * 3.14159265358979323846 / n;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            // reduce jk mod n before the trig call to keep arguments small
            const long long e = (static_cast<long long>(j) * k) % n;
            f(j, k) = std::polar(scale, base * static_cast<double>(e));
        }
    return f;
}

struct BlockCirculantJacobian {
    int n = 0;                 // number of nodes (block count)
    std::vector<Mat2> blocks;  // A_1 .. A_N in circulant order
    Matrix assembled;          // 2N x 2N real matrix
};

namespace detail {

inline void require_ring(const SystemParams& p) {
    if (p.topology.kind != TopologyKind::Ring)
        throw std::invalid_argument("spectral: only ring topologies have the block-circulant structure");
    if (!p.identical_frequencies())
        throw std::invalid_argument("spectral: requires identical natural frequencies");
}

inline bool ring_all_to_all(int n, int s) { return 2 * s >= n - 1; }

inline void validate_ring_params(int n, int s) {
    if (n < 3) throw std::invalid_argument("spectral: need n >= 3");
    if (s < 1 || s > n / 2) throw std::invalid_argument("spectral: require 1 <= s <= floor(n/2)");
}

}  // namespace detail

/// Blocks of the origin Jacobian for ring coupling. A_1 couples a node to
/// itself (local part minus the degree term), A_{1+l} = c I for ring
/// distance l <= s and 0 otherwise.
inline BlockCirculantJacobian build_jacobian_blocks(const SystemParams& p) {
    p.validate();
    detail::require_ring(p);
    const int n = p.n();
    const int s = p.topology.ring_s;
    const double omega = p.omega.front();
    const int degree = p.topology.degrees.front();

    BlockCirculantJacobian jac;
    jac.n = n;
    jac.blocks.resize(n);
    jac.blocks[0] = Mat2::rotationlike(p.mu - p.c * degree, omega);
    for (int l = 1; l < n; ++l) {
        const int dist = std::min(l, n - l);
        jac.blocks[l] = dist <= s ? Mat2::scaled_identity(p.c) : Mat2();
    }

    jac.assembled = Matrix(2 * n, 2 * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const Mat2& b = jac.blocks[(k - j + n) % n];
            for (int p_ = 0; p_ < 2; ++p_)
                for (int q = 0; q < 2; ++q) jac.assembled(2 * j + p_, 2 * k + q) = b.m[p_][q];
        }
    return jac;
}

/// Critical parameter value of mode j (2 <= j <= N) for ring(N, s) at
/// coupling c. All-to-all coupling collapses every mode to N c; otherwise
///
///   mu_j = 2c ( s - sin(s a) cos((s+1) a) / sin(a) ),  a = (j-1) pi / N,
///
/// which equals c times the circulant Laplacian eigenvalue of Fourier
/// index j-1.
inline double mu_critical(int j, int n, int s, double c) {
    detail::validate_ring_params(n, s);
    if (j < 2 || j > n) throw std::invalid_argument("mu_critical: mode index must be in 2..N");
    if (detail::ring_all_to_all(n, s)) return n * c;
    const double a = (j - 1) * 3.14159265358979323846 / n;
    assert(std::sin(a) > 0.0);  // a in (0, pi) for j in 2..N
    return 2.0 * c * (s - std::sin(s * a) * std::cos((s + 1) * a) / std::sin(a));
}

struct SpectralReport {
    int n = 0;
    int s = 0;
    double mu = 0.0, omega = 0.0, c = 0.0;
    std::vector<Mat2> M;            // M_1 .. M_N (closed form, cross-checked against the DFT route)
    std::vector<double> mu_crit;    // mu_crit[j-1] for mode j; mu_crit[0] = 0 by convention
    std::vector<std::pair<int, int>> pairs;  // {j, N+2-j} for j = 2..ceil((N+1)/2)
    std::optional<int> unpaired_index;       // 1 + N/2 when N is even
    struct DegeneracyClass {
        double mu_value = 0.0;
        std::vector<int> modes;  // 1-based mode indices, ascending
    };
    std::vector<DegeneracyClass> degeneracy_classes;  // ascending in mu_value; tolerance 1e-9

    // eigenvalues of block j at parameter mu: (mu - mu_j) +- i omega
    std::complex<double> eigenvalue(int j, double mu_at, int sign) const {
        return {mu_at - mu_crit[j - 1], sign >= 0 ? omega : -omega};
    }
};

namespace detail {

// grouping tolerance for coinciding critical values; trig coincidences are
// exact in real arithmetic but not in floating point
constexpr double kDegeneracyTol = 1e-9;

inline std::vector<SpectralReport::DegeneracyClass> group_by_value(const std::vector<double>& mu_crit) {
    std::vector<SpectralReport::DegeneracyClass> classes;
    std::vector<int> order(mu_crit.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return mu_crit[a] < mu_crit[b]; });
    for (int idx : order) {
        if (!classes.empty() && std::abs(mu_crit[idx] - classes.back().mu_value) <= kDegeneracyTol) {
            classes.back().modes.push_back(idx + 1);
        } else {
            classes.push_back({mu_crit[idx], {idx + 1}});
        }
    }
    for (auto& cl : classes) std::sort(cl.modes.begin(), cl.modes.end());
    return classes;
}

}  // namespace detail

/// Compute all blocks M_j two ways -- the closed form and the numeric DFT
/// route M_j = sum_k w^{(j-1)(k-1)} F_2^* A_k F_2 -- and cross-check them
/// entrywise to 1e-10 before returning the report.
inline SpectralReport compute_blocks_M(const SystemParams& p) {
    p.validate();
    detail::require_ring(p);
    const BlockCirculantJacobian jac = build_jacobian_blocks(p);
    const int n = jac.n;
    const int s = p.topology.ring_s;

    SpectralReport rep;
    rep.n = n;
    rep.s = s;
    rep.mu = p.mu;
    rep.omega = p.omega.front();
    rep.c = p.c;

    rep.mu_crit.resize(n);
    rep.mu_crit[0] = 0.0;
    for (int j = 2; j <= n; ++j) rep.mu_crit[j - 1] = mu_critical(j, n, s, p.c);

    rep.M.resize(n);
    for (int j = 1; j <= n; ++j) rep.M[j - 1] = Mat2::rotationlike(p.mu - rep.mu_crit[j - 1], -rep.omega);
    // note the sign flip relative to A_1: M_j carries +omega in the upper
    // right, A_1 carries -omega (conjugation by F_2 swaps the off-diagonal)

    // numeric route through the Fourier diagonalization
    const ComplexMatrix f2 = fourier_matrix(2);
    const ComplexMatrix f2h = adjoint(f2);
    std::vector<ComplexMatrix> b(n);
    for (int k = 0; k < n; ++k) {
        ComplexMatrix ak(2, 2);
        for (int r = 0; r < 2; ++r)
            for (int cidx = 0; cidx < 2; ++cidx) ak(r, cidx) = jac.blocks[k].m[r][cidx];
        b[k] = f2h * ak * f2;
    }
    const double base = -2.0 * 3.14159265358979323846 / n;
    for (int j = 1; j <= n; ++j) {
        ComplexMatrix mj(2, 2);
        for (int k = 0; k < n; ++k) {
            const long long e = (static_cast<long long>(j - 1) * k) % n;
            const std::complex<double> w = std::polar(1.0, base * static_cast<double>(e));
            for (int r = 0; r < 2; ++r)
                for (int cidx = 0; cidx < 2; ++cidx) mj(r, cidx) += w * b[k](r, cidx);
        }
        for (int r = 0; r < 2; ++r)
            for (int cidx = 0; cidx < 2; ++cidx) {
                const std::complex<double> diff = mj(r, cidx) - rep.M[j - 1].m[r][cidx];
                if (std::abs(diff) > 1e-10)
                    throw std::runtime_error("compute_blocks_M: closed-form and DFT blocks disagree at mode " +
                                             std::to_string(j));
            }
    }

    const int half = n / 2;
    for (int j = 2; j <= (n % 2 == 0 ? half : half + 1); ++j) rep.pairs.emplace_back(j, n + 2 - j);
    if (n % 2 == 0) rep.unpaired_index = 1 + half;

    rep.degeneracy_classes = detail::group_by_value(rep.mu_crit);
    return rep;
}

struct CriticalityEntry {
    double mu = 0.0;
    std::vector<int> modes;   // contributing 1-based mode indices
    int imaginary_pairs = 0;  // one conjugate pair per contributing mode
    bool simple = false;      // exactly one contributing pair
};

struct HopfCriticalityTable {
    int n = 0, s = 0;
    double c = 0.0;
    std::vector<CriticalityEntry> entries;  // ascending in mu; entries[0] is mu = 0, mode 1
};

/// Enumerate the distinct critical parameter values, their contributing
/// modes, and whether each is simple. mu = 0 (the synchronous mode) is
/// always the first entry.
inline HopfCriticalityTable classify_criticalities(int n, int s, double c) {
    detail::validate_ring_params(n, s);
    std::vector<double> mu_crit(n);
    mu_crit[0] = 0.0;
    for (int j = 2; j <= n; ++j) mu_crit[j - 1] = mu_critical(j, n, s, c);
    HopfCriticalityTable table;
    table.n = n;
    table.s = s;
    table.c = c;
    for (const auto& cl : detail::group_by_value(mu_crit)) {
        CriticalityEntry e;
        e.mu = cl.mu_value;
        e.modes = cl.modes;
        e.imaginary_pairs = static_cast<int>(cl.modes.size());
        e.simple = e.imaginary_pairs == 1;
        table.entries.push_back(std::move(e));
    }
    return table;
}

/// Reconstruct (F_N (x) F_2)^* diag(M_1..M_N) (F_N (x) F_2), compare with
/// the assembled Jacobian entrywise, and check every analytic eigenpair
/// residual ||A v - lambda v||_inf. Returns the largest deviation found.
inline double verify_diagonalization(const BlockCirculantJacobian& jac, const SpectralReport& rep) {
    if (jac.n != rep.n) throw std::invalid_argument("verify_diagonalization: size mismatch");
    const int n = jac.n;
    const ComplexMatrix f = kron(fourier_matrix(n), fourier_matrix(2));
    const ComplexMatrix fh = adjoint(f);

    ComplexMatrix d(2 * n, 2 * n);
    for (int j = 0; j < n; ++j)
        for (int r = 0; r < 2; ++r)
            for (int cidx = 0; cidx < 2; ++cidx) d(2 * j + r, 2 * j + cidx) = rep.M[j].m[r][cidx];

    const ComplexMatrix reconstructed = fh * d * f;
    double residual = max_abs_diff(reconstructed, jac.assembled);

    // eigenpair residuals: v = (F_N (x) F_2)^* (e_j (x) u_pm) with
    // u_+ = (1, i)/sqrt(2), u_- = (1, -i)/sqrt(2)
    for (int j = 1; j <= n; ++j) {
        for (int sign : {+1, -1}) {
            const std::complex<double> lambda = rep.eigenvalue(j, rep.mu, sign);
            std::vector<std::complex<double>> v(2 * n);
            const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
            const std::complex<double> u0(inv_sqrt2, 0.0);
            const std::complex<double> u1(0.0, sign >= 0 ? inv_sqrt2 : -inv_sqrt2);
            for (int row = 0; row < 2 * n; ++row)
                v[row] = fh(row, 2 * (j - 1)) * u0 + fh(row, 2 * (j - 1) + 1) * u1;
            for (int row = 0; row < 2 * n; ++row) {
                std::complex<double> av = 0.0;
                for (int col = 0; col < 2 * n; ++col) av += jac.assembled(row, col) * v[col];
                residual = std::max(residual, std::abs(av - lambda * v[row]));
            }
        }
    }
    return residual;
}

// ---------------------------------------------------------------------------
// Export

/// CSV "j,mu_j,pair_partner,degeneracy_class,simple"; mode 1 partners
/// itself, as does the unpaired index for even N.
inline void write_spectral_csv(const SpectralReport& rep, std::ostream& os) {
    os << "j,mu_j,pair_partner,degeneracy_class,simple\n";
    for (int j = 1; j <= rep.n; ++j) {
        const int partner = j == 1 ? 1 : rep.n + 2 - j;
        int class_idx = -1;
        bool simple = false;
        for (size_t ci = 0; ci < rep.degeneracy_classes.size(); ++ci) {
            const auto& cl = rep.degeneracy_classes[ci];
            if (std::find(cl.modes.begin(), cl.modes.end(), j) != cl.modes.end()) {
                class_idx = static_cast<int>(ci);
                simple = cl.modes.size() == 1;
                break;
            }
        }
        os << j << ',';
        detail::write_g17(os, rep.mu_crit[j - 1]);
        os << ',' << partner << ',' << class_idx << ',' << (simple ? "true" : "false") << "\n";
    }
}

inline void write_criticality_table(const HopfCriticalityTable& table, std::ostream& os) {
    os << "critical parameter values for ring N=" << table.n << " s=" << table.s << " c=";
    detail::write_g17(os, table.c);
    os << "\n";
    for (const auto& e : table.entries) {
        os << "  mu = ";
        detail::write_g17(os, e.mu);
        os << "  modes {";
        for (size_t i = 0; i < e.modes.size(); ++i) os << (i ? "," : "") << e.modes[i];
        os << "}  imaginary pairs " << e.imaginary_pairs << "  " << (e.simple ? "simple" : "degenerate") << "\n";
    }
}

inline void write_markers_csv(const HopfCriticalityTable& table, std::ostream& os) {
    os << "mu_crit,modes,simple\n";
    for (const auto& e : table.entries) {
        detail::write_g17(os, e.mu);
        os << ',';
        for (size_t i = 0; i < e.modes.size(); ++i) os << (i ? ";" : "") << e.modes[i];
        os << ',' << (e.simple ? "true" : "false") << "\n";
    }
}

}  // namespace slnet
