#pragma once

// Hopf normal-form coefficients of the synchronous reduced system
//
//   x' = mu x - omega y - x (x^2 + y^2)
//   y' = omega x + mu y - y (x^2 + y^2)
//
// at mu = 0. Partial derivatives come either from the hard-coded analytic
// table of this cubic or from a generic central-difference engine, which
// doubles as the oracle and keeps the module usable if the local
// nonlinearity is ever swapped out.

#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>

#include "slnet/dynamics.hpp"

namespace slnet {

struct ReducedRhs {
    double f1 = 0.0;
    double f2 = 0.0;
};

inline ReducedRhs reduced_rhs(double x, double y, double mu, double omega) {
    const double q = x * x + y * y;
    return {mu * x - omega * y - x * q, omega * x + mu * y - y * q};
}

/// Second- and third-order partials of (F1, F2) at the origin.
/// Order: second = {xx, xy, yy}, third = {xxx, xxy, xyy, yyy}.
struct PartialsTable {
    double d2F1[3] = {0, 0, 0};
    double d2F2[3] = {0, 0, 0};
    double d3F1[4] = {0, 0, 0, 0};
    double d3F2[4] = {0, 0, 0, 0};
};

inline PartialsTable partials_analytic(double /*mu*/, double /*omega*/) {
    // the cubic has no quadratic terms; the only nonzero third partials are
    // F1_xxx = -6, F1_xyy = -2, F2_xxy = -2, F2_yyy = -6
    PartialsTable t;
    t.d3F1[0] = -6.0;
    t.d3F1[2] = -2.0;
    t.d3F2[1] = -2.0;
    t.d3F2[3] = -6.0;
    return t;
}

namespace detail {

template <typename F1, typename F2>
inline PartialsTable fd_partials(F1&& f1, F2&& f2, double h) {
    auto table_at = [&](double hh) {
        PartialsTable t;
        auto second = [&](auto&& f, int which) {
            // which: 0 = xx, 1 = xy, 2 = yy
            if (which == 0) return (f(hh, 0.0) - 2.0 * f(0.0, 0.0) + f(-hh, 0.0)) / (hh * hh);
            if (which == 2) return (f(0.0, hh) - 2.0 * f(0.0, 0.0) + f(0.0, -hh)) / (hh * hh);
            return (f(hh, hh) - f(hh, -hh) - f(-hh, hh) + f(-hh, -hh)) / (4.0 * hh * hh);
        };
        auto third = [&](auto&& f, int which) {
            // which: 0 = xxx, 1 = xxy, 2 = xyy, 3 = yyy
            switch (which) {
                case 0:
                    return (f(2.0 * hh, 0.0) - 2.0 * f(hh, 0.0) + 2.0 * f(-hh, 0.0) - f(-2.0 * hh, 0.0)) /
                           (2.0 * hh * hh * hh);
                case 3:
                    return (f(0.0, 2.0 * hh) - 2.0 * f(0.0, hh) + 2.0 * f(0.0, -hh) - f(0.0, -2.0 * hh)) /
                           (2.0 * hh * hh * hh);
                case 1:
                    // d/dy of f_xx by central difference
                    return ((f(hh, hh) - 2.0 * f(0.0, hh) + f(-hh, hh)) -
                            (f(hh, -hh) - 2.0 * f(0.0, -hh) + f(-hh, -hh))) /
                           (2.0 * hh * hh * hh);
                default:
                    // d/dx of f_yy by central difference
                    return ((f(hh, hh) - 2.0 * f(hh, 0.0) + f(hh, -hh)) -
                            (f(-hh, hh) - 2.0 * f(-hh, 0.0) + f(-hh, -hh))) /
                           (2.0 * hh * hh * hh);
            }
        };
        for (int w = 0; w < 3; ++w) {
            t.d2F1[w] = second(f1, w);
            t.d2F2[w] = second(f2, w);
        }
        for (int w = 0; w < 4; ++w) {
            t.d3F1[w] = third(f1, w);
            t.d3F2[w] = third(f2, w);
        }
        return t;
    };
    // Richardson: central differences have O(h^2) error, so (4 D(h/2) - D(h)) / 3
    const PartialsTable coarse = table_at(h);
    const PartialsTable fine = table_at(h / 2.0);
    PartialsTable t;
    for (int w = 0; w < 3; ++w) {
        t.d2F1[w] = (4.0 * fine.d2F1[w] - coarse.d2F1[w]) / 3.0;
        t.d2F2[w] = (4.0 * fine.d2F2[w] - coarse.d2F2[w]) / 3.0;
    }
    for (int w = 0; w < 4; ++w) {
        t.d3F1[w] = (4.0 * fine.d3F1[w] - coarse.d3F1[w]) / 3.0;
        t.d3F2[w] = (4.0 * fine.d3F2[w] - coarse.d3F2[w]) / 3.0;
    }
    return t;
}

}  // namespace detail

/// Central-difference partials of the reduced system at the origin with
/// Richardson refinement over (h, h/2). h must lie in [1e-5, 1e-2].
inline PartialsTable partials_finite_difference(double mu, double omega, double h = 1e-3) {
    if (!(h >= 1e-5 && h <= 1e-2)) throw std::invalid_argument("partials_finite_difference: h out of [1e-5, 1e-2]");
    auto f1 = [&](double x, double y) { return reduced_rhs(x, y, mu, omega).f1; };
    auto f2 = [&](double x, double y) { return reduced_rhs(x, y, mu, omega).f2; };
    return detail::fd_partials(f1, f2, h);
}

struct HopfCoefficients {
    std::complex<double> g11, g02, g20, g21, C1_0;
    double p2 = 0.0;     // -Re C1(0) / Re lambda'(0); sign decides the direction
    double zeta2 = 0.0;  // 2 Re C1(0); sign decides orbital stability
    double T2 = 0.0;     // period correction
    enum class Classification { Supercritical, Subcritical, Degenerate } classification = Classification::Degenerate;
    enum class Stability { Stable, Unstable, Undetermined } stability = Stability::Undetermined;
};

/// Normal-form coefficients at the mu = 0 bifurcation of the reduced
/// system. The eigenvalue pair is lambda(mu) = mu +- i omega, so
/// Re lambda'(0) = 1 and Im lambda'(0) = 0 enter the formulas as
/// constants. Requires omega != 0.
inline HopfCoefficients normal_form(double omega, const PartialsTable& t) {
    if (omega == 0.0) throw std::invalid_argument("normal_form: omega must be nonzero (C1 carries a 1/omega factor)");
    using C = std::complex<double>;
    const C i(0.0, 1.0);

    HopfCoefficients h;
    h.g11 = 0.25 * C(t.d2F1[0] + t.d2F1[2], t.d2F2[0] + t.d2F2[2]);
    h.g02 = 0.25 * C(t.d2F1[0] - t.d2F1[2] - 2.0 * t.d2F2[1], t.d2F2[0] - t.d2F2[2] + 2.0 * t.d2F1[1]);
    h.g20 = 0.25 * C(t.d2F1[0] - t.d2F1[2] + 2.0 * t.d2F2[1], t.d2F2[0] - t.d2F2[2] - 2.0 * t.d2F1[1]);
    // two-dimensional system: g21 equals the G21 combination directly
    h.g21 = 0.125 * C(t.d3F1[0] + t.d3F1[2] + t.d3F2[1] + t.d3F2[3], t.d3F2[0] + t.d3F2[2] - t.d3F1[1] - t.d3F1[3]);

    h.C1_0 = i / (2.0 * omega) * (h.g20 * h.g11 - 2.0 * std::norm(h.g11) - std::norm(h.g02) / 3.0) + h.g21 / 2.0;

    const double re_lambda_prime = 1.0;
    const double im_lambda_prime = 0.0;
    h.p2 = -h.C1_0.real() / re_lambda_prime;
    h.zeta2 = 2.0 * h.C1_0.real();
    h.T2 = -(h.C1_0.imag() + h.p2 * im_lambda_prime) / omega;
    h.T2 += 0.0;  // clear a negative zero

    h.classification = h.p2 > 0.0   ? HopfCoefficients::Classification::Supercritical
                  : h.p2 < 0.0 ? HopfCoefficients::Classification::Subcritical
                               : HopfCoefficients::Classification::Degenerate;
    h.stability = h.zeta2 < 0.0   ? HopfCoefficients::Stability::Stable
                  : h.zeta2 > 0.0 ? HopfCoefficients::Stability::Unstable
                                  : HopfCoefficients::Stability::Undetermined;
    return h;
}

inline HopfCoefficients normal_form(double omega) { return normal_form(omega, partials_analytic(0.0, omega)); }

inline void write_hopf_coefficients(const HopfCoefficients& h, std::ostream& os) {
    auto complex_kv = [&os](const char* key, std::complex<double> v) {
        os << key << " = ";
        detail::write_g17(os, v.real());
        if (v.imag() != 0.0) {
            os << (v.imag() > 0 ? " + " : " - ");
            detail::write_g17(os, std::abs(v.imag()));
            os << "i";
        }
        os << "\n";
    };
    complex_kv("g11", h.g11);
    complex_kv("g02", h.g02);
    complex_kv("g20", h.g20);
    complex_kv("g21", h.g21);
    complex_kv("C1(0)", h.C1_0);
    auto kv = [&os](const char* key, double v) {
        os << key << " = ";
        detail::write_g17(os, v);
        os << "\n";
    };
    kv("p2", h.p2);
    kv("zeta2", h.zeta2);
    kv("T2", h.T2);
    os << "classification = "
       << (h.classification == HopfCoefficients::Classification::Supercritical   ? "supercritical"
           : h.classification == HopfCoefficients::Classification::Subcritical ? "subcritical"
                                                                       : "degenerate")
       << "\n";
    os << "stability = "
       << (h.stability == HopfCoefficients::Stability::Stable     ? "stable"
           : h.stability == HopfCoefficients::Stability::Unstable ? "unstable"
                                                                  : "undetermined")
       << "\n";
}

}  // namespace slnet
