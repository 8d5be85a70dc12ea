#pragma once

// Small dense real/complex matrices and a cyclic Jacobi eigensolver.
// Everything here targets desk-scale problems (N up to a few hundred);
// storage is row-major std::vector, no external linear-algebra dependency.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace slnet {

struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0) : rows(r), cols(c), a(static_cast<size_t>(r) * c, fill) {}

    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool is_symmetric(double tol = 0.0) const {
        if (rows != cols) return false;
        for (int i = 0; i < rows; ++i)
            for (int j = i + 1; j < cols; ++j)
                if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
        return true;
    }
};

struct ComplexMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::complex<double>> a;

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    std::complex<double>& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    std::complex<double> operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

inline ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix r(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r(j, i) = std::conj(m(i, j));
    return r;
}

inline ComplexMatrix operator*(const ComplexMatrix& x, const ComplexMatrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("complex matmul: dimension mismatch");
    ComplexMatrix r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const std::complex<double> xik = x(i, k);
            if (xik == 0.0) continue;
            for (int j = 0; j < y.cols; ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

// Kronecker product: (x ⊗ y)[(i*yr+p, j*yc+q)] = x(i,j) * y(p,q).
inline ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
    ComplexMatrix r(x.rows * y.rows, x.cols * y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) {
            const std::complex<double> xij = x(i, j);
            for (int p = 0; p < y.rows; ++p)
                for (int q = 0; q < y.cols; ++q) r(i * y.rows + p, j * y.cols + q) = xij * y(p, q);
        }
    return r;
}

inline double max_abs(const ComplexMatrix& m) {
    double r = 0.0;
    for (const auto& v : m.a) r = std::max(r, std::abs(v));
    return r;
}

// max |x - y| entrywise, where y is real
inline double max_abs_diff(const ComplexMatrix& x, const Matrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("max_abs_diff: shape mismatch");
    double r = 0.0;
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r = std::max(r, std::abs(x(i, j) - y(i, j)));
    return r;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending. Sweeps run until max |off-diagonal| < tol. Throws if the
/// input is not square/symmetric or the sweep cap is hit.
inline std::vector<double> symmetric_eigenvalues(Matrix m, double tol = 1e-12) {
    if (m.rows != m.cols) throw std::invalid_argument("symmetric_eigenvalues: matrix not square");
    if (!m.is_symmetric(1e-12)) throw std::invalid_argument("symmetric_eigenvalues: matrix not symmetric");
    const int n = m.rows;

    auto max_offdiag = [&]() {
        double r = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) r = std::max(r, std::abs(m(p, q)));
        return r;
    };

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (max_offdiag() < tol) {
            std::vector<double> ev(n);
            for (int i = 0; i < n; ++i) ev[i] = m(i, i);
            std::sort(ev.begin(), ev.end());
            return ev;
        }
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (std::abs(apq) < tol * 1e-3) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                m(p, p) -= t * apq;
                m(q, q) += t * apq;
                m(p, q) = m(q, p) = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = m(r, p);
                    const double arq = m(r, q);
                    m(r, p) = m(p, r) = arp - s * (arq + tau * arp);
                    m(r, q) = m(q, r) = arq + s * (arp - tau * arq);
                }
            }
        }
    }
    throw std::runtime_error("symmetric_eigenvalues: Jacobi sweeps did not converge");
}

}  // namespace slnet
