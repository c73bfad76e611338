#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace permwave {

/// Dense real matrix, row-major. Only the handful of operations the channel
/// model needs.
struct Matrix {
    std::size_t n = 0;
    std::vector<double> a;  // n*n

    explicit Matrix(std::size_t size = 0) : n(size), a(size * size, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    static Matrix identity(std::size_t size) {
        Matrix m(size);
        for (std::size_t i = 0; i < size; ++i) m(i, i) = 1.0;
        return m;
    }
};

struct EigenDecomposition {
    Matrix vectors;                   // columns are eigenvectors
    std::vector<double> values;      // matching eigenvalues
};

/// Cyclic Jacobi eigendecomposition for real symmetric matrices. Plenty for
/// the antenna counts involved here; converges to ~1e-15 off-diagonal mass.
inline EigenDecomposition jacobi_eigen_symmetric(Matrix m, bool sort_descending = true) {
    const std::size_t n = m.n;
    Matrix v = Matrix::identity(n);
    for (int sweep = 0; sweep < 128; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
        if (off < 1e-30) break;
        for (std::size_t pp = 0; pp + 1 < n; ++pp) {
            for (std::size_t qq = pp + 1; qq < n; ++qq) {
                const double apq = m(pp, qq);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (m(qq, qq) - m(pp, pp)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m(k, pp), mkq = m(k, qq);
                    m(k, pp) = c * mkp - s * mkq;
                    m(k, qq) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(pp, k), mqk = m(qq, k);
                    m(pp, k) = c * mpk - s * mqk;
                    m(qq, k) = s * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, pp), vkq = v(k, qq);
                    v(k, pp) = c * vkp - s * vkq;
                    v(k, qq) = s * vkp + c * vkq;
                }
            }
        }
    }
    EigenDecomposition eig{Matrix(n), std::vector<double>(n)};
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    if (sort_descending) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (m(order[j], order[j]) > m(order[i], order[i])) std::swap(order[i], order[j]);
    }
    for (std::size_t col = 0; col < n; ++col) {
        eig.values[col] = m(order[col], order[col]);
        for (std::size_t row = 0; row < n; ++row) eig.vectors(row, col) = v(row, order[col]);
    }
    return eig;
}

}  // namespace permwave
