#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ruinkit/errors.hpp"
#include "ruinkit/poly.hpp"

namespace ruinkit {

/// Dense square complex matrix used throughout the solver.
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

namespace detail {

inline Cx cofactor_det(const CMatrix& m) {
    // direct determinant for the cofactor path (matrices here are tiny)
    return m.determinant();
}

inline CMatrix adjugate_cofactor(const CMatrix& m) {
    const Eigen::Index n = m.rows();
    CMatrix adj(n, n);
    CMatrix minor(n - 1, n - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            Eigen::Index r = 0;
            for (Eigen::Index a = 0; a < n; ++a) {
                if (a == i) continue;
                Eigen::Index c = 0;
                for (Eigen::Index b = 0; b < n; ++b) {
                    if (b == j) continue;
                    minor(r, c) = m(a, b);
                    ++c;
                }
                ++r;
            }
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            adj(j, i) = sign * cofactor_det(minor); // transpose of cofactor matrix
        }
    }
    return adj;
}

} // namespace detail

/// Adjugate matrix: m * adjugate(m) = det(m) * I, defined for singular m too.
/// Cofactor expansion for n <= 4; det * inverse for larger matrices with a
/// cofactor fallback near singularity.
inline CMatrix adjugate(const CMatrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1) throw Error("adjugate: matrix must be square, n >= 1");
    const Eigen::Index n = m.rows();
    if (n == 1) {
        CMatrix one(1, 1);
        one(0, 0) = Cx(1.0);
        return one;
    }
    if (n <= 4) return detail::adjugate_cofactor(m);
    const Cx det = m.determinant();
    const double scale = std::pow(m.norm() / std::sqrt(static_cast<double>(n)), static_cast<double>(n));
    if (std::abs(det) < 1e-10 * std::max(scale, 1e-300)) return detail::adjugate_cofactor(m);
    return det * m.inverse();
}

/// Result of the Faddeev-LeVerrier recursion for a matrix A:
/// char_poly(s) = det(sI - A) (monic, ascending coefficients) and the matrix
/// coefficients of adj(sI - A) = sum_k adj_coeffs[k] * s^k, k = 0..n-1.
struct CharPolyExpansion {
    Poly char_poly;
    std::vector<CMatrix> adj_coeffs;

    CMatrix adj_at(Cx s) const {
        CMatrix acc = adj_coeffs.back();
        for (int k = static_cast<int>(adj_coeffs.size()) - 2; k >= 0; --k)
            acc = (acc * s + adj_coeffs[k]).eval();
        return acc;
    }
};

inline CharPolyExpansion faddeev_leverrier(const CMatrix& A) {
    const Eigen::Index n = A.rows();
    if (n != A.cols() || n < 1) throw Error("faddeev_leverrier: matrix must be square, n >= 1");
    std::vector<Cx> coeffs(n + 1, Cx(0.0));
    coeffs[n] = Cx(1.0);
    std::vector<CMatrix> adj(n, CMatrix::Zero(n, n));
    CMatrix M = CMatrix::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        adj[n - k] = M; // coefficient of s^{n-k}
        const CMatrix AM = A * M;
        const Cx c = -AM.trace() / Cx(static_cast<double>(k));
        coeffs[n - k] = c;
        M = AM + c * CMatrix::Identity(n, n);
    }
    return {Poly(std::move(coeffs)), std::move(adj)};
}

} // namespace ruinkit
