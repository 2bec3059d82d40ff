#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ruinkit/divided_differences.hpp"
#include "ruinkit/errors.hpp"
#include "ruinkit/matrix.hpp"
#include "ruinkit/model.hpp"
#include "ruinkit/poly.hpp"

namespace ruinkit {

/// L(s) = a(s) I + B + b^T alpha p_hat(s).
inline CMatrix eval_L(const RiskModel& model, Cx s) {
    const int n = model.n();
    const Cx phat = model.claims.lt(s); // throws at poles of p_hat
    CMatrix L = model.a_of_s(s) * CMatrix::Identity(n, n) + model.interclaims.B().cast<Cx>();
    L += (model.interclaims.b() * model.interclaims.alpha().transpose()).cast<Cx>() * phat;
    return L;
}

/// Exact coefficients of r_m(s) det L(s), assembled as
///   r_m(s) q(a(s)) - (-1)^n n_k(-a(s)) r_{m-1}(s)
/// where q(z) = det(zI + B) and n_k(z) = alpha adj(zI - B) b^T, both from
/// Faddeev-LeVerrier. Degree m + 2n, leading coefficient (sigma^2/2)^n.
inline Poly char_poly(const RiskModel& model) {
    const int n = model.n();
    const CMatrix Bc = model.interclaims.B().cast<Cx>();
    const Poly q = faddeev_leverrier(-Bc).char_poly; // det(zI + B)
    const auto fl = faddeev_leverrier(Bc);
    std::vector<Cx> nk_coeffs(n, Cx(0.0));
    const CVector bc = model.interclaims.b().cast<Cx>();
    const Eigen::RowVectorXcd ac = model.interclaims.alpha().transpose().cast<Cx>();
    for (int k = 0; k < n; ++k) nk_coeffs[k] = (ac * fl.adj_coeffs[k] * bc).value();
    const Poly nk(std::move(nk_coeffs));

    const Poly a({Cx(-model.delta), Cx(model.c), Cx(0.5 * model.sigma * model.sigma)});
    const Poly neg_a = a.scaled(Cx(-1.0));
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    Poly h = model.claims.r_bot() * q.compose(a) -
             nk.compose(neg_a).scaled(Cx(sign)) * model.claims.r_top();
    if (!h.is_real(1e-9)) throw NumericError("char_poly: assembled polynomial has non-real coefficients");
    return h.real_part();
}

/// Classified roots of the generalized Lundberg equation: rhos have positive
/// real part (one exact zero when delta = 0), Rs hold the positive values
/// R_i whose negatives -R_i are the remaining roots.
struct LundbergRoots {
    std::vector<Cx> rhos;          // size n, sorted by (Re, Im)
    std::vector<Cx> Rs;            // size m + n, sorted by (Re, Im)
    Poly char_poly;                // r_m(s) det L(s)
    std::vector<double> residuals; // |det L| at each root, rhos then -R_i
};

namespace detail {

/// Pair near-conjugate values and make the multiset exactly conjugate-closed.
/// The characteristic polynomial has real coefficients, so genuine roots come
/// in conjugate pairs; this removes eigen-solver asymmetry.
inline void symmetrize_conjugates(std::vector<Cx>& roots) {
    double scale = 1.0;
    for (const Cx& r : roots) scale = std::max(scale, std::abs(r));
    const double tol = 1e-8 * scale;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        if (std::abs(roots[i].imag()) <= tol) {
            roots[i] = Cx(roots[i].real(), 0.0);
            used[i] = true;
            continue;
        }
        std::size_t best = i;
        double best_d = std::numeric_limits<double>::max();
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(roots[j] - std::conj(roots[i]));
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        if (best == i || best_d > tol * 10.0)
            throw RootCountMismatch("find_roots: complex root without a conjugate partner");
        const Cx mean = 0.5 * (roots[i] + std::conj(roots[best]));
        roots[i] = mean;
        roots[best] = std::conj(mean);
        used[i] = used[best] = true;
    }
}

inline void sort_by_re_im(std::vector<Cx>& v) {
    std::sort(v.begin(), v.end(), [](Cx a, Cx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

} // namespace detail

/// Finds and classifies the m + 2n roots of r_m(s) det L(s). Throws
/// RootCountMismatch if the sign pattern violates the root-count theorem
/// (which signals numerical failure or a model outside the assumptions),
/// DegenerateRoots on near-coincident roots, and ImaginaryAxisRoot when a
/// delta > 0 root cannot be classified.
inline LundbergRoots find_roots(const RiskModel& model) {
    const int n = model.n();
    const int m = model.m();
    Poly h = char_poly(model);
    if (h.degree() != m + 2 * n)
        throw RootCountMismatch("find_roots: characteristic polynomial has unexpected degree");
    std::vector<Cx> roots = poly_roots(h);
    detail::symmetrize_conjugates(roots);

    // snap the analytically-exact zero root at delta = 0
    if (model.delta == 0.0) {
        std::size_t imin = 0;
        for (std::size_t i = 1; i < roots.size(); ++i)
            if (std::abs(roots[i]) < std::abs(roots[imin])) imin = i;
        if (std::abs(roots[imin]) < 1e-8) roots[imin] = Cx(0.0);
    }

    LundbergRoots out;
    out.char_poly = h;
    for (const Cx& r : roots) {
        if (r == Cx(0.0) && model.delta == 0.0) {
            out.rhos.push_back(r);
        } else if (r.real() > 1e-9) {
            out.rhos.push_back(r);
        } else if (r.real() < -1e-9) {
            out.Rs.push_back(-r);
        } else {
            throw ImaginaryAxisRoot("find_roots: root " + std::to_string(r.real()) + "+" +
                                    std::to_string(r.imag()) + "i cannot be classified");
        }
    }
    if (static_cast<int>(out.rhos.size()) != n || static_cast<int>(out.Rs.size()) != m + n)
        throw RootCountMismatch("find_roots: expected " + std::to_string(n) + " roots with positive and " +
                                std::to_string(m + n) + " with negative real part, got " +
                                std::to_string(out.rhos.size()) + " / " + std::to_string(out.Rs.size()));
    detail::sort_by_re_im(out.rhos);
    detail::sort_by_re_im(out.Rs);
    check_nodes_distinct(out.rhos);
    check_nodes_distinct(out.Rs);

    for (const Cx& r : out.rhos) out.residuals.push_back(std::abs(eval_L(model, r).determinant()));
    for (const Cx& R : out.Rs) out.residuals.push_back(std::abs(eval_L(model, -R).determinant()));
    return out;
}

} // namespace ruinkit
