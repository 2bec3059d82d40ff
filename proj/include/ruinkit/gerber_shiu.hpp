#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ruinkit/divided_differences.hpp"
#include "ruinkit/errors.hpp"
#include "ruinkit/exppoly.hpp"
#include "ruinkit/lundberg.hpp"
#include "ruinkit/matrix.hpp"
#include "ruinkit/model.hpp"

namespace ruinkit {

/// L*(s): adjugate of L(s).
inline CMatrix eval_L_star(const RiskModel& model, Cx s) { return adjugate(eval_L(model, s)); }

namespace detail {

/// Divided-difference table of L* over the rho nodes.
inline DividedDifferenceTable<CMatrix> lstar_table(const RiskModel& model, const std::vector<Cx>& rhos) {
    std::vector<CMatrix> vals;
    vals.reserve(rhos.size());
    for (const Cx& r : rhos) vals.push_back(eval_L_star(model, r));
    return DividedDifferenceTable<CMatrix>(rhos, std::move(vals));
}

/// L*[rho_1..rho_{n-1}, x] and L*[rho_1..rho_n, x] in one table, using the
/// node ordering (rho_1..rho_{n-1}, x, rho_n); divided differences are
/// symmetric in their nodes, so contiguous ranges of this ordering give both.
struct LstarAtExtra {
    CMatrix up_to_nm1; // L*[rho_1..rho_{n-1}, x]
    CMatrix up_to_n;   // L*[rho_1..rho_n, x]
};

inline LstarAtExtra lstar_with_extra_node(const RiskModel& model, const std::vector<Cx>& rhos, Cx x) {
    const std::size_t n = rhos.size();
    std::vector<Cx> nodes(rhos.begin(), rhos.end() - 1);
    nodes.push_back(x);
    nodes.push_back(rhos.back());
    std::vector<CMatrix> vals;
    vals.reserve(nodes.size());
    for (const Cx& z : nodes) vals.push_back(eval_L_star(model, z));
    DividedDifferenceTable<CMatrix> t(std::move(nodes), std::move(vals));
    return {t.value(0, n - 1), t.value(0, n)};
}

inline Cx prod_gaps(const std::vector<Cx>& Rs, std::size_t i) {
    Cx p(1.0);
    for (std::size_t l = 0; l < Rs.size(); ++l)
        if (l != i) p *= Rs[l] - Rs[i];
    return p;
}

} // namespace detail

/// phi'_w(0) and phi'_d(0) from the divided-difference linear systems over
/// the right-half-plane roots.
inline std::pair<CVector, CVector> derivatives_at_zero(const RiskModel& model, const LundbergRoots& roots) {
    const int n = model.n();
    const double s2h = 0.5 * model.sigma * model.sigma;
    const ExpPoly om = omega(model.claims, model.penalty);
    const auto Lt = detail::lstar_table(model, roots.rhos);

    std::vector<Cx> om_vals;
    om_vals.reserve(n);
    for (const Cx& r : roots.rhos) om_vals.push_back(om.laplace(r));
    DividedDifferenceTable<Cx> om_t(roots.rhos, std::move(om_vals));

    const CVector b = model.interclaims.b().cast<Cx>();
    const CVector e = CVector::Ones(n);

    CMatrix S = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) S += Lt.prefix(i) * om_t.value(i, n - 1);

    const CMatrix Lfull = Lt.prefix(n - 1); // L*[rho_1..rho_n]
    Eigen::FullPivLU<CMatrix> lu(Lfull);
    if (!lu.isInvertible())
        throw SingularDividedDifference("derivatives_at_zero: L*[rho_1..rho_n] is not invertible");

    const CVector phi_w_p0 = (1.0 / s2h) * lu.solve(CVector(S * b));
    CVector rhs = Lfull * e * (s2h * roots.rhos.back() + model.c);
    if (n >= 2) rhs += s2h * (Lt.prefix(n - 2) * e);
    const CVector phi_d_p0 = -(1.0 / s2h) * lu.solve(rhs);
    return {phi_w_p0, phi_d_p0};
}

/// Q_w(s) = sigma^2/2 phi'_w(0) - omega_hat(s) b^T.
inline CVector q_w(const RiskModel& model, Cx s, const CVector& phi_w_prime0) {
    const double s2h = 0.5 * model.sigma * model.sigma;
    return s2h * phi_w_prime0 -
           omega_hat(model.claims, model.penalty, s) * model.interclaims.b().cast<Cx>();
}

/// Q_d(s) has components sigma^2/2 phi'_d(0; i) + sigma^2/2 s + c.
inline CVector q_d(const RiskModel& model, Cx s, const CVector& phi_d_prime0) {
    const double s2h = 0.5 * model.sigma * model.sigma;
    return s2h * phi_d_prime0 + (s2h * s + model.c) * CVector::Ones(phi_d_prime0.size());
}

/// Partial-fraction coefficients at the poles -R_i:
///   M_i^(j) = r_m(-R_i) L*[rho_1..rho_j, -R_i] / prod_{l != i} (R_l - R_i),  j = n-1, n
///   G_i     = r_m(-R_i) / prod_{l != i} (R_l - R_i)
struct PartialFractionCoeffs {
    std::vector<CMatrix> M_n;   // j = n
    std::vector<CMatrix> M_nm1; // j = n - 1
    std::vector<Cx> G;
};

inline PartialFractionCoeffs partial_fraction_coeffs(const RiskModel& model, const LundbergRoots& roots) {
    PartialFractionCoeffs out;
    const Poly& rm = model.claims.r_bot();
    for (std::size_t i = 0; i < roots.Rs.size(); ++i) {
        const Cx x = -roots.Rs[i];
        const auto ls = detail::lstar_with_extra_node(model, roots.rhos, x);
        const Cx denom = detail::prod_gaps(roots.Rs, i);
        if (std::abs(denom) == 0.0) throw DegenerateRoots("partial fractions: coincident R values");
        const Cx scale = rm.eval(x) / denom;
        out.M_n.push_back(scale * ls.up_to_n);
        out.M_nm1.push_back(scale * ls.up_to_nm1);
        out.G.push_back(scale);
    }
    return out;
}

struct SolveDiagnostics {
    double boundary_w = 0.0;   // max |phi_w(0; i)|
    double boundary_d = 0.0;   // max |phi_d(0; i) - 1|
    double residual_w = 0.0;   // scaled equation residual, max over the default grid
    double residual_d = 0.0;
    double max_imag = 0.0;     // largest imaginary part seen at real evaluation points
};

/// Closed-form solution bundle: per-phase functions, the alpha-weighted
/// scalar phi = alpha (phi_w + w0 phi_d), derivative vectors at zero, the
/// classified roots, the partial-fraction coefficients, and diagnostics.
struct GerberShiuSolution {
    std::vector<ExpPoly> phi_w;
    std::vector<ExpPoly> phi_d;
    ExpPoly phi;
    CVector phi_w_prime0;
    CVector phi_d_prime0;
    LundbergRoots roots;
    PartialFractionCoeffs coeffs;
    SolveDiagnostics diagnostics;

    /// alpha-weighted scalar components.
    Cx value_w(double u, const Eigen::VectorXd& alpha) const { return weighted(phi_w, alpha, u); }
    Cx value_d(double u, const Eigen::VectorXd& alpha) const { return weighted(phi_d, alpha, u); }

private:
    static Cx weighted(const std::vector<ExpPoly>& fs, const Eigen::VectorXd& alpha, double u) {
        Cx acc(0.0);
        for (std::size_t i = 0; i < fs.size(); ++i) acc += alpha(static_cast<int>(i)) * fs[i].evaluate(u);
        return acc;
    }
};

struct ResidualReport {
    double residual_w = 0.0; // max scaled residual over the probe points
    double residual_d = 0.0;
};

/// Substitute the closed forms back into the integro-differential systems and
/// report the largest residual over the probe points, scaled by the largest
/// coefficient among the equation pieces.
inline ResidualReport equation_residuals(const RiskModel& model, const GerberShiuSolution& sol,
                                         std::span<const double> us) {
    const int n = model.n();
    const double s2h = 0.5 * model.sigma * model.sigma;
    const Eigen::MatrixXd& B = model.interclaims.B();
    const Eigen::VectorXd& b = model.interclaims.b();
    const Eigen::VectorXd& alpha = model.interclaims.alpha();
    const ExpPoly om = omega(model.claims, model.penalty);

    auto assemble = [&](const std::vector<ExpPoly>& phis, bool with_omega) {
        ExpPoly weighted;
        for (int j = 0; j < n; ++j) weighted = weighted + phis[j].scaled(alpha(j));
        const ExpPoly conv = weighted.convolve(model.claims.density());
        double scale = std::max(1.0, conv.max_abs_coeff());
        if (with_omega) scale = std::max(scale, om.max_abs_coeff());
        std::vector<ExpPoly> res(n);
        for (int i = 0; i < n; ++i) {
            ExpPoly r = phis[i].derivative(2).scaled(s2h) + phis[i].derivative().scaled(model.c) +
                        phis[i].scaled(-model.delta);
            for (int j = 0; j < n; ++j) r = r + phis[j].scaled(B(i, j));
            ExpPoly tail = conv;
            if (with_omega) tail = tail + om;
            r = r + tail.scaled(b(i));
            scale = std::max({scale, phis[i].derivative(2).scaled(s2h).max_abs_coeff(),
                              phis[i].derivative().scaled(model.c).max_abs_coeff()});
            res[i] = std::move(r);
        }
        double worst = 0.0;
        for (const ExpPoly& r : res)
            for (double u : us) worst = std::max(worst, std::abs(r.evaluate(u)));
        return worst / scale;
    };

    return {assemble(sol.phi_w, true), assemble(sol.phi_d, false)};
}

/// Closed-form inversion with a caller-supplied root bundle (the root order
/// does not change the answer; exposed for order-invariance checks).
inline GerberShiuSolution solve_with_roots(const RiskModel& model, LundbergRoots roots) {
    const int n = model.n();
    const int mn = n + model.m();
    const double s2h = 0.5 * model.sigma * model.sigma;
    const double pref = std::pow(1.0 / s2h, n);
    const CVector b = model.interclaims.b().cast<Cx>();
    const CVector e = CVector::Ones(n);

    GerberShiuSolution sol;
    auto [pw0, pd0] = derivatives_at_zero(model, roots);
    sol.phi_w_prime0 = pw0;
    sol.phi_d_prime0 = pd0;
    sol.coeffs = partial_fraction_coeffs(model, roots);

    const Cx rho_n = roots.rhos.back();
    const CVector Qw = q_w(model, rho_n, pw0);
    const CVector Qd = q_d(model, rho_n, pd0);
    const ExpPoly om = omega(model.claims, model.penalty);
    const auto Lt = detail::lstar_table(model, roots.rhos);

    // T-operator chains  w_chain[l] = (T_{rho_{l+1}} ... T_{rho_n}) omega, l = n-1 .. 0
    std::vector<ExpPoly> chain(n);
    chain[n - 1] = om.dickson_hipp(rho_n);
    for (int l = n - 2; l >= 0; --l) chain[l] = chain[l + 1].dickson_hipp(roots.rhos[l]);

    sol.phi_w.assign(n, ExpPoly());
    sol.phi_d.assign(n, ExpPoly());
    for (int i = 0; i < mn; ++i) {
        const ExpPoly eR = ExpPoly::term(Cx(1.0), roots.Rs[i], 0);
        const CVector head_w = sol.coeffs.M_n[i] * Qw;
        const CVector head_d = sol.coeffs.M_n[i] * Qd + s2h * (sol.coeffs.M_nm1[i] * e);
        const CVector Mb = sol.coeffs.M_nm1[i] * b;
        for (int ph = 0; ph < n; ++ph) {
            ExpPoly inner = chain[n - 1].scaled(Mb(ph));
            for (int l = 1; l <= n - 1; ++l) {
                const Cx Lb = (Lt.prefix(l - 1) * b)(ph);
                const double sign = ((n - l) % 2 == 0) ? 1.0 : -1.0;
                inner = inner + chain[l - 1].scaled(sol.coeffs.G[i] * sign * Lb);
            }
            sol.phi_w[ph] = sol.phi_w[ph] + eR.scaled(head_w(ph)) + eR.convolve(inner);
            sol.phi_d[ph] = sol.phi_d[ph] + eR.scaled(head_d(ph));
        }
    }
    ExpPoly phi;
    for (int ph = 0; ph < n; ++ph) {
        sol.phi_w[ph] = sol.phi_w[ph].scaled(pref).cleaned();
        sol.phi_d[ph] = sol.phi_d[ph].scaled(pref).cleaned();
        phi = phi + (sol.phi_w[ph] + sol.phi_d[ph].scaled(model.penalty.w0))
                        .scaled(model.interclaims.alpha()(ph));
    }
    sol.phi = phi.cleaned();
    sol.roots = std::move(roots);

    for (int ph = 0; ph < n; ++ph) {
        sol.diagnostics.boundary_w = std::max(sol.diagnostics.boundary_w, std::abs(sol.phi_w[ph].evaluate(0.0)));
        sol.diagnostics.boundary_d =
            std::max(sol.diagnostics.boundary_d, std::abs(sol.phi_d[ph].evaluate(0.0) - Cx(1.0)));
    }
    static constexpr double kProbe[] = {0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
    const ResidualReport rr = equation_residuals(model, sol, kProbe);
    sol.diagnostics.residual_w = rr.residual_w;
    sol.diagnostics.residual_d = rr.residual_d;
    for (int ph = 0; ph < n; ++ph)
        for (double u : kProbe)
            sol.diagnostics.max_imag = std::max({sol.diagnostics.max_imag,
                                                 std::abs(sol.phi_w[ph].evaluate(u).imag()),
                                                 std::abs(sol.phi_d[ph].evaluate(u).imag())});
    return sol;
}

/// Full pipeline: validate is the caller's job; this runs roots -> derivative
/// boundary system -> partial fractions -> closed-form assembly.
inline GerberShiuSolution solve(const RiskModel& model) { return solve_with_roots(model, find_roots(model)); }

/// Transform-domain evaluation along three routes: the raw adjugate form, the
/// divided-difference form, and the termwise transform of the closed-form
/// solution. Returns the raw-form vectors (phi_hat_w, phi_hat_d); throws
/// ConsistencyFailure if the routes disagree beyond 1e-7 relative.
inline std::pair<CVector, CVector> laplace_solution(const RiskModel& model, const GerberShiuSolution& sol,
                                                    Cx s) {
    const int n = model.n();
    const double s2h = 0.5 * model.sigma * model.sigma;
    const CVector b = model.interclaims.b().cast<Cx>();
    const CVector e = CVector::Ones(n);
    const ExpPoly om = omega(model.claims, model.penalty);

    const CMatrix L = eval_L(model, s);
    const Cx det = L.determinant();
    if (std::abs(det) < 1e-12) throw NumericError("laplace_solution: s is (numerically) a root of det L");
    const CMatrix Ls = adjugate(L);
    const CVector raw_w = Ls * q_w(model, s, sol.phi_w_prime0) / det;
    const CVector raw_d = Ls * q_d(model, s, sol.phi_d_prime0) / det;

    // divided-difference route
    std::vector<Cx> nodes(sol.roots.rhos);
    nodes.push_back(s);
    std::vector<CMatrix> lvals;
    for (const Cx& z : nodes) lvals.push_back(eval_L_star(model, z));
    DividedDifferenceTable<CMatrix> Lt(nodes, std::move(lvals));
    std::vector<Cx> ovals;
    for (const Cx& z : nodes) ovals.push_back(om.laplace(z));
    DividedDifferenceTable<Cx> Ot(nodes, std::move(ovals));
    const auto ls_extra = detail::lstar_with_extra_node(model, sol.roots.rhos, s);

    Cx pref(1.0);
    for (const Cx& r : sol.roots.rhos) pref *= (s - r);
    pref /= det;

    const Cx rho_n = sol.roots.rhos.back();
    CVector dd_w = Lt.value(0, n) * (s2h * sol.phi_w_prime0 - om.laplace(rho_n) * b);
    dd_w -= ls_extra.up_to_nm1 * b * Ot.value(n - 1, n); // omega_hat[rho_n, s]
    for (int i = 1; i <= n - 1; ++i) dd_w -= (Lt.value(0, i - 1) * b) * Ot.value(i - 1, n);
    dd_w = pref * dd_w;
    CVector dd_d = Lt.value(0, n) * (s2h * sol.phi_d_prime0 + (s2h * rho_n + model.c) * e);
    dd_d += s2h * (ls_extra.up_to_nm1 * e);
    dd_d = pref * dd_d;

    // termwise transform of the closed form
    CVector cf_w(n), cf_d(n);
    for (int ph = 0; ph < n; ++ph) {
        cf_w(ph) = sol.phi_w[ph].laplace(s);
        cf_d(ph) = sol.phi_d[ph].laplace(s);
    }

    const double scale = std::max({raw_w.norm(), raw_d.norm(), 1e-12});
    const double disc = std::max({(raw_w - dd_w).norm(), (raw_w - cf_w).norm(), (raw_d - dd_d).norm(),
                                  (raw_d - cf_d).norm()});
    if (disc > 1e-7 * scale)
        throw ConsistencyFailure("laplace_solution: transform routes disagree (relative " +
                                 std::to_string(disc / scale) + ")");
    return {raw_w, raw_d};
}

/// Ruin-probability formulas for the special case delta = 0, unit penalty
/// with w0 = 1, exponential claims and 2-phase generalized Erlang
/// interclaims. Returns the scalar (psi_w, psi_d) pair; the general solve()
/// reproduces these, so the two routes cross-check each other.
inline std::pair<ExpPoly, ExpPoly> ruin_prob_special(const RiskModel& model) {
    if (model.delta != 0.0 || model.penalty.kind != Penalty::Kind::Unit || model.penalty.w0 != 1.0)
        throw ModelNotInSpecialForm("ruin_prob_special: needs delta = 0, unit penalty, w0 = 1");
    if (model.m() != 1 || model.claims.r_top().degree() != 0)
        throw ModelNotInSpecialForm("ruin_prob_special: needs exponential claims");
    const Eigen::MatrixXd& B = model.interclaims.B();
    const Eigen::VectorXd& alpha = model.interclaims.alpha();
    if (model.n() != 2 || alpha(0) != 1.0 || alpha(1) != 0.0 || B(1, 0) != 0.0 ||
        std::abs(B(0, 1) + B(0, 0)) > 1e-12)
        throw ModelNotInSpecialForm("ruin_prob_special: needs 2-phase generalized Erlang interclaims");

    const double lam1 = -B(0, 0), lam2 = -B(1, 1);
    const double beta = model.claims.r_bot().eval(0.0).real(); // r_bot(s) = s + beta
    const double s2h = 0.5 * model.sigma * model.sigma;
    const double c = model.c;

    const LundbergRoots roots = find_roots(model);
    const Cx rho2 = roots.rhos.back();

    std::vector<ExpPoly::Term> tw, td;
    for (std::size_t i = 0; i < 3; ++i) {
        const Cx Ri = roots.Rs[i];
        const Cx denom = detail::prod_gaps(roots.Rs, i);
        const Cx pref_w = lam1 * lam2 / (beta * (beta + rho2) * denom) / (s2h * s2h);
        tw.push_back({pref_w * (1.0 + s2h * (beta - Ri) / (s2h * rho2 + c)), Ri, 0});
        tw.push_back({-pref_w, Cx(beta), 0});
        const Cx pref_d = (beta - Ri) / denom;
        td.push_back({pref_d * ((lam1 + lam2) / (s2h * rho2 + c) - Ri + 2.0 * c / (model.sigma * model.sigma)),
                      Ri, 0});
    }
    return {ExpPoly(std::move(tw)).cleaned(), ExpPoly(std::move(td)).cleaned()};
}

} // namespace ruinkit
