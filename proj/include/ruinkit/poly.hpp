#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ruinkit/errors.hpp"

namespace ruinkit {

using Cx = std::complex<double>;

/// Univariate polynomial with complex coefficients, stored in ascending
/// degree order. Trailing zero coefficients are stripped on construction,
/// so degree() == coeffs().size() - 1 and the leading coefficient of a
/// nonzero polynomial is nonzero.
class Poly {
public:
    Poly() : c_{Cx(0.0)} {}
    explicit Poly(std::vector<Cx> coeffs) : c_(std::move(coeffs)) { normalize(); }
    Poly(std::initializer_list<Cx> coeffs) : c_(coeffs) { normalize(); }

    static Poly constant(Cx v) { return Poly({v}); }
    static Poly identity() { return Poly({Cx(0.0), Cx(1.0)}); } // p(s) = s

    const std::vector<Cx>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.size() == 1 && c_[0] == Cx(0.0); }
    Cx leading() const { return c_.back(); }
    Cx operator[](int k) const { return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : Cx(0.0); }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const Cx& v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Horner evaluation.
    Cx eval(Cx s) const {
        Cx acc = c_.back();
        for (int k = static_cast<int>(c_.size()) - 2; k >= 0; --k) acc = acc * s + c_[k];
        return acc;
    }

    Poly derivative() const {
        if (degree() == 0) return Poly();
        std::vector<Cx> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * Cx(static_cast<double>(k));
        return Poly(std::move(d));
    }

    Poly scaled(Cx a) const {
        std::vector<Cx> d(c_);
        for (Cx& v : d) v *= a;
        return Poly(std::move(d));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Cx> d(std::max(a.c_.size(), b.c_.size()), Cx(0.0));
        for (std::size_t k = 0; k < a.c_.size(); ++k) d[k] += a.c_[k];
        for (std::size_t k = 0; k < b.c_.size(); ++k) d[k] += b.c_[k];
        return Poly(std::move(d));
    }

    friend Poly operator-(const Poly& a, const Poly& b) { return a + b.scaled(Cx(-1.0)); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<Cx> d(a.c_.size() + b.c_.size() - 1, Cx(0.0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) d[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(d));
    }

    /// compose(a, b)(s) = a(b(s)), by Horner in the polynomial ring.
    Poly compose(const Poly& inner) const {
        Poly acc = Poly::constant(c_.back());
        for (int k = static_cast<int>(c_.size()) - 2; k >= 0; --k)
            acc = acc * inner + Poly::constant(c_[k]);
        return acc;
    }

    /// True if every coefficient has negligible imaginary part.
    bool is_real(double tol = 1e-12) const {
        const double scale = std::max(1.0, max_abs_coeff());
        for (const Cx& v : c_)
            if (std::abs(v.imag()) > tol * scale) return false;
        return true;
    }

    /// Drop imaginary rounding noise (used after assembling real-data polynomials).
    Poly real_part() const {
        std::vector<Cx> d(c_.size());
        for (std::size_t k = 0; k < c_.size(); ++k) d[k] = Cx(c_[k].real(), 0.0);
        return Poly(std::move(d));
    }

private:
    void normalize() {
        while (c_.size() > 1 && c_.back() == Cx(0.0)) c_.pop_back();
        if (c_.empty()) c_.push_back(Cx(0.0));
    }

    std::vector<Cx> c_;
};

namespace detail {

inline Cx newton_polish(const Poly& p, const Poly& dp, Cx z) {
    Cx best = z;
    double best_abs = std::abs(p.eval(z));
    for (int it = 0; it < 16; ++it) {
        const Cx d = dp.eval(z);
        if (std::abs(d) == 0.0) break;
        const Cx step = p.eval(z) / d;
        z -= step;
        const double a = std::abs(p.eval(z));
        if (a < best_abs) {
            best_abs = a;
            best = z;
        }
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    return best;
}

} // namespace detail

/// All complex roots (with multiplicity) via companion-matrix eigenvalues
/// followed by Newton polishing.
inline std::vector<Cx> poly_roots(const Poly& p) {
    if (p.is_zero()) throw Error("poly_roots: zero polynomial has no well-defined roots");
    const int d = p.degree();
    if (d < 1) throw Error("poly_roots: constant polynomial has no roots");

    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    const Cx lead = p.leading();
    for (int i = 0; i < d; ++i) {
        comp(i, d - 1) = -p[i] / lead;
        if (i + 1 < d) comp(i + 1, i) = Cx(1.0);
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw NumericError("poly_roots: eigenvalue iteration failed");

    const Poly dp = p.derivative();
    std::vector<Cx> roots(d);
    for (int i = 0; i < d; ++i) roots[i] = detail::newton_polish(p, dp, es.eigenvalues()(i));
    std::sort(roots.begin(), roots.end(), [](Cx a, Cx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

} // namespace ruinkit
