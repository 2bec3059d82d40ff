#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "ruinkit/errors.hpp"
#include "ruinkit/poly.hpp"

namespace ruinkit {

/// Rates within this relative distance are treated as equal when merging
/// terms and when convolution must decide between the distinct-rate and
/// equal-rate branches.
inline constexpr double kRateMergeTol = 1e-9;

inline bool rates_equal(Cx a, Cx b) {
    return std::abs(a - b) <= kRateMergeTol * std::max({1.0, std::abs(a), std::abs(b)});
}

namespace detail {

inline double factorial(int n) {
    if (n < 0 || n > 170) throw Error("exppoly: factorial argument out of range");
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

inline Cx ipow(Cx z, int p) {
    Cx acc(1.0);
    for (int k = 0; k < p; ++k) acc *= z;
    return acc;
}

inline double ipow(double x, int p) {
    double acc = 1.0;
    for (int k = 0; k < p; ++k) acc *= x;
    return acc;
}

} // namespace detail

/// Finite sum of terms  coeff * x^power * exp(-rate * x)  on [0, inf).
/// Closed under addition, differentiation, convolution, the Dickson-Hipp
/// operator T_r, and the Laplace transform, which is exactly the operator
/// set the solver needs. Terms with equal (rate, power) are merged and
/// zero-coefficient terms dropped on construction.
class ExpPoly {
public:
    struct Term {
        Cx coeff;
        Cx rate;
        int power = 0;
    };

    ExpPoly() = default;
    explicit ExpPoly(std::vector<Term> terms) : terms_(std::move(terms)) { canonicalize(); }

    /// coeff * x^power * e^(-rate x)
    static ExpPoly term(Cx coeff, Cx rate, int power = 0) { return ExpPoly({Term{coeff, rate, power}}); }
    static ExpPoly zero() { return ExpPoly(); }

    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const Term& t : terms_) m = std::max(m, std::abs(t.coeff));
        return m;
    }

    Cx evaluate(double x) const {
        Cx acc(0.0);
        for (const Term& t : terms_) acc += t.coeff * detail::ipow(x, t.power) * std::exp(-t.rate * x);
        return acc;
    }

    /// Evaluate expecting a real result (conjugate-closed term sets).
    double evaluate_real(double x) const { return evaluate(x).real(); }

    ExpPoly operator+(const ExpPoly& other) const {
        std::vector<Term> all(terms_);
        all.insert(all.end(), other.terms_.begin(), other.terms_.end());
        return ExpPoly(std::move(all));
    }

    ExpPoly operator-(const ExpPoly& other) const { return *this + other.scaled(Cx(-1.0)); }

    ExpPoly scaled(Cx a) const {
        std::vector<Term> out(terms_);
        for (Term& t : out) t.coeff *= a;
        return ExpPoly(std::move(out));
    }

    /// Multiply by e^(-shift x): shift every rate.
    ExpPoly rate_shifted(Cx shift) const {
        std::vector<Term> out(terms_);
        for (Term& t : out) t.rate += shift;
        return ExpPoly(std::move(out));
    }

    /// Termwise analytic derivative.
    ExpPoly derivative() const {
        std::vector<Term> out;
        out.reserve(terms_.size() * 2);
        for (const Term& t : terms_) {
            if (t.power > 0) out.push_back({t.coeff * Cx(static_cast<double>(t.power)), t.rate, t.power - 1});
            out.push_back({-t.coeff * t.rate, t.rate, t.power});
        }
        return ExpPoly(std::move(out));
    }

    ExpPoly derivative(int order) const {
        ExpPoly f = *this;
        for (int k = 0; k < order; ++k) f = f.derivative();
        return f;
    }

    /// Laplace transform value  sum coeff * power! / (s + rate)^(power+1).
    /// Requires Re(s + rate) > 0 for every term.
    Cx laplace(Cx s) const {
        Cx acc(0.0);
        for (const Term& t : terms_) {
            const Cx pole = s + t.rate;
            if (pole.real() <= 0.0)
                throw Error("exppoly: Laplace transform pole or divergence at the requested point");
            acc += t.coeff * detail::factorial(t.power) / detail::ipow(pole, t.power + 1);
        }
        return acc;
    }

    /// Dickson-Hipp operator T_r f(x) = int_x^inf e^(-r(y-x)) f(y) dy.
    /// Requires Re(rate + r) > 0 for every term (integrable tail).
    ExpPoly dickson_hipp(Cx r) const {
        std::vector<Term> out;
        for (const Term& t : terms_) {
            const Cx lam = t.rate + r;
            if (lam.real() <= 0.0) throw Error("exppoly: divergent tail in Dickson-Hipp operator");
            // int_x^inf y^k e^(-lam y) dy = e^(-lam x) sum_{j<=k} k!/j! x^j / lam^(k-j+1)
            const double kfac = detail::factorial(t.power);
            for (int j = 0; j <= t.power; ++j) {
                const Cx c = t.coeff * (kfac / detail::factorial(j)) / detail::ipow(lam, t.power - j + 1);
                out.push_back({c, t.rate, j});
            }
        }
        return ExpPoly(std::move(out));
    }

    /// Convolution (f * g)(u) = int_0^u f(u-x) g(x) dx in closed form.
    /// Distinct rates produce difference quotients, equal rates raise powers.
    ExpPoly convolve(const ExpPoly& g) const {
        std::vector<Term> out;
        for (const Term& a : terms_)
            for (const Term& b : g.terms_) convolve_terms(a, b, out);
        return ExpPoly(std::move(out));
    }

    /// Drop terms whose coefficient is negligible relative to the largest
    /// (tidies cancellation residue in assembled solutions).
    ExpPoly cleaned(double rel_tol = 1e-13) const {
        const double cutoff = rel_tol * max_abs_coeff();
        std::vector<Term> out;
        for (const Term& t : terms_)
            if (std::abs(t.coeff) > cutoff) out.push_back(t);
        return ExpPoly(std::move(out));
    }

private:
    static void convolve_terms(const Term& a, const Term& b, std::vector<Term>& out) {
        const Cx fac = a.coeff * b.coeff * detail::factorial(a.power) * detail::factorial(b.power);
        if (rates_equal(a.rate, b.rate)) {
            // x^p e^(-r x) * x^q e^(-r x) = p! q! / (p+q+1)! x^(p+q+1) e^(-r x)
            out.push_back({fac / detail::factorial(a.power + b.power + 1), a.rate, a.power + b.power + 1});
            return;
        }
        // Laplace image  fac / ((s+ra)^(p+1) (s+rb)^(q+1)), expanded in
        // partial fractions about each pole and inverted termwise.
        const int A = a.power + 1, B = b.power + 1;
        const Cx d = b.rate - a.rate;
        for (int k = 0; k < A; ++k) {
            const int j = A - k; // order of 1/(s+ra)^j
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            const Cx c = fac * sign * detail::binomial(B + k - 1, k) / detail::ipow(d, B + k);
            out.push_back({c / detail::factorial(j - 1), a.rate, j - 1});
        }
        for (int k = 0; k < B; ++k) {
            const int j = B - k;
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            const Cx c = fac * sign * detail::binomial(A + k - 1, k) / detail::ipow(-d, A + k);
            out.push_back({c / detail::factorial(j - 1), b.rate, j - 1});
        }
    }

    void canonicalize() {
        std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
            if (a.power != b.power) return a.power < b.power;
            if (a.rate.real() != b.rate.real()) return a.rate.real() < b.rate.real();
            return a.rate.imag() < b.rate.imag();
        });
        std::vector<Term> merged;
        for (const Term& t : terms_) {
            if (!merged.empty() && merged.back().power == t.power && rates_equal(merged.back().rate, t.rate))
                merged.back().coeff += t.coeff;
            else
                merged.push_back(t);
        }
        merged.erase(std::remove_if(merged.begin(), merged.end(),
                                    [](const Term& t) { return t.coeff == Cx(0.0); }),
                     merged.end());
        terms_ = std::move(merged);
    }

    std::vector<Term> terms_;
};

inline ExpPoly convolve(const ExpPoly& f, const ExpPoly& g) { return f.convolve(g); }
inline ExpPoly dickson_hipp(const ExpPoly& f, Cx r) { return f.dickson_hipp(r); }
inline Cx laplace(const ExpPoly& f, Cx s) { return f.laplace(s); }

} // namespace ruinkit
