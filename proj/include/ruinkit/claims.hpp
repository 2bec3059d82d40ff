#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ruinkit/divided_differences.hpp"
#include "ruinkit/errors.hpp"
#include "ruinkit/exppoly.hpp"
#include "ruinkit/poly.hpp"
#include "ruinkit/rng.hpp"

namespace ruinkit {

/// Penalty scheme: w(x, y) applied to (surplus before ruin, deficit at ruin)
/// when ruin is caused by a claim, plus the constant w0 paid when ruin is
/// caused by diffusion oscillation.
struct Penalty {
    enum class Kind { Unit, BivariateExponential, DeficitPower };

    Kind kind = Kind::Unit;
    double s1 = 0.0; // e^(-s1 x - s2 y) parameters
    double s2 = 0.0;
    int j = 0; // y^j deficit power
    double w0 = 1.0;

    static Penalty unit(double w0 = 1.0) { return {Kind::Unit, 0.0, 0.0, 0, check_w0(w0)}; }

    static Penalty bivariate_exponential(double s1, double s2, double w0 = 1.0) {
        if (s1 < 0.0 || s2 < 0.0) throw ModelError("penalty: bivariate exponential parameters must be >= 0");
        return {Kind::BivariateExponential, s1, s2, 0, check_w0(w0)};
    }

    static Penalty deficit_power(int j, double w0 = 1.0) {
        if (j < 0 || j > 8) throw ModelError("penalty: deficit power must be a small nonnegative integer");
        return {Kind::DeficitPower, 0.0, 0.0, j, check_w0(w0)};
    }

    /// w(x, y) for a ruin-by-claim outcome.
    double evaluate(double x, double y) const {
        switch (kind) {
            case Kind::Unit: return 1.0;
            case Kind::BivariateExponential: return std::exp(-s1 * x - s2 * y);
            case Kind::DeficitPower: {
                double p = 1.0;
                for (int k = 0; k < j; ++k) p *= y;
                return p;
            }
        }
        return 1.0;
    }

private:
    static double check_w0(double w0) {
        if (w0 < 0.0) throw ModelError("penalty: w0 must be >= 0");
        return w0;
    }
};

/// Claim-size distribution from the rational family: density Laplace
/// transform r_top(s) / r_bot(s) with r_bot monic, all roots in the open
/// left half-plane, and r_top(0) = r_bot(0) (total mass one).
class RationalClaim {
public:
    enum class Kind { Exponential, Erlang, Hyperexponential, General };

    static RationalClaim exponential(double beta) {
        if (beta <= 0.0) throw ModelError("exponential claims: rate must be positive");
        RationalClaim c;
        c.kind_ = Kind::Exponential;
        c.rates_ = {beta};
        c.weights_ = {1.0};
        c.erlang_k_ = 1;
        c.r_top_ = Poly({Cx(beta)});
        c.r_bot_ = Poly({Cx(beta), Cx(1.0)});
        c.density_ = ExpPoly::term(beta, beta, 0);
        c.finish();
        return c;
    }

    /// Erlang(k, beta): density beta^k x^(k-1) e^(-beta x) / (k-1)!.
    static RationalClaim erlang(int k, double beta) {
        if (k < 1 || beta <= 0.0) throw ModelError("erlang claims: need k >= 1 and positive rate");
        RationalClaim c;
        c.kind_ = Kind::Erlang;
        c.rates_ = {beta};
        c.weights_ = {1.0};
        c.erlang_k_ = k;
        Poly top = Poly::constant(Cx(1.0));
        Poly bot = Poly::constant(Cx(1.0));
        const Poly lin({Cx(beta), Cx(1.0)});
        for (int i = 0; i < k; ++i) {
            top = top * Poly::constant(Cx(beta));
            bot = bot * lin;
        }
        c.r_top_ = top;
        c.r_bot_ = bot;
        double fac = 1.0;
        for (int i = 2; i < k; ++i) fac *= i;
        c.density_ = ExpPoly::term(std::pow(beta, k) / fac, beta, k - 1);
        c.finish();
        return c;
    }

    static RationalClaim hyperexponential(const std::vector<double>& weights, const std::vector<double>& rates) {
        if (weights.size() != rates.size() || weights.empty())
            throw ModelError("hyperexponential claims: need matching weight/rate lists");
        double sum = 0.0;
        for (double w : weights) {
            if (w <= 0.0) throw ModelError("hyperexponential claims: weights must be positive");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw ModelError("hyperexponential claims: weights must sum to 1");
        RationalClaim c;
        c.kind_ = Kind::Hyperexponential;
        c.rates_ = rates;
        c.weights_ = weights;
        Poly bot = Poly::constant(Cx(1.0));
        for (double r : rates) {
            if (r <= 0.0) throw ModelError("hyperexponential claims: rates must be positive");
            bot = bot * Poly({Cx(r), Cx(1.0)});
        }
        Poly top;
        std::vector<ExpPoly::Term> dens;
        for (std::size_t j = 0; j < rates.size(); ++j) {
            Poly pj = Poly::constant(Cx(weights[j] * rates[j]));
            for (std::size_t k = 0; k < rates.size(); ++k)
                if (k != j) pj = pj * Poly({Cx(rates[k]), Cx(1.0)});
            top = top + pj;
            dens.push_back({Cx(weights[j] * rates[j]), Cx(rates[j]), 0});
        }
        c.r_top_ = top;
        c.r_bot_ = bot;
        c.density_ = ExpPoly(std::move(dens));
        c.finish();
        return c;
    }

    /// General rational transform. Requires distinct r_bot roots with
    /// negative real part; the density comes out of the partial fractions.
    static RationalClaim from_polys(Poly r_top, Poly r_bot) {
        if (r_bot.degree() < 1) throw ModelError("rational claims: denominator must have degree >= 1");
        if (r_top.degree() > r_bot.degree() - 1)
            throw ModelError("rational claims: numerator degree must be below denominator degree");
        // normalize to a monic denominator
        const Cx lead = r_bot.leading();
        r_top = r_top.scaled(Cx(1.0) / lead);
        r_bot = r_bot.scaled(Cx(1.0) / lead);
        if (std::abs(r_top.eval(0.0) - r_bot.eval(0.0)) >
            1e-9 * std::max(1.0, std::abs(r_bot.eval(0.0))))
            throw ModelError("rational claims: numerator and denominator must agree at s = 0");
        const std::vector<Cx> roots = poly_roots(r_bot);
        for (const Cx& rt : roots)
            if (rt.real() >= 0.0) throw ModelError("rational claims: denominator root with nonnegative real part");
        for (std::size_t i = 0; i < roots.size(); ++i)
            for (std::size_t j = i + 1; j < roots.size(); ++j)
                if (std::abs(roots[i] - roots[j]) <=
                    kNodeSeparationTol * std::max({1.0, std::abs(roots[i]), std::abs(roots[j])}))
                    throw ModelError("rational claims: repeated denominator roots are not supported");
        RationalClaim c;
        c.kind_ = Kind::General;
        const Poly dbot = r_bot.derivative();
        std::vector<ExpPoly::Term> dens;
        for (const Cx& rt : roots) dens.push_back({r_top.eval(rt) / dbot.eval(rt), -rt, 0});
        c.r_top_ = std::move(r_top);
        c.r_bot_ = std::move(r_bot);
        c.density_ = ExpPoly(std::move(dens));
        c.finish();
        return c;
    }

    Kind kind() const { return kind_; }
    int m() const { return r_bot_.degree(); }
    const Poly& r_top() const { return r_top_; }
    const Poly& r_bot() const { return r_bot_; }
    const ExpPoly& density() const { return density_; }
    const ExpPoly& tail() const { return tail_; } // P_bar(x) = int_x^inf p

    /// Density transform p_hat(s) = r_top(s) / r_bot(s).
    Cx lt(Cx s) const {
        const Cx den = r_bot_.eval(s);
        const double scale = r_bot_.max_abs_coeff() * std::pow(std::max(1.0, std::abs(s)), r_bot_.degree());
        if (std::abs(den) < 1e-14 * scale) throw NumericError("claims: transform pole at the requested point");
        return r_top_.eval(s) / den;
    }

    double mean() const {
        double acc = 0.0;
        for (const auto& t : density_.terms())
            acc += (t.coeff * detail::factorial(t.power + 1) / detail::ipow(t.rate, t.power + 2)).real();
        return acc;
    }

    double sample(Rng& rng) const {
        switch (kind_) {
            case Kind::Exponential: return rng.exponential(rates_[0]);
            case Kind::Erlang: {
                double t = 0.0;
                for (int i = 0; i < erlang_k_; ++i) t += rng.exponential(rates_[0]);
                return t;
            }
            case Kind::Hyperexponential: {
                double u = rng.uniform();
                std::size_t j = weights_.size() - 1;
                for (std::size_t i = 0; i + 1 < weights_.size(); ++i) {
                    u -= weights_[i];
                    if (u <= 0.0) {
                        j = i;
                        break;
                    }
                }
                return rng.exponential(rates_[j]);
            }
            case Kind::General: return sample_by_inversion(rng.uniform());
        }
        return 0.0;
    }

private:
    void finish() {
        tail_ = density_.dickson_hipp(0.0);
        // construction self-checks: unit mass and transform agreement
        const double mass = tail_.evaluate(0.0).real();
        if (std::abs(mass - 1.0) > 1e-10)
            throw ModelError("rational claims: density does not integrate to 1");
        const Cx probe(0.7, 0.3);
        if (std::abs(density_.laplace(probe) - lt(probe)) > 1e-8)
            throw NumericError("rational claims: density transform disagrees with r_top/r_bot");
    }

    /// CDF inversion for densities that are not simple mixtures: bisection on
    /// F(x) = 1 - tail(x), which is monotone.
    double sample_by_inversion(double u) const {
        double lo = 0.0, hi = 1.0;
        while (tail_.evaluate(hi).real() > 1.0 - u && hi < 1e9) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (1.0 - tail_.evaluate(mid).real() < u)
                lo = mid;
            else
                hi = mid;
            if (hi - lo < 1e-13 * std::max(1.0, hi)) break;
        }
        return 0.5 * (lo + hi);
    }

    Kind kind_ = Kind::General;
    Poly r_top_, r_bot_;
    ExpPoly density_, tail_;
    std::vector<double> rates_, weights_;
    int erlang_k_ = 1;
};

/// omega(u) = int_u^inf w(u, x - u) p(x) dx in closed form.
inline ExpPoly omega(const RationalClaim& claim, const Penalty& pen) {
    switch (pen.kind) {
        case Penalty::Kind::Unit:
            return claim.tail();
        case Penalty::Kind::BivariateExponential:
            // e^(-s1 u) int_0^inf e^(-s2 y) p(u + y) dy = e^(-s1 u) (T_{s2} p)(u)
            return claim.density().dickson_hipp(pen.s2).rate_shifted(pen.s1);
        case Penalty::Kind::DeficitPower: {
            // int_u^inf (x-u)^j p(x) dx = j! T_0^(j+1) p (u)
            ExpPoly f = claim.density();
            for (int k = 0; k <= pen.j; ++k) f = f.dickson_hipp(0.0);
            return f.scaled(detail::factorial(pen.j));
        }
    }
    return claim.tail();
}

inline Cx omega_hat(const RationalClaim& claim, const Penalty& pen, Cx s) {
    return omega(claim, pen).laplace(s);
}

} // namespace ruinkit
