#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ruinkit/errors.hpp"
#include "ruinkit/matrix.hpp"
#include "ruinkit/poly.hpp"
#include "ruinkit/rng.hpp"

namespace ruinkit {

/// Phase-type distribution (alpha, B, b): time to absorption of a terminating
/// Markov chain with initial probabilities alpha, sub-intensity matrix B and
/// exit rates b = -B e. Immutable once validated.
class PhaseType {
public:
    /// Validates (alpha, B) and derives b. Throws NonStochasticAlpha,
    /// NotSubIntensity or SingularB.
    static PhaseType validated(Eigen::VectorXd alpha, Eigen::MatrixXd B) {
        const Eigen::Index n = alpha.size();
        if (n < 1 || B.rows() != n || B.cols() != n)
            throw ModelError("phase type: alpha length and B dimension must match, n >= 1");
        double sum = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (alpha(i) < 0.0) throw NonStochasticAlpha("phase type: alpha has a negative entry");
            sum += alpha(i);
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw NonStochasticAlpha("phase type: alpha entries must sum to 1");
        for (Eigen::Index i = 0; i < n; ++i) {
            double row = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i != j && B(i, j) < 0.0)
                    throw NotSubIntensity("phase type: off-diagonal rate B(" + std::to_string(i) + "," +
                                          std::to_string(j) + ") is negative");
                row += B(i, j);
            }
            if (row > 1e-12) throw NotSubIntensity("phase type: row " + std::to_string(i) + " of B sums to > 0");
        }
        Eigen::EigenSolver<Eigen::MatrixXd> es(B);
        for (Eigen::Index i = 0; i < n; ++i)
            if (es.eigenvalues()(i).real() >= -1e-12)
                throw SingularB("phase type: B must have all eigenvalues in the open left half-plane");
        for (Eigen::Index i = 0; i < n; ++i)
            if (B(i, i) >= 0.0) throw NotSubIntensity("phase type: diagonal of B must be negative");
        Eigen::VectorXd b = -B * Eigen::VectorXd::Ones(n);
        return PhaseType(std::move(alpha), std::move(B), std::move(b));
    }

    /// As above but with a user-supplied exit vector, which must agree with
    /// -B e to within 1e-12.
    static PhaseType validated(Eigen::VectorXd alpha, Eigen::MatrixXd B, const Eigen::VectorXd& b_user) {
        PhaseType ph = validated(std::move(alpha), std::move(B));
        if (b_user.size() != ph.n() || (b_user - ph.b()).cwiseAbs().maxCoeff() > 1e-12)
            throw NotSubIntensity("phase type: supplied exit vector disagrees with -B e");
        return ph;
    }

    static PhaseType exponential(double rate) {
        if (rate <= 0.0) throw ModelError("exponential interclaims: rate must be positive");
        Eigen::VectorXd a(1);
        a << 1.0;
        Eigen::MatrixXd B(1, 1);
        B << -rate;
        return validated(std::move(a), std::move(B));
    }

    /// Generalized Erlang: phases visited in sequence with rates lambda_1..lambda_n.
    static PhaseType generalized_erlang(const std::vector<double>& rates) {
        const int n = static_cast<int>(rates.size());
        if (n < 1) throw ModelError("generalized Erlang: need at least one rate");
        Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
        a(0) = 1.0;
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            if (rates[i] <= 0.0) throw ModelError("generalized Erlang: rates must be positive");
            B(i, i) = -rates[i];
            if (i + 1 < n) B(i, i + 1) = rates[i];
        }
        return validated(std::move(a), std::move(B));
    }

    /// Coxian: from phase i continue to phase i+1 with probability
    /// continue_prob[i], otherwise exit.
    static PhaseType coxian(const std::vector<double>& rates, const std::vector<double>& continue_prob) {
        const int n = static_cast<int>(rates.size());
        if (n < 1 || continue_prob.size() + 1 != rates.size())
            throw ModelError("coxian: need n rates and n-1 continuation probabilities");
        Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
        a(0) = 1.0;
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            if (rates[i] <= 0.0) throw ModelError("coxian: rates must be positive");
            B(i, i) = -rates[i];
            if (i + 1 < n) {
                if (continue_prob[i] < 0.0 || continue_prob[i] >= 1.0)
                    throw ModelError("coxian: continuation probabilities must lie in [0, 1)");
                B(i, i + 1) = rates[i] * continue_prob[i];
            }
        }
        return validated(std::move(a), std::move(B));
    }

    int n() const { return static_cast<int>(alpha_.size()); }
    const Eigen::VectorXd& alpha() const { return alpha_; }
    const Eigen::MatrixXd& B() const { return B_; }
    const Eigen::VectorXd& b() const { return b_; }

    /// Laplace transform k_hat(s) = alpha (sI - B)^(-1) b, by linear solve.
    Cx lt(Cx s) const {
        const Eigen::Index n = alpha_.size();
        CMatrix M = s * CMatrix::Identity(n, n) - B_.cast<Cx>();
        Eigen::FullPivLU<CMatrix> lu(M);
        if (!lu.isInvertible()) throw NumericError("phase type: Laplace transform pole (s is an eigenvalue of B)");
        CVector x = lu.solve(b_.cast<Cx>());
        return alpha_.cast<Cx>().dot(x);
    }

    /// Rational form of the transform: k_hat(s) = numerator(s) / det(sI - B),
    /// with polynomial numerator from the Faddeev-LeVerrier expansion.
    struct RationalLT {
        Poly numerator;
        Poly denominator;
    };

    RationalLT lt_rational() const {
        const CharPolyExpansion fl = faddeev_leverrier(B_.cast<Cx>());
        std::vector<Cx> num(alpha_.size(), Cx(0.0));
        for (std::size_t k = 0; k < fl.adj_coeffs.size(); ++k)
            num[k] = (alpha_.cast<Cx>().transpose() * fl.adj_coeffs[k] * b_.cast<Cx>()).value();
        return {Poly(std::move(num)).real_part(), fl.char_poly.real_part()};
    }

    /// Mean absorption time alpha (-B)^(-1) e.
    double mean() const {
        Eigen::VectorXd x = (-B_).partialPivLu().solve(Eigen::VectorXd::Ones(alpha_.size()));
        return alpha_.dot(x);
    }

    /// One absorption time of the underlying chain.
    double sample(Rng& rng) const { return sample_from_phase(pick_start(rng), rng); }

    int pick_start(Rng& rng) const {
        double u = rng.uniform();
        for (int i = 0; i + 1 < n(); ++i) {
            u -= alpha_(i);
            if (u <= 0.0) return i;
        }
        return n() - 1;
    }

    double sample_from_phase(int phase, Rng& rng) const {
        double t = 0.0;
        int i = phase;
        while (true) {
            const double out_rate = -B_(i, i);
            t += rng.exponential(out_rate);
            double u = rng.uniform() * out_rate;
            u -= b_(i);
            if (u <= 0.0) return t;
            int next = -1;
            for (int j = 0; j < n(); ++j) {
                if (j == i) continue;
                u -= B_(i, j);
                if (u <= 0.0) {
                    next = j;
                    break;
                }
            }
            i = (next >= 0) ? next : n() - 1;
        }
    }

private:
    PhaseType(Eigen::VectorXd alpha, Eigen::MatrixXd B, Eigen::VectorXd b)
        : alpha_(std::move(alpha)), B_(std::move(B)), b_(std::move(b)) {}

    Eigen::VectorXd alpha_;
    Eigen::MatrixXd B_;
    Eigen::VectorXd b_;
};

} // namespace ruinkit
