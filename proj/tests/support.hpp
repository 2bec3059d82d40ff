#pragma once

// Shared test fixtures and independent oracles: adaptive quadrature, a
// matrix-exponential phase-type CDF, and a randomized valid-model generator.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "ruinkit/ruinkit.hpp"

namespace ruinkit::test {

/// The running numerical example: 2-phase Coxian interclaims, exponential(1)
/// claims, c = sigma = 1, delta = 0, unit penalty.
inline RiskModel coxian_example() {
    Eigen::VectorXd alpha(2);
    alpha << 1.0, 0.0;
    Eigen::MatrixXd B(2, 2);
    B << -1.0, 0.5, 0.0, -4.0;
    return RiskModel{1.0, 1.0, 0.0, PhaseType::validated(alpha, B), RationalClaim::exponential(1.0),
                     Penalty::unit(1.0)};
}

/// Same interclaims and claims with a positive discount rate.
inline RiskModel coxian_example_delta(double delta) {
    RiskModel m = coxian_example();
    m.delta = delta;
    return m;
}

inline RiskModel erlang2_example(double delta = 0.0) {
    return RiskModel{1.0, 1.0, delta, PhaseType::generalized_erlang({1.0, 1.0}),
                     RationalClaim::exponential(1.0), Penalty::unit(1.0)};
}

/// Adaptive Simpson quadrature (independent oracle for convolutions and
/// transforms).
inline double quad(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                   int depth = 24) {
    std::function<double(double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fhi, double fmid, int d) -> double {
        const double mid = 0.5 * (lo + hi);
        const double lmid = 0.5 * (lo + mid), rmid = 0.5 * (mid + hi);
        const double fl = f(lmid), fr = f(rmid);
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi);
        if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol) return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, fmid, fl, d - 1) + rec(mid, hi, fmid, fhi, fr, d - 1);
    };
    return rec(a, b, f(a), f(b), f(0.5 * (a + b)), depth);
}

/// Phase-type CDF K(t) = 1 - alpha e^{tB} e via the matrix exponential.
inline double phase_type_cdf(const PhaseType& ph, double t) {
    const Eigen::MatrixXd E = (t * ph.B()).exp();
    return 1.0 - ph.alpha().dot(E * Eigen::VectorXd::Ones(ph.n()));
}

/// Randomized admissible model: Coxian interclaims (n <= 3), hyperexponential
/// claims (m <= 3), delta in (0, 1], sigma and loading moderate. Claim rates
/// are kept well separated so closed-form convolutions stay well conditioned.
inline RiskModel random_model(std::mt19937_64& gen, int n_max = 3, int m_max = 3,
                              bool randomize_penalty = false) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int n = 1 + static_cast<int>(unif(gen) * n_max) % n_max;
    const int m = 1 + static_cast<int>(unif(gen) * m_max) % m_max;

    std::vector<double> lams(n), cont(n > 1 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) lams[i] = 0.5 + 3.5 * unif(gen);
    for (int i = 0; i + 1 < n; ++i) cont[i] = 0.2 + 0.7 * unif(gen);
    PhaseType ph = PhaseType::coxian(lams, cont);

    std::vector<double> rates(m), weights(m);
    double base = 0.4 + 1.2 * unif(gen), wsum = 0.0;
    for (int j = 0; j < m; ++j) {
        rates[j] = base;
        base *= 1.8 + 1.4 * unif(gen); // multiplicative gaps keep rates distinct
        weights[j] = 0.2 + unif(gen);
        wsum += weights[j];
    }
    for (double& w : weights) w /= wsum;
    RationalClaim claim = RationalClaim::hyperexponential(weights, rates);

    const double theta = 0.1 + 0.9 * unif(gen);
    const double c = claim.mean() / ph.mean() * (1.0 + theta);
    const double sigma = 0.4 + 1.2 * unif(gen);
    const double delta = 0.01 + 0.99 * unif(gen);

    Penalty pen = Penalty::unit(1.0);
    if (randomize_penalty) {
        const double pick = unif(gen);
        if (pick < 0.34)
            pen = Penalty::unit(0.5 + unif(gen));
        else if (pick < 0.67)
            pen = Penalty::bivariate_exponential(unif(gen), unif(gen), 0.5 + unif(gen));
        else
            pen = Penalty::deficit_power(1 + static_cast<int>(unif(gen) * 2.0), 0.5 + unif(gen));
    }
    return RiskModel{c, sigma, delta, std::move(ph), std::move(claim), pen};
}

} // namespace ruinkit::test
