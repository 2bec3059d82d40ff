#pragma once

#include <string>

#include "ruinkit/claims.hpp"
#include "ruinkit/errors.hpp"
#include "ruinkit/phase_type.hpp"

namespace ruinkit {

/// The full risk model: surplus u + c t - sum of claims + sigma B(t), claims
/// arriving at phase-type renewal epochs, discounted at force delta, with a
/// penalty scheme. Initial capital u is a query argument to the solvers, not
/// a model field.
struct RiskModel {
    double c;      // premium rate, > 0
    double sigma;  // diffusion volatility, > 0
    double delta;  // discount force, >= 0
    PhaseType interclaims;
    RationalClaim claims;
    Penalty penalty;

    int n() const { return interclaims.n(); }
    int m() const { return claims.m(); }

    /// a(s) = sigma^2/2 s^2 + c s - delta.
    Cx a_of_s(Cx s) const { return 0.5 * sigma * sigma * s * s + c * s - delta; }
};

struct ModelReport {
    double mean_interclaim; // E[V]
    double mean_claim;      // E[Z]
    double loading;         // c E[V] / E[Z] - 1, > 0 for admissible models
};

/// Checks admissibility. Throws ZeroVolatility or NonpositiveLoading; the
/// component invariants were already enforced when the parts were built.
inline ModelReport validate(const RiskModel& model) {
    if (!(model.c > 0.0)) throw ModelError("model: premium rate must be positive");
    if (!(model.sigma > 0.0)) throw ZeroVolatility("model: volatility must be positive (the model is diffusion-perturbed)");
    if (model.delta < 0.0) throw ModelError("model: discount force must be >= 0");
    const double ev = model.interclaims.mean();
    const double ez = model.claims.mean();
    if (!(model.c * ev > ez))
        throw NonpositiveLoading("model: positive safety loading violated (c E[V] = " +
                                 std::to_string(model.c * ev) + " <= E[Z] = " + std::to_string(ez) + ")");
    return {ev, ez, model.c * ev / ez - 1.0};
}

} // namespace ruinkit
