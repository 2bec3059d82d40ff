#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "ruinkit/model.hpp"
#include "ruinkit/rng.hpp"

namespace ruinkit {

struct SimConfig {
    long n_paths = 100000;
    double t_max = 1000.0;   // horizon; choose so the surviving-path ruin tail is negligible
    double grid_step = 0.01; // sub-interval for the bridge crossing draws
    std::uint64_t seed = 1;
    int initial_phase = -1;  // force the first interclaim phase; -1 draws from alpha
};

struct PathOutcome {
    enum class Kind { Survived, RuinClaim, RuinOsc };
    Kind kind = Kind::Survived;
    double time = 0.0;           // ruin time (right grid endpoint for oscillation hits)
    double surplus_before = 0.0; // U(T-) for ruin by claim
    double deficit = 0.0;        // |U(T)| for ruin by claim
};

struct SimEstimate {
    double psi_w_hat = 0.0;     // mean of e^(-delta T) w(U(T-), |U(T)|) over ruin-by-claim paths
    double psi_d_hat = 0.0;     // mean of e^(-delta T) over ruin-by-oscillation paths
    double penalty_hat = 0.0;   // psi_w contribution + w0 * psi_d contribution
    double se_w = 0.0;
    double se_d = 0.0;
    double se_penalty = 0.0;
    long n_ruin_claim = 0;
    long n_ruin_osc = 0;
    long n_paths = 0;
};

namespace detail {

/// Drifted Brownian segment over span `len` starting at level x (> 0),
/// simulated on grid_step sub-intervals with endpoint-conditioned bridge
/// crossing draws. Returns true (and the crossing time offset) if the
/// segment reaches 0; otherwise leaves the end level in x.
inline bool diffuse_segment(double& x, double len, double t0, const RiskModel& model,
                            const SimConfig& cfg, Rng& rng, double& t_hit) {
    const double sigma2 = model.sigma * model.sigma;
    double remaining = len;
    double elapsed = 0.0;
    while (remaining > 0.0) {
        const double h = std::min(cfg.grid_step, remaining);
        const double x1 = x + model.c * h + model.sigma * std::sqrt(h) * rng.normal();
        elapsed += h;
        if (x1 <= 0.0) {
            t_hit = t0 + elapsed;
            return true;
        }
        // bridge crossing probability exp(-2 x0 x1 / (sigma^2 h)); skip the
        // draw when the exponent is far below underflow relevance
        const double expo = 2.0 * x * x1 / (sigma2 * h);
        if (expo < 40.0 && rng.uniform() < std::exp(-expo)) {
            t_hit = t0 + elapsed;
            return true;
        }
        x = x1;
        remaining -= h;
    }
    return false;
}

} // namespace detail

/// One path of the risk process from initial capital u: phase-type interclaim
/// draws, claim jumps, and bridge-corrected diffusion in between.
inline PathOutcome sample_path(const RiskModel& model, double u, const SimConfig& cfg, Rng& rng) {
    if (u == 0.0) return {PathOutcome::Kind::RuinOsc, 0.0, 0.0, 0.0}; // oscillation at the origin
    double x = u;
    double t = 0.0;
    bool first = true;
    while (t < cfg.t_max) {
        double V;
        if (first && cfg.initial_phase >= 0)
            V = model.interclaims.sample_from_phase(cfg.initial_phase, rng);
        else
            V = model.interclaims.sample(rng);
        first = false;

        const double span = std::min(V, cfg.t_max - t);
        double t_hit = 0.0;
        if (detail::diffuse_segment(x, span, t, model, cfg, rng, t_hit))
            return {PathOutcome::Kind::RuinOsc, t_hit, 0.0, 0.0};
        t += span;
        if (span < V) break; // censored at the horizon mid-interval

        const double z = model.claims.sample(rng);
        const double level = x - z;
        if (level < 0.0) return {PathOutcome::Kind::RuinClaim, t, x, -level};
        if (level == 0.0) return {PathOutcome::Kind::RuinOsc, t, 0.0, 0.0}; // U(T) = 0 boundary case
        x = level;
    }
    return {PathOutcome::Kind::Survived, 0.0, 0.0, 0.0};
}

namespace detail {

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

} // namespace detail

/// Independent paths with per-path streams split deterministically from the
/// seed; sample means with compensated summation and standard errors.
inline SimEstimate estimate(const RiskModel& model, double u, const SimConfig& cfg) {
    if (cfg.n_paths < 1) throw Error("simulate: need at least one path");
    if (cfg.initial_phase >= model.n()) throw Error("simulate: initial phase out of range");
    detail::KahanSum sw, sw2, sd, sd2, sp, sp2;
    SimEstimate est;
    est.n_paths = cfg.n_paths;
    for (long i = 0; i < cfg.n_paths; ++i) {
        Rng rng = Rng::for_path(cfg.seed, static_cast<std::uint64_t>(i));
        const PathOutcome out = sample_path(model, u, cfg, rng);
        double pw = 0.0, pd = 0.0;
        if (out.kind == PathOutcome::Kind::RuinClaim) {
            ++est.n_ruin_claim;
            pw = std::exp(-model.delta * out.time) * model.penalty.evaluate(out.surplus_before, out.deficit);
        } else if (out.kind == PathOutcome::Kind::RuinOsc) {
            ++est.n_ruin_osc;
            pd = std::exp(-model.delta * out.time);
        }
        const double pen = pw + model.penalty.w0 * pd;
        sw.add(pw);
        sw2.add(pw * pw);
        sd.add(pd);
        sd2.add(pd * pd);
        sp.add(pen);
        sp2.add(pen * pen);
    }
    const double N = static_cast<double>(cfg.n_paths);
    auto finish = [N](const detail::KahanSum& s, const detail::KahanSum& s2, double& mean, double& se) {
        mean = s.sum / N;
        const double var = std::max(0.0, s2.sum / N - mean * mean);
        se = std::sqrt(var / N);
    };
    finish(sw, sw2, est.psi_w_hat, est.se_w);
    finish(sd, sd2, est.psi_d_hat, est.se_d);
    finish(sp, sp2, est.penalty_hat, est.se_penalty);
    return est;
}

} // namespace ruinkit
