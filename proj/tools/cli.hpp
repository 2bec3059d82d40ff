#pragma once

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ruinkit/ruinkit.hpp"

namespace ruinkit::cli {

// exit-code contract: 0 ok, 2 invalid model, 3 parse error, 4 numeric
// failure, 5 comparison failure
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidModel = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitNumeric = 4;
inline constexpr int kExitComparison = 5;

inline std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::string fmt_cx(Cx v) {
    if (std::abs(v.imag()) < 1e-12 * std::max(1.0, std::abs(v.real()))) return fmt6(v.real());
    std::string s = fmt6(v.real());
    s += (v.imag() >= 0 ? "+" : "-");
    s += fmt6(std::abs(v.imag()));
    s += "i";
    return s;
}

inline nlohmann::json json_cx(Cx v) { return {{"re", v.real()}, {"im", v.imag()}}; }

inline nlohmann::json json_terms(const ExpPoly& f) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : f.terms())
        arr.push_back({{"coeff", json_cx(t.coeff)}, {"rate", json_cx(t.rate)}, {"power", t.power}});
    return arr;
}

struct UGrid {
    double start = 0.0, stop = 0.0, step = 1.0;
};

inline std::vector<double> expand_grid(const UGrid& g) {
    if (g.step <= 0.0 || g.stop < g.start) throw ParseError("u-grid: need start <= stop and step > 0");
    std::vector<double> us;
    for (double u = g.start; u <= g.stop + 1e-12 * std::max(1.0, g.stop); u += g.step) us.push_back(u);
    return us;
}

inline UGrid parse_grid_spec(const std::string& spec) {
    UGrid g;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &g.start, &g.stop, &g.step) != 3)
        throw ParseError("u-grid: expected start:stop:step, got '" + spec + "'");
    return g;
}

inline std::vector<double> parse_list(const std::string& spec, const char* what) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ParseError(std::string(what) + ": bad number '" + tok + "'");
        }
    }
    if (out.empty()) throw ParseError(std::string(what) + ": empty list");
    return out;
}

// ---------------------------------------------------------------------------

inline int run_validate(const std::string& path, std::ostream& out) {
    const RiskModel model = load_model_file(path);
    const ModelReport rep = validate(model);
    out << "model: n = " << model.n() << " interclaim phases, claim denominator degree m = " << model.m()
        << "\n";
    out << "premium c = " << fmt6(model.c) << ", volatility sigma = " << fmt6(model.sigma)
        << ", discount delta = " << fmt6(model.delta) << "\n";
    out << "E[V] = " << fmt6(rep.mean_interclaim) << "\n";
    out << "E[Z] = " << fmt6(rep.mean_claim) << "\n";
    out << "loading = " << fmt6(rep.loading) << "\n";
    out << "ok\n";
    return kExitOk;
}

inline int run_roots(const std::string& path, const std::string& format, std::ostream& out) {
    const RiskModel model = load_model_file(path);
    validate(model);
    const LundbergRoots roots = find_roots(model);
    if (format == "json") {
        nlohmann::json j;
        j["rhos"] = nlohmann::json::array();
        for (const Cx& r : roots.rhos) j["rhos"].push_back(json_cx(r));
        j["Rs"] = nlohmann::json::array();
        for (const Cx& R : roots.Rs) j["Rs"].push_back(json_cx(R));
        j["residuals"] = roots.residuals;
        out << j.dump(2) << "\n";
        return kExitOk;
    }
    out << "roots with positive real part (rho):\n";
    for (std::size_t i = 0; i < roots.rhos.size(); ++i)
        out << "  rho_" << (i + 1) << " = " << fmt_cx(roots.rhos[i]) << "   |det L| = "
            << fmt6(roots.residuals[i]) << "\n";
    out << "R values (-R_i are the remaining roots):\n";
    for (std::size_t i = 0; i < roots.Rs.size(); ++i)
        out << "  R_" << (i + 1) << " = " << fmt_cx(roots.Rs[i]) << "   |det L| = "
            << fmt6(roots.residuals[roots.rhos.size() + i]) << "\n";
    return kExitOk;
}

inline void print_explain(const GerberShiuSolution& sol, std::ostream& out) {
    out << "# roots\n";
    for (std::size_t i = 0; i < sol.roots.rhos.size(); ++i)
        out << "rho_" << (i + 1) << " = " << fmt_cx(sol.roots.rhos[i]) << "\n";
    for (std::size_t i = 0; i < sol.roots.Rs.size(); ++i)
        out << "R_" << (i + 1) << " = " << fmt_cx(sol.roots.Rs[i]) << "\n";
    out << "# derivatives at zero\n";
    for (Eigen::Index i = 0; i < sol.phi_w_prime0.size(); ++i)
        out << "phi_w'(0;" << (i + 1) << ") = " << fmt_cx(sol.phi_w_prime0(i)) << "  phi_d'(0;" << (i + 1)
            << ") = " << fmt_cx(sol.phi_d_prime0(i)) << "\n";
    out << "# partial-fraction coefficients\n";
    for (std::size_t i = 0; i < sol.coeffs.G.size(); ++i) {
        out << "G_" << (i + 1) << " = " << fmt_cx(sol.coeffs.G[i]) << "\n";
        out << "M_" << (i + 1) << "^(n):\n";
        for (Eigen::Index r = 0; r < sol.coeffs.M_n[i].rows(); ++r) {
            out << "   ";
            for (Eigen::Index c = 0; c < sol.coeffs.M_n[i].cols(); ++c)
                out << fmt_cx(sol.coeffs.M_n[i](r, c)) << (c + 1 < sol.coeffs.M_n[i].cols() ? "  " : "");
            out << "\n";
        }
        out << "M_" << (i + 1) << "^(n-1):\n";
        for (Eigen::Index r = 0; r < sol.coeffs.M_nm1[i].rows(); ++r) {
            out << "   ";
            for (Eigen::Index c = 0; c < sol.coeffs.M_nm1[i].cols(); ++c)
                out << fmt_cx(sol.coeffs.M_nm1[i](r, c)) << (c + 1 < sol.coeffs.M_nm1[i].cols() ? "  " : "");
            out << "\n";
        }
    }
    out << "# diagnostics\n";
    out << "boundary |phi_w(0)| = " << fmt6(sol.diagnostics.boundary_w) << ", |phi_d(0) - 1| = "
        << fmt6(sol.diagnostics.boundary_d) << "\n";
    out << "scaled equation residuals: w " << fmt6(sol.diagnostics.residual_w) << ", d "
        << fmt6(sol.diagnostics.residual_d) << "\n";
}

inline int run_solve(const std::string& path, const std::string& grid_spec, const std::string& format,
                     bool phases, bool explain, std::ostream& out) {
    const RiskModel model = load_model_file(path);
    validate(model);
    const GerberShiuSolution sol = solve(model);
    const std::vector<double> us = expand_grid(parse_grid_spec(grid_spec));
    const Eigen::VectorXd& alpha = model.interclaims.alpha();
    const int n = model.n();

    auto row = [&](double u) {
        const double w = sol.value_w(u, alpha).real();
        const double d = sol.value_d(u, alpha).real();
        return std::tuple<double, double, double>(w, d, w + model.penalty.w0 * d);
    };

    if (format == "json") {
        nlohmann::json j;
        j["u"] = us;
        auto &jw = j["phi_w"], &jd = j["phi_d"], &jp = j["phi"];
        for (double u : us) {
            const auto [w, d, p] = row(u);
            jw.push_back(w);
            jd.push_back(d);
            jp.push_back(p);
        }
        if (phases) {
            for (int ph = 0; ph < n; ++ph) {
                nlohmann::json cw = nlohmann::json::array(), cd = nlohmann::json::array();
                for (double u : us) {
                    cw.push_back(sol.phi_w[ph].evaluate(u).real());
                    cd.push_back(sol.phi_d[ph].evaluate(u).real());
                }
                j["phi_w_by_phase"].push_back(cw);
                j["phi_d_by_phase"].push_back(cd);
            }
        }
        nlohmann::json cf;
        cf["phi"] = json_terms(sol.phi);
        for (int ph = 0; ph < n; ++ph) {
            cf["phi_w"].push_back(json_terms(sol.phi_w[ph]));
            cf["phi_d"].push_back(json_terms(sol.phi_d[ph]));
        }
        j["closed_form"] = cf;
        out << j.dump(2) << "\n";
        return kExitOk;
    }

    const char* sep = (format == "csv") ? "," : "  ";
    out << "u" << sep << "phi_w" << sep << "phi_d" << sep << "phi";
    if (phases)
        for (int ph = 1; ph <= n; ++ph)
            out << sep << "phi_w_" << ph << sep << "phi_d_" << ph;
    out << "\n";
    for (double u : us) {
        const auto [w, d, p] = row(u);
        out << fmt6(u) << sep << fmt6(w) << sep << fmt6(d) << sep << fmt6(p);
        if (phases)
            for (int ph = 0; ph < n; ++ph)
                out << sep << fmt6(sol.phi_w[ph].evaluate(u).real()) << sep
                    << fmt6(sol.phi_d[ph].evaluate(u).real());
        out << "\n";
    }
    if (explain) print_explain(sol, out);
    return kExitOk;
}

inline int run_laplace(const std::string& path, const std::string& delta_spec, const std::string& grid_spec,
                       const std::string& format, std::ostream& out) {
    RiskModel model = load_model_file(path);
    const std::vector<double> deltas = parse_list(delta_spec, "delta-list");
    for (double d : deltas)
        if (d <= 0.0) throw ParseError("delta-list: each delta must be > 0");
    const std::vector<double> us = expand_grid(parse_grid_spec(grid_spec));

    std::vector<std::vector<double>> curves;
    for (double d : deltas) {
        RiskModel variant = model;
        variant.delta = d;
        variant.penalty = Penalty::unit(1.0); // Laplace transform of the ruin time: w = 1, w0 = 1
        validate(variant);
        const GerberShiuSolution sol = solve(variant);
        std::vector<double> curve;
        curve.reserve(us.size());
        for (double u : us)
            curve.push_back(sol.value_w(u, variant.interclaims.alpha()).real() +
                            sol.value_d(u, variant.interclaims.alpha()).real());
        curves.push_back(std::move(curve));
    }

    if (format == "json") {
        nlohmann::json j;
        j["deltas"] = deltas;
        j["u"] = us;
        j["curves"] = curves;
        out << j.dump(2) << "\n";
        return kExitOk;
    }
    const char* sep = (format == "csv") ? "," : "  ";
    out << "u";
    for (double d : deltas) out << sep << "delta=" << fmt6(d);
    out << "\n";
    for (std::size_t k = 0; k < us.size(); ++k) {
        out << fmt6(us[k]);
        for (std::size_t c = 0; c < curves.size(); ++c) out << sep << fmt6(curves[c][k]);
        out << "\n";
    }
    return kExitOk;
}

struct CompareOptions {
    std::vector<double> us;
    long paths = 100000;
    std::uint64_t seed = 1;
    double t_max = 1000.0;
    double grid_step = 0.05;
    bool corrupt_analytic = false; // test hook
};

inline int run_compare(const std::string& path, const CompareOptions& opt, std::ostream& out) {
    const RiskModel model = load_model_file(path);
    validate(model);
    const GerberShiuSolution sol = solve(model);
    const Eigen::VectorXd& alpha = model.interclaims.alpha();

    out << "u  analytic_w  sim_w  se_w  z_w  analytic_d  sim_d  se_d  z_d\n";
    bool ok = true;
    for (double u : opt.us) {
        SimConfig cfg;
        cfg.n_paths = opt.paths;
        cfg.seed = opt.seed;
        cfg.t_max = opt.t_max;
        cfg.grid_step = opt.grid_step;
        const SimEstimate est = estimate(model, u, cfg);
        double aw = sol.value_w(u, alpha).real();
        double ad = sol.value_d(u, alpha).real();
        if (opt.corrupt_analytic) aw += 0.05;
        auto z = [](double a, double s, double se) {
            if (se <= 0.0) return std::abs(a - s) < 1e-12 ? 0.0 : 1e9;
            return (a - s) / se;
        };
        const double zw = z(aw, est.psi_w_hat, est.se_w);
        const double zd = z(ad, est.psi_d_hat, est.se_d);
        if (std::abs(zw) > 4.0 || std::abs(zd) > 4.0) ok = false;
        out << fmt6(u) << "  " << fmt6(aw) << "  " << fmt6(est.psi_w_hat) << "  " << fmt6(est.se_w) << "  "
            << fmt6(zw) << "  " << fmt6(ad) << "  " << fmt6(est.psi_d_hat) << "  " << fmt6(est.se_d) << "  "
            << fmt6(zd) << "\n";
    }
    out << (ok ? "agreement: all |z| <= 4\n" : "agreement: FAILED (some |z| > 4)\n");
    return ok ? kExitOk : kExitComparison;
}

/// Map an escaped exception to the exit-code contract.
inline int exit_code_for_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ModelError& e) {
        err << "invalid model: " << e.what() << "\n";
        return kExitInvalidModel;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

} // namespace ruinkit::cli
