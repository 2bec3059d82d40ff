#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Gerber-Shiu penalty functions for diffusion-perturbed renewal risk models"};
    app.require_subcommand(1);

    std::string file, format = "text", ugrid = "0:10:0.5", deltas = "0.1,0.2", ulist = "0.5,2,5";
    bool phases = false, explain = false;
    ruinkit::cli::CompareOptions copt;

    auto* validate = app.add_subcommand("validate", "check a model file and report its summary");
    validate->add_option("file", file, "model spec file")->required();

    auto* roots = app.add_subcommand("roots", "solve the generalized Lundberg equation");
    roots->add_option("file", file, "model spec file")->required();
    roots->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

    auto* solve = app.add_subcommand("solve", "closed-form phi_w, phi_d, phi over a u grid");
    solve->add_option("file", file, "model spec file")->required();
    solve->add_option("--u-grid", ugrid, "grid start:stop:step");
    solve->add_option("--format", format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
    solve->add_flag("--phases", phases, "emit per-phase columns");
    solve->add_flag("--explain", explain, "dump roots, derivatives and coefficients");

    auto* laplace = app.add_subcommand("laplace", "ruin-time Laplace transform curves for several deltas");
    laplace->add_option("file", file, "model spec file")->required();
    laplace->add_option("--delta-list", deltas, "comma-separated discount rates, each > 0");
    laplace->add_option("--u-grid", ugrid, "grid start:stop:step");
    laplace->add_option("--format", format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));

    auto* compare = app.add_subcommand("compare", "analytic solution vs Monte Carlo estimates");
    compare->add_option("file", file, "model spec file")->required();
    compare->add_option("--u-list", ulist, "comma-separated initial capitals");
    compare->add_option("--paths", copt.paths, "simulated paths per u");
    compare->add_option("--seed", copt.seed, "master seed");
    compare->add_option("--t-max", copt.t_max, "simulation horizon");
    compare->add_option("--grid-step", copt.grid_step, "diffusion sub-interval");
    compare->add_flag("--corrupt-analytic", copt.corrupt_analytic)->group(""); // test hook

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return ruinkit::cli::run_validate(file, std::cout);
        if (roots->parsed()) return ruinkit::cli::run_roots(file, format, std::cout);
        if (solve->parsed()) return ruinkit::cli::run_solve(file, ugrid, format, phases, explain, std::cout);
        if (laplace->parsed()) return ruinkit::cli::run_laplace(file, deltas, ugrid, format, std::cout);
        if (compare->parsed()) {
            copt.us = ruinkit::cli::parse_list(ulist, "u-list");
            return ruinkit::cli::run_compare(file, copt, std::cout);
        }
    } catch (...) {
        return ruinkit::cli::exit_code_for_current_exception(std::cerr);
    }
    return 0;
}
