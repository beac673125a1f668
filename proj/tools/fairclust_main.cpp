#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "fairclust/cli_io.hpp"
#include "fairclust/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"socially fair clustering: minimize the worst per-group cost"};
    app.require_subcommand(1);
    CLI::App* cmd = app.add_subcommand("run", "cluster a csv file and emit a json report");

    fairclust::RunConfig config;
    std::string objective = "kmeans";
    std::string solver = "subgradient";
    int pca_value = 0;

    cmd->add_option("--input", config.input_path, "input csv file with a header row")->required();
    cmd->add_option("--group-col", config.group_column, "column holding the group label")
        ->required();
    cmd->add_option("--objective", objective, "kmeans, kmedian, kz, or subspace")
        ->check(CLI::IsMember({"kmeans", "kmedian", "kz", "subspace"}));
    cmd->add_option("--k", config.k, "number of clusters");
    cmd->add_option("--z", config.z, "cost exponent (kz and subspace objectives)");
    cmd->add_option("--q", config.q, "subspace dimension (subspace objective)");
    cmd->add_option("--samples", config.samples, "per-cell sample size M");
    cmd->add_option("--iters", config.iters, "reassignment iterations T");
    cmd->add_option("--restarts", config.restarts, "independent restarts");
    cmd->add_option("--seed", config.seed, "random seed");
    CLI::Option* pca_opt =
        cmd->add_option("--pca", pca_value,
                        "project onto this many principal components (bare flag: use k)")
            ->expected(0, 1);
    cmd->add_option("--solver", solver, "subgradient or ellipsoid")
        ->check(CLI::IsMember({"subgradient", "ellipsoid"}));
    cmd->add_flag("--exhaustive", config.exhaustive,
                  "score every partition of the input (tiny instances only)");
    cmd->add_flag("--standardize,!--no-standardize", config.standardize,
                  "standardize features before clustering (default: on)");
    cmd->add_option("--out", config.output_path, "write the json report to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (objective == "kmeans") config.objective = fairclust::Objective::kmeans;
    if (objective == "kmedian") config.objective = fairclust::Objective::kmedian;
    if (objective == "kz") config.objective = fairclust::Objective::kz;
    if (objective == "subspace") config.objective = fairclust::Objective::subspace;
    config.use_ellipsoid = solver == "ellipsoid";
    if (pca_opt->count() > 0) config.pca_dim = pca_value;

    try {
        const nlohmann::json report = fairclust::run(config);
        if (config.output_path.empty()) std::cout << report.dump(2) << "\n";
        return 0;
    } catch (const fairclust::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const fairclust::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
