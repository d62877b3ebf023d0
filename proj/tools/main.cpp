#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "apar/errors.hpp"
#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"APAR: personality-aware matrix factorization recommender"};
    app.require_subcommand(1);

    std::string config_path;
    apar::cli::Overrides overrides;
    std::uint64_t seed_flag = 0;
    std::string out_flag;

    app.add_option("-c,--config", config_path, "run configuration file")->required();
    auto* seed_opt = app.add_option("-s,--seed", seed_flag, "override the seed list");
    auto* out_opt = app.add_option("-o,--out", out_flag, "override the output directory");
    app.add_flag("-q,--quiet", overrides.quiet, "suppress progress output");

    auto* ingest = app.add_subcommand("ingest", "parse reviews, dump the canonical dataset");
    auto* traits = app.add_subcommand("traits", "infer personality profiles, write CSV");
    auto* train = app.add_subcommand("train", "train and persist an APAR model");
    auto* evaluate = app.add_subcommand("evaluate", "methods x training-size benchmark");
    auto* sweep = app.add_subcommand("sweep", "personality-regularization lambda sweep");
    auto* dsw = app.add_subcommand("dsw", "benchmark under DSW-n-FCI sparsification");
    auto* recommend = app.add_subcommand("recommend", "top-N items for one user");

    std::string user_id;
    int top_n = 10;
    recommend->add_option("user_id", user_id, "user to recommend for")->required();
    recommend->add_option("n", top_n, "number of items")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        apar::cli::RunConfig config = apar::cli::load_config(config_path);
        if (seed_opt->count() > 0) overrides.seed = seed_flag;
        if (out_opt->count() > 0) overrides.out_dir = out_flag;
        apar::cli::apply_overrides(config, overrides);

        if (ingest->parsed()) return apar::cli::cmd_ingest(config);
        if (traits->parsed()) return apar::cli::cmd_traits(config);
        if (train->parsed()) return apar::cli::cmd_train(config);
        if (evaluate->parsed()) return apar::cli::cmd_evaluate(config);
        if (sweep->parsed()) return apar::cli::cmd_sweep(config);
        if (dsw->parsed()) return apar::cli::cmd_dsw(config);
        if (recommend->parsed()) return apar::cli::cmd_recommend(config, user_id, top_n);
        std::cerr << "no subcommand given\n";
        return 1;
    } catch (const apar::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
