#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "apar/baselines.hpp"
#include "apar/eval.hpp"
#include "apar/interaction.hpp"
#include "apar/knowledge.hpp"
#include "apar/personality.hpp"
#include "apar/splits.hpp"

namespace apar::cli {

namespace fs = std::filesystem;

namespace {

void require_file(const std::string& path, const char* what) {
    if (path.empty()) throw ConfigError(std::string("config is missing the ") + what + " path");
    if (!fs::exists(path)) throw ConfigError(std::string(what) + " file not found: " + path);
}

RatingsDataset load_dataset(const RunConfig& config) {
    require_file(config.dataset, "dataset");
    std::ifstream in(config.dataset);
    if (!in) throw ConfigError("cannot open dataset file: " + config.dataset);
    return parse_reviews(in, config.domain, config.scale());
}

std::string out_path(const RunConfig& config, const std::string& name) {
    fs::create_directories(config.out_dir);
    return (fs::path(config.out_dir) / name).string();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: byte-stable newlines
    if (!out) throw ConfigError("cannot write output file: " + path);
    return out;
}

struct PipelineArtifacts {
    RatingsDataset dataset;
    Lexicon lexicon;
    WeightTable weights;
};

PipelineArtifacts load_pipeline(const RunConfig& config) {
    require_file(config.lexicon, "lexicon");
    require_file(config.weights, "weights");
    return {load_dataset(config), Lexicon::load_file(config.lexicon),
            WeightTable::load_file(config.weights)};
}

PipelineConfig pipeline_config(const RunConfig& config) {
    PipelineConfig pc;
    pc.hp = config.hp;
    pc.options = config.options;
    pc.clip_predictions = config.clip_predictions;
    pc.train_fraction = config.train_fraction;
    pc.log = config.quiet ? nullptr : &std::cout;
    return pc;
}

void report_failures(const EvalReport& report) {
    for (const EvalCell* cell : report.failures())
        std::cerr << "cell failed: method=" << cell->method << " x=" << cell->x
                  << " seed=" << cell->seed << ": " << cell->error << '\n';
}

int write_report(const RunConfig& config, const EvalReport& report, const std::string& stem,
                 const std::string& x_label) {
    auto csv = open_out(out_path(config, stem + ".csv"));
    report.write_csv(csv, config.timings);
    auto table = open_out(out_path(config, stem + ".txt"));
    report.write_table(table, x_label);
    report_failures(report);
    if (!config.quiet) {
        std::cout << "wrote " << out_path(config, stem + ".csv") << " and "
                  << out_path(config, stem + ".txt") << '\n';
        report.write_table(std::cout, x_label);
    }
    return 0;
}

}  // namespace

int cmd_ingest(const RunConfig& config) {
    RatingsDataset ds = load_dataset(config);

    const double density = static_cast<double>(ds.records().size()) /
                           (static_cast<double>(ds.user_count()) * ds.item_count());
    char buf[64];
    if (!config.quiet) {
        std::cout << "users: " << ds.user_count() << '\n';
        std::cout << "items: " << ds.item_count() << '\n';
        std::cout << "ratings: " << ds.records().size() << '\n';
        std::snprintf(buf, sizeof buf, "%.4f", density);
        std::cout << "density: " << buf << '\n';
        std::snprintf(buf, sizeof buf, "%.4f", dsw_degree(ds));
        std::cout << "dsw_degree: " << buf << '\n';
        std::cout << "lines: " << ds.stats().lines << "  parsed: " << ds.stats().parsed
                  << "  rejected: " << ds.stats().rejected
                  << "  duplicates: " << ds.stats().duplicates << '\n';
    }

    auto dump = open_out(out_path(config, "dataset.jsonl"));
    write_canonical(ds, dump);
    if (!config.quiet) std::cout << "wrote " << out_path(config, "dataset.jsonl") << '\n';

    if (config.kfold > 0) {
        auto folds = kfold_assignment(ds, config.kfold, config.seeds.front());
        auto manifest = open_out(out_path(config, "folds.txt"));
        for (std::size_t f = 0; f < folds.size(); ++f) {
            manifest << "fold " << f << ':';
            for (std::size_t ordinal : folds[f]) manifest << ' ' << ordinal;
            manifest << '\n';
        }
        if (!config.quiet) std::cout << "wrote " << out_path(config, "folds.txt") << '\n';
    }
    return 0;
}

int cmd_traits(const RunConfig& config) {
    auto [ds, lexicon, weights] = load_pipeline(config);
    auto profiles = user_profiles(ds, lexicon, weights);

    auto csv = open_out(out_path(config, "profiles.csv"));
    write_profiles_csv(profiles, ds, csv);

    std::size_t untyped = 0;
    for (const auto& p : profiles)
        if (p.untyped) ++untyped;
    if (!config.quiet) {
        std::cout << "profiles: " << profiles.size() << "  untyped: " << untyped << '\n';
        std::cout << "wrote " << out_path(config, "profiles.csv") << '\n';
    }
    return 0;
}

int cmd_train(const RunConfig& config) {
    auto [ds, lexicon, weights] = load_pipeline(config);

    auto interactions = build_interaction_matrix(ds);
    auto profiles = user_profiles(ds, lexicon, weights);
    auto graph = PersonalityGraph::from_profiles(profiles, ds);
    auto knowledge = KnowledgeTable::build(ds, config.hp.beta);

    FactorModel model = train(interactions, graph, knowledge, config.hp, config.options);
    model.fingerprint = dataset_fingerprint(ds);
    if (auto parent = fs::path(config.model_path()).parent_path(); !parent.empty())
        fs::create_directories(parent);
    save_model(model, config.model_path());

    auto trace = open_out(out_path(config, "objective_trace.csv"));
    trace << "iteration,objective\n";
    char buf[64];
    for (std::size_t t = 0; t < model.objective_trace.size(); ++t) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", t, model.objective_trace[t]);
        trace << buf;
    }

    auto kcsv = open_out(out_path(config, "knowledge.csv"));
    knowledge.write_csv(ds, kcsv);

    if (!config.quiet) {
        std::snprintf(buf, sizeof buf, "%.6f", model.final_objective);
        std::cout << "trained " << model.users() << " x " << model.items() << " rank "
                  << model.hp.d << " in " << model.iterations << " iterations, objective " << buf
                  << '\n';
        std::cout << "wrote " << config.model_path() << " and "
                  << out_path(config, "objective_trace.csv") << '\n';
    }
    return 0;
}

int cmd_evaluate(const RunConfig& config) {
    auto [ds, lexicon, weights] = load_pipeline(config);
    EvalReport report = run_benchmark(ds, lexicon, weights, config.methods, config.fractions,
                                      config.seeds, pipeline_config(config));
    return write_report(config, report, "evaluate", "Training");
}

int cmd_sweep(const RunConfig& config) {
    auto [ds, lexicon, weights] = load_pipeline(config);
    EvalReport report =
        lambda_sweep(ds, lexicon, weights, config.lambdas, config.seeds, pipeline_config(config));
    return write_report(config, report, "sweep", "Lambda");
}

int cmd_dsw(const RunConfig& config) {
    auto [ds, lexicon, weights] = load_pipeline(config);
    EvalReport report = dsw_benchmark(ds, lexicon, weights, config.degrees, config.methods,
                                      config.seeds, pipeline_config(config));
    return write_report(config, report, "dsw", "Degree");
}

int cmd_recommend(const RunConfig& config, const std::string& user_id, int n) {
    auto [ds, lexicon, weights] = load_pipeline(config);
    require_file(config.model_path(), "model");

    auto user = ds.index().user_row(user_id);
    if (!user) throw std::invalid_argument("unknown user '" + user_id + "'");

    FactorModel model = load_model(config.model_path(), dataset_fingerprint(ds));
    auto profiles = user_profiles(ds, lexicon, weights);
    auto graph = PersonalityGraph::from_profiles(profiles, ds);
    attach_graph(model, graph);

    auto interactions = build_interaction_matrix(ds);
    auto top = recommend_top_n(model, *user, n, /*exclude_rated=*/true, interactions);

    char buf[32];
    for (std::size_t r = 0; r < top.size(); ++r) {
        std::snprintf(buf, sizeof buf, "%.6f", top[r].second);
        std::cout << (r + 1) << '\t' << ds.index().item_id(top[r].first) << '\t' << buf << '\n';
    }
    return 0;
}

}  // namespace apar::cli
