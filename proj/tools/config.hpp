#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "apar/eval.hpp"
#include "apar/model.hpp"

namespace apar::cli {

/// Flat key-value run configuration. Grammar: one "key = value" per line,
/// '#' starts a comment, lists are comma-separated. Unknown keys are
/// rejected. Flag overrides beat config values, which beat defaults.
struct RunConfig {
    std::string dataset;
    std::string lexicon;
    std::string weights;
    std::string out_dir = "out";
    std::string domain = "instant-video";
    std::string model;  // defaults to <out_dir>/model.apar

    int rating_min = 1;
    int rating_max = 5;

    Hyperparams hp;
    TrainOptions options;
    bool clip_predictions = true;
    bool timings = false;
    bool quiet = false;

    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::vector<double> fractions = {0.6, 0.7, 0.8, 0.9};
    std::vector<double> lambdas = {0.01, 0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<double> degrees = {0.2, 0.4, 0.6, 0.8};
    double train_fraction = 0.9;
    std::vector<std::string> methods = {"Random", "UserMean", "ItemMean", "PlainMF", "APAR"};
    int kfold = 0;  // > 0: cmd_ingest writes a fold manifest

    std::string model_path() const { return model.empty() ? out_dir + "/model.apar" : model; }
    RatingScale scale() const { return RatingScale{rating_min, rating_max}; }
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    bool quiet = false;
};

void apply_overrides(RunConfig& config, const Overrides& overrides);

}  // namespace apar::cli
