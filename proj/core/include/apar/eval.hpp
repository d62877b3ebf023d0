#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "apar/dataset.hpp"
#include "apar/lexicon.hpp"
#include "apar/metrics.hpp"
#include "apar/model.hpp"

namespace apar {

/// One evaluated (method, configuration, seed) cell. A nonempty `error`
/// marks a failed cell; its metrics are meaningless and it is excluded
/// from CSV rows and table means.
struct EvalCell {
    std::string method;
    double x = 0.0;  // train fraction or DSW degree
    double lambda = 0.0;
    std::uint64_t seed = 0;
    double mae = 0.0;
    double rmse = 0.0;
    std::size_t n_pairs = 0;
    std::int64_t runtime_ms = 0;
    double achieved_degree = -1.0;  // DSW cells only
    std::string error;

    bool failed() const { return !error.empty(); }
};

struct EvalReport {
    std::vector<EvalCell> cells;

    /// Header: method,fraction_or_degree,lambda,seed,mae,rmse,n_pairs,runtime_ms.
    /// Per-seed rows first, then one "mean" row per (method, x, lambda)
    /// group. runtime_ms is written as 0 unless include_runtime is set, so
    /// identical runs produce identical bytes.
    void write_csv(std::ostream& out, bool include_runtime = false) const;

    /// Rows (x, metric) x method columns, means over seeds.
    void write_table(std::ostream& out, const std::string& x_label) const;

    std::vector<const EvalCell*> failures() const;

    /// Mean over the non-failed seeds of one group; NaN when none finished.
    double mean_mae(const std::string& method, double x, double lambda) const;
    double mean_rmse(const std::string& method, double x, double lambda) const;
};

/// Everything a benchmark cell needs besides the dataset.
struct PipelineConfig {
    Hyperparams hp;
    TrainOptions options;
    bool clip_predictions = true;  // clip to the rating scale at evaluation
    double train_fraction = 0.9;   // used by lambda_sweep and dsw_benchmark
    std::ostream* log = nullptr;   // optional progress/diagnostic sink
};

/// Train/test benchmark over methods x fractions x seeds. APAR derives its
/// personality graph and knowledge table from the training split only.
EvalReport run_benchmark(const RatingsDataset& ds, const Lexicon& lex, const WeightTable& weights,
                         const std::vector<std::string>& methods,
                         const std::vector<double>& fractions,
                         const std::vector<std::uint64_t>& seeds, const PipelineConfig& config);

/// APAR per lambda at the configured train fraction.
EvalReport lambda_sweep(const RatingsDataset& ds, const Lexicon& lex, const WeightTable& weights,
                        const std::vector<double>& lambdas,
                        const std::vector<std::uint64_t>& seeds, const PipelineConfig& config);

/// Per degree: split, sparsify the training half to the target DSW degree,
/// fit every method on the sparsified data, evaluate on the untouched test
/// half. Unreachable degrees fail their cells without stopping the sweep.
EvalReport dsw_benchmark(const RatingsDataset& ds, const Lexicon& lex, const WeightTable& weights,
                         const std::vector<double>& degrees,
                         const std::vector<std::string>& methods,
                         const std::vector<std::uint64_t>& seeds, const PipelineConfig& config);

}  // namespace apar
