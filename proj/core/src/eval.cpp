#include "apar/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "apar/baselines.hpp"
#include "apar/interaction.hpp"
#include "apar/knowledge.hpp"
#include "apar/personality.hpp"
#include "apar/splits.hpp"

namespace apar {

namespace {

FactorModel fit_apar(const RatingsDataset& train_ds, const Lexicon& lex,
                     const WeightTable& weights, const Hyperparams& hp,
                     const TrainOptions& options) {
    auto interactions = build_interaction_matrix(train_ds);
    auto profiles = user_profiles(train_ds, lex, weights);
    auto graph = PersonalityGraph::from_profiles(profiles, train_ds);
    auto knowledge = KnowledgeTable::build(train_ds, hp.beta);
    return train(interactions, graph, knowledge, hp, options);
}

template <typename PredictFn>
void evaluate_pairs(const RatingsDataset& test, PredictFn&& predict_fn, bool clip,
                    const RatingScale& scale, EvalCell& cell) {
    std::vector<double> predicted, truth;
    predicted.reserve(test.records().size());
    truth.reserve(test.records().size());
    for (const auto& rec : test.records()) {
        int u = test.index().user_row(rec.user_id).value();
        int j = test.index().item_col(rec.item_id).value();
        double p = predict_fn(u, j);
        if (clip) p = std::clamp(p, static_cast<double>(scale.min), static_cast<double>(scale.max));
        predicted.push_back(p);
        truth.push_back(static_cast<double>(rec.rating));
    }
    cell.mae = mae(predicted, truth);
    cell.rmse = rmse(predicted, truth);
    cell.n_pairs = predicted.size();
}

// Fit one method on `fit_ds` and score it on `test`.
void run_cell(const std::string& method, const RatingsDataset& fit_ds, const RatingsDataset& test,
              const Lexicon& lex, const WeightTable& weights, const Hyperparams& hp,
              const PipelineConfig& config, EvalCell& cell) {
    const auto start = std::chrono::steady_clock::now();
    if (method == "APAR") {
        FactorModel model = fit_apar(fit_ds, lex, weights, hp, config.options);
        evaluate_pairs(
            test, [&](int u, int j) { return predict(model, u, j); }, config.clip_predictions,
            fit_ds.scale(), cell);
    } else {
        auto kind = baseline_from_name(method);
        if (!kind) throw ConfigError("unknown method '" + method + "'");
        auto predictor = BaselinePredictor::fit(*kind, fit_ds, hp);
        evaluate_pairs(
            test, [&](int u, int j) { return predictor.predict(u, j); }, config.clip_predictions,
            fit_ds.scale(), cell);
    }
    cell.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
}

}  // namespace

EvalReport run_benchmark(const RatingsDataset& ds, const Lexicon& lex, const WeightTable& weights,
                         const std::vector<std::string>& methods,
                         const std::vector<double>& fractions,
                         const std::vector<std::uint64_t>& seeds, const PipelineConfig& config) {
    if (ds.records().empty()) throw std::invalid_argument("empty dataset");
    if (methods.empty() || fractions.empty() || seeds.empty())
        throw std::invalid_argument("methods, fractions, and seeds must be nonempty");

    EvalReport report;
    for (double fraction : fractions) {
        for (std::uint64_t seed : seeds) {
            Hyperparams hp = config.hp;
            hp.seed = seed;
            auto [train_ds, test_ds] = split_train_test(ds, fraction, seed);
            for (const auto& method : methods) {
                EvalCell cell;
                cell.method = method;
                cell.x = fraction;
                cell.lambda = method == "APAR" ? hp.lambda : 0.0;
                cell.seed = seed;
                try {
                    run_cell(method, train_ds, test_ds, lex, weights, hp, config, cell);
                } catch (const std::exception& e) {
                    cell.error = e.what();
                }
                report.cells.push_back(std::move(cell));
            }
        }
    }
    return report;
}

EvalReport lambda_sweep(const RatingsDataset& ds, const Lexicon& lex, const WeightTable& weights,
                        const std::vector<double>& lambdas,
                        const std::vector<std::uint64_t>& seeds, const PipelineConfig& config) {
    if (lambdas.empty() || seeds.empty())
        throw std::invalid_argument("lambdas and seeds must be nonempty");

    EvalReport report;
    for (double lambda : lambdas) {
        for (std::uint64_t seed : seeds) {
            Hyperparams hp = config.hp;
            hp.lambda = lambda;
            hp.seed = seed;
            EvalCell cell;
            cell.method = "APAR";
            cell.x = config.train_fraction;
            cell.lambda = lambda;
            cell.seed = seed;
            try {
                auto [train_ds, test_ds] = split_train_test(ds, config.train_fraction, seed);
                run_cell("APAR", train_ds, test_ds, lex, weights, hp, config, cell);
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

EvalReport dsw_benchmark(const RatingsDataset& ds, const Lexicon& lex, const WeightTable& weights,
                         const std::vector<double>& degrees,
                         const std::vector<std::string>& methods,
                         const std::vector<std::uint64_t>& seeds, const PipelineConfig& config) {
    if (degrees.empty() || methods.empty() || seeds.empty())
        throw std::invalid_argument("degrees, methods, and seeds must be nonempty");

    EvalReport report;
    char line[160];
    for (double degree : degrees) {
        for (std::uint64_t seed : seeds) {
            Hyperparams hp = config.hp;
            hp.seed = seed;

            std::string construction_error;
            RatingsDataset train_ds = ds, test_ds = ds;  // overwritten below
            double achieved = -1.0;
            try {
                auto split = split_train_test(ds, config.train_fraction, seed);
                DswResult sparse = make_dsw_subdataset(split.first, degree, seed);
                achieved = sparse.achieved_degree;
                train_ds = std::move(sparse.dataset);
                test_ds = std::move(split.second);
                if (config.log) {
                    std::snprintf(line, sizeof line,
                                  "dsw: target %.2f seed %llu -> achieved degree %.4f\n", degree,
                                  static_cast<unsigned long long>(seed), achieved);
                    *config.log << line;
                }
            } catch (const std::exception& e) {
                construction_error = e.what();
            }

            for (const auto& method : methods) {
                EvalCell cell;
                cell.method = method;
                cell.x = degree;
                cell.lambda = method == "APAR" ? hp.lambda : 0.0;
                cell.seed = seed;
                cell.achieved_degree = achieved;
                if (!construction_error.empty()) {
                    cell.error = construction_error;
                } else {
                    try {
                        run_cell(method, train_ds, test_ds, lex, weights, hp, config, cell);
                    } catch (const std::exception& e) {
                        cell.error = e.what();
                    }
                }
                report.cells.push_back(std::move(cell));
            }
        }
    }
    return report;
}

namespace {

std::string format_num(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

struct GroupKey {
    std::string method;
    double x;
    double lambda;
    bool operator==(const GroupKey&) const = default;
};

std::vector<GroupKey> group_order(const std::vector<EvalCell>& cells) {
    std::vector<GroupKey> keys;
    for (const auto& c : cells) {
        GroupKey k{c.method, c.x, c.lambda};
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
    return keys;
}

}  // namespace

void EvalReport::write_csv(std::ostream& out, bool include_runtime) const {
    out << "method,fraction_or_degree,lambda,seed,mae,rmse,n_pairs,runtime_ms\n";
    for (const auto& c : cells) {
        if (c.failed()) continue;
        out << c.method << ',' << format_num("%g", c.x) << ',' << format_num("%g", c.lambda) << ','
            << c.seed << ',' << format_num("%.6f", c.mae) << ',' << format_num("%.6f", c.rmse)
            << ',' << c.n_pairs << ',' << (include_runtime ? c.runtime_ms : 0) << '\n';
    }
    for (const auto& key : group_order(cells)) {
        double mae_sum = 0.0, rmse_sum = 0.0;
        std::size_t pairs = 0;
        std::int64_t ms = 0;
        int n = 0;
        for (const auto& c : cells) {
            if (c.failed() || GroupKey{c.method, c.x, c.lambda} != key) continue;
            mae_sum += c.mae;
            rmse_sum += c.rmse;
            pairs += c.n_pairs;
            ms += c.runtime_ms;
            ++n;
        }
        if (n == 0) continue;
        out << key.method << ',' << format_num("%g", key.x) << ',' << format_num("%g", key.lambda)
            << ",mean," << format_num("%.6f", mae_sum / n) << ',' << format_num("%.6f", rmse_sum / n)
            << ',' << pairs << ',' << (include_runtime ? ms : 0) << '\n';
    }
}

double EvalReport::mean_mae(const std::string& method, double x, double lambda) const {
    double sum = 0.0;
    int n = 0;
    for (const auto& c : cells)
        if (!c.failed() && c.method == method && c.x == x && c.lambda == lambda) {
            sum += c.mae;
            ++n;
        }
    return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / n;
}

double EvalReport::mean_rmse(const std::string& method, double x, double lambda) const {
    double sum = 0.0;
    int n = 0;
    for (const auto& c : cells)
        if (!c.failed() && c.method == method && c.x == x && c.lambda == lambda) {
            sum += c.rmse;
            ++n;
        }
    return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / n;
}

std::vector<const EvalCell*> EvalReport::failures() const {
    std::vector<const EvalCell*> out;
    for (const auto& c : cells)
        if (c.failed()) out.push_back(&c);
    return out;
}

void EvalReport::write_table(std::ostream& out, const std::string& x_label) const {
    // row values: lambda when it is the moving part, otherwise x
    std::vector<double> xs, lambdas;
    std::vector<std::string> methods;
    for (const auto& c : cells) {
        if (std::find(xs.begin(), xs.end(), c.x) == xs.end()) xs.push_back(c.x);
        if (std::find(lambdas.begin(), lambdas.end(), c.lambda) == lambdas.end())
            lambdas.push_back(c.lambda);
        if (std::find(methods.begin(), methods.end(), c.method) == methods.end())
            methods.push_back(c.method);
    }
    // sweep-shaped reports (one method, one fraction, several lambdas) use
    // lambda rows; benchmark-shaped reports use the fraction/degree
    const bool by_lambda = methods.size() == 1 && xs.size() == 1 && lambdas.size() > 1;
    const auto& rows = by_lambda ? lambdas : xs;

    auto row_name = [&](double v) {
        return by_lambda ? format_num("%g", v)
                         : format_num("%.0f", v * 100.0) + "%";
    };

    std::size_t label_w = x_label.size();
    for (double v : rows) label_w = std::max(label_w, row_name(v).size());
    label_w += 2;

    out << x_label << std::string(label_w - x_label.size(), ' ') << "Metric  ";
    for (const auto& m : methods) out << m << "  ";
    out << '\n';

    for (double v : rows) {
        for (const char* metric : {"MAE", "RMSE"}) {
            const std::string name = row_name(v);
            out << name << std::string(label_w - name.size(), ' ');
            out << metric << std::string(8 - std::string(metric).size(), ' ');
            for (const auto& m : methods) {
                double x = by_lambda ? xs[0] : v;
                double lambda = by_lambda ? v : -1.0;
                double value = 0.0;
                if (by_lambda) {
                    value = std::string(metric) == "MAE" ? mean_mae(m, x, lambda)
                                                         : mean_rmse(m, x, lambda);
                } else {
                    // any lambda recorded for this method/x group
                    double sum = 0.0;
                    int n = 0;
                    for (const auto& c : cells)
                        if (!c.failed() && c.method == m && c.x == x) {
                            sum += std::string(metric) == "MAE" ? c.mae : c.rmse;
                            ++n;
                        }
                    value = n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / n;
                }
                std::string cell_text =
                    std::isnan(value) ? std::string("--") : format_num("%.3f", value);
                out << cell_text << std::string(std::max<std::size_t>(m.size() + 2, cell_text.size() + 2) -
                                                    cell_text.size(),
                                                ' ');
            }
            out << '\n';
        }
    }
}

}  // namespace apar
