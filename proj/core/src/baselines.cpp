#include "apar/baselines.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "apar/interaction.hpp"

namespace apar {

const char* baseline_name(BaselineKind kind) {
    switch (kind) {
        case BaselineKind::Random: return "Random";
        case BaselineKind::UserMean: return "UserMean";
        case BaselineKind::ItemMean: return "ItemMean";
        case BaselineKind::PlainMF: return "PlainMF";
    }
    return "?";
}

std::optional<BaselineKind> baseline_from_name(std::string_view name) {
    for (BaselineKind k : {BaselineKind::Random, BaselineKind::UserMean, BaselineKind::ItemMean,
                           BaselineKind::PlainMF})
        if (name == baseline_name(k)) return k;
    return std::nullopt;
}

namespace {

// splitmix64; gives each (seed, user, item) an independent uniform draw
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

BaselinePredictor BaselinePredictor::fit(BaselineKind kind, const RatingsDataset& train,
                                         const Hyperparams& hp) {
    if (train.records().empty()) throw std::invalid_argument("empty training set");

    BaselinePredictor p;
    p.kind_ = kind;
    p.scale_ = train.scale();
    p.seed_ = hp.seed;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> user_sum(train.user_count(), 0.0), item_sum(train.item_count(), 0.0);
    std::vector<int> user_n(train.user_count(), 0), item_n(train.item_count(), 0);
    double total = 0.0;
    for (const auto& rec : train.records()) {
        int u = train.index().user_row(rec.user_id).value();
        int j = train.index().item_col(rec.item_id).value();
        user_sum[u] += rec.rating;
        item_sum[j] += rec.rating;
        ++user_n[u];
        ++item_n[j];
        total += rec.rating;
    }
    p.global_mean_ = total / static_cast<double>(train.records().size());

    p.user_means_.assign(train.user_count(), nan);
    for (int u = 0; u < train.user_count(); ++u)
        if (user_n[u] > 0) p.user_means_[u] = user_sum[u] / user_n[u];
    p.item_means_.assign(train.item_count(), nan);
    for (int j = 0; j < train.item_count(); ++j)
        if (item_n[j] > 0) p.item_means_[j] = item_sum[j] / item_n[j];

    if (kind == BaselineKind::PlainMF) {
        Hyperparams reduced = hp;
        reduced.lambda = 0.0;
        TrainOptions options;
        options.gamma_mode = GammaMode::Constant;
        options.gamma_const = 1.0;
        auto interactions = build_interaction_matrix(train);
        auto graph = PersonalityGraph::empty(train.user_count());
        auto knowledge = KnowledgeTable::build(train, hp.beta);
        p.model_ = apar::train(interactions, graph, knowledge, reduced, options);
    }
    return p;
}

double BaselinePredictor::predict(int user, int item) const {
    switch (kind_) {
        case BaselineKind::Random: {
            std::uint64_t h = mix(mix(seed_ ^ static_cast<std::uint64_t>(user) << 32) ^
                                  static_cast<std::uint64_t>(item));
            auto span = static_cast<std::uint64_t>(scale_.max - scale_.min + 1);
            return static_cast<double>(scale_.min + static_cast<int>(h % span));
        }
        case BaselineKind::UserMean: {
            double m = user < 0 || user >= static_cast<int>(user_means_.size())
                           ? global_mean_
                           : user_means_[user];
            return std::isnan(m) ? global_mean_ : m;
        }
        case BaselineKind::ItemMean: {
            double m = item < 0 || item >= static_cast<int>(item_means_.size())
                           ? global_mean_
                           : item_means_[item];
            return std::isnan(m) ? global_mean_ : m;
        }
        case BaselineKind::PlainMF: return apar::predict(*model_, user, item);
    }
    throw std::logic_error("unreachable baseline kind");
}

const FactorModel& BaselinePredictor::model() const {
    if (!model_) throw std::logic_error("no factor model on this baseline");
    return *model_;
}

}  // namespace apar
