#pragma once

#include <optional>
#include <string>
#include <vector>

#include "apar/dataset.hpp"
#include "apar/model.hpp"

namespace apar {

enum class BaselineKind { Random, UserMean, ItemMean, PlainMF };

const char* baseline_name(BaselineKind kind);
std::optional<BaselineKind> baseline_from_name(std::string_view name);

/// Reference predictors fitted on training data only. Mean-based kinds fall
/// back to the global training mean for users/items without ratings; Random
/// draws a seeded value per (user, item) pair; PlainMF is the apar model
/// reduced to lambda = 0, empty graph, gamma = 1.
class BaselinePredictor {
public:
    static BaselinePredictor fit(BaselineKind kind, const RatingsDataset& train,
                                 const Hyperparams& hp);

    double predict(int user, int item) const;
    BaselineKind kind() const { return kind_; }

    /// PlainMF only: the underlying factor model.
    const FactorModel& model() const;

private:
    BaselineKind kind_ = BaselineKind::Random;
    RatingScale scale_;
    std::uint64_t seed_ = 0;
    double global_mean_ = 0.0;
    std::vector<double> user_means_;  // NaN where unseen
    std::vector<double> item_means_;
    std::optional<FactorModel> model_;
};

inline BaselinePredictor fit_baseline(BaselineKind kind, const RatingsDataset& train,
                                      const Hyperparams& hp) {
    return BaselinePredictor::fit(kind, train, hp);
}

inline double predict_baseline(const BaselinePredictor& pred, int user, int item) {
    return pred.predict(user, item);
}

}  // namespace apar
