#include "apar/splits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace apar {

namespace {

std::vector<std::size_t> shuffled_ordinals(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> ordinals(n);
    std::iota(ordinals.begin(), ordinals.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(ordinals.begin(), ordinals.end(), rng);
    return ordinals;
}

}  // namespace

std::pair<RatingsDataset, RatingsDataset> split_train_test(const RatingsDataset& ds,
                                                           double train_fraction,
                                                           std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must lie in (0,1)");
    const std::size_t n = ds.records().size();
    if (n < 2) throw std::invalid_argument("need at least 2 records to split");

    auto ordinals = shuffled_ordinals(n, seed);
    const auto train_n =
        static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));

    std::vector<std::size_t> train(ordinals.begin(), ordinals.begin() + std::min(train_n, n));
    std::vector<std::size_t> test(ordinals.begin() + std::min(train_n, n), ordinals.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {ds.subset(train), ds.subset(test)};
}

std::vector<std::vector<std::size_t>> kfold_assignment(const RatingsDataset& ds, int k,
                                                       std::uint64_t seed) {
    const std::size_t n = ds.records().size();
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    if (static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("k exceeds the number of records");

    auto ordinals = shuffled_ordinals(n, seed);
    std::vector<std::vector<std::size_t>> folds(k);
    for (std::size_t i = 0; i < n; ++i) folds[i % k].push_back(ordinals[i]);
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

std::vector<std::pair<RatingsDataset, RatingsDataset>> kfold(const RatingsDataset& ds, int k,
                                                             std::uint64_t seed) {
    auto folds = kfold_assignment(ds, k, seed);
    std::vector<std::pair<RatingsDataset, RatingsDataset>> out;
    out.reserve(folds.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::vector<std::size_t> train;
        train.reserve(ds.records().size() - folds[f].size());
        for (std::size_t g = 0; g < folds.size(); ++g) {
            if (g == f) continue;
            train.insert(train.end(), folds[g].begin(), folds[g].end());
        }
        std::sort(train.begin(), train.end());
        out.emplace_back(ds.subset(train), ds.subset(folds[f]));
    }
    return out;
}

namespace {

// Ratings per item column. Since (user,item) pairs are unique, an item with
// count 1 is rated by exactly one user.
std::vector<int> item_rating_counts(const RatingsDataset& ds) {
    std::vector<int> counts(ds.item_count(), 0);
    for (const auto& rec : ds.records()) ++counts[ds.index().item_col(rec.item_id).value()];
    return counts;
}

std::vector<bool> isolated_users(const RatingsDataset& ds, const std::vector<int>& item_counts) {
    std::vector<bool> isolated(ds.user_count(), true);
    for (int u = 0; u < ds.user_count(); ++u) {
        for (std::size_t r : ds.records_of_user(u)) {
            int j = ds.index().item_col(ds.records()[r].item_id).value();
            if (item_counts[j] > 1) {
                isolated[u] = false;
                break;
            }
        }
    }
    return isolated;
}

}  // namespace

double dsw_degree(const RatingsDataset& ds) {
    auto counts = item_rating_counts(ds);
    auto isolated = isolated_users(ds, counts);
    auto n_isolated = std::count(isolated.begin(), isolated.end(), true);
    return static_cast<double>(n_isolated) / static_cast<double>(ds.user_count());
}

DswResult make_dsw_subdataset(const RatingsDataset& ds, double target_degree,
                              std::uint64_t seed) {
    if (!(target_degree >= 0.0 && target_degree <= 1.0))
        throw std::invalid_argument("target_degree must lie in [0,1]");
    constexpr double kTolerance = 0.02;

    const int m = ds.user_count();
    const auto n_target = static_cast<int>(std::llround(target_degree * m));

    auto counts = item_rating_counts(ds);
    auto isolated = isolated_users(ds, counts);
    const int already = static_cast<int>(std::count(isolated.begin(), isolated.end(), true));

    if (n_target == 0)
        return {ds.subset([&] {
                    std::vector<std::size_t> all(ds.records().size());
                    std::iota(all.begin(), all.end(), std::size_t{0});
                    return all;
                }()),
                static_cast<double>(already) / m, already};

    if (already >= n_target) {
        double degree = static_cast<double>(already) / m;
        if (std::abs(degree - target_degree) <= kTolerance) {
            std::vector<std::size_t> all(ds.records().size());
            std::iota(all.begin(), all.end(), std::size_t{0});
            return {ds.subset(all), degree, already};
        }
        throw std::runtime_error("DSW target " + std::to_string(target_degree) +
                                 " unreachable: dataset degree is already " +
                                 std::to_string(degree) + " and ratings cannot be added");
    }

    // Candidates that can be isolated without losing every rating: users
    // holding at least one item nobody else rated.
    std::vector<int> candidates;
    int infeasible = -1;
    for (int u = 0; u < m; ++u) {
        if (isolated[u]) continue;
        bool has_exclusive = false;
        for (std::size_t r : ds.records_of_user(u)) {
            int j = ds.index().item_col(ds.records()[r].item_id).value();
            if (counts[j] == 1) {
                has_exclusive = true;
                break;
            }
        }
        if (has_exclusive)
            candidates.push_back(u);
        else if (infeasible < 0)
            infeasible = u;
    }

    const int need = n_target - already;
    if (static_cast<int>(candidates.size()) < need) {
        const std::string who = infeasible >= 0 ? ds.index().user_id(infeasible) : "<none>";
        throw std::runtime_error(
            "DSW target " + std::to_string(target_degree) +
            " unreachable without emptying a selected user's ratings (user '" + who +
            "' has no exclusive items); achieved degree would be " +
            std::to_string(static_cast<double>(already + candidates.size()) / m));
    }

    std::mt19937_64 rng(seed);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    std::vector<bool> selected(m, false);
    for (int s = 0; s < need; ++s) selected[candidates[s]] = true;

    std::vector<std::size_t> kept;
    kept.reserve(ds.records().size());
    for (std::size_t r = 0; r < ds.records().size(); ++r) {
        const auto& rec = ds.records()[r];
        int u = ds.index().user_row(rec.user_id).value();
        int j = ds.index().item_col(rec.item_id).value();
        if (selected[u] && counts[j] > 1) continue;  // shared rating of a selected user
        kept.push_back(r);
    }

    DswResult result{ds.subset(kept), 0.0, 0};
    auto out_counts = item_rating_counts(result.dataset);
    auto out_isolated = isolated_users(result.dataset, out_counts);
    result.isolated_users =
        static_cast<int>(std::count(out_isolated.begin(), out_isolated.end(), true));
    result.achieved_degree = static_cast<double>(result.isolated_users) / m;

    if (std::abs(result.achieved_degree - target_degree) > kTolerance + 1e-12)
        throw std::runtime_error("DSW construction landed at degree " +
                                 std::to_string(result.achieved_degree) + ", outside " +
                                 std::to_string(target_degree) + " +/- 0.02");
    return result;
}

}  // namespace apar
