#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "apar/dataset.hpp"

namespace apar {

/// Seeded uniform partition; train size = round(fraction * records).
/// Both halves share the parent's index maps.
std::pair<RatingsDataset, RatingsDataset> split_train_test(const RatingsDataset& ds,
                                                           double train_fraction,
                                                           std::uint64_t seed);

/// Record ordinals per fold: k disjoint near-equal folds covering ds.
std::vector<std::vector<std::size_t>> kfold_assignment(const RatingsDataset& ds, int k,
                                                       std::uint64_t seed);

/// (train, test) pair per fold; fold f is the test set of pair f.
std::vector<std::pair<RatingsDataset, RatingsDataset>> kfold(const RatingsDataset& ds, int k,
                                                             std::uint64_t seed);

/// Fraction of users whose rated-item set intersects no other user's
/// rated-item set. Users without records count as isolated.
double dsw_degree(const RatingsDataset& ds);

struct DswResult {
    RatingsDataset dataset;
    double achieved_degree = 0.0;
    int isolated_users = 0;
};

/// Sparsify toward a target isolation degree: round(target * M) users are
/// selected (already-isolated users first) and stripped of every rating on
/// an item any other user also rated. Selected users keep their exclusive
/// items; everyone else is untouched. Fails if a selected user would lose
/// all ratings or the achieved degree lands outside target +/- 0.02.
DswResult make_dsw_subdataset(const RatingsDataset& ds, double target_degree, std::uint64_t seed);

}  // namespace apar
