#include "apar/interaction.hpp"

#include <vector>

namespace apar {

InteractionMatrix build_interaction_matrix(const RatingsDataset& ds) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(ds.records().size());
    for (const auto& rec : ds.records()) {
        int i = ds.index().user_row(rec.user_id).value();
        int j = ds.index().item_col(rec.item_id).value();
        triplets.emplace_back(i, j, static_cast<double>(rec.rating));
    }
    InteractionMatrix m;
    m.W.resize(ds.user_count(), ds.item_count());
    m.W.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

}  // namespace apar
