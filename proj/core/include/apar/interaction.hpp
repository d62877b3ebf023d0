#pragma once

#include <Eigen/SparseCore>

#include "apar/dataset.hpp"

namespace apar {

/// Sparse M x N matrix W with w_ij = rating for observed pairs and an
/// implicit 0 elsewhere; the sparsity pattern doubles as the observed mask.
struct InteractionMatrix {
    Eigen::SparseMatrix<double, Eigen::RowMajor> W;

    int users() const { return static_cast<int>(W.rows()); }
    int items() const { return static_cast<int>(W.cols()); }
    std::int64_t observed() const { return W.nonZeros(); }
    bool is_observed(int i, int j) const { return W.coeff(i, j) != 0.0; }
};

/// w_ij = R_ij for every deduplicated record, preserving true magnitudes.
InteractionMatrix build_interaction_matrix(const RatingsDataset& ds);

}  // namespace apar
