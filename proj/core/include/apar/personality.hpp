#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <array>
#include <iosfwd>
#include <vector>

#include "apar/dataset.hpp"
#include "apar/lexicon.hpp"

namespace apar {

struct PersonalityProfile {
    std::array<double, 5> trait_scores{};  // O, C, E, A, N
    Trait dominant = Trait::Openness;
    bool untyped = false;  // no tokens in any review
};

/// Argmax with the fixed O, C, E, A, N tie-break.
Trait dominant_trait(const std::array<double, 5>& scores);

/// One profile per indexed user: all review texts pooled, scored once.
/// Users without any tokens are flagged untyped with all-zero scores.
std::vector<PersonalityProfile> user_profiles(const RatingsDataset& ds, const Lexicon& lex,
                                              const WeightTable& weights);

void write_profiles_csv(const std::vector<PersonalityProfile>& profiles, const RatingsDataset& ds,
                        std::ostream& out);

/// Same-dominant-trait graph over users. L is binary symmetric with a zero
/// diagonal (untyped users have empty rows); the personality coefficient
/// matrix Z coincides with L, D holds the integer row degrees, and the
/// Laplacian Y = D - Z has exactly zero row sums.
class PersonalityGraph {
public:
    PersonalityGraph() = default;  // zero users

    static PersonalityGraph from_profiles(const std::vector<PersonalityProfile>& profiles,
                                          const RatingsDataset& ds);

    /// Validates symmetry, zero diagonal, and 0/1 entries.
    static PersonalityGraph from_adjacency(const Eigen::SparseMatrix<double, Eigen::RowMajor>& L);

    static PersonalityGraph empty(int users);

    int size() const { return static_cast<int>(L_.rows()); }
    const Eigen::SparseMatrix<double, Eigen::RowMajor>& L() const { return L_; }
    const Eigen::SparseMatrix<double, Eigen::RowMajor>& Z() const { return L_; }
    const Eigen::VectorXd& degrees() const { return degrees_; }

    /// phi+ per user: the rows k with L_ik = 1.
    const std::vector<std::vector<int>>& neighbors() const { return neighbors_; }

    Eigen::SparseMatrix<double, Eigen::RowMajor> laplacian() const;

    /// Y * X without materializing Y.
    Eigen::MatrixXd apply_laplacian(const Eigen::MatrixXd& X) const;

private:
    void finalize();

    Eigen::SparseMatrix<double, Eigen::RowMajor> L_;
    Eigen::VectorXd degrees_;
    std::vector<std::vector<int>> neighbors_;
};

}  // namespace apar
