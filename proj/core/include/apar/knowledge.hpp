#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <map>
#include <string>

#include "apar/dataset.hpp"

namespace apar {

/// helpful_votes / total_votes, or 0 when the review received no votes.
double review_helpfulness(const ReviewRecord& rec);

/// Mean helpfulness of one user's reviews in a domain; 0 with no reviews
/// there. Direct-loop form, used both as the API and as the table's oracle.
double knowledge_level(int user, const std::string& domain, const RatingsDataset& ds);

/// Per-(user, domain) knowledge levels kl in [0,1] and mixing coefficients
/// gamma = clamp(beta + kl, 0, 1).
class KnowledgeTable {
public:
    static KnowledgeTable build(const RatingsDataset& ds, double beta);

    double beta() const { return beta_; }
    double kl(int user, const std::string& domain) const;
    double gamma(int user, const std::string& domain) const;

    /// One mixing coefficient per user row for training: kl averaged over
    /// the user's domains weighted by review count (identical to the
    /// per-domain value on single-domain corpora), then clamped with beta.
    Eigen::VectorXd per_user_gamma() const;

    /// CSV: user_id,domain,kl,gamma — rows sorted by (user row, domain).
    void write_csv(const RatingsDataset& ds, std::ostream& out) const;

private:
    struct Cell {
        double kl = 0.0;
        std::size_t reviews = 0;
    };
    double beta_ = 0.5;
    int users_ = 0;
    std::map<std::pair<int, std::string>, Cell> cells_;
};

inline KnowledgeTable build_knowledge_table(const RatingsDataset& ds, double beta) {
    return KnowledgeTable::build(ds, beta);
}

}  // namespace apar
