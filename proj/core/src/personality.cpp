#include "apar/personality.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace apar {

Trait dominant_trait(const std::array<double, 5>& scores) {
    int best = 0;
    for (int t = 1; t < 5; ++t)
        if (scores[t] > scores[best]) best = t;
    return static_cast<Trait>(best);
}

std::vector<PersonalityProfile> user_profiles(const RatingsDataset& ds, const Lexicon& lex,
                                              const WeightTable& weights) {
    std::vector<PersonalityProfile> profiles(ds.user_count());

    for (int u = 0; u < ds.user_count(); ++u) {
        std::vector<std::string> tokens;
        for (std::size_t r : ds.records_of_user(u)) {
            auto more = tokenize(ds.records()[r].text);
            tokens.insert(tokens.end(), std::make_move_iterator(more.begin()),
                          std::make_move_iterator(more.end()));
        }

        PersonalityProfile& p = profiles[u];
        if (tokens.empty()) {
            p.untyped = true;
            p.dominant = Trait::Openness;
            continue;
        }
        auto freqs = category_frequencies(tokens, lex);
        for (Trait t : kTraitOrder)
            p.trait_scores[static_cast<int>(t)] = trait_score(freqs, weights.weights(t));
        p.dominant = dominant_trait(p.trait_scores);
    }
    return profiles;
}

void write_profiles_csv(const std::vector<PersonalityProfile>& profiles, const RatingsDataset& ds,
                        std::ostream& out) {
    if (static_cast<int>(profiles.size()) != ds.user_count())
        throw std::invalid_argument("profile count does not match user count");
    out << "user_id,O,C,E,A,N,dominant,untyped\n";
    char buf[64];
    for (int u = 0; u < ds.user_count(); ++u) {
        const auto& p = profiles[u];
        out << ds.index().user_id(u);
        for (double s : p.trait_scores) {
            std::snprintf(buf, sizeof buf, ",%.12g", s);
            out << buf;
        }
        out << ',' << trait_name(p.dominant) << ',' << (p.untyped ? 1 : 0) << '\n';
    }
}

PersonalityGraph PersonalityGraph::from_profiles(const std::vector<PersonalityProfile>& profiles,
                                                 const RatingsDataset& ds) {
    const int m = ds.user_count();
    if (static_cast<int>(profiles.size()) < m) {
        throw std::invalid_argument("missing personality profile for user '" +
                                    ds.index().user_id(static_cast<int>(profiles.size())) + "'");
    }
    if (static_cast<int>(profiles.size()) > m)
        throw std::invalid_argument("more profiles than indexed users");

    // bucket typed users by dominant trait, then connect within buckets
    std::array<std::vector<int>, 5> buckets;
    for (int u = 0; u < m; ++u)
        if (!profiles[u].untyped) buckets[static_cast<int>(profiles[u].dominant)].push_back(u);

    std::vector<Eigen::Triplet<double>> triplets;
    for (const auto& bucket : buckets) {
        for (int a : bucket)
            for (int b : bucket)
                if (a != b) triplets.emplace_back(a, b, 1.0);
    }

    PersonalityGraph g;
    g.L_.resize(m, m);
    g.L_.setFromTriplets(triplets.begin(), triplets.end());
    g.finalize();
    return g;
}

PersonalityGraph PersonalityGraph::from_adjacency(
    const Eigen::SparseMatrix<double, Eigen::RowMajor>& L) {
    if (L.rows() != L.cols()) throw std::invalid_argument("adjacency must be square");
    for (int i = 0; i < L.outerSize(); ++i) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(L, i); it; ++it) {
            if (it.value() == 0.0) continue;
            if (it.value() != 1.0) throw std::invalid_argument("adjacency entries must be 0 or 1");
            if (it.row() == it.col()) throw std::invalid_argument("adjacency diagonal must be zero");
            if (L.coeff(it.col(), it.row()) != 1.0)
                throw std::invalid_argument("adjacency must be symmetric");
        }
    }
    PersonalityGraph g;
    g.L_ = L;
    g.L_.prune(0.0);
    g.finalize();
    return g;
}

PersonalityGraph PersonalityGraph::empty(int users) {
    PersonalityGraph g;
    g.L_.resize(users, users);
    g.finalize();
    return g;
}

void PersonalityGraph::finalize() {
    L_.makeCompressed();
    const int m = size();
    degrees_ = Eigen::VectorXd::Zero(m);
    neighbors_.assign(m, {});
    for (int i = 0; i < m; ++i) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(L_, i); it; ++it) {
            if (it.value() == 0.0) continue;
            neighbors_[i].push_back(static_cast<int>(it.col()));
            degrees_[i] += 1.0;
        }
    }
}

Eigen::SparseMatrix<double, Eigen::RowMajor> PersonalityGraph::laplacian() const {
    Eigen::SparseMatrix<double, Eigen::RowMajor> y = -L_;
    for (int i = 0; i < size(); ++i)
        if (degrees_[i] != 0.0) y.coeffRef(i, i) += degrees_[i];
    y.makeCompressed();
    return y;
}

Eigen::MatrixXd PersonalityGraph::apply_laplacian(const Eigen::MatrixXd& X) const {
    if (X.rows() != size()) throw std::invalid_argument("row count does not match graph size");
    return degrees_.asDiagonal() * X - L_ * X;
}

}  // namespace apar
