#include "apar/knowledge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace apar {

double review_helpfulness(const ReviewRecord& rec) {
    if (rec.helpful_votes < 0 || rec.total_votes < 0 || rec.helpful_votes > rec.total_votes)
        throw std::invalid_argument("helpful_votes exceed total_votes");
    if (rec.total_votes == 0) return 0.0;
    return static_cast<double>(rec.helpful_votes) / static_cast<double>(rec.total_votes);
}

double knowledge_level(int user, const std::string& domain, const RatingsDataset& ds) {
    if (user < 0 || user >= ds.user_count()) throw std::invalid_argument("unknown user row");
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t r : ds.records_of_user(user)) {
        const auto& rec = ds.records()[r];
        if (rec.domain != domain) continue;
        sum += review_helpfulness(rec);
        ++n;
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

KnowledgeTable KnowledgeTable::build(const RatingsDataset& ds, double beta) {
    if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
    KnowledgeTable table;
    table.beta_ = beta;
    table.users_ = ds.user_count();

    std::map<std::pair<int, std::string>, std::pair<double, std::size_t>> sums;
    for (const auto& rec : ds.records()) {
        int u = ds.index().user_row(rec.user_id).value();
        auto& [sum, n] = sums[{u, rec.domain}];
        sum += review_helpfulness(rec);
        ++n;
    }
    for (const auto& [key, acc] : sums)
        table.cells_[key] = Cell{acc.first / static_cast<double>(acc.second), acc.second};
    return table;
}

double KnowledgeTable::kl(int user, const std::string& domain) const {
    auto it = cells_.find({user, domain});
    return it == cells_.end() ? 0.0 : it->second.kl;
}

double KnowledgeTable::gamma(int user, const std::string& domain) const {
    return clamp01(beta_ + kl(user, domain));
}

Eigen::VectorXd KnowledgeTable::per_user_gamma() const {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(users_);
    Eigen::VectorXd count = Eigen::VectorXd::Zero(users_);
    for (const auto& [key, cell] : cells_) {
        sum[key.first] += cell.kl * static_cast<double>(cell.reviews);
        count[key.first] += static_cast<double>(cell.reviews);
    }
    Eigen::VectorXd gamma(users_);
    for (int u = 0; u < users_; ++u) {
        double kl_mean = count[u] > 0 ? sum[u] / count[u] : 0.0;
        gamma[u] = clamp01(beta_ + kl_mean);
    }
    return gamma;
}

void KnowledgeTable::write_csv(const RatingsDataset& ds, std::ostream& out) const {
    out << "user_id,domain,kl,gamma\n";
    char buf[96];
    for (const auto& [key, cell] : cells_) {
        std::snprintf(buf, sizeof buf, ",%s,%.12g,%.12g\n", key.second.c_str(), cell.kl,
                      clamp01(beta_ + cell.kl));
        out << ds.index().user_id(key.first) << buf;
    }
}

}  // namespace apar
