#include "synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "apar/personality.hpp"

namespace synth {

namespace {

// one vocabulary per cluster; chosen so the shipped weights make the
// intended trait dominant: CG -> Openness, SP+HW -> Conscientiousness,
// PE -> Extraversion, NE -> Neuroticism
const std::array<std::vector<std::string>, 4> kClusterVocab = {{
    {"think", "because", "curious", "imagine", "ideas", "reasons", "wonder", "questions"},
    {"talked", "children", "friends", "family", "together", "people", "baby", "man"},
    {"love", "great", "happy", "wonderful", "enjoyed", "fantastic", "good", "awesome"},
    {"hate", "terrible", "awful", "sad", "angry", "worried", "fears", "annoying"},
}};

std::string cluster_text(int cluster, std::mt19937_64& rng) {
    const auto& vocab = kClusterVocab[cluster % kClusterVocab.size()];
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    std::string text;
    for (int w = 0; w < 6; ++w) {
        if (!text.empty()) text += ' ';
        text += vocab[pick(rng)];
    }
    return text;
}

std::string zero_pad(int v, int width) {
    std::string s = std::to_string(v);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

int likert(double mean, double sigma, std::mt19937_64& rng) {
    std::normal_distribution<double> noise(0.0, sigma);
    double v = std::round(mean + noise(rng));
    return static_cast<int>(std::clamp(v, 1.0, 5.0));
}

}  // namespace

apar::RatingsDataset planted_corpus(const PlantedOptions& options) {
    std::mt19937_64 rng(options.seed);
    std::vector<apar::ReviewRecord> records;
    std::int64_t timestamp = 1'400'000'000;

    const int total_users = options.clusters * options.users_per_cluster;
    for (int u = 0; u < total_users; ++u) {
        const int cluster = u % options.clusters;
        const std::string user_id = "u" + zero_pad(u, 4) + "c" + std::to_string(cluster);

        std::vector<int> popular(options.popular_items);
        std::iota(popular.begin(), popular.end(), 0);
        std::shuffle(popular.begin(), popular.end(), rng);

        auto add = [&](const std::string& item_id, int genre) {
            apar::ReviewRecord rec;
            rec.user_id = user_id;
            rec.item_id = item_id;
            double mean =
                genre == cluster % options.clusters ? options.high_affinity : options.low_affinity;
            rec.rating = likert(mean, options.noise_sigma, rng);
            rec.text = cluster_text(cluster, rng);
            rec.helpful_votes = 0;
            rec.total_votes = 0;
            rec.timestamp = timestamp++;
            rec.domain = "planted";
            records.push_back(std::move(rec));
        };

        for (int s = 0; s < options.popular_per_user; ++s) {
            int item = popular[s];
            add("p" + zero_pad(item, 4), item % options.clusters);
        }
        for (int x = 0; x < options.private_per_user; ++x)
            add("x" + zero_pad(u, 4) + "_" + std::to_string(x), cluster);
    }
    return apar::RatingsDataset::from_records(std::move(records));
}

int cluster_of(const std::string& user_id) {
    auto c = user_id.find('c');
    return c == std::string::npos ? -1 : std::stoi(user_id.substr(c + 1));
}

apar::InteractionMatrix rank1_planted(int users, int items, double observe_fraction,
                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> factor(0.5, 1.5);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    std::vector<double> u(users), v(items);
    for (auto& x : u) x = factor(rng);
    for (auto& x : v) x = factor(rng);

    std::vector<Eigen::Triplet<double>> triplets;
    for (int i = 0; i < users; ++i)
        for (int j = 0; j < items; ++j)
            if (i == j || coin(rng) < observe_fraction) triplets.emplace_back(i, j, u[i] * v[j]);

    apar::InteractionMatrix m;
    m.W.resize(users, items);
    m.W.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

RandomInstance random_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dim(2, 6);
    std::uniform_int_distribution<int> rank(1, 3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> rating(1.0, 5.0);
    std::uniform_real_distribution<double> factor(0.2, 1.2);

    const int m = dim(rng), n = dim(rng), d = rank(rng);

    RandomInstance inst;
    inst.hp.d = d;
    inst.hp.alpha1 = 0.5 * unit(rng);
    inst.hp.alpha2 = 0.5 * unit(rng);
    inst.hp.lambda = 0.5 * unit(rng);
    inst.hp.beta = 0.5;
    inst.hp.seed = seed;

    // random observed set, at least one entry per user row
    std::vector<Eigen::Triplet<double>> triplets;
    for (int i = 0; i < m; ++i) {
        bool any = false;
        for (int j = 0; j < n; ++j) {
            if (unit(rng) < 0.6) {
                triplets.emplace_back(i, j, rating(rng));
                any = true;
            }
        }
        if (!any) triplets.emplace_back(i, i % n, rating(rng));
    }
    inst.interactions.W.resize(m, n);
    inst.interactions.W.setFromTriplets(triplets.begin(), triplets.end());

    // random symmetric binary graph, zero diagonal
    std::vector<Eigen::Triplet<double>> edges;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (unit(rng) < 0.4) {
                edges.emplace_back(i, j, 1.0);
                edges.emplace_back(j, i, 1.0);
            }
    Eigen::SparseMatrix<double, Eigen::RowMajor> adj(m, m);
    adj.setFromTriplets(edges.begin(), edges.end());
    inst.graph = apar::PersonalityGraph::from_adjacency(adj);

    inst.model.hp = inst.hp;
    if (unit(rng) < 0.25) inst.model.options.neighbor_mode = apar::NeighborMode::Sum;
    inst.model.P.resize(m, d);
    inst.model.Q.resize(n, d);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < d; ++k) inst.model.P(i, k) = factor(rng);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < d; ++k) inst.model.Q(j, k) = factor(rng);
    inst.model.gamma.resize(m);
    for (int i = 0; i < m; ++i) inst.model.gamma[i] = unit(rng);
    inst.model.neighbors = inst.graph.neighbors();
    return inst;
}

}  // namespace synth
