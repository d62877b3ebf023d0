#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "apar/splits.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace apar;

namespace {

std::multiset<std::string> record_keys(const RatingsDataset& ds) {
    std::multiset<std::string> keys;
    for (const auto& rec : ds.records()) keys.insert(rec.user_id + "/" + rec.item_id);
    return keys;
}

}  // namespace

TEST_CASE("split_train_test sizes and determinism") {
    auto ds = fixtures::corpus_dataset();
    // pad to exactly 10 records via a subset
    auto ten = ds.subset({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    REQUIRE(ten.records().size() == 10);

    auto [train, test] = split_train_test(ten, 0.9, 7);
    CHECK(train.records().size() == 9);
    CHECK(test.records().size() == 1);

    auto [train2, test2] = split_train_test(ten, 0.9, 7);
    CHECK(record_keys(train2) == record_keys(train));
    CHECK(record_keys(test2) == record_keys(test));

    CHECK_THROWS_AS(split_train_test(ten, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(split_train_test(ten, 1.0, 1), std::invalid_argument);
}

TEST_CASE("splits partition the dataset for any seed and fraction") {
    auto ds = fixtures::corpus_dataset();
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        double fraction = 0.05 + 0.9 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        std::uint64_t seed = rng();
        auto [train, test] = split_train_test(ds, fraction, seed);

        CHECK(train.records().size() + test.records().size() == ds.records().size());
        auto all = record_keys(train);
        for (const auto& k : record_keys(test)) all.insert(k);
        CHECK(all == record_keys(ds));

        // shared index maps: rows align across the splits
        CHECK(train.user_count() == ds.user_count());
        CHECK(test.item_count() == ds.item_count());
    }
}

TEST_CASE("kfold partitions into near-equal folds") {
    auto ds = fixtures::corpus_dataset();
    auto ten = ds.subset({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});

    auto folds = kfold_assignment(ten, 5, 3);
    REQUIRE(folds.size() == 5);
    for (const auto& fold : folds) CHECK(fold.size() == 2);

    auto pairs = kfold(ten, 5, 3);
    std::multiset<std::string> seen;
    for (const auto& [train, test] : pairs) {
        CHECK(train.records().size() == 8);
        for (const auto& k : record_keys(test)) seen.insert(k);
    }
    CHECK(seen == record_keys(ten));  // each record in exactly one test fold

    CHECK_THROWS_AS(kfold(ten, 11, 0), std::invalid_argument);
    CHECK_THROWS_AS(kfold(ten, 1, 0), std::invalid_argument);
}

TEST_CASE("kfold assignment is reproducible (golden hash)") {
    auto ds = fixtures::corpus_dataset();
    auto folds = kfold_assignment(ds, 5, 42);
    std::string encoded;
    for (const auto& fold : folds) {
        for (std::size_t ordinal : fold) encoded += std::to_string(ordinal) + ",";
        encoded += ";";
    }
    CHECK(oracle::fnv1a(encoded) == oracle::fnv1a(encoded));  // self-consistency
    auto again = kfold_assignment(ds, 5, 42);
    CHECK(folds == again);
    // frozen from the first run; guards the shuffle/deal procedure
    CHECK(oracle::fnv1a(encoded) == 0x6bd7be02889d36bcull);
}

TEST_CASE("dsw_degree hand cases") {
    SUBCASE("all users co-rate one shared item") {
        std::vector<ReviewRecord> recs;
        for (int u = 0; u < 4; ++u) {
            ReviewRecord r;
            r.user_id = "u" + std::to_string(u);
            r.item_id = "shared";
            r.rating = 3;
            r.timestamp = u;
            recs.push_back(r);
        }
        CHECK(dsw_degree(RatingsDataset::from_records(recs)) == 0.0);
    }
    SUBCASE("2 isolated users out of 10") {
        std::vector<ReviewRecord> recs;
        for (int u = 0; u < 8; ++u) {
            ReviewRecord r;
            r.user_id = "u" + std::to_string(u);
            r.item_id = "shared";
            r.rating = 3;
            r.timestamp = u;
            recs.push_back(r);
        }
        for (int u = 8; u < 10; ++u) {
            ReviewRecord r;
            r.user_id = "u" + std::to_string(u);
            r.item_id = "own" + std::to_string(u);
            r.rating = 4;
            r.timestamp = u;
            recs.push_back(r);
        }
        CHECK(dsw_degree(RatingsDataset::from_records(recs)) == doctest::Approx(0.2));
    }
    SUBCASE("single-user dataset has degree 1") {
        ReviewRecord r;
        r.user_id = "only";
        r.item_id = "v";
        r.rating = 5;
        CHECK(dsw_degree(RatingsDataset::from_records({r})) == 1.0);
    }
}

TEST_CASE("dsw_degree matches the pairwise brute-force oracle") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        int users = 2 + static_cast<int>(rng() % 49);
        int items = 3 + static_cast<int>(rng() % 20);
        std::vector<ReviewRecord> recs;
        std::set<std::pair<int, int>> used;
        int n = users + static_cast<int>(rng() % (3 * users));
        for (int t = 0; t < n; ++t) {
            int u = static_cast<int>(rng() % users);
            int v = static_cast<int>(rng() % items);
            if (!used.insert({u, v}).second) continue;
            ReviewRecord r;
            r.user_id = "u" + std::to_string(u);
            r.item_id = "v" + std::to_string(v);
            r.rating = 1 + static_cast<int>(rng() % 5);
            r.timestamp = t;
            recs.push_back(r);
        }
        if (recs.empty()) continue;
        auto ds = RatingsDataset::from_records(recs);
        CHECK(dsw_degree(ds) == doctest::Approx(oracle::dsw_degree(ds)).epsilon(1e-12));
    }
}

TEST_CASE("make_dsw_subdataset") {
    synth::PlantedOptions opts;
    opts.users_per_cluster = 25;  // 100 users
    opts.seed = 11;
    auto ds = synth::planted_corpus(opts);

    SUBCASE("target 0 returns the dataset unchanged") {
        auto result = make_dsw_subdataset(ds, 0.0, 1);
        CHECK(result.dataset.records() == ds.records());
    }
    SUBCASE("target 0.2 lands within the tolerance band") {
        auto result = make_dsw_subdataset(ds, 0.2, 1);
        CHECK(result.achieved_degree >= 0.18);
        CHECK(result.achieved_degree <= 0.22);
        CHECK(dsw_degree(result.dataset) == doctest::Approx(result.achieved_degree));
        CHECK(oracle::dsw_degree(result.dataset) == doctest::Approx(result.achieved_degree));
    }
    SUBCASE("target 0.8 (SD4 analogue)") {
        auto result = make_dsw_subdataset(ds, 0.8, 2);
        CHECK(result.achieved_degree >= 0.78);
        CHECK(result.achieved_degree <= 0.82);
    }
    SUBCASE("selected users keep at least one rating; others untouched") {
        auto result = make_dsw_subdataset(ds, 0.4, 3);
        for (int u = 0; u < result.dataset.user_count(); ++u)
            CHECK(!result.dataset.records_of_user(u).empty());
        CHECK(result.dataset.records().size() < ds.records().size());
    }
    SUBCASE("unreachable target names a blocking user") {
        // every item co-rated: nobody has an exclusive item
        std::vector<ReviewRecord> recs;
        for (int u = 0; u < 4; ++u)
            for (int v = 0; v < 2; ++v) {
                ReviewRecord r;
                r.user_id = "u" + std::to_string(u);
                r.item_id = "v" + std::to_string(v);
                r.rating = 3;
                r.timestamp = u * 2 + v;
                recs.push_back(r);
            }
        auto shared = RatingsDataset::from_records(recs);
        CHECK_THROWS_WITH_AS(make_dsw_subdataset(shared, 0.5, 1),
                             doctest::Contains("u0"), std::runtime_error);
    }
}
