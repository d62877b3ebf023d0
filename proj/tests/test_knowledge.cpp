#include <doctest.h>

#include <random>
#include <sstream>

#include "apar/knowledge.hpp"
#include "support/fixtures.hpp"

using namespace apar;

namespace {

ReviewRecord vote_record(const std::string& user, const std::string& item, int helpful, int total,
                         const std::string& domain = "d", int ts = 0) {
    ReviewRecord r;
    r.user_id = user;
    r.item_id = item;
    r.rating = 3;
    r.helpful_votes = helpful;
    r.total_votes = total;
    r.domain = domain;
    r.timestamp = ts;
    return r;
}

}  // namespace

TEST_CASE("review_helpfulness") {
    CHECK(review_helpfulness(vote_record("u", "v", 3, 4)) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(review_helpfulness(vote_record("u", "v", 0, 0)) == 0.0);
    CHECK(review_helpfulness(vote_record("u", "v", 5, 5)) == 1.0);

    ReviewRecord bad = vote_record("u", "v", 3, 2);
    CHECK_THROWS_AS(review_helpfulness(bad), std::invalid_argument);
}

TEST_CASE("knowledge_level is the mean helpfulness per domain") {
    auto ds = RatingsDataset::from_records({
        vote_record("u", "a", 4, 4, "video", 0),  // 1.0
        vote_record("u", "b", 2, 4, "video", 1),  // 0.5
        vote_record("u", "c", 0, 4, "video", 2),  // 0.0
        vote_record("u", "d", 1, 1, "books", 3),
    });
    CHECK(knowledge_level(0, "video", ds) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(knowledge_level(0, "books", ds) == doctest::Approx(1.0));
    CHECK(knowledge_level(0, "music", ds) == 0.0);
    CHECK_THROWS_AS(knowledge_level(7, "video", ds), std::invalid_argument);

    SUBCASE("single review") {
        auto one = RatingsDataset::from_records({vote_record("u", "a", 4, 5)});
        CHECK(knowledge_level(0, "d", one) == doctest::Approx(0.8));
    }
}

TEST_CASE("knowledge table gammas") {
    auto ds = RatingsDataset::from_records({
        vote_record("zero", "a", 0, 0, "d", 0),
        vote_record("expert", "b", 4, 5, "d", 1),
        vote_record("expert", "c", 4, 4, "d", 2),
    });

    SUBCASE("beta 0.5 with kl 0 gives the reported gamma 0.5") {
        auto table = build_knowledge_table(ds, 0.5);
        int zero = ds.index().user_row("zero").value();
        CHECK(table.kl(zero, "d") == 0.0);
        CHECK(table.gamma(zero, "d") == doctest::Approx(0.5));
    }
    SUBCASE("gamma clamps at 1") {
        auto table = build_knowledge_table(ds, 0.5);
        int expert = ds.index().user_row("expert").value();
        CHECK(table.kl(expert, "d") == doctest::Approx(0.9));  // mean of 0.8 and 1.0
        CHECK(table.gamma(expert, "d") == 1.0);
    }
    SUBCASE("beta 0.5 with kl 0.3 gives 0.8") {
        auto one = RatingsDataset::from_records({vote_record("u", "a", 3, 10)});
        auto table = build_knowledge_table(one, 0.5);
        CHECK(table.gamma(0, "d") == doctest::Approx(0.8).epsilon(1e-12));
    }
    SUBCASE("per-user vector matches the single-domain table") {
        auto table = build_knowledge_table(ds, 0.5);
        auto gamma = table.per_user_gamma();
        REQUIRE(gamma.size() == 2);
        for (int u = 0; u < 2; ++u) CHECK(gamma[u] == doctest::Approx(table.gamma(u, "d")));
    }
    SUBCASE("non-finite beta is rejected") {
        CHECK_THROWS_AS(build_knowledge_table(ds, std::nan("")), std::invalid_argument);
    }
}

TEST_CASE("gamma is monotone in kl and both stay in [0,1]") {
    std::mt19937_64 rng(31);
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 40; ++trial) {
        double beta = 3.0 * (u() - 0.5);
        int total = 1 + static_cast<int>(rng() % 20);
        int h1 = static_cast<int>(rng() % (total + 1));
        int h2 = std::min(total, h1 + static_cast<int>(rng() % (total - h1 + 1)));

        auto low = RatingsDataset::from_records({vote_record("u", "a", h1, total)});
        auto high = RatingsDataset::from_records({vote_record("u", "a", h2, total)});
        auto t_low = build_knowledge_table(low, beta);
        auto t_high = build_knowledge_table(high, beta);

        CHECK(t_low.gamma(0, "d") <= t_high.gamma(0, "d") + 1e-15);
        for (const auto* t : {&t_low, &t_high}) {
            CHECK(t->kl(0, "d") >= 0.0);
            CHECK(t->kl(0, "d") <= 1.0);
            CHECK(t->gamma(0, "d") >= 0.0);
            CHECK(t->gamma(0, "d") <= 1.0);
        }
    }
}

TEST_CASE("kl equals a brute-force recomputation on the fixture corpus") {
    auto ds = fixtures::corpus_dataset();
    auto table = build_knowledge_table(ds, 0.5);
    for (int u = 0; u < ds.user_count(); ++u) {
        double sum = 0.0;
        int n = 0;
        for (std::size_t r : ds.records_of_user(u)) {
            const auto& rec = ds.records()[r];
            sum += rec.total_votes == 0
                       ? 0.0
                       : static_cast<double>(rec.helpful_votes) / rec.total_votes;
            ++n;
        }
        double expected = n == 0 ? 0.0 : sum / n;
        CHECK(table.kl(u, "instant-video") == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("knowledge CSV export") {
    auto ds = RatingsDataset::from_records({
        vote_record("u", "a", 3, 4, "video", 0),
        vote_record("u", "b", 1, 1, "books", 1),
    });
    auto table = build_knowledge_table(ds, 0.5);
    std::ostringstream out;
    table.write_csv(ds, out);
    CHECK(out.str() ==
          "user_id,domain,kl,gamma\n"
          "u,books,1,1\n"
          "u,video,0.75,1\n");
}
