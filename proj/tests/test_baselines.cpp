#include <doctest.h>

#include <cmath>

#include "apar/baselines.hpp"
#include "apar/interaction.hpp"
#include "apar/metrics.hpp"
#include "apar/splits.hpp"
#include "support/fixtures.hpp"
#include "support/synthetic.hpp"

using namespace apar;

namespace {

ReviewRecord rec(const std::string& u, const std::string& v, int rating, int ts) {
    ReviewRecord r;
    r.user_id = u;
    r.item_id = v;
    r.rating = rating;
    r.timestamp = ts;
    return r;
}

}  // namespace

TEST_CASE("UserMean and ItemMean") {
    auto ds = RatingsDataset::from_records({
        rec("a", "x", 4, 0),
        rec("a", "y", 5, 1),
        rec("b", "x", 2, 2),
        rec("c", "z", 3, 3),
    });
    Hyperparams hp;

    SUBCASE("user mean over the user's ratings") {
        auto p = fit_baseline(BaselineKind::UserMean, ds, hp);
        int a = ds.index().user_row("a").value();
        for (int j = 0; j < ds.item_count(); ++j)
            CHECK(predict_baseline(p, a, j) == doctest::Approx(4.5).epsilon(1e-12));
    }
    SUBCASE("item mean over the item's ratings") {
        auto p = fit_baseline(BaselineKind::ItemMean, ds, hp);
        int x = ds.index().item_col("x").value();
        CHECK(predict_baseline(p, 0, x) == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("unseen users and items fall back to the global mean") {
        auto sub = ds.subset({0, 1, 3});  // drop b's only record
        auto p = fit_baseline(BaselineKind::UserMean, sub, hp);
        int b = sub.index().user_row("b").value();
        CHECK(predict_baseline(p, b, 0) == doctest::Approx(4.0).epsilon(1e-12));  // (4+5+3)/3
    }
    SUBCASE("means stay within the rating scale") {
        for (auto kind : {BaselineKind::UserMean, BaselineKind::ItemMean}) {
            auto p = fit_baseline(kind, ds, hp);
            for (int i = 0; i < ds.user_count(); ++i)
                for (int j = 0; j < ds.item_count(); ++j) {
                    CHECK(predict_baseline(p, i, j) >= 1.0);
                    CHECK(predict_baseline(p, i, j) <= 5.0);
                }
        }
    }
}

TEST_CASE("Random baseline") {
    auto ds = fixtures::corpus_dataset();
    Hyperparams hp;
    hp.seed = 9;
    auto p = fit_baseline(BaselineKind::Random, ds, hp);

    SUBCASE("values stay on the rating scale and repeat deterministically") {
        auto q = fit_baseline(BaselineKind::Random, ds, hp);
        for (int i = 0; i < ds.user_count(); ++i)
            for (int j = 0; j < ds.item_count(); ++j) {
                double v = predict_baseline(p, i, j);
                CHECK(v >= 1.0);
                CHECK(v <= 5.0);
                CHECK(v == std::floor(v));
                CHECK(predict_baseline(q, i, j) == v);
            }
    }
    SUBCASE("different seeds differ somewhere") {
        Hyperparams hp2;
        hp2.seed = 10;
        auto q = fit_baseline(BaselineKind::Random, ds, hp2);
        bool any_diff = false;
        for (int i = 0; i < ds.user_count() && !any_diff; ++i)
            for (int j = 0; j < ds.item_count(); ++j)
                if (predict_baseline(p, i, j) != predict_baseline(q, i, j)) {
                    any_diff = true;
                    break;
                }
        CHECK(any_diff);
    }
}

TEST_CASE("empty training set is rejected") {
    auto ds = fixtures::corpus_dataset();
    auto empty = ds.subset({});
    Hyperparams hp;
    CHECK_THROWS_AS(fit_baseline(BaselineKind::UserMean, empty, hp), std::invalid_argument);
}

TEST_CASE("mean baselines equal brute-force recomputation") {
    auto ds = fixtures::corpus_dataset();
    Hyperparams hp;
    auto um = fit_baseline(BaselineKind::UserMean, ds, hp);
    auto im = fit_baseline(BaselineKind::ItemMean, ds, hp);

    for (int u = 0; u < ds.user_count(); ++u) {
        double sum = 0.0;
        int n = 0;
        for (const auto& r : ds.records())
            if (ds.index().user_row(r.user_id).value() == u) {
                sum += r.rating;
                ++n;
            }
        if (n > 0) CHECK(predict_baseline(um, u, 0) == doctest::Approx(sum / n).epsilon(1e-12));
    }
    for (int j = 0; j < ds.item_count(); ++j) {
        double sum = 0.0;
        int n = 0;
        for (const auto& r : ds.records())
            if (ds.index().item_col(r.item_id).value() == j) {
                sum += r.rating;
                ++n;
            }
        if (n > 0) CHECK(predict_baseline(im, 0, j) == doctest::Approx(sum / n).epsilon(1e-12));
    }
}

TEST_CASE("PlainMF fits the planted rank-1 corpus") {
    // integer ratings drawn from a rank-1-ish pattern; PlainMF should beat 1e-2
    // on the planted real-valued W when trained directly
    auto w = synth::rank1_planted(5, 5, 0.6, 13);
    Hyperparams hp;
    hp.d = 2;
    hp.alpha1 = 1e-4;
    hp.alpha2 = 1e-4;
    hp.max_iters = 500;
    hp.tol = 1e-12;
    hp.seed = 3;
    TrainOptions opts;
    opts.gamma_mode = GammaMode::Constant;
    opts.gamma_const = 1.0;
    auto init = init_model(5, 5, hp);
    auto model = train_with_init(w, PersonalityGraph::empty(5), Eigen::VectorXd::Ones(5), hp, opts,
                                 init.P, init.Q);
    double se = 0.0;
    int n = 0;
    for (int i = 0; i < w.W.outerSize(); ++i)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(w.W, i); it; ++it) {
            double e = predict(model, static_cast<int>(it.row()), static_cast<int>(it.col())) -
                       it.value();
            se += e * e;
            ++n;
        }
    CHECK(std::sqrt(se / n) < 1e-2);
}

TEST_CASE("mean baselines beat Random on most seeds") {
    synth::PlantedOptions opts;
    opts.users_per_cluster = 10;
    opts.seed = 77;
    auto ds = synth::planted_corpus(opts);

    int user_wins = 0, item_wins = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto [train_ds, test_ds] = split_train_test(ds, 0.8, seed);
        Hyperparams hp;
        hp.seed = seed;

        auto evaluate = [&](BaselineKind kind) {
            auto p = fit_baseline(kind, train_ds, hp);
            std::vector<double> pred, truth;
            for (const auto& r : test_ds.records()) {
                pred.push_back(predict_baseline(p, test_ds.index().user_row(r.user_id).value(),
                                                test_ds.index().item_col(r.item_id).value()));
                truth.push_back(r.rating);
            }
            return mae(pred, truth);
        };

        double random_mae = evaluate(BaselineKind::Random);
        if (evaluate(BaselineKind::UserMean) <= random_mae) ++user_wins;
        if (evaluate(BaselineKind::ItemMean) <= random_mae) ++item_wins;
    }
    CHECK(user_wins > 5);
    CHECK(item_wins > 5);
}
