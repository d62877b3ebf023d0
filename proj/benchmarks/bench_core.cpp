#include <benchmark/benchmark.h>

#include <sstream>

#include "apar/eval.hpp"
#include "apar/interaction.hpp"
#include "apar/knowledge.hpp"
#include "apar/personality.hpp"
#include "apar/splits.hpp"
#include "support/synthetic.hpp"

namespace {

const apar::RatingsDataset& corpus() {
    static auto ds = [] {
        synth::PlantedOptions opts;
        opts.seed = 3;
        return synth::planted_corpus(opts);
    }();
    return ds;
}

void BM_Tokenize(benchmark::State& state) {
    const std::string text =
        "We talked about the film as a family, and the children loved every "
        "scene; I think there are good reasons to watch it together again.";
    for (auto _ : state) benchmark::DoNotOptimize(apar::tokenize(text));
}
BENCHMARK(BM_Tokenize);

void BM_CategoryFrequencies(benchmark::State& state) {
    auto lex = apar::Lexicon::load_file(std::string(APAR_DATA_DIR) + "/lexicon.txt");
    auto tokens = apar::tokenize(
        "we talked and talked about the child the baby the man the view seen "
        "love great happy wonderful think because curious");
    for (auto _ : state) benchmark::DoNotOptimize(apar::category_frequencies(tokens, lex));
}
BENCHMARK(BM_CategoryFrequencies);

void BM_ParseReviews(benchmark::State& state) {
    const std::string dump = apar::canonical_dump(corpus());
    for (auto _ : state) {
        std::istringstream in(dump);
        benchmark::DoNotOptimize(apar::parse_reviews(in, "planted"));
    }
}
BENCHMARK(BM_ParseReviews)->Unit(benchmark::kMillisecond);

void BM_DswDegree(benchmark::State& state) {
    const auto& ds = corpus();
    for (auto _ : state) benchmark::DoNotOptimize(apar::dsw_degree(ds));
}
BENCHMARK(BM_DswDegree);

void BM_DswSubdataset(benchmark::State& state) {
    const auto& ds = corpus();
    for (auto _ : state)
        benchmark::DoNotOptimize(apar::make_dsw_subdataset(ds, 0.6, 11).achieved_degree);
}
BENCHMARK(BM_DswSubdataset)->Unit(benchmark::kMillisecond);

void BM_TrainSweeps(benchmark::State& state) {
    const auto& ds = corpus();
    auto interactions = apar::build_interaction_matrix(ds);
    auto lex = apar::Lexicon::load_file(std::string(APAR_DATA_DIR) + "/lexicon.txt");
    auto weights = apar::WeightTable::load_file(std::string(APAR_DATA_DIR) + "/weights.csv");
    auto graph = apar::PersonalityGraph::from_profiles(apar::user_profiles(ds, lex, weights), ds);
    auto knowledge = apar::KnowledgeTable::build(ds, 0.5);

    apar::Hyperparams hp;
    hp.d = 8;
    hp.max_iters = static_cast<int>(state.range(0));
    hp.tol = 1e-15;
    for (auto _ : state)
        benchmark::DoNotOptimize(apar::train(interactions, graph, knowledge, hp).final_objective);
}
BENCHMARK(BM_TrainSweeps)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_PredictTopN(benchmark::State& state) {
    const auto& ds = corpus();
    auto interactions = apar::build_interaction_matrix(ds);
    auto lex = apar::Lexicon::load_file(std::string(APAR_DATA_DIR) + "/lexicon.txt");
    auto weights = apar::WeightTable::load_file(std::string(APAR_DATA_DIR) + "/weights.csv");
    auto graph = apar::PersonalityGraph::from_profiles(apar::user_profiles(ds, lex, weights), ds);
    auto knowledge = apar::KnowledgeTable::build(ds, 0.5);
    apar::Hyperparams hp;
    hp.d = 8;
    hp.max_iters = 20;
    auto model = apar::train(interactions, graph, knowledge, hp);

    for (auto _ : state)
        benchmark::DoNotOptimize(apar::recommend_top_n(model, 0, 10, true, interactions));
}
BENCHMARK(BM_PredictTopN);

}  // namespace

BENCHMARK_MAIN();
