// Serial reference vs OpenMP kernels.

#include "txclean/cleanse.hpp"
#include "txclean/clope.hpp"
#include "txclean/kernels.hpp"
#include "txclean/synth.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <utility>
#include <vector>

namespace {

using txclean::Execution;

const txclean::TransactionDatabase& database(std::size_t transactions, std::size_t clusters) {
    static std::map<std::pair<std::size_t, std::size_t>, txclean::TransactionDatabase> cache;
    auto& db = cache[{transactions, clusters}];
    if (db.empty()) {
        txclean::SynthConfig config;
        config.transactions = transactions;
        config.clusters = clusters;
        db = txclean::generate_synthetic(config);
    }
    return db;
}

Execution exec_of(const benchmark::State& state) {
    return state.range(0) ? Execution::parallel : Execution::serial;
}

void BM_ItemFrequencies(benchmark::State& state) {
    const auto& db = database(static_cast<std::size_t>(state.range(1)), 50);
    for (auto _ : state)
        benchmark::DoNotOptimize(txclean::count_item_frequencies(db, exec_of(state)));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * db.total_occurrences()));
}
BENCHMARK(BM_ItemFrequencies)->ArgsProduct({{0, 1}, {5000, 50000}})->ArgNames({"parallel", "n"});

void BM_SimilarityMatrix(benchmark::State& state) {
    const auto& db = database(static_cast<std::size_t>(state.range(1)), 20);
    for (auto _ : state)
        benchmark::DoNotOptimize(txclean::similarity_matrix(db, exec_of(state)));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * db.size() * db.size()));
}
BENCHMARK(BM_SimilarityMatrix)->ArgsProduct({{0, 1}, {500, 2000}})->ArgNames({"parallel", "n"});

void BM_AddDeltas(benchmark::State& state) {
    const auto& db = database(5000, static_cast<std::size_t>(state.range(1)));
    txclean::ClopeOptions options;
    options.max_passes = 1;
    const auto clustering = txclean::clope_cluster(db, options).clustering;
    std::vector<std::uint32_t> live(clustering.k());
    for (std::uint32_t i = 0; i < live.size(); ++i)
        live[i] = i;
    const txclean::WidthPowers powers(options.repulsion, db.item_count());
    std::vector<double> out(live.size());
    std::size_t next = 0;
    for (auto _ : state) {
        txclean::add_deltas(clustering.clusters, live, db[next], powers, out, exec_of(state));
        benchmark::DoNotOptimize(out.data());
        next = (next + 1) % db.size();
    }
    state.counters["clusters"] = static_cast<double>(live.size());
}
BENCHMARK(BM_AddDeltas)->ArgsProduct({{0, 1}, {50, 400}})->ArgNames({"parallel", "planted"});

void BM_Clope(benchmark::State& state) {
    const auto& db = database(5000, 50);
    txclean::ClopeOptions options;
    options.exec = exec_of(state);
    for (auto _ : state)
        benchmark::DoNotOptimize(txclean::clope_cluster(db, options).clustering.profit);
}
BENCHMARK(BM_Clope)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
