#include "txclean/kernels.hpp"

#include "txclean/similarity.hpp"

#include <cassert>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace txclean {

namespace {

std::vector<std::uint64_t> count_serial(const TransactionDatabase& db) {
    std::vector<std::uint64_t> freq(db.item_count(), 0);
    for (const auto& t : db.transactions())
        for (auto id : t.items)
            ++freq[id];
    return freq;
}

std::vector<std::uint64_t> count_parallel(const TransactionDatabase& db) {
    const auto m = db.item_count();
    const auto txs = db.transactions();
    const auto n = static_cast<std::ptrdiff_t>(txs.size());
    std::vector<std::uint64_t> freq(m, 0);
#pragma omp parallel
    {
        std::vector<std::uint64_t> local(m, 0);
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t i = 0; i < n; ++i)
            for (auto id : txs[static_cast<std::size_t>(i)].items)
                ++local[id];
#pragma omp critical
        for (std::size_t i = 0; i < m; ++i)
            freq[i] += local[i];
    }
    return freq;
}

void similarity_rows(const TransactionDatabase& db, std::vector<double>& out, std::ptrdiff_t i) {
    const auto n = db.size();
    const auto row = static_cast<std::size_t>(i);
    out[row * n + row] = 1.0;
    for (std::size_t j = row + 1; j < n; ++j) {
        const double v = jaccard(db[row], db[j]);
        out[row * n + j] = v;
        out[j * n + row] = v;
    }
}

} // namespace

std::vector<std::uint64_t> count_item_frequencies(const TransactionDatabase& db, Execution exec) {
    return exec == Execution::parallel ? count_parallel(db) : count_serial(db);
}

std::vector<double> similarity_matrix(const TransactionDatabase& db, Execution exec) {
    const auto n = db.size();
    std::vector<double> out(n * n, 0.0);
    const auto rows = static_cast<std::ptrdiff_t>(n);
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::ptrdiff_t i = 0; i < rows; ++i)
            similarity_rows(db, out, i);
    } else {
        for (std::ptrdiff_t i = 0; i < rows; ++i)
            similarity_rows(db, out, i);
    }
    return out;
}

void add_deltas(std::span<const ClusterSummary> clusters, std::span<const std::uint32_t> live,
                const Transaction& t, const WidthPowers& powers, std::span<double> out, Execution exec) {
    assert(out.size() == live.size());
    const auto k = static_cast<std::ptrdiff_t>(live.size());
    if (exec == Execution::parallel && live.size() >= kParallelDeltaThreshold) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t j = 0; j < k; ++j)
            out[static_cast<std::size_t>(j)] = delta_add(clusters[live[static_cast<std::size_t>(j)]], t, powers);
    } else {
        for (std::ptrdiff_t j = 0; j < k; ++j)
            out[static_cast<std::size_t>(j)] = delta_add(clusters[live[static_cast<std::size_t>(j)]], t, powers);
    }
}

} // namespace txclean
