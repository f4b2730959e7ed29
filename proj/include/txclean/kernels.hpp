#pragma once

// Data-parallel inner loops. Each kernel has a serial reference path and an
// OpenMP path; both must produce identical results.

#include "txclean/cluster_summary.hpp"
#include "txclean/core.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace txclean {

enum class Execution { serial, parallel };

/// Below this many clusters the parallel delta kernel runs serially.
inline constexpr std::size_t kParallelDeltaThreshold = 64;

/// frequency[i] = number of transactions containing item i.
std::vector<std::uint64_t> count_item_frequencies(const TransactionDatabase& db, Execution exec);

/// Row-major n x n matrix of pairwise Jaccard coefficients (diagonal = 1).
std::vector<double> similarity_matrix(const TransactionDatabase& db, Execution exec);

/// out[j] = delta_add(clusters[live[j]], t, powers) for every j.
void add_deltas(std::span<const ClusterSummary> clusters, std::span<const std::uint32_t> live,
                const Transaction& t, const WidthPowers& powers, std::span<double> out, Execution exec);

} // namespace txclean
