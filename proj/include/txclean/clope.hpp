#pragma once

#include "txclean/cluster_summary.hpp"
#include "txclean/core.hpp"
#include "txclean/kernels.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace txclean {

/// CLOPE repulsion r > 0. Larger values favour more, tighter clusters.
class Repulsion {
public:
    /// Throws ParameterError unless r is positive and finite.
    explicit Repulsion(double r);
    double value() const noexcept { return m_r; }

private:
    double m_r;
};

using ClusterId = std::uint32_t;

/// A partition of a database's transactions into live clusters, ids 0..k-1
/// ordered by each cluster's smallest member tid.
struct Clustering {
    std::vector<ClusterId> assignment; // indexed by tid
    std::vector<ClusterSummary> clusters;
    double profit = 0.0;

    std::size_t k() const noexcept { return clusters.size(); }
};

/// Sum over clusters of S/W^r * N, divided by the total member count.
/// Throws EmptyInputError when there are no clusters or no members.
double profit(std::span<const ClusterSummary> clusters, Repulsion r);
inline double profit(const Clustering& c, Repulsion r) { return profit(c.clusters, r); }

/// Rebuilds cluster summaries from an assignment (ids need not be dense;
/// missing ids produce empty summaries).
std::vector<ClusterSummary> rebuild_summaries(const TransactionDatabase& db,
                                              std::span<const ClusterId> assignment);

/// Renumbers an arbitrary assignment to the canonical form (clusters ordered
/// by smallest tid) and rebuilds summaries and profit.
Clustering make_clustering(const TransactionDatabase& db, std::span<const ClusterId> assignment,
                           Repulsion r);

struct ClopeOptions {
    double repulsion = 1.5;
    std::size_t max_passes = 20;
    Execution exec = Execution::parallel;
    /// Recompute every summary after each pass and throw std::logic_error if
    /// an incremental summary drifted or profit decreased.
    bool verify = false;
};

struct ClopeTrace {
    /// Profit after the add phase, then after each refinement pass.
    std::vector<double> profit_per_pass;
    /// Moves made in each refinement pass.
    std::vector<std::size_t> moves_per_pass;
    std::size_t passes = 0;
    bool hit_max_passes = false;
    double add_seconds = 0.0;
    double refine_seconds = 0.0;
};

struct ClopeResult {
    Clustering clustering;
    ClopeTrace trace;
};

/// Add phase over tids, then refinement passes moving each transaction to the
/// cluster with the largest profit gain, until a pass makes no move or
/// max_passes is reached. Ties go to the lowest existing cluster id; a fresh
/// cluster is chosen only on a strictly larger gain. Deterministic.
/// Throws ParameterError for max_passes == 0 and EmptyInputError for an empty
/// database.
ClopeResult clope_cluster(const TransactionDatabase& db, const ClopeOptions& options);

struct BruteForceResult {
    std::vector<ClusterId> assignment; // restricted growth string
    double profit = 0.0;
    std::size_t partitions = 0;
};

inline constexpr std::size_t kBruteForceMaxTransactions = 10;

/// Exhaustive search over all set partitions; ties resolve to the
/// lexicographically smallest restricted growth string. Throws
/// EmptyInputError for n == 0 and ParameterError for n > 10.
BruteForceResult brute_force_best(const TransactionDatabase& db, Repulsion r);

/// "tid,cluster_id" rows with a header line.
void write_assignment_csv(std::ostream& out, const Clustering& clustering);

} // namespace txclean
