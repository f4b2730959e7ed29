#pragma once

#include "txclean/core.hpp"

#include <cstddef>
#include <vector>

namespace txclean {

/// Minimum Jaccard coefficient for two transactions to be linked. 0 <= theta <= 1.
class SimilarityThreshold {
public:
    /// Throws ParameterError outside [0, 1].
    explicit SimilarityThreshold(double theta);
    double value() const noexcept { return m_theta; }

private:
    double m_theta;
};

/// |T1 n T2| and |T1 u T2| as exact integers.
struct JaccardRatio {
    std::size_t intersection = 0;
    std::size_t union_size = 0;

    double value() const noexcept {
        return static_cast<double>(intersection) / static_cast<double>(union_size);
    }
    friend bool operator==(const JaccardRatio&, const JaccardRatio&) = default;
};

/// Throws ParameterError when both transactions are empty (0/0).
JaccardRatio jaccard_ratio(const Transaction& a, const Transaction& b);

inline double jaccard(const Transaction& a, const Transaction& b) {
    return jaccard_ratio(a, b).value();
}

/// Connected components of the graph linking every pair with jaccard >= theta.
/// Components are ordered by their smallest tid; members ascend. O(n^2).
std::vector<std::vector<Tid>> threshold_components(const TransactionDatabase& db,
                                                   SimilarityThreshold theta);

} // namespace txclean
