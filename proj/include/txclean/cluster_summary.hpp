#pragma once

#include "txclean/core.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace txclean {

/// Sufficient statistics of one cluster: per-item occurrence counts (occ),
/// total occurrences S, distinct items W = |occ| and member count N.
struct ClusterSummary {
    std::unordered_map<ItemId, std::uint32_t> occ;
    std::uint64_t total = 0;   // S
    std::uint64_t members = 0; // N

    std::uint64_t width() const noexcept { return occ.size(); } // W
    bool empty() const noexcept { return members == 0; }

    void add(const Transaction& t);
    /// `t` must currently be a member.
    void remove(const Transaction& t);

    /// Items of `t` not present in occ.
    std::uint64_t new_items(const Transaction& t) const;

    friend bool operator==(const ClusterSummary&, const ClusterSummary&) = default;
};

/// S * N / W^r, evaluated in log space when W^r would overflow. Zero when N == 0.
double cluster_gain(std::uint64_t total, std::uint64_t width, std::uint64_t members, double r);

inline double cluster_gain(const ClusterSummary& c, double r) {
    return cluster_gain(c.total, c.width(), c.members, r);
}

/// Change of the profit numerator when `t` joins `c` (c may be empty).
double delta_add(const ClusterSummary& c, const Transaction& t, double r);

/// W^r precomputed for W = 0..max_width. gain() returns exactly what
/// cluster_gain() returns, and falls back to it above max_width.
class WidthPowers {
public:
    WidthPowers(double r, std::uint64_t max_width);

    double r() const noexcept { return m_r; }
    double gain(std::uint64_t total, std::uint64_t width, std::uint64_t members) const;
    double gain(const ClusterSummary& c) const { return gain(c.total, c.width(), c.members); }

private:
    double m_r;
    std::vector<double> m_pow;
};

double delta_add(const ClusterSummary& c, const Transaction& t, const WidthPowers& powers);

} // namespace txclean
