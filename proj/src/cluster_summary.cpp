#include "txclean/cluster_summary.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace txclean {

void ClusterSummary::add(const Transaction& t) {
    for (auto id : t.items)
        ++occ[id];
    total += t.size();
    ++members;
}

void ClusterSummary::remove(const Transaction& t) {
    assert(members > 0);
    for (auto id : t.items) {
        auto it = occ.find(id);
        assert(it != occ.end());
        if (--it->second == 0)
            occ.erase(it);
    }
    total -= t.size();
    --members;
}

std::uint64_t ClusterSummary::new_items(const Transaction& t) const {
    std::uint64_t fresh = 0;
    for (auto id : t.items)
        fresh += occ.find(id) == occ.end();
    return fresh;
}

double cluster_gain(std::uint64_t total, std::uint64_t width, std::uint64_t members, double r) {
    if (members == 0 || total == 0)
        return 0.0;
    const double w = static_cast<double>(width);
    const double denom = std::pow(w, r);
    if (std::isfinite(denom) && denom > 0.0)
        return static_cast<double>(total) * static_cast<double>(members) / denom;
    return std::exp(std::log(static_cast<double>(total)) + std::log(static_cast<double>(members)) -
                    r * std::log(w));
}

WidthPowers::WidthPowers(double r, std::uint64_t max_width) : m_r(r), m_pow(max_width + 1) {
    for (std::uint64_t w = 0; w <= max_width; ++w)
        m_pow[w] = std::pow(static_cast<double>(w), r);
}

double WidthPowers::gain(std::uint64_t total, std::uint64_t width, std::uint64_t members) const {
    if (width >= m_pow.size())
        return cluster_gain(total, width, members, m_r);
    if (members == 0 || total == 0)
        return 0.0;
    const double denom = m_pow[width];
    if (std::isfinite(denom) && denom > 0.0)
        return static_cast<double>(total) * static_cast<double>(members) / denom;
    return cluster_gain(total, width, members, m_r);
}

double delta_add(const ClusterSummary& c, const Transaction& t, const WidthPowers& powers) {
    const auto width = c.width() + c.new_items(t);
    return powers.gain(c.total + t.size(), width, c.members + 1) - powers.gain(c);
}

double delta_add(const ClusterSummary& c, const Transaction& t, double r) {
    const auto width = c.width() + c.new_items(t);
    return cluster_gain(c.total + t.size(), width, c.members + 1, r) - cluster_gain(c, r);
}

} // namespace txclean
