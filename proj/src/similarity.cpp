#include "txclean/similarity.hpp"

#include "txclean/error.hpp"

#include <cmath>
#include <numeric>

namespace txclean {

SimilarityThreshold::SimilarityThreshold(double theta) : m_theta(theta) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw ParameterError("similarity threshold must lie in [0, 1]");
}

JaccardRatio jaccard_ratio(const Transaction& a, const Transaction& b) {
    if (a.empty() && b.empty())
        throw ParameterError("undefined similarity: both transactions are empty");
    std::size_t common = 0;
    auto i = a.items.begin();
    auto j = b.items.begin();
    while (i != a.items.end() && j != b.items.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    return {common, a.size() + b.size() - common};
}

namespace {

struct DisjointSets {
    std::vector<std::size_t> parent;

    explicit DisjointSets(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

std::vector<std::vector<Tid>> threshold_components(const TransactionDatabase& db,
                                                   SimilarityThreshold theta) {
    const auto n = db.size();
    const double th = theta.value();
    DisjointSets sets(n);
    for (Tid i = 0; i < n; ++i) {
        for (Tid j = i + 1; j < n; ++j) {
            const auto r = jaccard_ratio(db[i], db[j]);
            // intersection / union >= theta without dividing
            if (static_cast<double>(r.intersection) >= th * static_cast<double>(r.union_size))
                sets.unite(i, j);
        }
    }
    // union-by-min makes every root the smallest tid of its component
    std::vector<std::vector<Tid>> components;
    std::vector<std::size_t> slot(n, static_cast<std::size_t>(-1));
    for (Tid i = 0; i < n; ++i) {
        const auto root = sets.find(i);
        if (slot[root] == static_cast<std::size_t>(-1)) {
            slot[root] = components.size();
            components.emplace_back();
        }
        components[slot[root]].push_back(i);
    }
    return components;
}

} // namespace txclean
