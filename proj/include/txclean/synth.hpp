#pragma once

#include "txclean/core.hpp"

#include <cstddef>
#include <cstdint>

namespace txclean {

/// Planted-cluster transaction generator with two kinds of injected noise:
/// one-off items that occur in exactly one transaction, and a handful of
/// near-ubiquitous items present in almost every transaction.
struct SynthConfig {
    std::size_t transactions = 5000;
    std::size_t clusters = 50;
    /// Distinct core items owned by each planted cluster.
    std::size_t vocabulary = 20;
    /// Probability that a member transaction contains a given core item.
    double core_probability = 0.4;
    /// Fraction of transactions that receive one-off noise items.
    double noise_fraction = 0.3;
    /// One-off items added to a noisy transaction.
    std::size_t noise_items = 1;
    std::size_t ubiquitous = 5;
    double ubiquitous_probability = 0.95;
    std::uint64_t seed = 1;
};

/// Transactions are labeled with their planted cluster ("c<id>"). Every
/// transaction holds at least one core item. Deterministic for a given config.
TransactionDatabase generate_synthetic(const SynthConfig& config);

} // namespace txclean
