#include "txclean/synth.hpp"

#include "txclean/error.hpp"

#include <random>
#include <string>
#include <vector>

namespace txclean {

TransactionDatabase generate_synthetic(const SynthConfig& config) {
    if (config.clusters == 0 || config.vocabulary == 0)
        throw ParameterError("synthetic generator needs at least one cluster and one core item");
    for (double p : {config.core_probability, config.noise_fraction, config.ubiquitous_probability})
        if (!(p >= 0.0 && p <= 1.0))
            throw ParameterError("synthetic probabilities must lie in [0, 1]");

    std::mt19937_64 rng(config.seed);
    std::uniform_int_distribution<std::size_t> pick_cluster(0, config.clusters - 1);
    std::uniform_int_distribution<std::size_t> pick_core(0, config.vocabulary - 1);
    std::bernoulli_distribution core(config.core_probability);
    std::bernoulli_distribution noisy(config.noise_fraction);
    std::bernoulli_distribution common(config.ubiquitous_probability);

    DatabaseBuilder builder;
    std::vector<std::string> items;
    std::size_t noise_serial = 0;
    for (std::size_t tid = 0; tid < config.transactions; ++tid) {
        items.clear();
        const auto cluster = pick_cluster(rng);
        const auto prefix = "c" + std::to_string(cluster) + "_i";
        for (std::size_t j = 0; j < config.vocabulary; ++j)
            if (core(rng))
                items.push_back(prefix + std::to_string(j));
        if (items.empty())
            items.push_back(prefix + std::to_string(pick_core(rng)));
        if (noisy(rng))
            for (std::size_t k = 0; k < config.noise_items; ++k)
                items.push_back("noise_" + std::to_string(noise_serial++));
        for (std::size_t u = 0; u < config.ubiquitous; ++u)
            if (common(rng))
                items.push_back("common_" + std::to_string(u));
        builder.add(items, "c" + std::to_string(cluster));
    }
    return std::move(builder).build();
}

} // namespace txclean
