// txclean: frequency-band cleansing and CLOPE clustering of transaction databases.

#include "txclean/error.hpp"
#include "txclean/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

struct Flags {
    std::string input;
    std::string format = "generic";
    std::string dist = "lognormal";
    double s = 5.0;
    double repulsion = 1.5;
    std::size_t max_passes = 20;
    std::size_t limit = 0;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::string delimiter = "\t";
    bool raw_band = false;
    bool concurrent_arms = false;
    bool serial = false;
};

void add_common(CLI::App& cmd, Flags& f, bool clustering) {
    cmd.add_option("input", f.input, "Input file")->required();
    cmd.add_option("--format", f.format, "generic | aol | keywords")
        ->check(CLI::IsMember({"generic", "aol", "keywords"}));
    cmd.add_option("--delimiter", f.delimiter, "Item delimiter of the generic format (default TAB)");
    cmd.add_option("--limit", f.limit, "Keep only the first N transactions");
    cmd.add_option("--out-dir", f.out_dir, "Directory for output files");
    cmd.add_option("--seed", f.seed, "Random seed recorded in reports");
    cmd.add_flag("--serial", f.serial, "Use the serial reference kernels");
    cmd.add_option("--dist", f.dist, "lognormal | exponential")
        ->check(CLI::IsMember({"lognormal", "exponential"}));
    cmd.add_option("--s", f.s, "Band half-width in standard deviations");
    cmd.add_flag("--raw-band", f.raw_band, "Band lognormal fits on raw frequencies");
    if (clustering) {
        cmd.add_option("--repulsion", f.repulsion, "CLOPE repulsion r");
        cmd.add_option("--max-passes", f.max_passes, "Refinement pass cap");
    }
}

txclean::PipelineConfig to_config(const Flags& f, const CLI::App& cmd) {
    txclean::PipelineConfig config;
    config.input = f.input;
    config.format = txclean::parse_format(f.format);
    if (f.delimiter.size() != 1)
        throw txclean::ParameterError("--delimiter must be a single character");
    config.delimiter = f.delimiter.front();
    config.distribution = txclean::parse_distribution(f.dist);
    config.s = f.s;
    config.raw_band = f.raw_band;
    config.repulsion = f.repulsion;
    config.max_passes = f.max_passes;
    if (cmd.count("--limit"))
        config.limit = f.limit;
    config.out_dir = f.out_dir;
    config.seed = f.seed;
    config.concurrent_arms = f.concurrent_arms;
    config.exec = f.serial ? txclean::Execution::serial : txclean::Execution::parallel;
    config.validate();
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Item-frequency cleansing and CLOPE clustering for transaction databases"};
    app.require_subcommand(1);

    Flags flags;
    auto* stats = app.add_subcommand("stats", "Item-frequency histogram and summary");
    add_common(*stats, flags, false);
    auto* fit = app.add_subcommand("fit", "Fit the frequency distribution and report the band");
    add_common(*fit, flags, false);
    auto* cleanse = app.add_subcommand("cleanse", "Remove out-of-band items and empty transactions");
    add_common(*cleanse, flags, false);
    auto* cluster = app.add_subcommand("cluster", "Run CLOPE on the input as is");
    add_common(*cluster, flags, true);
    auto* pipeline = app.add_subcommand("pipeline", "Compare CLOPE with and without cleansing");
    add_common(*pipeline, flags, true);
    pipeline->add_flag("--concurrent-arms", flags.concurrent_arms,
                       "Run both arms at once (timings unreliable)");

    txclean::SynthConfig synth;
    std::string synth_out = ".";
    auto* gen = app.add_subcommand("synth", "Generate a planted-cluster database with noise");
    gen->add_option("--transactions", synth.transactions, "Number of transactions");
    gen->add_option("--clusters", synth.clusters, "Planted clusters");
    gen->add_option("--vocabulary", synth.vocabulary, "Core items per cluster");
    gen->add_option("--core-probability", synth.core_probability, "Core item inclusion probability");
    gen->add_option("--noise-fraction", synth.noise_fraction, "Fraction of transactions with one-off items");
    gen->add_option("--noise-items", synth.noise_items, "One-off items per noisy transaction");
    gen->add_option("--ubiquitous", synth.ubiquitous, "Near-ubiquitous items");
    gen->add_option("--ubiquitous-probability", synth.ubiquitous_probability,
                    "Inclusion probability of each near-ubiquitous item");
    gen->add_option("--seed", synth.seed, "Random seed");
    gen->add_option("--out-dir", synth_out, "Directory for synth.txt and synth_labels.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help exits 0; usage errors share the parameter-error code
        return app.exit(e) == 0 ? txclean::kExitOk : txclean::kExitIo;
    }

    if (gen->parsed())
        return txclean::cmd_synth(synth, synth_out, std::cout, std::cerr);

    try {
        if (stats->parsed())
            return txclean::cmd_stats(to_config(flags, *stats), std::cout, std::cerr);
        if (fit->parsed())
            return txclean::cmd_fit(to_config(flags, *fit), std::cout, std::cerr);
        if (cleanse->parsed())
            return txclean::cmd_cleanse(to_config(flags, *cleanse), std::cout, std::cerr);
        if (cluster->parsed())
            return txclean::cmd_cluster(to_config(flags, *cluster), std::cout, std::cerr);
        if (pipeline->parsed())
            return txclean::cmd_pipeline(to_config(flags, *pipeline), std::cout, std::cerr);
    } catch (const txclean::ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return txclean::kExitIo;
    }
    return 0;
}
