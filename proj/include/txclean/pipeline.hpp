#pragma once

// Experiment orchestration behind the command line: load -> stats -> fit ->
// cleanse -> cluster, and the two-arm (cleansed vs raw) comparison.

#include "txclean/cleanse.hpp"
#include "txclean/clope.hpp"
#include "txclean/core.hpp"
#include "txclean/synth.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace txclean {

enum class InputFormat { generic, aol, keywords };

std::string_view to_string(InputFormat format);
/// "generic", "aol" or "keywords"; throws ParameterError otherwise.
InputFormat parse_format(std::string_view name);

inline constexpr int kExitOk = 0;
inline constexpr int kExitArmFailure = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitEmpty = 3;

inline constexpr std::string_view kSchemaVersion = "1";

struct PipelineConfig {
    std::filesystem::path input;
    InputFormat format = InputFormat::generic;
    char delimiter = '\t';
    DistributionKind distribution = DistributionKind::lognormal;
    double s = 5.0;
    bool raw_band = false;
    double repulsion = 1.5;
    std::size_t max_passes = 20;
    /// Keep only the first `limit` transactions.
    std::optional<std::size_t> limit;
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 1;
    /// Run both pipeline arms at once (timings become unreliable).
    bool concurrent_arms = false;
    Execution exec = Execution::parallel;

    /// Throws ParameterError on s <= 0, r <= 0, max_passes == 0 or limit == 0.
    void validate() const;
};

struct LoadedInput {
    TransactionDatabase db;
    std::size_t warnings = 0;
    double seconds = 0.0;
};

/// Parses config.input per config.format and applies the limit.
/// Throws IoError when the file cannot be read.
LoadedInput load_input(const PipelineConfig& config);

// Report builders. Timing lives under a "timing" key so that reruns compare
// equal once that key is dropped.
nlohmann::json stats_report(const TransactionDatabase& db, const FrequencyHistogram& hist);
nlohmann::json fit_report(const FrequencyHistogram& hist, const DistributionFit& fit);
nlohmann::json cleansing_report(const CleansingReport& report);
nlohmann::json cluster_report(const TransactionDatabase& db, const ClopeOptions& options,
                              const ClopeResult& result);

/// Removes every "timing" member recursively.
nlohmann::json without_timing(nlohmann::json report);

struct ArmOutcome {
    bool ok = false;
    std::string error;
    std::optional<CleanseResult> cleansed; // cleansed arm only
    std::optional<ClopeResult> clustering;
    double cleanse_seconds = 0.0;
    double cluster_seconds = 0.0;

    /// Time charged to the arm in the comparison: cleansing plus clustering.
    double compared_seconds() const noexcept { return cleanse_seconds + cluster_seconds; }
};

struct PipelineOutcome {
    ArmOutcome cleansed;
    ArmOutcome raw;
    nlohmann::json report;
};

/// Runs both arms on `db`. `band` overrides the fitted retention band.
PipelineOutcome run_pipeline(const TransactionDatabase& db, const PipelineConfig& config,
                             double ingest_seconds = 0.0,
                             const std::optional<DistributionFit>& band = std::nullopt);

// Subcommands. Each writes its files under config.out_dir, prints a short
// summary to `out`, and returns a process exit code. Errors are reported on
// `err`.
int cmd_stats(const PipelineConfig& config, std::ostream& out, std::ostream& err);
int cmd_fit(const PipelineConfig& config, std::ostream& out, std::ostream& err);
int cmd_cleanse(const PipelineConfig& config, std::ostream& out, std::ostream& err);
int cmd_cluster(const PipelineConfig& config, std::ostream& out, std::ostream& err);
int cmd_pipeline(const PipelineConfig& config, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthConfig& synth, const std::filesystem::path& out_dir, std::ostream& out,
              std::ostream& err);

} // namespace txclean
