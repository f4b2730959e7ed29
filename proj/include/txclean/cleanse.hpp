#pragma once

#include "txclean/core.hpp"
#include "txclean/kernels.hpp"

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

namespace txclean {

/// Item frequencies (number of transactions containing each item) and their
/// marginal: (frequency value, number of items with that frequency), sorted
/// ascending by frequency.
struct FrequencyHistogram {
    std::vector<std::uint64_t> per_item; // indexed by ItemId
    std::vector<std::pair<std::uint64_t, std::uint64_t>> marginal;

    std::size_t item_count() const noexcept { return per_item.size(); }
    bool empty() const noexcept { return per_item.empty(); }

    /// Builds the marginal from per-item counts.
    static FrequencyHistogram from_counts(std::vector<std::uint64_t> per_item);
};

FrequencyHistogram item_frequencies(const TransactionDatabase& db,
                                    Execution exec = Execution::parallel);

/// Writes "frequency,count" rows ascending, with a header line.
void write_histogram_csv(std::ostream& out, const FrequencyHistogram& hist);

enum class DistributionKind { lognormal, exponential };

std::string_view to_string(DistributionKind kind);
/// Accepts "lognormal" or "exponential"; throws ParameterError otherwise.
DistributionKind parse_distribution(std::string_view name);

struct FitParameters {
    double mu_hat = 0.0;
    double sigma_hat = 0.0;
};

/// Moments of ln(frequency) over items; each frequency counted once per item.
/// Throws EmptyInputError on an empty histogram.
FitParameters fit_lognormal(const FrequencyHistogram& hist);

/// mu_hat = sigma_hat = mean frequency (the reciprocal of the rate estimate).
/// Throws EmptyInputError on an empty histogram.
FitParameters fit_exponential(const FrequencyHistogram& hist);

FitParameters fit(const FrequencyHistogram& hist, DistributionKind kind);

/// Retention band mu_hat +- s * sigma_hat. For lognormal the band lives in log
/// space unless `raw_space` is set; for exponential it is always raw and the
/// lower end is clamped at 0. Endpoints are inclusive.
struct DistributionFit {
    DistributionKind kind = DistributionKind::lognormal;
    double mu_hat = 0.0;
    double sigma_hat = 0.0;
    double s = 5.0;
    bool raw_space = false;
    /// Band endpoints in the comparison space (ln f for log-space bands).
    double band_low = 0.0;
    double band_high = 0.0;
    /// The same endpoints expressed as raw frequencies.
    double lower = 0.0;
    double upper = 0.0;

    /// True when the band is compared against ln(frequency).
    bool log_space() const noexcept { return kind == DistributionKind::lognormal && !raw_space; }

    bool retains(std::uint64_t frequency) const noexcept;
};

/// Throws ParameterError when s <= 0 (or is not finite) or sigma_hat < 0.
DistributionFit compute_bounds(DistributionKind kind, double mu_hat, double sigma_hat, double s,
                               bool raw_space = false);

/// Fit + band in one step.
DistributionFit fit_distribution(const FrequencyHistogram& hist, DistributionKind kind, double s,
                                 bool raw_space = false);

/// Log-likelihood of the item frequencies under the fitted distribution.
/// Advisory only; NaN for a degenerate lognormal (sigma_hat == 0).
double log_likelihood(const FrequencyHistogram& hist, DistributionKind kind,
                      const FitParameters& params);

struct CleansingReport {
    std::size_t items_removed_low = 0;
    std::size_t items_removed_high = 0;
    std::size_t items_retained = 0;
    std::size_t transactions_removed_empty = 0;
    std::size_t transactions_retained = 0;
    DistributionFit fit;
};

struct CleanseResult {
    TransactionDatabase db;
    CleansingReport report;
    /// Old ItemId -> new ItemId, kNoItem for removed items.
    std::vector<ItemId> item_map;
    /// New tid -> old tid.
    std::vector<Tid> kept_tids;
};

/// Drops every out-of-band item, then every transaction left empty. Survivors
/// keep their relative order; tids and item ids are made dense again.
CleanseResult cleanse(const TransactionDatabase& db, const DistributionFit& fit);

} // namespace txclean
