#include "txclean/cleanse.hpp"

#include "txclean/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace txclean {

FrequencyHistogram FrequencyHistogram::from_counts(std::vector<std::uint64_t> per_item) {
    FrequencyHistogram hist;
    std::vector<std::uint64_t> sorted = per_item;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i])
            ++j;
        hist.marginal.emplace_back(sorted[i], j - i);
        i = j;
    }
    hist.per_item = std::move(per_item);
    return hist;
}

FrequencyHistogram item_frequencies(const TransactionDatabase& db, Execution exec) {
    return FrequencyHistogram::from_counts(count_item_frequencies(db, exec));
}

void write_histogram_csv(std::ostream& out, const FrequencyHistogram& hist) {
    out << "frequency,count\n";
    for (const auto& [freq, count] : hist.marginal)
        out << freq << ',' << count << '\n';
}

std::string_view to_string(DistributionKind kind) {
    return kind == DistributionKind::lognormal ? "lognormal" : "exponential";
}

DistributionKind parse_distribution(std::string_view name) {
    if (name == "lognormal")
        return DistributionKind::lognormal;
    if (name == "exponential")
        return DistributionKind::exponential;
    throw ParameterError("unknown distribution '" + std::string(name) + "'");
}

FitParameters fit_lognormal(const FrequencyHistogram& hist) {
    if (hist.marginal.empty())
        throw EmptyInputError("no items to fit");
    // ln f = ln f0 + log1p((f - f0) / f0) around the weighted median f0, so
    // that tightly grouped frequencies do not cancel away their spread
    std::uint64_t total = 0;
    for (const auto& [freq, count] : hist.marginal)
        total += count;
    std::uint64_t f0 = hist.marginal.back().first;
    for (std::uint64_t seen = 0; const auto& [freq, count] : hist.marginal) {
        seen += count;
        if (2 * seen >= total) {
            f0 = freq;
            break;
        }
    }
    const double base = static_cast<double>(f0);
    std::vector<double> offsets;
    offsets.reserve(hist.marginal.size());
    const double n = static_cast<double>(total);
    double sum = 0.0;
    for (const auto& [freq, count] : hist.marginal) {
        const double diff = static_cast<double>(freq) - base; // exact below 2^53
        offsets.push_back(std::log1p(diff / base));
        sum += static_cast<double>(count) * offsets.back();
    }
    const double shift = sum / n;
    const double mu = std::log(base) + shift;
    double sq = 0.0;
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        const double d = offsets[i] - shift;
        sq += static_cast<double>(hist.marginal[i].second) * d * d;
    }
    return {mu, std::sqrt(sq / n)};
}

FitParameters fit_exponential(const FrequencyHistogram& hist) {
    if (hist.marginal.empty())
        throw EmptyInputError("no items to fit");
    // integer sums are exact; the only rounding is the final division
    std::uint64_t n = 0;
    std::uint64_t sum = 0;
    for (const auto& [freq, count] : hist.marginal) {
        n += count;
        sum += freq * count;
    }
    const double mean = static_cast<double>(sum) / static_cast<double>(n);
    const double rate = 1.0 / mean;
    return {1.0 / rate, 1.0 / rate};
}

FitParameters fit(const FrequencyHistogram& hist, DistributionKind kind) {
    return kind == DistributionKind::lognormal ? fit_lognormal(hist) : fit_exponential(hist);
}

bool DistributionFit::retains(std::uint64_t frequency) const noexcept {
    const double x = static_cast<double>(frequency);
    const double v = log_space() ? std::log(x) : x;
    return v >= band_low && v <= band_high;
}

DistributionFit compute_bounds(DistributionKind kind, double mu_hat, double sigma_hat, double s,
                               bool raw_space) {
    if (!(s > 0.0) || !std::isfinite(s))
        throw ParameterError("s must be a positive finite number");
    if (!(sigma_hat >= 0.0))
        throw ParameterError("sigma_hat must be non-negative");

    DistributionFit fit;
    fit.kind = kind;
    fit.mu_hat = mu_hat;
    fit.sigma_hat = sigma_hat;
    fit.s = s;
    fit.raw_space = kind == DistributionKind::lognormal && raw_space;
    fit.band_low = mu_hat - s * sigma_hat;
    fit.band_high = mu_hat + s * sigma_hat;
    if (fit.log_space()) {
        fit.lower = std::exp(fit.band_low);
        fit.upper = std::exp(fit.band_high);
    } else {
        if (kind == DistributionKind::exponential)
            fit.band_low = std::max(fit.band_low, 0.0);
        fit.lower = fit.band_low;
        fit.upper = fit.band_high;
    }
    return fit;
}

DistributionFit fit_distribution(const FrequencyHistogram& hist, DistributionKind kind, double s,
                                 bool raw_space) {
    const auto p = fit(hist, kind);
    return compute_bounds(kind, p.mu_hat, p.sigma_hat, s, raw_space);
}

double log_likelihood(const FrequencyHistogram& hist, DistributionKind kind,
                      const FitParameters& params) {
    if (hist.marginal.empty())
        throw EmptyInputError("no items to fit");
    double ll = 0.0;
    if (kind == DistributionKind::lognormal) {
        const double sigma = params.sigma_hat;
        if (sigma <= 0.0)
            return std::numeric_limits<double>::quiet_NaN();
        const double norm = std::log(sigma) + 0.5 * std::log(2.0 * std::numbers::pi);
        for (const auto& [freq, count] : hist.marginal) {
            const double lx = std::log(static_cast<double>(freq));
            const double z = (lx - params.mu_hat) / sigma;
            ll += static_cast<double>(count) * (-lx - norm - 0.5 * z * z);
        }
    } else {
        const double rate = 1.0 / params.mu_hat;
        for (const auto& [freq, count] : hist.marginal)
            ll += static_cast<double>(count) * (std::log(rate) - rate * static_cast<double>(freq));
    }
    return ll;
}

CleanseResult cleanse(const TransactionDatabase& db, const DistributionFit& fit) {
    const auto freq = count_item_frequencies(db, Execution::parallel);
    CleanseResult result;
    auto& report = result.report;
    report.fit = fit;

    const auto m = db.item_count();
    std::vector<char> keep(m, 0);
    for (ItemId id = 0; id < m; ++id) {
        if (fit.retains(freq[id])) {
            keep[id] = 1;
            ++report.items_retained;
            continue;
        }
        const double x = static_cast<double>(freq[id]);
        const double v = fit.log_space() ? std::log(x) : x;
        if (v < fit.band_low)
            ++report.items_removed_low;
        else
            ++report.items_removed_high;
    }

    std::vector<std::vector<ItemId>> survivors;
    std::vector<std::string> labels;
    for (const auto& t : db.transactions()) {
        std::vector<ItemId> items;
        items.reserve(t.size());
        for (auto id : t.items)
            if (keep[id])
                items.push_back(id);
        if (items.empty()) {
            ++report.transactions_removed_empty;
            continue;
        }
        result.kept_tids.push_back(t.tid);
        survivors.push_back(std::move(items));
        if (db.has_labels())
            labels.push_back(db.labels()[t.tid]);
    }
    report.transactions_retained = survivors.size();
    result.db = select_and_compact(db, survivors, labels, &result.item_map);
    return result;
}

} // namespace txclean
