#include "txclean/pipeline.hpp"

#include "txclean/error.hpp"
#include "txclean/ingest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>

namespace txclean {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::ofstream open_output(const fs::path& path) {
    std::error_code ec;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    return out;
}

void write_json(const fs::path& path, const json& value) {
    auto out = open_output(path);
    out << value.dump(2) << '\n';
    if (!out)
        throw IoError("failed writing " + path.string());
}

json schema_header(std::string_view name) {
    return {{"schema", std::string("txclean.") + std::string(name)},
            {"schema_version", std::string(kSchemaVersion)}};
}

json fit_json(const DistributionFit& fit) {
    return {{"kind", std::string(to_string(fit.kind))},
            {"mu_hat", fit.mu_hat},
            {"sigma_hat", fit.sigma_hat},
            {"s", fit.s},
            {"space", fit.log_space() ? "log" : "raw"},
            {"band_low", fit.band_low},
            {"band_high", fit.band_high},
            {"lower", fit.lower},
            {"upper", fit.upper}};
}

json config_json(const PipelineConfig& config) {
    return {{"format", std::string(to_string(config.format))},
            {"distribution", std::string(to_string(config.distribution))},
            {"s", config.s},
            {"raw_band", config.raw_band},
            {"repulsion", config.repulsion},
            {"max_passes", config.max_passes},
            {"limit", config.limit ? json(*config.limit) : json(nullptr)},
            {"seed", config.seed}};
}

/// Runs `body`, mapping library exceptions onto exit codes.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const EmptyInputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitEmpty;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

ArmOutcome run_arm(const TransactionDatabase& db, const ClopeOptions& options,
                   const std::optional<DistributionFit>& band) {
    ArmOutcome arm;
    try {
        const TransactionDatabase* target = &db;
        if (band) {
            const auto start = Clock::now();
            arm.cleansed = cleanse(db, *band);
            arm.cleanse_seconds = seconds_since(start);
            target = &arm.cleansed->db;
        }
        const auto start = Clock::now();
        arm.clustering = clope_cluster(*target, options);
        arm.cluster_seconds = seconds_since(start);
        arm.ok = true;
    } catch (const std::exception& e) {
        arm.error = e.what();
    }
    return arm;
}

json arm_json(const ArmOutcome& arm, const TransactionDatabase& clustered,
              const ClopeOptions& options, double ingest_seconds) {
    json out;
    out["status"] = arm.ok ? "ok" : "failed";
    if (!arm.ok)
        out["error"] = arm.error;
    if (arm.cleansed)
        out["cleansing"] = cleansing_report(arm.cleansed->report);
    if (arm.clustering) {
        const auto& c = *arm.clustering;
        out["k"] = c.clustering.k();
        out["profit"] = c.clustering.profit;
        out["passes"] = c.trace.passes;
        out["clustering"] = cluster_report(clustered, options, c);
    }
    out["timing"] = {{"ingest_seconds", ingest_seconds},
                     {"cleanse_seconds", arm.cleanse_seconds},
                     {"cluster_seconds", arm.cluster_seconds}};
    return out;
}

ClopeOptions clope_options(const PipelineConfig& config) {
    ClopeOptions options;
    options.repulsion = config.repulsion;
    options.max_passes = config.max_passes;
    options.exec = config.exec;
    return options;
}

} // namespace

std::string_view to_string(InputFormat format) {
    switch (format) {
    case InputFormat::generic:
        return "generic";
    case InputFormat::aol:
        return "aol";
    case InputFormat::keywords:
        return "keywords";
    }
    return "generic";
}

InputFormat parse_format(std::string_view name) {
    if (name == "generic")
        return InputFormat::generic;
    if (name == "aol")
        return InputFormat::aol;
    if (name == "keywords")
        return InputFormat::keywords;
    throw ParameterError("unknown input format '" + std::string(name) + "'");
}

void PipelineConfig::validate() const {
    if (!(s > 0.0) || !std::isfinite(s))
        throw ParameterError("--s must be positive");
    Repulsion{repulsion};
    if (max_passes == 0)
        throw ParameterError("--max-passes must be at least 1");
    if (limit && *limit == 0)
        throw ParameterError("--limit must be at least 1");
}

LoadedInput load_input(const PipelineConfig& config) {
    std::ifstream in(config.input, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + config.input.string());
    const auto start = Clock::now();
    LoadedInput loaded;
    switch (config.format) {
    case InputFormat::generic: {
        auto parsed = parse_transactions(in, config.delimiter);
        loaded.db = std::move(parsed.db);
        loaded.warnings = parsed.warnings;
        break;
    }
    case InputFormat::aol: {
        auto parsed = parse_query_log(in);
        loaded.db = sessionize(parsed.records);
        loaded.warnings = parsed.warnings;
        break;
    }
    case InputFormat::keywords: {
        auto parsed = parse_keyword_registration(in);
        loaded.db = std::move(parsed.db);
        loaded.warnings = parsed.warnings;
        break;
    }
    }
    if (in.bad())
        throw IoError("error reading " + config.input.string());
    if (config.limit)
        loaded.db = loaded.db.head(*config.limit);
    loaded.seconds = seconds_since(start);
    return loaded;
}

json stats_report(const TransactionDatabase& db, const FrequencyHistogram& hist) {
    auto out = schema_header("stats");
    out["n"] = db.size();
    out["m"] = db.item_count();
    out["total_occurrences"] = db.total_occurrences();
    if (hist.empty()) {
        out["min_frequency"] = nullptr;
        out["median_frequency"] = nullptr;
        out["max_frequency"] = nullptr;
    } else {
        auto sorted = hist.per_item;
        std::sort(sorted.begin(), sorted.end());
        const auto mid = sorted.size() / 2;
        const double median = sorted.size() % 2
                                  ? static_cast<double>(sorted[mid])
                                  : 0.5 * static_cast<double>(sorted[mid - 1] + sorted[mid]);
        out["min_frequency"] = sorted.front();
        out["median_frequency"] = median;
        out["max_frequency"] = sorted.back();
    }
    json marginal = json::array();
    for (const auto& [f, c] : hist.marginal)
        marginal.push_back({f, c});
    out["marginal"] = std::move(marginal);
    return out;
}

json fit_report(const FrequencyHistogram& hist, const DistributionFit& fit) {
    auto out = schema_header("fit");
    std::size_t below = 0, inside = 0, above = 0;
    for (auto f : hist.per_item) {
        if (fit.retains(f)) {
            ++inside;
            continue;
        }
        const double x = static_cast<double>(f);
        ((fit.log_space() ? std::log(x) : x) < fit.band_low ? below : above)++;
    }
    out["fit"] = fit_json(fit);
    out["items_below"] = below;
    out["items_inside"] = inside;
    out["items_above"] = above;
    const FitParameters params{fit.mu_hat, fit.sigma_hat};
    const double ll = log_likelihood(hist, fit.kind, params);
    out["log_likelihood"] = std::isfinite(ll) ? json(ll) : json(nullptr);
    return out;
}

json cleansing_report(const CleansingReport& report) {
    auto out = schema_header("cleanse");
    out["items_removed_low"] = report.items_removed_low;
    out["items_removed_high"] = report.items_removed_high;
    out["items_retained"] = report.items_retained;
    out["transactions_removed_empty"] = report.transactions_removed_empty;
    out["transactions_retained"] = report.transactions_retained;
    out["fit"] = fit_json(report.fit);
    return out;
}

json cluster_report(const TransactionDatabase& db, const ClopeOptions& options,
                    const ClopeResult& result) {
    auto out = schema_header("cluster");
    out["n"] = db.size();
    out["m"] = db.item_count();
    out["repulsion"] = options.repulsion;
    out["max_passes"] = options.max_passes;
    out["k"] = result.clustering.k();
    out["profit"] = result.clustering.profit;
    out["profit_per_pass"] = result.trace.profit_per_pass;
    out["moves_per_pass"] = result.trace.moves_per_pass;
    out["passes"] = result.trace.passes;
    out["hit_max_passes"] = result.trace.hit_max_passes;
    out["timing"] = {{"add_seconds", result.trace.add_seconds},
                     {"refine_seconds", result.trace.refine_seconds}};
    return out;
}

json without_timing(json report) {
    if (report.is_object()) {
        report.erase("timing");
        report.erase("time_ratio");
        for (auto& [key, value] : report.items())
            value = without_timing(std::move(value));
    } else if (report.is_array()) {
        for (auto& value : report)
            value = without_timing(std::move(value));
    }
    return report;
}

PipelineOutcome run_pipeline(const TransactionDatabase& db, const PipelineConfig& config,
                             double ingest_seconds, const std::optional<DistributionFit>& band) {
    config.validate();
    const auto options = clope_options(config);

    std::optional<DistributionFit> fit = band;
    PipelineOutcome outcome;
    std::string fit_error;
    try {
        if (!fit)
            fit = fit_distribution(item_frequencies(db, config.exec), config.distribution,
                                   config.s, config.raw_band);
    } catch (const std::exception& e) {
        fit_error = e.what();
    }

    auto cleansed_arm = [&] {
        if (!fit) {
            ArmOutcome failed;
            failed.error = fit_error;
            return failed;
        }
        return run_arm(db, options, fit);
    };
    if (config.concurrent_arms) {
        auto raw = std::async(std::launch::async, [&] { return run_arm(db, options, std::nullopt); });
        outcome.cleansed = cleansed_arm();
        outcome.raw = raw.get();
    } else {
        outcome.cleansed = cleansed_arm();
        outcome.raw = run_arm(db, options, std::nullopt);
    }

    auto& report = outcome.report;
    report = schema_header("pipeline");
    report["config"] = config_json(config);
    report["n"] = db.size();
    report["m"] = db.item_count();
    const auto& cleansed_db = outcome.cleansed.cleansed ? outcome.cleansed.cleansed->db : db;
    report["arms"] = {{"cleansed", arm_json(outcome.cleansed, cleansed_db, options, ingest_seconds)},
                      {"raw", arm_json(outcome.raw, db, options, ingest_seconds)}};
    json improvement = {{"profit_ratio", nullptr}, {"time_ratio", nullptr}};
    if (outcome.cleansed.ok && outcome.raw.ok) {
        improvement["profit_ratio"] =
            outcome.cleansed.clustering->clustering.profit / outcome.raw.clustering->clustering.profit;
        const double t1 = outcome.cleansed.compared_seconds();
        if (t1 > 0.0)
            improvement["time_ratio"] = outcome.raw.compared_seconds() / t1;
    }
    report["improvement"] = std::move(improvement);
    return outcome;
}

int cmd_stats(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        config.validate();
        const auto loaded = load_input(config);
        const auto hist = item_frequencies(loaded.db, config.exec);
        {
            auto csv = open_output(config.out_dir / "histogram.csv");
            write_histogram_csv(csv, hist);
        }
        auto report = stats_report(loaded.db, hist);
        report["warnings"] = loaded.warnings;
        write_json(config.out_dir / "stats.json", report);
        out << "n=" << report["n"] << " m=" << report["m"]
            << " occurrences=" << report["total_occurrences"]
            << " min=" << report["min_frequency"] << " median=" << report["median_frequency"]
            << " max=" << report["max_frequency"] << '\n';
        return kExitOk;
    });
}

int cmd_fit(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        config.validate();
        const auto loaded = load_input(config);
        const auto hist = item_frequencies(loaded.db, config.exec);
        const auto fit = fit_distribution(hist, config.distribution, config.s, config.raw_band);
        const auto report = fit_report(hist, fit);
        write_json(config.out_dir / "fit.json", report);
        out << report.dump(2) << '\n';
        return kExitOk;
    });
}

int cmd_cleanse(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        config.validate();
        const auto loaded = load_input(config);
        const auto hist = item_frequencies(loaded.db, config.exec);
        const auto fit = fit_distribution(hist, config.distribution, config.s, config.raw_band);
        const auto result = cleanse(loaded.db, fit);
        {
            auto txt = open_output(config.out_dir / "cleansed.txt");
            serialize_transactions(txt, result.db, config.delimiter);
        }
        const auto report = cleansing_report(result.report);
        write_json(config.out_dir / "cleanse_report.json", report);
        out << "items retained=" << result.report.items_retained
            << " removed_low=" << result.report.items_removed_low
            << " removed_high=" << result.report.items_removed_high
            << " transactions retained=" << result.report.transactions_retained
            << " removed_empty=" << result.report.transactions_removed_empty << '\n';
        return kExitOk;
    });
}

int cmd_cluster(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        config.validate();
        const auto loaded = load_input(config);
        const auto options = clope_options(config);
        const auto result = clope_cluster(loaded.db, options);
        {
            auto csv = open_output(config.out_dir / "assignment.csv");
            write_assignment_csv(csv, result.clustering);
        }
        write_json(config.out_dir / "cluster_report.json",
                   cluster_report(loaded.db, options, result));
        out << "k=" << result.clustering.k() << " profit=" << result.clustering.profit
            << " passes=" << result.trace.passes << '\n';
        return kExitOk;
    });
}

int cmd_pipeline(const PipelineConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        config.validate();
        const auto loaded = load_input(config);
        if (loaded.db.empty())
            throw EmptyInputError("input holds no transactions");
        auto outcome = run_pipeline(loaded.db, config, loaded.seconds);
        outcome.report["warnings"] = loaded.warnings;

        if (outcome.cleansed.clustering) {
            // cleansed arm rows carry the original tids
            auto csv = open_output(config.out_dir / "assignment_cleansed.csv");
            const auto& kept = outcome.cleansed.cleansed->kept_tids;
            const auto& assignment = outcome.cleansed.clustering->clustering.assignment;
            csv << "tid,cluster_id\n";
            for (std::size_t i = 0; i < assignment.size(); ++i)
                csv << kept[i] << ',' << assignment[i] << '\n';
        }
        if (outcome.raw.clustering) {
            auto csv = open_output(config.out_dir / "assignment_raw.csv");
            write_assignment_csv(csv, outcome.raw.clustering->clustering);
        }
        write_json(config.out_dir / "pipeline_report.json", outcome.report);

        const auto& arms = outcome.report["arms"];
        for (const char* name : {"cleansed", "raw"}) {
            const auto& arm = arms[name];
            out << name << ": " << arm["status"].get<std::string>();
            if (arm.contains("k"))
                out << " k=" << arm["k"] << " profit=" << arm["profit"];
            if (arm.contains("error"))
                out << " (" << arm["error"].get<std::string>() << ')';
            out << '\n';
        }
        out << "profit_ratio=" << outcome.report["improvement"]["profit_ratio"]
            << " time_ratio=" << outcome.report["improvement"]["time_ratio"] << '\n';
        return outcome.cleansed.ok && outcome.raw.ok ? kExitOk : kExitArmFailure;
    });
}

int cmd_synth(const SynthConfig& synth, const fs::path& out_dir, std::ostream& out,
              std::ostream& err) {
    return guarded(err, [&] {
        const auto db = generate_synthetic(synth);
        {
            auto txt = open_output(out_dir / "synth.txt");
            serialize_transactions(txt, db);
        }
        {
            auto csv = open_output(out_dir / "synth_labels.csv");
            csv << "tid,label\n";
            for (const auto& t : db.transactions())
                csv << t.tid << ',' << db.labels()[t.tid] << '\n';
        }
        out << "n=" << db.size() << " m=" << db.item_count() << '\n';
        return kExitOk;
    });
}

} // namespace txclean
