// Acceptance suite: one PASS/FAIL line per exit criterion.
//
//   acceptance              run every criterion
//   acceptance -c 3 -c 5    run selected criteria
//
// Exit status is 0 only if every selected criterion passes.

#include "test_support.hpp"

#include "txclean/cleanse.hpp"
#include "txclean/clope.hpp"
#include "txclean/pipeline.hpp"
#include "txclean/similarity.hpp"
#include "txclean/synth.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace txclean;
namespace fs = std::filesystem;
using txclean::testing::letters;
using txclean::testing::letters_db;
using txclean::testing::naive_frequencies;
using txclean::testing::rel_close;

namespace {

// Pinned tolerances and limits.
constexpr double kFitRelTol = 1e-9;
constexpr double kProfitRelTol = 1e-9;
constexpr double kExample1Seconds = 1e-3;
constexpr double kFitOracleSeconds = 10.0;
constexpr double kClopeSeconds = 60.0;
constexpr double kSyntheticSeconds = 300.0;

constexpr int kHistograms = 1000;
constexpr std::size_t kMaxHistogramItems = 100'000;
constexpr std::uint64_t kMaxFrequency = 1'000'000;
constexpr int kCleanseDatabases = 500;
constexpr int kClopeDatabases = 200;
constexpr std::size_t kClopeMaxTransactions = 2000;
constexpr int kMicroDatabases = 300;
constexpr std::size_t kMicroMaxTransactions = 8;
constexpr int kSyntheticSeeds = 10;

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass)
            detail = why;
        pass = false;
    }
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

bool ratio_eq(JaccardRatio r, std::uint64_t num, std::uint64_t den) {
    return r.intersection * den == num * r.union_size;
}

bool ratio_below_half(JaccardRatio r) { return 2 * r.intersection < r.union_size; }

std::vector<std::string> all_letters(const TransactionDatabase& db) {
    std::vector<std::string> out;
    for (Tid t = 0; t < db.size(); ++t)
        out.push_back(letters(db, t));
    return out;
}

// 1. Low-frequency worked example.
Outcome criterion_1() {
    Outcome o;
    const auto start = Clock::now();

    const auto raw = letters_db({"abcxyz", "bcdpqr", "acdstuvw"});
    const auto r01 = jaccard_ratio(raw[0], raw[1]);
    const auto r02 = jaccard_ratio(raw[0], raw[2]);
    const auto r12 = jaccard_ratio(raw[1], raw[2]);

    // retain frequencies 2 and 3, drop 1
    const auto band = compute_bounds(DistributionKind::lognormal, std::log(2.0), 1.0, 0.5);
    const auto cleansed = cleanse(raw, band);
    const auto& db = cleansed.db;
    const bool three = db.size() == 3;
    const auto c01 = three ? jaccard_ratio(db[0], db[1]) : JaccardRatio{};
    const auto c02 = three ? jaccard_ratio(db[0], db[2]) : JaccardRatio{};
    const auto c12 = three ? jaccard_ratio(db[1], db[2]) : JaccardRatio{};
    const auto components = threshold_components(db, SimilarityThreshold(0.5));

    const double seconds = since(start);

    if (!ratio_eq(r01, 1, 5) || !ratio_eq(r02, 1, 6) || !ratio_eq(r12, 1, 6))
        o.fail(fmt("raw ratios %llu/%llu %llu/%llu %llu/%llu", (unsigned long long)r01.intersection,
                   (unsigned long long)r01.union_size, (unsigned long long)r02.intersection,
                   (unsigned long long)r02.union_size, (unsigned long long)r12.intersection,
                   (unsigned long long)r12.union_size));
    if (!ratio_below_half(r01) || !ratio_below_half(r02) || !ratio_below_half(r12))
        o.fail("a raw pair reaches 0.5");
    if (!three || all_letters(db) != std::vector<std::string>{"abc", "bcd", "acd"})
        o.fail("cleansed database is not {abc, bcd, acd}");
    if (!ratio_eq(c01, 1, 2) || !ratio_eq(c02, 1, 2) || !ratio_eq(c12, 1, 2))
        o.fail("a cleansed pair is not exactly 1/2");
    if (components != std::vector<std::vector<Tid>>{{0, 1, 2}})
        o.fail("threshold components are not one 3-member cluster");
    if (seconds >= kExample1Seconds)
        o.fail(fmt("took %.3f ms", seconds * 1e3));
    if (o.pass)
        o.detail = fmt("raw 1/5 1/6 1/6, cleansed 1/2 1/2 1/2, one component, %.3f ms", seconds * 1e3);
    return o;
}

// 2. High-frequency worked example.
Outcome criterion_2() {
    Outcome o;
    const auto raw = letters_db({"abcdxy", "cdxyzw", "qrxyzw", "opqrzw"});
    // raw band [0.8, 2.4]: x, y, z, w (frequency 3) fall above it
    const auto band = compute_bounds(DistributionKind::exponential, 1.6, 1.6, 0.5);
    const auto cleansed = cleanse(raw, band);

    std::vector<std::string> removed;
    for (ItemId id = 0; id < raw.item_count(); ++id)
        if (cleansed.item_map[id] == kNoItem)
            removed.push_back(raw.dictionary().lookup(id));
    std::sort(removed.begin(), removed.end());

    if (removed != std::vector<std::string>{"w", "x", "y", "z"})
        o.fail("removed item set is not {x, y, z, w}");
    if (all_letters(cleansed.db) != std::vector<std::string>{"abcd", "cd", "qr", "opqr"})
        o.fail("cleansed database is not {abcd, cd, qr, opqr}");
    if (threshold_components(cleansed.db, SimilarityThreshold(0.5)) !=
        std::vector<std::vector<Tid>>{{0, 1}, {2, 3}})
        o.fail("components are not {T1', T2'} and {T3', T4'}");
    if (threshold_components(raw, SimilarityThreshold(0.5)).size() != 1)
        o.fail("raw database does not chain into one component");
    if (o.pass)
        o.detail = "cleansed {abcd, cd, qr, opqr}, components {0,1} {2,3}";
    return o;
}

// 3. Fit oracle equivalence on random histograms.
Outcome criterion_3() {
    Outcome o;
    const auto start = Clock::now();
    std::mt19937_64 rng(20240301);
    std::uniform_int_distribution<std::size_t> pick_items(1, kMaxHistogramItems);
    std::uniform_int_distribution<int> pick_shape(0, 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;

    auto rel = [](double a, double b) {
        if (a == b)
            return 0.0;
        return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
    };

    for (int h = 0; h < kHistograms; ++h) {
        const auto m = pick_items(rng);
        const int shape = pick_shape(rng);
        std::vector<std::uint64_t> freq(m);
        for (auto& f : freq) {
            double x = 1.0;
            switch (shape) {
            case 0: // log-uniform over the full range
                x = std::exp(u(rng) * std::log(static_cast<double>(kMaxFrequency)));
                break;
            case 1: // uniform
                x = 1.0 + u(rng) * static_cast<double>(kMaxFrequency - 1);
                break;
            case 2: // mostly ones with a heavy tail
                x = u(rng) < 0.7 ? 1.0 : std::exp(u(rng) * 13.8);
                break;
            default: // a few distinct large values
                x = static_cast<double>(kMaxFrequency) - std::floor(u(rng) * 4.0);
                break;
            }
            f = std::clamp<std::uint64_t>(static_cast<std::uint64_t>(x), 1, kMaxFrequency);
        }
        const auto hist = FrequencyHistogram::from_counts(freq);
        const auto ln = fit_lognormal(hist);
        const auto ex = fit_exponential(hist);
        const auto ln_ref = txclean::testing::naive_lognormal(freq);
        const auto ex_ref = txclean::testing::naive_exponential(freq);

        for (double e : {rel(ln.mu_hat, ln_ref.mu), rel(ln.sigma_hat, ln_ref.sigma),
                         rel(ex.mu_hat, ex_ref.mu), rel(ex.sigma_hat, ex_ref.sigma)})
            worst = std::max(worst, e);
        if (!rel_close(ln.mu_hat, ln_ref.mu, kFitRelTol) ||
            !rel_close(ln.sigma_hat, ln_ref.sigma, kFitRelTol))
            o.fail(fmt("histogram %d (m=%zu): lognormal (%.17g, %.17g) vs reference (%.17g, %.17g)", h,
                       m, ln.mu_hat, ln.sigma_hat, ln_ref.mu, ln_ref.sigma));
        if (!rel_close(ex.mu_hat, ex_ref.mu, kFitRelTol) ||
            !rel_close(ex.sigma_hat, ex_ref.sigma, kFitRelTol))
            o.fail(fmt("histogram %d (m=%zu): exponential %.17g vs reference %.17g", h, m, ex.mu_hat,
                       ex_ref.mu));
    }
    const double seconds = since(start);
    if (seconds >= kFitOracleSeconds)
        o.fail(fmt("took %.2f s", seconds));
    if (o.pass)
        o.detail = fmt("%d histograms, worst relative error %.2e, %.2f s", kHistograms, worst, seconds);
    return o;
}

// 4. Cleansing band property.
Outcome criterion_4() {
    Outcome o;
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> pick_s(0.2, 3.0);
    std::size_t removed_total = 0;

    for (int round = 0; round < kCleanseDatabases && o.pass; ++round) {
        const auto db = txclean::testing::random_db(rng, 5 + rng() % 400, 3 + rng() % 150, 10);
        const auto kind = round % 2 ? DistributionKind::exponential : DistributionKind::lognormal;
        const bool raw_space = kind == DistributionKind::lognormal && round % 4 == 2;
        const double s = pick_s(rng);
        const auto band = fit_distribution(item_frequencies(db), kind, s, raw_space);
        const auto result = cleanse(db, band);
        const auto& rep = result.report;

        const double lo = band.mu_hat - s * band.sigma_hat;
        const double hi = band.mu_hat + s * band.sigma_hat;
        const bool logs = kind == DistributionKind::lognormal && !raw_space;

        // frequencies by item string, independent of the library's counter
        std::map<std::string, std::uint64_t> freq;
        for (const auto& t : db.transactions())
            for (auto id : t.items)
                ++freq[db.dictionary().lookup(id)];

        std::size_t below = 0, above = 0, kept = 0;
        for (const auto& [item, f] : freq) {
            const double v = logs ? std::log(static_cast<double>(f)) : static_cast<double>(f);
            const bool retained = result.db.dictionary().find(item).has_value();
            const bool inside = v >= lo && v <= hi;
            if (retained != inside) {
                o.fail(fmt("round %d: item %s with value %.17g %s band [%.17g, %.17g]", round,
                           item.c_str(), v, retained ? "retained outside" : "removed inside", lo, hi));
                break;
            }
            below += v < lo;
            above += v > hi;
            kept += inside;
        }

        std::size_t empty_dropped = 0;
        for (const auto& t : db.transactions()) {
            bool any = false;
            for (auto id : t.items)
                any = any || result.db.dictionary().find(db.dictionary().lookup(id)).has_value();
            empty_dropped += !any;
        }
        for (const auto& t : result.db.transactions())
            if (t.empty())
                o.fail(fmt("round %d: empty transaction survived", round));

        if (rep.items_removed_low + rep.items_removed_high + rep.items_retained != db.item_count() ||
            rep.items_removed_low != below || rep.items_removed_high != above ||
            rep.items_retained != kept || rep.items_retained != result.db.item_count())
            o.fail(fmt("round %d: item accounting does not add up", round));
        if (rep.transactions_removed_empty + rep.transactions_retained != db.size() ||
            rep.transactions_removed_empty != empty_dropped ||
            rep.transactions_retained != result.db.size())
            o.fail(fmt("round %d: transaction accounting does not add up", round));
        removed_total += below + above;
    }
    if (o.pass)
        o.detail = fmt("%d databases, %zu items removed in total", kCleanseDatabases, removed_total);
    return o;
}

// 5. CLOPE correctness: monotone passes, exact summaries, brute-force bound.
Outcome criterion_5() {
    Outcome o;
    const auto start = Clock::now();
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> pick_r(0.6, 3.0);
    std::size_t total_passes = 0;

    for (int round = 0; round < kClopeDatabases && o.pass; ++round) {
        const auto n = 1 + rng() % kClopeMaxTransactions;
        const auto db = txclean::testing::random_db(rng, n, 5 + rng() % 120, 9);
        ClopeOptions opt;
        opt.repulsion = pick_r(rng);
        opt.verify = true; // rebuilds summaries from scratch after every pass
        ClopeResult res;
        try {
            res = clope_cluster(db, opt);
        } catch (const std::exception& e) {
            o.fail(fmt("round %d: %s", round, e.what()));
            break;
        }
        const auto& trace = res.trace.profit_per_pass;
        for (std::size_t p = 1; p < trace.size(); ++p)
            if (trace[p] < trace[p - 1])
                o.fail(fmt("round %d: profit fell from %.17g to %.17g at pass %zu", round, trace[p - 1],
                           trace[p], p));
        if (rebuild_summaries(db, res.clustering.assignment) != res.clustering.clusters)
            o.fail(fmt("round %d: incremental summaries differ from a rebuild", round));
        const double naive = txclean::testing::naive_profit(db, res.clustering.assignment, opt.repulsion);
        if (!rel_close(res.clustering.profit, naive, kProfitRelTol))
            o.fail(fmt("round %d: profit %.17g vs naive %.17g", round, res.clustering.profit, naive));
        total_passes += res.trace.passes;
    }

    double worst_gap = 0.0;
    for (int round = 0; round < kMicroDatabases && o.pass; ++round) {
        const auto n = 1 + rng() % kMicroMaxTransactions;
        const auto db = txclean::testing::random_db(rng, n, 2 + rng() % 10, 5);
        const Repulsion r(pick_r(rng));
        ClopeOptions opt;
        opt.repulsion = r.value();
        const auto res = clope_cluster(db, opt);
        const auto best = brute_force_best(db, r);
        if (res.clustering.profit > best.profit + kProfitRelTol * std::abs(best.profit))
            o.fail(fmt("micro %d: CLOPE %.17g exceeds optimum %.17g", round, res.clustering.profit,
                       best.profit));
        const double naive = txclean::testing::naive_profit(db, res.clustering.assignment, r.value());
        if (!rel_close(res.clustering.profit, naive, kProfitRelTol))
            o.fail(fmt("micro %d: profit %.17g vs naive %.17g", round, res.clustering.profit, naive));
        worst_gap = std::max(worst_gap, (best.profit - res.clustering.profit) / best.profit);
    }

    const double seconds = since(start);
    if (seconds >= kClopeSeconds)
        o.fail(fmt("took %.2f s", seconds));
    if (o.pass)
        o.detail = fmt("%d databases (%zu passes), %d micro databases, largest gap to optimum %.1f%%, %.2f s",
                       kClopeDatabases, total_passes, kMicroDatabases, worst_gap * 100.0, seconds);
    return o;
}

// 6. Synthetic noisy database: cleansing must improve profit, time, and k.
Outcome criterion_6() {
    Outcome o;
    const auto start = Clock::now();
    PipelineConfig config; // lognormal, s = 5, r = 1.5
    int passed = 0;
    std::string seeds;

    for (int seed = 1; seed <= kSyntheticSeeds; ++seed) {
        SynthConfig synth; // 5000 transactions, 50 clusters, 30% noise, 5 ubiquitous items
        synth.seed = static_cast<std::uint64_t>(seed);
        config.seed = synth.seed;
        const auto db = generate_synthetic(synth);
        const auto outcome = run_pipeline(db, config);
        if (!outcome.cleansed.ok || !outcome.raw.ok) {
            o.fail(fmt("seed %d: arm failed: %s%s", seed, outcome.cleansed.error.c_str(),
                       outcome.raw.error.c_str()));
            continue;
        }
        const auto& c = outcome.cleansed.clustering->clustering;
        const auto& r = outcome.raw.clustering->clustering;
        const auto& rep = outcome.cleansed.cleansed->report;
        const double profit_ratio = c.profit / r.profit;
        const double time_ratio = outcome.raw.compared_seconds() / outcome.cleansed.compared_seconds();
        const bool ok = profit_ratio > 1.0 && time_ratio > 1.0 && c.k() < r.k();
        passed += ok;
        const auto line =
            fmt("seed %d: removed %zu/%zu items, profit ratio %.4f, time ratio %.3f, k %zu vs %zu", seed,
                rep.items_removed_low + rep.items_removed_high, db.item_count(), profit_ratio,
                time_ratio, c.k(), r.k());
        if (!ok)
            o.fail(line);
        if (seed == 1)
            seeds = line;
    }
    const double seconds = since(start);
    if (seconds >= kSyntheticSeconds)
        o.fail(fmt("took %.1f s", seconds));
    o.detail = fmt("%d/%d seeds improved; ", passed, kSyntheticSeeds) + (o.pass ? seeds : o.detail) +
               fmt("; %.1f s", seconds);
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// 7. Determinism across two identical runs.
Outcome criterion_7() {
    Outcome o;
    const auto root = fs::temp_directory_path() / ("txclean_acceptance_" + std::to_string(std::random_device{}()));
    fs::create_directories(root);
    std::ostringstream sink;

    SynthConfig synth;
    synth.transactions = 2000;
    synth.clusters = 20;
    synth.seed = 7;
    if (cmd_synth(synth, root, sink, sink) != kExitOk) {
        o.fail("synthetic input could not be written");
        return o;
    }

    auto run_all = [&](const fs::path& out, DistributionKind kind, double s) {
        PipelineConfig config;
        config.input = root / "synth.txt";
        config.out_dir = out;
        config.distribution = kind;
        config.s = s;
        return cmd_stats(config, sink, sink) | cmd_fit(config, sink, sink) |
               cmd_cleanse(config, sink, sink) | cmd_cluster(config, sink, sink) |
               cmd_pipeline(config, sink, sink);
    };

    std::size_t compared = 0;
    for (auto [kind, s] : {std::pair{DistributionKind::lognormal, 5.0},
                           std::pair{DistributionKind::exponential, 0.9}}) {
        const auto tag = std::string(to_string(kind));
        const auto a = root / (tag + "_a");
        const auto b = root / (tag + "_b");
        if (run_all(a, kind, s) != kExitOk || run_all(b, kind, s) != kExitOk) {
            o.fail(tag + ": a command failed");
            continue;
        }
        for (const auto& entry : fs::directory_iterator(a)) {
            const auto name = entry.path().filename();
            const auto other = b / name;
            if (!fs::exists(other)) {
                o.fail(tag + ": " + name.string() + " missing from the second run");
                continue;
            }
            bool same;
            if (name.extension() == ".json")
                same = without_timing(nlohmann::json::parse(slurp(entry.path()))) ==
                       without_timing(nlohmann::json::parse(slurp(other)));
            else
                same = slurp(entry.path()) == slurp(other);
            if (!same)
                o.fail(tag + ": " + name.string() + " differs between runs");
            ++compared;
        }
    }
    std::error_code ec;
    fs::remove_all(root, ec);
    if (o.pass)
        o.detail = fmt("%zu output files identical across reruns", compared);
    return o;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only;
    app.add_option("-c,--criterion", only, "Run only these criteria")->check(CLI::Range(1, 7));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"worked example, low-frequency items", criterion_1},
        {"worked example, high-frequency items", criterion_2},
        {"fit matches the two-pass reference", criterion_3},
        {"cleansing band and accounting", criterion_4},
        {"CLOPE monotonicity, summaries, optimum bound", criterion_5},
        {"synthetic noisy database improves with cleansing", criterion_6},
        {"determinism across reruns", criterion_7},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end())
            continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        std::printf("%s criterion %d: %s (%s)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
