#include "txclean/clope.hpp"

#include "txclean/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace txclean {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// A candidate must beat the incumbent by more than rounding noise.
bool strictly_better(double candidate, double incumbent) {
    return candidate > incumbent + 1e-12 * std::max(1.0, std::abs(incumbent));
}

constexpr std::uint32_t kFresh = std::numeric_limits<std::uint32_t>::max();

class ClopeState {
public:
    ClopeState(const TransactionDatabase& db, double r, Execution exec)
        : m_db(db), m_r(r), m_powers(r, db.item_count()), m_exec(exec), m_assign(db.size(), kFresh) {}

    void add_phase() {
        for (const auto& t : m_db.transactions()) {
            const auto target = best_target(t, kFresh);
            place(t, target.slot);
        }
    }

    /// One refinement pass; returns the number of moves.
    std::size_t refine_pass() {
        std::size_t moves = 0;
        for (const auto& t : m_db.transactions()) {
            const auto home = m_assign[t.tid];
            m_slots[home].remove(t);
            const double stay = delta_add(m_slots[home], t, m_powers);
            const auto target = best_target(t, home);
            if (target.slot != home && strictly_better(target.delta, stay)) {
                place(t, target.slot);
                if (m_slots[home].empty())
                    m_live.erase(std::find(m_live.begin(), m_live.end(), home));
                ++moves;
            } else {
                m_slots[home].add(t);
            }
        }
        return moves;
    }

    double current_profit() const {
        double numerator = 0.0;
        std::uint64_t members = 0;
        for (auto slot : m_live) {
            numerator += cluster_gain(m_slots[slot], m_r);
            members += m_slots[slot].members;
        }
        return numerator / static_cast<double>(members);
    }

    void verify() const {
        const auto rebuilt = rebuild_summaries(m_db, m_assign);
        for (auto slot : m_live) {
            if (!(rebuilt[slot] == m_slots[slot]))
                throw std::logic_error("incremental summary of cluster " + std::to_string(slot) +
                                       " differs from rebuild");
        }
        std::size_t live_members = 0;
        for (auto slot : m_live)
            live_members += m_slots[slot].members;
        if (live_members != m_db.size())
            throw std::logic_error("live clusters do not cover every transaction");
    }

    Clustering finish() && {
        // canonical ids: order clusters by their smallest member tid
        std::vector<ClusterId> canon(m_slots.size(), kFresh);
        ClusterId next = 0;
        for (auto slot : m_assign)
            if (canon[slot] == kFresh)
                canon[slot] = next++;
        Clustering out;
        out.clusters.resize(next);
        for (auto slot : m_live)
            out.clusters[canon[slot]] = std::move(m_slots[slot]);
        out.assignment.reserve(m_assign.size());
        for (auto slot : m_assign)
            out.assignment.push_back(canon[slot]);
        return out;
    }

private:
    struct Target {
        std::uint32_t slot;
        double delta;
    };

    /// Best live cluster (lowest id on ties), or a fresh one if strictly better.
    /// `home` is evaluated like any other live cluster.
    Target best_target(const Transaction& t, std::uint32_t home) {
        m_deltas.resize(m_live.size());
        add_deltas(m_slots, m_live, t, m_powers, m_deltas, m_exec);
        Target best{kFresh, -std::numeric_limits<double>::infinity()};
        for (std::size_t j = 0; j < m_live.size(); ++j) {
            if (best.slot == kFresh || strictly_better(m_deltas[j], best.delta))
                best = {m_live[j], m_deltas[j]};
        }
        // an emptied home cluster already plays the role of a fresh cluster
        if (home != kFresh && m_slots[home].empty())
            return best;
        const double fresh = m_powers.gain(t.size(), t.size(), 1);
        if (best.slot == kFresh || strictly_better(fresh, best.delta))
            best = {kFresh, fresh};
        return best;
    }

    void place(const Transaction& t, std::uint32_t slot) {
        if (slot == kFresh) {
            slot = static_cast<std::uint32_t>(m_slots.size());
            m_slots.emplace_back();
            m_live.push_back(slot);
        }
        m_slots[slot].add(t);
        m_assign[t.tid] = slot;
    }

    const TransactionDatabase& m_db;
    double m_r;
    WidthPowers m_powers;
    Execution m_exec;
    std::vector<ClusterSummary> m_slots;
    std::vector<std::uint32_t> m_live; // ascending slot ids
    std::vector<std::uint32_t> m_assign;
    std::vector<double> m_deltas;
};

} // namespace

Repulsion::Repulsion(double r) : m_r(r) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw ParameterError("repulsion must be a positive finite number");
}

double profit(std::span<const ClusterSummary> clusters, Repulsion r) {
    double numerator = 0.0;
    std::uint64_t members = 0;
    for (const auto& c : clusters) {
        numerator += cluster_gain(c, r.value());
        members += c.members;
    }
    if (members == 0)
        throw EmptyInputError("profit undefined for an empty clustering");
    return numerator / static_cast<double>(members);
}

std::vector<ClusterSummary> rebuild_summaries(const TransactionDatabase& db,
                                              std::span<const ClusterId> assignment) {
    if (assignment.size() != db.size())
        throw std::invalid_argument("assignment size does not match database");
    std::vector<ClusterSummary> out;
    for (const auto& t : db.transactions()) {
        const auto c = assignment[t.tid];
        if (c >= out.size())
            out.resize(static_cast<std::size_t>(c) + 1);
        out[c].add(t);
    }
    return out;
}

Clustering make_clustering(const TransactionDatabase& db, std::span<const ClusterId> assignment,
                           Repulsion r) {
    if (assignment.size() != db.size())
        throw std::invalid_argument("assignment size does not match database");
    std::vector<ClusterId> canon;
    Clustering out;
    out.assignment.reserve(assignment.size());
    for (auto c : assignment) {
        if (c >= canon.size())
            canon.resize(static_cast<std::size_t>(c) + 1, kFresh);
        if (canon[c] == kFresh) {
            canon[c] = static_cast<ClusterId>(out.clusters.size());
            out.clusters.emplace_back();
        }
        out.assignment.push_back(canon[c]);
    }
    for (const auto& t : db.transactions())
        out.clusters[out.assignment[t.tid]].add(t);
    out.profit = profit(out, r);
    return out;
}

ClopeResult clope_cluster(const TransactionDatabase& db, const ClopeOptions& options) {
    const Repulsion r(options.repulsion);
    if (options.max_passes == 0)
        throw ParameterError("max_passes must be at least 1");
    if (db.empty())
        throw EmptyInputError("cannot cluster an empty database");

    ClopeResult result;
    auto& trace = result.trace;
    ClopeState state(db, r.value(), options.exec);

    auto start = Clock::now();
    state.add_phase();
    trace.add_seconds = seconds_since(start);
    trace.profit_per_pass.push_back(state.current_profit());
    if (options.verify)
        state.verify();

    start = Clock::now();
    while (trace.passes < options.max_passes) {
        const auto moves = state.refine_pass();
        ++trace.passes;
        trace.moves_per_pass.push_back(moves);
        trace.profit_per_pass.push_back(state.current_profit());
        if (options.verify) {
            state.verify();
            const auto n = trace.profit_per_pass.size();
            if (trace.profit_per_pass[n - 1] < trace.profit_per_pass[n - 2])
                throw std::logic_error("profit decreased during refinement");
        }
        if (moves == 0)
            break;
    }
    trace.hit_max_passes = trace.passes == options.max_passes && trace.moves_per_pass.back() > 0;
    trace.refine_seconds = seconds_since(start);

    result.clustering = std::move(state).finish();
    result.clustering.profit = trace.profit_per_pass.back();
    return result;
}

BruteForceResult brute_force_best(const TransactionDatabase& db, Repulsion r) {
    const auto n = db.size();
    if (n == 0)
        throw EmptyInputError("no transactions to partition");
    if (n > kBruteForceMaxTransactions)
        throw ParameterError("brute force limited to " +
                             std::to_string(kBruteForceMaxTransactions) + " transactions");

    BruteForceResult best;
    best.profit = -std::numeric_limits<double>::infinity();

    // restricted growth strings in lexicographic order
    std::vector<ClusterId> rgs(n, 0);
    std::vector<ClusterId> prefix_max(n, 0);
    std::vector<ClusterSummary> clusters;
    while (true) {
        ++best.partitions;
        clusters.assign(static_cast<std::size_t>(prefix_max[n - 1]) + 1, ClusterSummary{});
        for (const auto& t : db.transactions())
            clusters[rgs[t.tid]].add(t);
        const double p = profit(clusters, r);
        if (best.assignment.empty() || strictly_better(p, best.profit)) {
            best.profit = p;
            best.assignment = rgs;
        }

        // advance: rightmost position that can still grow
        std::size_t i = n - 1;
        while (i > 0 && rgs[i] > prefix_max[i - 1])
            --i;
        if (i == 0)
            break;
        ++rgs[i];
        prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            rgs[j] = 0;
            prefix_max[j] = prefix_max[i];
        }
    }
    return best;
}

void write_assignment_csv(std::ostream& out, const Clustering& clustering) {
    out << "tid,cluster_id\n";
    for (std::size_t tid = 0; tid < clustering.assignment.size(); ++tid)
        out << tid << ',' << clustering.assignment[tid] << '\n';
}

} // namespace txclean
