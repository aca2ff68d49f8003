#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <thread>
#include <utility>
#include <vector>

#include "arrangement.hpp"
#include "count.hpp"
#include "error.hpp"
#include "flats.hpp"
#include "permgroup.hpp"
#include "whitney.hpp"

namespace chambers {

/// Reference algorithm: pick the first hyperplane, recurse on deletion and
/// on the explicitly constructed restriction, add the restriction's Whitney
/// vector shifted by one. Exponential but independent of all the subset
/// machinery, so it doubles as an oracle for the other engines.
inline WhitneyVector whitney_simple(const Arrangement& A) {
    // recursion works on duplicate-free arrangements; merge copies up front
    std::vector<Hyperplane> distinct;
    {
        std::map<Row, bool> seen;
        for (size_t i = 0; i < A.size(); ++i)
            if (seen.emplace(A.canonical_row(i), true).second) distinct.push_back(A[i]);
    }
    Arrangement B(A.dim(), A.field(), std::move(distinct));

    if (B.size() == 0) {
        WhitneyVector w(B.dim());
        w.b[0] = Count(1ul);
        return w;
    }
    WhitneyVector del = whitney_simple(delete_hyperplane(B, 0));
    WhitneyVector res = whitney_simple(restrict_to_hyperplane(B, 0));
    WhitneyVector w(B.dim());
    for (size_t i = 0; i <= B.dim(); ++i) {
        w.b[i] += del.b[i];
        if (i > 0) w.b[i] += res.b[i - 1];
    }
    return w;
}

/// Same recursion over subset representations instead of explicit restricted
/// arrangements: a node (I, t) stands for the restriction to the flat of I
/// with rows t..n-1 undecided. Row t branches only when it qualifies, i.e.
/// it cuts a proper trace no later row repeats; otherwise it is skipped.
inline WhitneyVector whitney_extended(const Arrangement& A) {
    const unsigned n = static_cast<unsigned>(A.size());
    WhitneyVector w(A.dim());

    std::vector<RestrictionRep> stack;
    stack.push_back(RestrictionRep{});
    while (!stack.empty()) {
        RestrictionRep rep = std::move(stack.back());
        stack.pop_back();
        if (rep.level == n) {
            w.b[rep.I.size()] += rep.mult;
            continue;
        }
        Classification cl = classify(A, rep.I, rep.level);
        if (cl.qualifies(rep.level)) stack.push_back(restrict_step(rep, rep.level));
        stack.push_back(delete_step(rep));
    }
    return w;
}

enum class OrbitId : uint8_t { PSEUDO, EXACT, NONE };

struct EngineOptions {
    OrbitId orbit_id = OrbitId::PSEUDO;
    unsigned threads = 1;
    uint64_t seed = 0;
    bool central_shortcut = true;
    bool level_skipping = true;
    bool early_accumulation = true;
    unsigned pool_size = 0;            // random elements per level; 0 means the degree
    unsigned long exact_budget = 1000000;
};

struct LevelReport {
    unsigned level = 0;
    size_t entered = 0;          // nodes in the level dictionary when processed
    size_t identifications = 0;  // inserts into this dictionary that merged
    size_t restrictions = 0;     // restriction children created at this level
    size_t parked = 0;           // children parked into later dictionaries
    size_t terminal = 0;         // contributions folded while processing this level
    double wall_ms = 0.0;
};

struct RunReport {
    std::vector<LevelReport> levels;
    size_t peak_level_size = 0;
    size_t total_nodes = 0;
    Count terminal_total;        // equals the number of chambers
    double total_wall_ms = 0.0;
};

struct SymmetryResult {
    WhitneyVector whitney;
    RunReport report;
};

namespace detail {

inline uint64_t level_seed(uint64_t seed, unsigned level) {
    uint64_t s = seed + 0x9E3779B97F4A7C15ull * (level + 1);
    return splitmix64(s);
}

/// Everything one node emits: terminal fold indices (each worth the node's
/// multiplicity) and children with their target level and identified key.
struct NodeOutcome {
    std::vector<unsigned> folds;
    std::vector<std::pair<unsigned, IndexSet>> children;
    size_t restrictions = 0;
};

} // namespace detail

/// Breadth-first deletion-restriction over one dictionary of nodes per
/// level. Nodes in dictionary t are subsets of {0..t-1} keyed by an orbit
/// representative under the setwise stabilizer of the undecided suffix
/// {t..n-1}, so G-equivalent branches merge and carry multiplicities.
/// Results are identical for any thread count: levels are processed as a
/// pure map over a snapshot in key order followed by a sequential merge.
inline SymmetryResult whitney_symmetry(const Arrangement& A, const PermGroup& G,
                                       const EngineOptions& opts = {}) {
    using clock = std::chrono::steady_clock;
    const auto run_start = clock::now();
    const unsigned n = static_cast<unsigned>(A.size());
    if (G.degree() != n)
        throw error("group degree " + std::to_string(G.degree()) + " does not match " +
                    std::to_string(n) + " hyperplanes");

    const bool skipping = opts.level_skipping;
    const bool early = skipping && opts.early_accumulation;
    const bool shortcut = early && opts.central_shortcut && is_central(A);
    const unsigned pool_size = opts.pool_size ? opts.pool_size : std::max(n, 1u);

    // Setwise stabilizers of the undecided suffixes and, for pseudo
    // identification, a fixed pool of random elements per level. Both are
    // precomputed so results cannot depend on processing order.
    std::vector<PermGroup> stabs;
    std::vector<std::vector<Perm>> pools;
    if (opts.orbit_id != OrbitId::NONE) {
        stabs.reserve(n + 1);
        for (unsigned k = 0; k <= n; ++k) {
            IndexSet suffix;
            for (unsigned j = k; j < n; ++j) suffix.push_back(static_cast<uint16_t>(j));
            stabs.push_back(k == n ? G : setwise_stabilizer(G, suffix));
        }
        if (opts.orbit_id == OrbitId::PSEUDO) {
            pools.reserve(n + 1);
            for (unsigned k = 0; k <= n; ++k)
                pools.push_back(stabs[k].random_elements(pool_size, detail::level_seed(opts.seed, k)));
        }
    }

    const auto identify = [&](const IndexSet& I, unsigned k) -> IndexSet {
        switch (opts.orbit_id) {
            case OrbitId::NONE: return I;
            case OrbitId::PSEUDO: return pseudo_minimal_image(I, pools[k]);
            case OrbitId::EXACT: return minimal_image_exact(stabs[k], I, opts.exact_budget);
        }
        throw error("internal: unknown orbit identification mode");
    };

    using LevelMap = std::map<IndexSet, Count>;
    std::vector<LevelMap> T(n + 1);
    T[0][IndexSet{}] = Count(1ul);

    WhitneyVector w(A.dim());
    RunReport report;
    report.levels.resize(n + 1);
    for (unsigned t = 0; t <= n; ++t) report.levels[t].level = t;

    const auto process = [&](unsigned t, const IndexSet& I) -> detail::NodeOutcome {
        detail::NodeOutcome out;
        FlatBasis basis = flat_basis(A, I);
        Classification cl = classify(A, basis, t);
        const unsigned size = static_cast<unsigned>(I.size());

        if (!skipping) {
            if (cl.qualifies(t)) {
                IndexSet R = I;
                R.push_back(static_cast<uint16_t>(t));
                out.children.emplace_back(t + 1, identify(R, t + 1));
                out.restrictions = 1;
            }
            out.children.emplace_back(t + 1, identify(I, t + 1));
            return out;
        }

        const long jstar = cl.j_min;
        if (jstar < 0) {
            if (early)
                out.folds.push_back(size);
            else
                out.children.emplace_back(n, identify(I, n));
            return out;
        }

        IndexSet R = I;
        R.push_back(static_cast<uint16_t>(jstar));
        out.restrictions = 1;
        if (early && jstar + 1 == static_cast<long>(n))
            out.folds.push_back(size + 1);
        else
            out.children.emplace_back(static_cast<unsigned>(jstar) + 1,
                                      identify(R, static_cast<unsigned>(jstar) + 1));

        const long jnext = cl.next_qualifying_after(static_cast<unsigned>(jstar));
        if (jnext < 0) {
            if (early)
                out.folds.push_back(size);
            else
                out.children.emplace_back(n, identify(I, n));
        } else if (early && jnext == static_cast<long>(n) - 1) {
            out.folds.push_back(size);
            out.folds.push_back(size + 1);
        } else if (shortcut && jnext == static_cast<long>(n) - 2 &&
                   cl.status_of(n - 1) != RowStatus::PROPER) {
            out.folds.push_back(size);
            out.folds.push_back(size + 1);
        } else {
            out.children.emplace_back(static_cast<unsigned>(jnext), identify(I, static_cast<unsigned>(jnext)));
        }
        return out;
    };

    for (unsigned t = 0; t < n; ++t) {
        const auto level_start = clock::now();
        LevelReport& row = report.levels[t];
        row.entered = T[t].size();

        std::vector<std::pair<IndexSet, Count>> nodes(T[t].begin(), T[t].end());
        T[t].clear();
        std::vector<detail::NodeOutcome> outcomes(nodes.size());

        const unsigned workers =
            std::min<size_t>(std::max(1u, opts.threads), nodes.size() ? nodes.size() : 1);
        if (workers <= 1) {
            for (size_t i = 0; i < nodes.size(); ++i) outcomes[i] = process(t, nodes[i].first);
        } else {
            std::vector<std::thread> threads;
            threads.reserve(workers);
            for (unsigned wk = 0; wk < workers; ++wk)
                threads.emplace_back([&, wk] {
                    for (size_t i = wk; i < nodes.size(); i += workers)
                        outcomes[i] = process(t, nodes[i].first);
                });
            for (std::thread& th : threads) th.join();
        }

        // merge in snapshot order; this is the only mutation of shared state
        for (size_t i = 0; i < nodes.size(); ++i) {
            const Count& mult = nodes[i].second;
            for (unsigned idx : outcomes[i].folds) {
                w.b[idx] += mult;
                ++row.terminal;
            }
            row.restrictions += outcomes[i].restrictions;
            for (auto& [target, key] : outcomes[i].children) {
                auto [it, fresh] = T[target].try_emplace(std::move(key), Count());
                it->second += mult;
                if (!fresh) ++report.levels[target].identifications;
                ++row.parked;
            }
        }
        row.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - level_start).count();
    }

    {
        const auto level_start = clock::now();
        LevelReport& row = report.levels[n];
        row.entered = T[n].size();
        for (const auto& [I, mult] : T[n]) {
            w.b[I.size()] += mult;
            ++row.terminal;
        }
        row.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - level_start).count();
    }

    for (const LevelReport& row : report.levels) {
        report.peak_level_size = std::max(report.peak_level_size, row.entered);
        report.total_nodes += row.entered;
    }
    report.terminal_total = number_of_chambers(w);
    report.total_wall_ms =
        std::chrono::duration<double, std::milli>(clock::now() - run_start).count();
    return SymmetryResult{std::move(w), std::move(report)};
}

} // namespace chambers
