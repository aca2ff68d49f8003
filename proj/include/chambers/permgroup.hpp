#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "count.hpp"
#include "error.hpp"
#include "perm.hpp"

namespace chambers {

namespace detail {

inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline size_t bounded_random(uint64_t& state, size_t n) {
    if (n <= 1) return 0;
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t r;
    do {
        r = splitmix64(state);
    } while (r >= limit);
    return static_cast<size_t>(r % n);
}

struct IndexSetHash {
    size_t operator()(const IndexSet& s) const {
        uint64_t h = 1469598103934665603ull;
        for (uint16_t v : s) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

} // namespace detail

/// Permutation group with a stabilizer chain (deterministic Schreier-Sims).
/// Base points are chosen largest-first, so the chain prefix tends to line up
/// with the suffix sets {k..n-1} whose setwise stabilizers the counting
/// engine needs. The chain provides order, membership and uniform random
/// elements; it is rebuilt incrementally when extend() adds a generator.
class PermGroup {
public:
    explicit PermGroup(unsigned degree) : degree_(degree) {}

    PermGroup(unsigned degree, const std::vector<Perm>& gens) : degree_(degree) {
        for (const Perm& g : gens) {
            if (g.degree() != degree_) throw error("generator degree mismatch");
            if (g.is_identity()) continue;
            bool dup = false;
            for (const Perm& h : gens_) dup = dup || h == g;
            if (!dup) gens_.push_back(g);
        }
        for (const Perm& g : gens_) place_generator(g);
        close_chain(static_cast<long>(levels_.size()) - 1);
    }

    unsigned degree() const { return degree_; }
    const std::vector<Perm>& generators() const { return gens_; }
    bool is_trivial() const { return levels_.empty(); }

    Count order() const {
        mpz_class o = 1;
        for (const Level& l : levels_) o *= static_cast<unsigned long>(l.orbit.size());
        return Count(o);
    }

    bool contains(const Perm& g) const {
        if (g.degree() != degree_) return false;
        return strip(g, 0).first.is_identity();
    }

    /// Adds a generator and repairs the chain. No-op if already a member.
    void extend(const Perm& g) {
        if (g.degree() != degree_) throw error("generator degree mismatch");
        if (g.is_identity() || contains(g)) return;
        gens_.push_back(g);
        long from = place_generator(g);
        close_chain(from);
    }

    /// m independent uniform samples, deterministic in the seed. Each sample
    /// composes one uniformly chosen transversal representative per chain
    /// level, which hits every group element with equal probability.
    std::vector<Perm> random_elements(size_t m, uint64_t seed) const {
        std::vector<Perm> out;
        out.reserve(m);
        uint64_t state = seed;
        for (size_t i = 0; i < m; ++i) {
            Perm g = Perm::identity(degree_);
            for (const Level& l : levels_) {
                size_t pick = detail::bounded_random(state, l.orbit.size());
                if (pick != 0) g = g * l.transversal[pick];
            }
            out.push_back(std::move(g));
        }
        return out;
    }

    std::vector<unsigned> base() const {
        std::vector<unsigned> b;
        for (const Level& l : levels_) b.push_back(l.beta);
        return b;
    }

private:
    struct Level {
        unsigned beta = 0;
        std::vector<Perm> gens;
        std::vector<int> where;           // point -> orbit position, -1 outside
        std::vector<unsigned> orbit;      // BFS order, orbit[0] == beta
        std::vector<Perm> transversal;    // transversal[i] maps beta to orbit[i]
    };

    unsigned degree_;
    std::vector<Perm> gens_;
    std::vector<Level> levels_;

    bool in_base(unsigned p) const {
        for (const Level& l : levels_)
            if (l.beta == p) return true;
        return false;
    }

    unsigned pick_base_point(const Perm& g) const {
        for (unsigned p = degree_; p-- > 0;)
            if (g(static_cast<uint16_t>(p)) != p && !in_base(p)) return p;
        throw error("internal: no base point available");
    }

    void add_level(unsigned beta) {
        Level l;
        l.beta = beta;
        levels_.push_back(std::move(l));
    }

    /// Inserts g into every level whose base prefix it fixes; returns the
    /// deepest such level. Appends a base point first if g fixes them all.
    long place_generator(const Perm& g) {
        size_t lmax = 0;
        while (lmax < levels_.size() && g(static_cast<uint16_t>(levels_[lmax].beta)) == levels_[lmax].beta)
            ++lmax;
        if (lmax == levels_.size()) add_level(pick_base_point(g));
        for (size_t l = 0; l <= lmax; ++l) levels_[l].gens.push_back(g);
        return static_cast<long>(lmax);
    }

    void recompute_orbit(size_t i) {
        Level& l = levels_[i];
        l.where.assign(degree_, -1);
        l.orbit.clear();
        l.transversal.clear();
        l.orbit.push_back(l.beta);
        l.transversal.push_back(Perm::identity(degree_));
        l.where[l.beta] = 0;
        for (size_t pos = 0; pos < l.orbit.size(); ++pos) {
            for (const Perm& a : l.gens) {
                unsigned img = a(static_cast<uint16_t>(l.orbit[pos]));
                if (l.where[img] < 0) {
                    l.where[img] = static_cast<int>(l.orbit.size());
                    l.orbit.push_back(img);
                    l.transversal.push_back(a * l.transversal[pos]);
                }
            }
        }
    }

    /// Sifts g through levels from..end. Returns the residue and the level
    /// where sifting stopped (levels_.size() when fully sifted).
    std::pair<Perm, size_t> strip(Perm g, size_t from) const {
        for (size_t i = from; i < levels_.size(); ++i) {
            const Level& l = levels_[i];
            unsigned p = g(static_cast<uint16_t>(l.beta));
            if (p == l.beta) continue;
            if (l.where.empty() || l.where[p] < 0) return {std::move(g), i};
            g = l.transversal[l.where[p]].inverse() * g;
        }
        return {std::move(g), levels_.size()};
    }

    /// Verifies the Schreier condition at level i, assuming deeper levels are
    /// complete. On failure adds the offending residue to levels i+1..j and
    /// returns j; returns -1 when the level is clean.
    long verify_level(size_t i) {
        recompute_orbit(i);
        for (size_t pos = 0; pos < levels_[i].orbit.size(); ++pos) {
            for (size_t gi = 0; gi < levels_[i].gens.size(); ++gi) {
                Perm moved = levels_[i].gens[gi] * levels_[i].transversal[pos];
                unsigned img = moved(static_cast<uint16_t>(levels_[i].beta));
                Perm sg = levels_[i].transversal[levels_[i].where[img]].inverse() * moved;
                if (sg.is_identity()) continue;
                auto [h, j] = strip(std::move(sg), i + 1);
                if (h.is_identity()) continue;
                if (j == levels_.size()) add_level(pick_base_point(h));
                for (size_t l = i + 1; l <= j; ++l) levels_[l].gens.push_back(h);
                return static_cast<long>(j);
            }
        }
        return -1;
    }

    /// Worklist over levels, deepest-first. Invariant: all levels below the
    /// cursor satisfy the Schreier condition. Each generator addition grows a
    /// subgroup order, so the loop terminates.
    void close_chain(long from) {
        long i = from;
        while (i >= 0) {
            long j = verify_level(static_cast<size_t>(i));
            i = (j < 0) ? i - 1 : j;
        }
    }
};

/// Orbit of a sorted index set under the group, in BFS order. budget > 0
/// throws once the orbit grows past it.
inline std::vector<IndexSet> orbit_of_set(const PermGroup& G, const IndexSet& I, size_t budget = 0) {
    for (uint16_t v : I)
        if (v >= G.degree()) throw error("set entry out of range");
    IndexSet start = sorted(I);
    std::vector<IndexSet> orbit{start};
    std::unordered_set<IndexSet, detail::IndexSetHash> seen{start};
    for (size_t pos = 0; pos < orbit.size(); ++pos) {
        for (const Perm& g : G.generators()) {
            IndexSet img = g.apply(orbit[pos]);
            if (seen.insert(img).second) {
                if (budget && orbit.size() >= budget)
                    throw error("set orbit exceeds budget of " + std::to_string(budget));
                orbit.push_back(std::move(img));
            }
        }
    }
    return orbit;
}

/// Lexicographically smallest set in the orbit of I. Enumerates the orbit, so
/// the budget guards against blowup; exceeding it is an explicit error and
/// the caller should fall back to pseudo_minimal_image.
inline IndexSet minimal_image_exact(const PermGroup& G, const IndexSet& I, size_t budget = 1000000) {
    std::vector<IndexSet> orbit;
    try {
        orbit = orbit_of_set(G, I, budget);
    } catch (const error&) {
        throw error("minimal_image_exact: orbit budget " + std::to_string(budget) +
                    " exceeded; fall back to pseudo_minimal_image");
    }
    const IndexSet* best = &orbit[0];
    for (const IndexSet& s : orbit)
        if (s < *best) best = &s;
    return *best;
}

/// Greedy lexicographic descent through a fixed element pool, restarting
/// after every improvement. Sound: the result stays inside the orbit of I.
/// Postcondition: no pool element maps the result strictly lower.
inline IndexSet pseudo_minimal_image(const IndexSet& I, const std::vector<Perm>& pool) {
    IndexSet cur = sorted(I);
    bool improved = true;
    while (improved) {
        improved = false;
        for (const Perm& g : pool) {
            IndexSet img = g.apply(cur);
            if (img < cur) {
                cur = std::move(img);
                improved = true;
            }
        }
    }
    return cur;
}

/// Every group element, by BFS closure over the generators. Oracle-grade;
/// throws when the group is larger than the budget.
inline std::vector<Perm> enumerate_elements(const PermGroup& G, size_t budget = 100000) {
    std::vector<Perm> elems{Perm::identity(G.degree())};
    std::unordered_set<std::string> seen;
    auto key = [](const Perm& p) {
        return std::string(reinterpret_cast<const char*>(p.images().data()),
                           p.images().size() * sizeof(uint16_t));
    };
    seen.insert(key(elems[0]));
    for (size_t pos = 0; pos < elems.size(); ++pos) {
        for (const Perm& g : G.generators()) {
            Perm h = g * elems[pos];
            if (seen.insert(key(h)).second) {
                if (elems.size() >= budget) throw error("group enumeration exceeds budget");
                elems.push_back(std::move(h));
            }
        }
    }
    return elems;
}

/// Setwise stabilizer of S in G. Runs a BFS over the set-orbit of S carrying
/// a transversal, then sifts Schreier generators into an incrementally built
/// chain, stopping as soon as the orbit-stabilizer identity
/// |G| = |orbit| * |stab| is met. Complete by Schreier's lemma even when the
/// early stop never fires.
inline PermGroup setwise_stabilizer(const PermGroup& G, const IndexSet& S, size_t orbit_budget = 2000000) {
    const unsigned n = G.degree();
    for (uint16_t v : S)
        if (v >= n) throw error("set entry out of range");
    IndexSet start = sorted(S);
    if (start.empty() || start.size() == n || G.is_trivial()) return G;

    const std::vector<Perm>& gens = G.generators();

    // BFS over the set-orbit. elements[i] is the i-th set; trans holds one
    // permutation per element (flat, degree entries each) mapping S onto it.
    std::vector<IndexSet> elements{start};
    std::unordered_map<IndexSet, uint32_t, detail::IndexSetHash> index;
    index.emplace(start, 0);
    std::vector<uint16_t> trans;
    trans.reserve((n == 0 ? 0 : 64) * n);
    for (unsigned i = 0; i < n; ++i) trans.push_back(static_cast<uint16_t>(i));

    for (size_t pos = 0; pos < elements.size(); ++pos) {
        for (const Perm& g : gens) {
            IndexSet img = g.apply(elements[pos]);
            if (index.find(img) == index.end()) {
                if (elements.size() >= orbit_budget)
                    throw error("setwise_stabilizer: set orbit exceeds budget of " +
                                std::to_string(orbit_budget));
                index.emplace(img, static_cast<uint32_t>(elements.size()));
                elements.push_back(std::move(img));
                // indexed access: push_back may reallocate trans
                const size_t parent = pos * n;
                for (unsigned x = 0; x < n; ++x)
                    trans.push_back(g(trans[parent + x]));
            }
        }
    }

    mpz_class target_z = G.order().value() / static_cast<unsigned long>(elements.size());
    Count target(target_z);

    PermGroup K(n);
    if (K.order() == target) return K;

    std::vector<uint16_t> inv(n), comp(n);
    for (size_t pos = 0; pos < elements.size(); ++pos) {
        const uint16_t* u = trans.data() + pos * n;
        for (const Perm& g : gens) {
            // Schreier generator u_{g(e)}^{-1} * g * u_e, built on raw arrays.
            for (unsigned x = 0; x < n; ++x) comp[x] = g(u[x]);
            IndexSet img(start.size());
            for (size_t t = 0; t < start.size(); ++t) img[t] = comp[start[t]];
            std::sort(img.begin(), img.end());
            const uint16_t* v = trans.data() + static_cast<size_t>(index.at(img)) * n;
            for (unsigned x = 0; x < n; ++x) inv[v[x]] = static_cast<uint16_t>(x);
            std::vector<uint16_t> sg(n);
            for (unsigned x = 0; x < n; ++x) sg[x] = inv[comp[x]];
            Perm s(std::move(sg));
            if (s.is_identity() || K.contains(s)) continue;
            K.extend(s);
            if (K.order() == target) return K;
        }
    }
    if (K.order() != target) throw error("internal: setwise stabilizer order mismatch");
    return K;
}

} // namespace chambers
