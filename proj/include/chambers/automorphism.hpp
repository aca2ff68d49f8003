#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arrangement.hpp"
#include "error.hpp"
#include "flats.hpp"
#include "permgroup.hpp"

namespace chambers {

enum class ValidationMode : uint8_t { EXHAUSTIVE, SAMPLED };

struct ValidationOptions {
    size_t max_subsets = 200000;  // exhaustive budget before asking for sampling
    size_t samples = 20000;       // subsets per generator in sampled mode
    uint64_t seed = 0;
};

struct ValidationResult {
    bool ok = true;
    Perm witness = Perm::identity(0);
    IndexSet subset;
    std::string reason;
};

namespace detail {

/// One permutation is an automorphism iff it preserves consistency and rank
/// of every subset. Flats intersect like affine subspaces, so inconsistency
/// always has a witness of size at most rank+1 and ranks are determined by
/// subsets that small too; larger subsets never need checking.
inline bool check_automorphism(const Arrangement& A, const Perm& g, const IndexSet& I,
                               std::string* reason) {
    FlatBasis before = flat_basis(A, I);
    FlatBasis after = flat_basis(A, g.apply(I));
    if (before.consistent != after.consistent) {
        if (reason) *reason = "consistency changes under the permutation";
        return false;
    }
    if (before.rank() != after.rank()) {
        if (reason)
            *reason = "rank " + std::to_string(before.rank()) + " becomes " +
                      std::to_string(after.rank());
        return false;
    }
    return true;
}

inline bool next_subset(IndexSet& I, unsigned n) {
    const size_t k = I.size();
    size_t i = k;
    while (i-- > 0) {
        if (I[i] + (k - i) < n) {
            ++I[i];
            for (size_t j = i + 1; j < k; ++j) I[j] = static_cast<uint16_t>(I[j - 1] + 1);
            return true;
        }
    }
    return false;
}

} // namespace detail

/// Checks that every generator of G preserves the combinatorics of A, which
/// makes all of G a subgroup of the automorphism group. EXHAUSTIVE walks all
/// subsets up to size rank+1 and is a proof; SAMPLED draws random subsets of
/// those sizes and can only ever find counterexamples.
inline ValidationResult validate_subgroup_of_aut(const PermGroup& G, const Arrangement& A,
                                                 ValidationMode mode = ValidationMode::EXHAUSTIVE,
                                                 const ValidationOptions& opts = {}) {
    const unsigned n = static_cast<unsigned>(A.size());
    if (G.degree() != n)
        throw error("group degree " + std::to_string(G.degree()) + " does not match " +
                    std::to_string(n) + " hyperplanes");

    IndexSet all(n);
    for (unsigned i = 0; i < n; ++i) all[i] = static_cast<uint16_t>(i);
    const unsigned ksup = std::min(n, flat_basis(A, all).rank() + 1);
    if (ksup == 0) return ValidationResult{};

    if (mode == ValidationMode::EXHAUSTIVE) {
        size_t budget = opts.max_subsets;
        double total = 0;
        {
            double c = 1;
            for (unsigned k = 0; k <= ksup; ++k) {
                total += c;
                c = c * (n - k) / (k + 1);
            }
        }
        if (total > static_cast<double>(budget))
            throw error("exhaustive validation needs " + std::to_string(static_cast<size_t>(total)) +
                        " subsets, over the budget of " + std::to_string(budget) +
                        "; use sampled validation");

        for (const Perm& g : G.generators()) {
            for (unsigned k = 1; k <= ksup; ++k) {
                IndexSet I(k);
                for (unsigned i = 0; i < k; ++i) I[i] = static_cast<uint16_t>(i);
                do {
                    std::string reason;
                    if (!detail::check_automorphism(A, g, I, &reason))
                        return ValidationResult{false, g, I, reason};
                } while (detail::next_subset(I, n));
            }
        }
        return ValidationResult{};
    }

    uint64_t state = opts.seed + 0x6B79A9F3D1C2E4B5ull;
    for (const Perm& g : G.generators()) {
        for (size_t s = 0; s < opts.samples; ++s) {
            const unsigned k = 1 + static_cast<unsigned>(detail::bounded_random(state, ksup));
            IndexSet I;
            while (I.size() < k) {
                const uint16_t x = static_cast<uint16_t>(detail::bounded_random(state, n));
                bool fresh = true;
                for (uint16_t y : I) fresh = fresh && y != x;
                if (fresh) I.push_back(x);
            }
            I = sorted(std::move(I));
            std::string reason;
            if (!detail::check_automorphism(A, g, I, &reason))
                return ValidationResult{false, g, I, reason};
        }
    }
    return ValidationResult{};
}

} // namespace chambers
