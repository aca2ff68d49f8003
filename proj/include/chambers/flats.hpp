#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "arrangement.hpp"
#include "count.hpp"
#include "error.hpp"
#include "perm.hpp"
#include "scalar.hpp"

namespace chambers {

/// Canonical reduced echelon basis of the augmented linear system of a
/// subset of hyperplanes. Pivots are 1 with zeros above and below and rows
/// are ordered by pivot column, so two consistent subsets span the same flat
/// iff their bases compare equal. An inconsistent system gets the marker row
/// (0 ... 0 | 1) with its pivot in the constant column.
struct FlatBasis {
    unsigned dim = 0;
    bool consistent = true;
    std::vector<Row> rows;
    std::vector<unsigned> pivots;  // pivot column of each row, ascending

    /// Number of pivots in coefficient columns, i.e. the codimension of the
    /// flat when the system is consistent.
    unsigned rank() const {
        unsigned r = 0;
        for (unsigned p : pivots)
            if (p < dim) ++r;
        return r;
    }

    bool operator==(const FlatBasis&) const = default;

    /// Reduces r in place against the basis rows. Afterwards r has zeros in
    /// every pivot column.
    void reduce(Row& r) const {
        for (size_t k = 0; k < rows.size(); ++k) {
            FieldScalar f = r[pivots[k]];
            if (f.is_zero()) continue;
            for (size_t j = pivots[k]; j <= dim; ++j) r[j] -= f * rows[k][j];
        }
    }

    /// Reduces r and inserts it unless it is dependent. Keeps the reduced
    /// echelon invariants.
    void insert(Row r) {
        reduce(r);
        unsigned c = 0;
        while (c <= dim && r[c].is_zero()) ++c;
        if (c > dim) return;  // dependent row
        if (c == dim) {
            consistent = false;
            r[dim] = FieldScalar::one(r[dim].field());
        } else {
            FieldScalar lead = r[c];
            for (unsigned j = c; j <= dim; ++j) r[j] /= lead;
        }
        for (size_t k = 0; k < rows.size(); ++k) {
            FieldScalar f = rows[k][c];
            if (f.is_zero()) continue;
            for (unsigned j = c; j <= dim; ++j) rows[k][j] -= f * r[j];
        }
        size_t pos = 0;
        while (pos < pivots.size() && pivots[pos] < c) ++pos;
        rows.insert(rows.begin() + pos, std::move(r));
        pivots.insert(pivots.begin() + pos, c);
    }
};

inline FlatBasis flat_basis(const Arrangement& A, const IndexSet& I) {
    FlatBasis b;
    b.dim = A.dim();
    for (uint16_t i : I) {
        if (i >= A.size()) throw error("hyperplane index out of range");
        Row r(A[i].coeffs);
        r.push_back(A[i].constant);
        b.insert(std::move(r));
    }
    return b;
}

/// True when all hyperplanes have a common point.
inline bool is_central(const Arrangement& A) {
    IndexSet all(A.size());
    for (size_t i = 0; i < A.size(); ++i) all[i] = static_cast<uint16_t>(i);
    return flat_basis(A, all).consistent;
}

/// How a hyperplane meets the flat of the current subset: a proper
/// hyperplane of the flat, all of it, or disjoint from it.
enum class RowStatus : uint8_t { PROPER, REDUNDANT, EMPTY };

/// Classification of the suffix rows from..n-1 against the flat of a subset.
/// A row qualifies when it is PROPER and no later row cuts the same trace,
/// which is exactly when deciding it cannot be postponed.
struct Classification {
    unsigned from = 0;
    std::vector<RowStatus> status;      // indexed by j - from
    std::vector<Row> canonical;         // reduced normalized row for PROPER, empty otherwise
    std::vector<char> qualifying;       // indexed by j - from
    std::vector<unsigned> qualifying_list;
    long j_min = -1;                    // smallest qualifying index, -1 if none

    RowStatus status_of(unsigned j) const { return status[j - from]; }
    bool qualifies(unsigned j) const { return qualifying[j - from] != 0; }

    /// Smallest qualifying index > t, or -1.
    long next_qualifying_after(unsigned t) const {
        for (unsigned j : qualifying_list)
            if (j > t) return static_cast<long>(j);
        return -1;
    }
};

/// Classifies rows from..n-1 against an already computed consistent basis.
/// Two PROPER rows get equal canonical vectors iff they cut the same
/// hyperplane of the flat, since reduction against a reduced echelon basis
/// picks a unique coset representative and normalization fixes the scale.
inline Classification classify(const Arrangement& A, const FlatBasis& basis, unsigned from) {
    if (!basis.consistent) throw error("classify requires a consistent subset");
    const unsigned n = static_cast<unsigned>(A.size());
    const unsigned dim = A.dim();
    Classification cl;
    cl.from = from;
    cl.status.resize(n - from, RowStatus::REDUNDANT);
    cl.canonical.resize(n - from);
    cl.qualifying.assign(n - from, 0);

    for (unsigned j = from; j < n; ++j) {
        Row r(A[j].coeffs);
        r.push_back(A[j].constant);
        basis.reduce(r);
        unsigned c = 0;
        while (c <= dim && r[c].is_zero()) ++c;
        if (c >= dim) {
            cl.status[j - from] = c == dim ? RowStatus::EMPTY : RowStatus::REDUNDANT;
            continue;
        }
        FieldScalar lead = r[c];
        for (unsigned k = c; k <= dim; ++k) r[k] /= lead;
        cl.status[j - from] = RowStatus::PROPER;
        cl.canonical[j - from] = std::move(r);
    }

    // Backward sweep: a PROPER row qualifies iff its canonical row does not
    // reappear later in the suffix.
    std::map<Row, unsigned> later;
    for (unsigned j = n; j-- > from;) {
        if (cl.status[j - from] != RowStatus::PROPER) continue;
        unsigned& cnt = later[cl.canonical[j - from]];
        ++cnt;
        cl.qualifying[j - from] = cnt == 1 ? 1 : 0;
    }
    for (unsigned j = from; j < n; ++j)
        if (cl.qualifying[j - from]) cl.qualifying_list.push_back(j);
    if (!cl.qualifying_list.empty()) cl.j_min = cl.qualifying_list.front();
    return cl;
}

inline Classification classify(const Arrangement& A, const IndexSet& I, unsigned from) {
    FlatBasis b = flat_basis(A, I);
    if (!b.consistent) throw error("classify requires a consistent subset");
    return classify(A, b, from);
}

/// Node of the recursion over restriction subsets: the chosen subset I, the
/// next undecided hyperplane index, and the node multiplicity.
struct RestrictionRep {
    IndexSet I;
    unsigned level = 0;
    Count mult = Count(1ul);
};

inline RestrictionRep delete_step(const RestrictionRep& rep) {
    RestrictionRep out{rep.I, rep.level + 1, rep.mult};
    return out;
}

inline RestrictionRep restrict_step(const RestrictionRep& rep, unsigned k) {
    if (k != rep.level) throw error("restriction must decide the current level");
    RestrictionRep out{rep.I, rep.level + 1, rep.mult};
    out.I.push_back(static_cast<uint16_t>(k));
    return out;
}

} // namespace chambers
