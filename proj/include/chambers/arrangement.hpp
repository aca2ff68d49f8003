#pragma once

#include <map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "perm.hpp"
#include "scalar.hpp"

namespace chambers {

/// Affine hyperplane {x : coeffs . x = constant}, coeffs not all zero.
struct Hyperplane {
    std::vector<FieldScalar> coeffs;
    FieldScalar constant;

    bool operator==(const Hyperplane& o) const {
        return coeffs == o.coeffs && constant == o.constant;
    }
};

/// Augmented row: dim coefficients followed by the constant.
using Row = std::vector<FieldScalar>;

/// Finite list of hyperplanes in K^dim, K = Q or Q(sqrt(m)). Duplicate
/// hyperplanes are permitted (they are detected and reported, and the
/// counting algorithms treat the arrangement as the underlying set).
class Arrangement {
public:
    Arrangement(unsigned dim, unsigned long field, std::vector<Hyperplane> hyperplanes)
        : dim_(dim), field_(field), hs_(std::move(hyperplanes)) {
        if (field_ != 0) FieldScalar::zero(field_);  // validates the index
        for (Hyperplane& h : hs_) {
            if (h.coeffs.size() != dim_)
                throw error("hyperplane has " + std::to_string(h.coeffs.size()) +
                            " coefficients in dimension " + std::to_string(dim_));
            bool nonzero = false;
            for (FieldScalar& c : h.coeffs) {
                c = c.promoted(field_);
                nonzero = nonzero || !c.is_zero();
            }
            h.constant = h.constant.promoted(field_);
            if (!nonzero) throw error("zero coefficient row is not a hyperplane");
        }
    }

    unsigned dim() const { return dim_; }
    unsigned long field() const { return field_; }
    size_t size() const { return hs_.size(); }
    const Hyperplane& operator[](size_t i) const { return hs_[i]; }
    const std::vector<Hyperplane>& hyperplanes() const { return hs_; }

    /// Augmented row of hyperplane i scaled so its first nonzero coefficient
    /// is 1. Two hyperplanes are equal as point sets iff these rows match.
    Row canonical_row(size_t i) const {
        const Hyperplane& h = hs_[i];
        Row r(h.coeffs);
        r.push_back(h.constant);
        FieldScalar lead = FieldScalar::one(field_);
        for (const FieldScalar& c : h.coeffs)
            if (!c.is_zero()) {
                lead = c;
                break;
            }
        for (FieldScalar& c : r) c /= lead;
        return r;
    }

    /// Index groups (size >= 2) of coinciding hyperplanes.
    std::vector<std::vector<size_t>> duplicate_groups() const {
        std::map<Row, std::vector<size_t>> buckets;
        for (size_t i = 0; i < hs_.size(); ++i) buckets[canonical_row(i)].push_back(i);
        std::vector<std::vector<size_t>> out;
        for (auto& [row, idxs] : buckets)
            if (idxs.size() > 1) out.push_back(idxs);
        return out;
    }

private:
    unsigned dim_;
    unsigned long field_;
    std::vector<Hyperplane> hs_;
};

inline Arrangement delete_hyperplane(const Arrangement& A, size_t idx) {
    if (idx >= A.size()) throw error("hyperplane index out of range");
    std::vector<Hyperplane> hs;
    hs.reserve(A.size() - 1);
    for (size_t i = 0; i < A.size(); ++i)
        if (i != idx) hs.push_back(A[i]);
    return Arrangement(A.dim(), A.field(), std::move(hs));
}

/// Explicit restriction onto hyperplane idx. The pivot coordinate of idx is
/// solved out, every other hyperplane is rewritten in the remaining dim-1
/// coordinates, traces that are empty or all of the hyperplane are dropped,
/// and duplicates are merged (first occurrence wins).
inline Arrangement restrict_to_hyperplane(const Arrangement& A, size_t idx) {
    if (idx >= A.size()) throw error("hyperplane index out of range");
    if (A.dim() == 0) throw error("cannot restrict in dimension 0");
    const Hyperplane& h = A[idx];
    size_t pivot = 0;
    while (h.coeffs[pivot].is_zero()) ++pivot;

    std::vector<Hyperplane> hs;
    std::map<Row, bool> seen;
    for (size_t i = 0; i < A.size(); ++i) {
        if (i == idx) continue;
        const Hyperplane& k = A[i];
        // substitute x_pivot = (h.constant - sum_{j != pivot} h_j x_j) / h_pivot
        FieldScalar f = k.coeffs[pivot] / h.coeffs[pivot];
        std::vector<FieldScalar> coeffs;
        coeffs.reserve(A.dim() - 1);
        bool nonzero = false;
        for (size_t j = 0; j < A.dim(); ++j) {
            if (j == pivot) continue;
            FieldScalar c = k.coeffs[j] - f * h.coeffs[j];
            nonzero = nonzero || !c.is_zero();
            coeffs.push_back(std::move(c));
        }
        FieldScalar constant = k.constant - f * h.constant;
        if (!nonzero) continue;  // trace is empty or the whole hyperplane

        Hyperplane trace{std::move(coeffs), std::move(constant)};
        Row canon(trace.coeffs);
        canon.push_back(trace.constant);
        FieldScalar lead = FieldScalar::one(A.field());
        for (const FieldScalar& c : trace.coeffs)
            if (!c.is_zero()) {
                lead = c;
                break;
            }
        for (FieldScalar& c : canon) c /= lead;
        if (seen.emplace(std::move(canon), true).second) hs.push_back(std::move(trace));
    }
    return Arrangement(A.dim() - 1, A.field(), std::move(hs));
}

} // namespace chambers
