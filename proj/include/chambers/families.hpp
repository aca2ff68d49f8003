#pragma once

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "arrangement.hpp"
#include "automorphism.hpp"
#include "error.hpp"
#include "permgroup.hpp"
#include "scalar.hpp"

namespace chambers {

struct PointSet {
    unsigned dim = 0;
    std::vector<std::vector<FieldScalar>> points;
};

/// An arrangement together with a symmetry group acting on its hyperplane
/// indices. The group is a known-by-construction automorphism subgroup, not
/// necessarily the full one.
struct FamilyInstance {
    Arrangement arrangement;
    PermGroup group;
    std::string name;
};

namespace detail {

inline bool row_less(const Hyperplane& a, const Hyperplane& b) {
    if (a.coeffs != b.coeffs)
        return std::lexicographical_compare(a.coeffs.begin(), a.coeffs.end(), b.coeffs.begin(),
                                            b.coeffs.end());
    return a.constant < b.constant;
}

inline unsigned long common_field(const std::vector<Hyperplane>& rows) {
    for (const Hyperplane& h : rows) {
        for (const FieldScalar& c : h.coeffs)
            if (c.field() != 0) return c.field();
        if (h.constant.field() != 0) return h.constant.field();
    }
    return 0;
}

/// Sorts rows into lex order, remaps the symmetry permutations through the
/// sort, and assembles the instance. Symmetries are given on row indices in
/// construction order.
inline FamilyInstance finish_instance(unsigned dim, std::vector<Hyperplane> rows,
                                      const std::vector<Perm>& syms, std::string name,
                                      bool forbid_duplicates) {
    const size_t n = rows.size();
    if (n > 65535) throw error(name + " has too many hyperplanes");
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return row_less(rows[a], rows[b]); });
    std::vector<size_t> inv(n);
    for (size_t i = 0; i < n; ++i) inv[order[i]] = i;

    std::vector<Hyperplane> sorted_rows;
    sorted_rows.reserve(n);
    for (size_t i = 0; i < n; ++i) sorted_rows.push_back(std::move(rows[order[i]]));
    if (forbid_duplicates)
        for (size_t i = 0; i + 1 < n; ++i)
            if (sorted_rows[i] == sorted_rows[i + 1]) throw error(name + " has duplicate points");

    std::vector<Perm> mapped;
    mapped.reserve(syms.size());
    for (const Perm& s : syms) {
        if (s.degree() != n) throw error("symmetry degree does not match the instance");
        std::vector<uint16_t> img(n);
        for (size_t i = 0; i < n; ++i)
            img[i] = static_cast<uint16_t>(inv[s(static_cast<uint16_t>(order[i]))]);
        mapped.emplace_back(std::move(img));
    }

    const unsigned long field = common_field(sorted_rows);
    Arrangement A(dim, field, std::move(sorted_rows));
    PermGroup G = mapped.empty() ? PermGroup(static_cast<uint16_t>(n))
                                 : PermGroup(static_cast<uint16_t>(n), mapped);
    return FamilyInstance{std::move(A), std::move(G), std::move(name)};
}

/// Permutation of point indices induced by a coordinatewise transform.
template <typename F>
Perm induced_point_perm(const std::vector<std::vector<FieldScalar>>& points, F&& transform) {
    std::map<std::vector<FieldScalar>, size_t> where;
    for (size_t i = 0; i < points.size(); ++i) where[points[i]] = i;
    std::vector<uint16_t> img(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        auto it = where.find(transform(points[i]));
        if (it == where.end()) throw error("internal: transform does not permute the points");
        img[i] = static_cast<uint16_t>(it->second);
    }
    return Perm(std::move(img));
}

inline FieldScalar determinant(std::vector<std::vector<FieldScalar>> m, unsigned long field) {
    const size_t n = m.size();
    FieldScalar det = FieldScalar::one(field);
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && m[pivot][col].is_zero()) ++pivot;
        if (pivot == n) return FieldScalar::zero(field);
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            if (m[r][col].is_zero()) continue;
            FieldScalar f = m[r][col] / m[col][col];
            for (size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

} // namespace detail

/// Central arrangement whose chambers are the realizable 0/1 labelings of
/// the given points by affine thresholds: one hyperplane
/// x_0 + v_1 x_1 + ... + v_d x_d = 0 per point v, rows in lex order of the
/// points. Symmetries permute points in the order given; they are remapped
/// onto the sorted rows.
inline FamilyInstance separability(const PointSet& pts, const std::vector<Perm>& symmetries = {},
                                   std::string name = "separability") {
    std::vector<Hyperplane> rows;
    rows.reserve(pts.points.size());
    for (const auto& v : pts.points) {
        if (v.size() != pts.dim) throw error("point dimension mismatch");
        std::vector<FieldScalar> coeffs;
        coeffs.reserve(pts.dim + 1);
        coeffs.push_back(FieldScalar::rational(1));
        for (const FieldScalar& c : v) coeffs.push_back(c);
        rows.push_back({std::move(coeffs), FieldScalar::rational(0)});
    }
    return detail::finish_instance(pts.dim + 1, std::move(rows), symmetries, std::move(name), true);
}

namespace detail {

/// 0/1 cube vertices in bit order: coordinate i of vertex m is bit i of m.
inline std::vector<std::vector<FieldScalar>> cube_vertices(unsigned d, bool odd_weight_only) {
    std::vector<std::vector<FieldScalar>> pts;
    for (unsigned m = 0; m < (1u << d); ++m) {
        if (odd_weight_only && std::popcount(m) % 2 == 0) continue;
        std::vector<FieldScalar> v;
        v.reserve(d);
        for (unsigned i = 0; i < d; ++i) v.push_back(FieldScalar::rational((m >> i) & 1));
        pts.push_back(std::move(v));
    }
    return pts;
}

template <typename F>
std::vector<FieldScalar> map_coords(const std::vector<FieldScalar>& v, F&& coord) {
    std::vector<FieldScalar> out(v.size(), FieldScalar::rational(0));
    for (size_t i = 0; i < v.size(); ++i) out[i] = coord(v, i);
    return out;
}

} // namespace detail

/// Separability arrangement of the full 0/1 cube: chambers are the linear
/// threshold functions of d inputs. Symmetries: the hyperoctahedral group of
/// the cube (coordinate permutations and flips), order 2^d d!.
inline FamilyInstance threshold_family(unsigned d) {
    if (d == 0 || d > 15) throw error("threshold family needs 1 <= d <= 15");
    auto pts = detail::cube_vertices(d, false);
    std::vector<Perm> syms;
    if (d >= 2) {
        syms.push_back(detail::induced_point_perm(pts, [](const std::vector<FieldScalar>& v) {
            auto w = v;
            std::swap(w[0], w[1]);
            return w;
        }));
        syms.push_back(detail::induced_point_perm(pts, [d](const std::vector<FieldScalar>& v) {
            return detail::map_coords(v, [d](const auto& u, size_t i) { return u[(i + d - 1) % d]; });
        }));
    }
    syms.push_back(detail::induced_point_perm(pts, [](const std::vector<FieldScalar>& v) {
        auto w = v;
        w[0] = FieldScalar::rational(1) - w[0];
        return w;
    }));
    return separability(PointSet{d, std::move(pts)}, syms, "threshold(" + std::to_string(d) + ")");
}

/// All hyperplanes sum_{i in S} x_i = 0 for nonempty S, i.e. the traces of
/// the threshold arrangement on its first hyperplane. Symmetries: S_d
/// permuting the coordinates.
inline FamilyInstance resonance_family(unsigned d) {
    if (d == 0 || d > 15) throw error("resonance family needs 1 <= d <= 15");
    std::vector<Hyperplane> rows;
    std::vector<std::vector<FieldScalar>> masks;  // coefficient vectors, for the group action
    for (unsigned m = 1; m < (1u << d); ++m) {
        std::vector<FieldScalar> c;
        c.reserve(d);
        for (unsigned i = 0; i < d; ++i) c.push_back(FieldScalar::rational((m >> i) & 1));
        masks.push_back(c);
        rows.push_back({std::move(c), FieldScalar::rational(0)});
    }
    std::vector<Perm> syms;
    if (d >= 2) {
        syms.push_back(detail::induced_point_perm(masks, [](const std::vector<FieldScalar>& v) {
            auto w = v;
            std::swap(w[0], w[1]);
            return w;
        }));
        syms.push_back(detail::induced_point_perm(masks, [d](const std::vector<FieldScalar>& v) {
            return detail::map_coords(v, [d](const auto& u, size_t i) { return u[(i + d - 1) % d]; });
        }));
    }
    return detail::finish_instance(d, std::move(rows), syms, "resonance(" + std::to_string(d) + ")",
                                   true);
}

/// Separability arrangement of the 2d unit vectors +-e_i, with the
/// hyperoctahedral group permuting and negating them.
inline FamilyInstance crosspolytope_family(unsigned d) {
    if (d == 0) throw error("crosspolytope family needs d >= 1");
    std::vector<std::vector<FieldScalar>> pts;
    for (unsigned i = 0; i < d; ++i)
        for (long s : {1l, -1l}) {
            std::vector<FieldScalar> v(d, FieldScalar::rational(0));
            v[i] = FieldScalar::rational(s);
            pts.push_back(std::move(v));
        }
    std::vector<Perm> syms;
    if (d >= 2) {
        syms.push_back(detail::induced_point_perm(pts, [](const std::vector<FieldScalar>& v) {
            auto w = v;
            std::swap(w[0], w[1]);
            return w;
        }));
        syms.push_back(detail::induced_point_perm(pts, [d](const std::vector<FieldScalar>& v) {
            return detail::map_coords(v, [d](const auto& u, size_t i) { return u[(i + d - 1) % d]; });
        }));
    }
    syms.push_back(detail::induced_point_perm(pts, [](const std::vector<FieldScalar>& v) {
        auto w = v;
        w[0] = -w[0];
        return w;
    }));
    return separability(PointSet{d, std::move(pts)}, syms,
                        "crosspolytope(" + std::to_string(d) + ")");
}

/// Separability arrangement of the d! permutations of (1, ..., d), with S_d
/// permuting coordinates.
inline FamilyInstance permutohedron_family(unsigned d) {
    if (d == 0 || d > 8) throw error("permutohedron family needs 1 <= d <= 8");
    std::vector<std::vector<FieldScalar>> pts;
    std::vector<long> base(d);
    std::iota(base.begin(), base.end(), 1l);
    do {
        std::vector<FieldScalar> v;
        v.reserve(d);
        for (long x : base) v.push_back(FieldScalar::rational(x));
        pts.push_back(std::move(v));
    } while (std::next_permutation(base.begin(), base.end()));
    std::vector<Perm> syms;
    if (d >= 2) {
        syms.push_back(detail::induced_point_perm(pts, [](const std::vector<FieldScalar>& v) {
            auto w = v;
            std::swap(w[0], w[1]);
            return w;
        }));
        syms.push_back(detail::induced_point_perm(pts, [d](const std::vector<FieldScalar>& v) {
            return detail::map_coords(v, [d](const auto& u, size_t i) { return u[(i + d - 1) % d]; });
        }));
    }
    return separability(PointSet{d, std::move(pts)}, syms,
                        "permutohedron(" + std::to_string(d) + ")");
}

/// Separability arrangement of the odd-weight 0/1 vertices. Symmetries:
/// coordinate permutations and parity-preserving double flips, order
/// d! 2^(d-1); on two points (d = 2) the action is not faithful and the
/// group shrinks accordingly.
inline FamilyInstance demicube_family(unsigned d) {
    if (d == 0 || d > 15) throw error("demicube family needs 1 <= d <= 15");
    auto pts = detail::cube_vertices(d, true);
    std::vector<Perm> syms;
    if (d >= 2) {
        syms.push_back(detail::induced_point_perm(pts, [](const std::vector<FieldScalar>& v) {
            auto w = v;
            std::swap(w[0], w[1]);
            return w;
        }));
        syms.push_back(detail::induced_point_perm(pts, [d](const std::vector<FieldScalar>& v) {
            return detail::map_coords(v, [d](const auto& u, size_t i) { return u[(i + d - 1) % d]; });
        }));
        syms.push_back(detail::induced_point_perm(pts, [](const std::vector<FieldScalar>& v) {
            auto w = v;
            w[0] = FieldScalar::rational(1) - w[0];
            w[1] = FieldScalar::rational(1) - w[1];
            return w;
        }));
    }
    return separability(PointSet{d, std::move(pts)}, syms, "demicube(" + std::to_string(d) + ")");
}

/// All vertex permutations preserving the Gram matrix of the points. Since
/// the point sets span their space, each such permutation is realized by an
/// orthogonal map, so these are genuine symmetries.
inline std::vector<Perm> gram_symmetries(const std::vector<std::vector<FieldScalar>>& pts,
                                         unsigned long field) {
    const size_t n = pts.size();
    std::vector<std::vector<FieldScalar>> gram(n, std::vector<FieldScalar>(n, FieldScalar::zero(field)));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j <= i; ++j) {
            FieldScalar dot = FieldScalar::zero(field);
            for (size_t k = 0; k < pts[i].size(); ++k) dot += pts[i][k] * pts[j][k];
            gram[i][j] = gram[j][i] = dot;
        }

    std::vector<Perm> out;
    PermGroup known(static_cast<uint16_t>(n));
    std::vector<uint16_t> img(n);
    std::vector<char> used(n, 0);
    auto dfs = [&](auto&& self, size_t i) -> void {
        if (i == n) {
            // keep only automorphisms that enlarge the group generated so
            // far; the identity and products of earlier finds are dropped
            Perm g(img);
            if (!known.contains(g)) {
                out.push_back(std::move(g));
                known = PermGroup(static_cast<uint16_t>(n), out);
            }
            return;
        }
        for (size_t c = 0; c < n; ++c) {
            if (used[c]) continue;
            bool ok = gram[c][c] == gram[i][i];
            for (size_t j = 0; ok && j < i; ++j) ok = gram[img[j]][c] == gram[j][i];
            if (!ok) continue;
            img[i] = static_cast<uint16_t>(c);
            used[c] = 1;
            self(self, i + 1);
            used[c] = 0;
        }
    };
    dfs(dfs, 0);
    return out;
}

/// Separability arrangements of regular polytopes whose vertex coordinates
/// need sqrt(5): the icosahedron and dodecahedron, plus the rational
/// 24-cell. Symmetries are found from the Gram matrix.
inline FamilyInstance platonic_family(const std::string& which) {
    std::vector<std::vector<FieldScalar>> pts;
    unsigned dim = 3;
    unsigned long field = 5;
    const FieldScalar one = FieldScalar::rational(1);
    const FieldScalar phi = FieldScalar::quadratic(mpq_class(1, 2), mpq_class(1, 2), 5);

    auto cyclic3 = [&](FieldScalar a, FieldScalar b, FieldScalar c) {
        pts.push_back({a, b, c});
        pts.push_back({c, a, b});
        pts.push_back({b, c, a});
    };

    if (which == "icosahedron") {
        for (long sb : {1l, -1l})
            for (long sc : {1l, -1l})
                cyclic3(FieldScalar::zero(5), FieldScalar::rational(sb),
                        sc > 0 ? phi : -phi);
    } else if (which == "dodecahedron") {
        const FieldScalar inv_phi = phi - one.promoted(5);
        for (long sa : {1l, -1l})
            for (long sb : {1l, -1l})
                for (long sc : {1l, -1l})
                    pts.push_back({FieldScalar::rational(sa).promoted(5),
                                   FieldScalar::rational(sb).promoted(5),
                                   FieldScalar::rational(sc).promoted(5)});
        for (long sb : {1l, -1l})
            for (long sc : {1l, -1l})
                cyclic3(FieldScalar::zero(5), sb > 0 ? inv_phi : -inv_phi,
                        sc > 0 ? phi : -phi);
    } else if (which == "cell24") {
        dim = 4;
        field = 0;
        for (unsigned i = 0; i < 4; ++i)
            for (unsigned j = i + 1; j < 4; ++j)
                for (long si : {1l, -1l})
                    for (long sj : {1l, -1l}) {
                        std::vector<FieldScalar> v(4, FieldScalar::rational(0));
                        v[i] = FieldScalar::rational(si);
                        v[j] = FieldScalar::rational(sj);
                        pts.push_back(std::move(v));
                    }
    } else {
        throw error("unknown platonic family '" + which +
                    "' (expected icosahedron, dodecahedron, or cell24)");
    }

    if (field != 0)
        for (auto& v : pts)
            for (auto& c : v) c = c.promoted(field);
    std::vector<Perm> syms = gram_symmetries(pts, field);
    return separability(PointSet{dim, std::move(pts)}, syms, which);
}

/// Hyperplanes through all d-subsets of n points on the moment curve
/// t -> (t, t^2, ..., t^d), t = 1..n. The points are in general position
/// (Vandermonde), so the hyperplanes are distinct. Beware: most of S_n does
/// NOT act on the intersection lattice for these points; already for d = 2,
/// n = 4 the lines through {1,4} and {2,3} are parallel (1+4 = 2+3) while
/// their images under a transposition are not. The symmetry shipped is the
/// involution t -> n+1-t, which extends to an affine map of the ambient
/// space (each coordinate of the reversed point is a polynomial of degree
/// <= d in t) and therefore genuinely preserves the lattice.
inline FamilyInstance discriminantal_family(unsigned d, unsigned n) {
    if (d == 0 || n < d) throw error("discriminantal family needs n >= d >= 1");
    {
        double c = 1;
        for (unsigned k = 1; k <= d; ++k) c = c * (n - k + 1) / k;
        if (c > 5000) throw error("discriminantal family would have over 5000 hyperplanes");
    }

    std::vector<std::vector<FieldScalar>> moment(n);
    for (unsigned t = 1; t <= n; ++t) {
        mpq_class p = 1;
        for (unsigned j = 0; j < d; ++j) {
            p *= t;
            moment[t - 1].push_back(FieldScalar::rational(p));
        }
    }

    std::vector<IndexSet> subsets;
    {
        IndexSet I(d);
        for (unsigned i = 0; i < d; ++i) I[i] = static_cast<uint16_t>(i);
        do subsets.push_back(I);
        while (detail::next_subset(I, n));
    }
    std::map<IndexSet, size_t> subset_index;
    for (size_t i = 0; i < subsets.size(); ++i) subset_index[subsets[i]] = i;

    std::vector<Hyperplane> rows;
    rows.reserve(subsets.size());
    for (const IndexSet& S : subsets) {
        // cofactor expansion of det([1 x; 1 p_{s1}; ...; 1 p_{sd}]) = 0
        std::vector<FieldScalar> coeffs(d, FieldScalar::rational(0));
        FieldScalar constant = FieldScalar::rational(0);
        for (unsigned k = 0; k <= d; ++k) {
            std::vector<std::vector<FieldScalar>> minor;
            for (uint16_t t : S) {
                std::vector<FieldScalar> row;
                for (unsigned c = 0; c <= d; ++c) {
                    if (c == k) continue;
                    row.push_back(c == 0 ? FieldScalar::rational(1) : moment[t][c - 1]);
                }
                minor.push_back(std::move(row));
            }
            FieldScalar cof = detail::determinant(std::move(minor), 0);
            if (k % 2 == 1) cof = -cof;
            if (k == 0)
                constant = -cof;
            else
                coeffs[k - 1] = cof;
        }
        rows.push_back({std::move(coeffs), std::move(constant)});
    }

    std::vector<Perm> syms;
    if (n >= 2) {
        std::vector<uint16_t> reversal(n);
        for (unsigned i = 0; i < n; ++i) reversal[i] = static_cast<uint16_t>(n - 1 - i);
        const Perm rev(std::move(reversal));
        std::vector<uint16_t> img(subsets.size());
        for (size_t i = 0; i < subsets.size(); ++i)
            img[i] = static_cast<uint16_t>(subset_index.at(rev.apply(subsets[i])));
        syms.push_back(Perm(std::move(img)));
    }

    FamilyInstance inst = detail::finish_instance(
        d, std::move(rows), syms, "discriminantal(" + std::to_string(d) + "," + std::to_string(n) + ")",
        false);
    if (!inst.arrangement.duplicate_groups().empty())
        throw error("internal: discriminantal hyperplanes are not distinct");
    return inst;
}

} // namespace chambers
