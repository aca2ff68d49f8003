#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"

namespace chambers {

/// Sorted index set, 0-based. Kept strictly ascending; the lexicographic
/// vector order doubles as the canonical order on orbit keys and level maps.
using IndexSet = std::vector<uint16_t>;

inline IndexSet sorted(IndexSet I) {
    std::sort(I.begin(), I.end());
    return I;
}

/// Permutation of {0..degree-1} in one-line notation: i maps to images()[i].
class Perm {
public:
    Perm() = default;

    explicit Perm(std::vector<uint16_t> images) : img_(std::move(images)) {
        std::vector<char> seen(img_.size(), 0);
        for (uint16_t v : img_) {
            if (v >= img_.size() || seen[v]) throw error("one-line notation is not a bijection");
            seen[v] = 1;
        }
    }

    static Perm identity(unsigned degree) {
        Perm p;
        p.img_.resize(degree);
        for (unsigned i = 0; i < degree; ++i) p.img_[i] = static_cast<uint16_t>(i);
        return p;
    }

    /// 1-based one-line input, the notation used in group files.
    static Perm from_one_line_1based(const std::vector<long>& images) {
        std::vector<uint16_t> img(images.size());
        for (size_t i = 0; i < images.size(); ++i) {
            if (images[i] < 1 || images[i] > static_cast<long>(images.size()))
                throw error("one-line entry " + std::to_string(images[i]) + " out of range 1.." +
                            std::to_string(images.size()));
            img[i] = static_cast<uint16_t>(images[i] - 1);
        }
        return Perm(std::move(img));
    }

    unsigned degree() const { return static_cast<unsigned>(img_.size()); }
    uint16_t operator()(uint16_t p) const { return img_[p]; }
    const std::vector<uint16_t>& images() const { return img_; }

    bool is_identity() const {
        for (size_t i = 0; i < img_.size(); ++i)
            if (img_[i] != i) return false;
        return true;
    }

    Perm inverse() const {
        Perm r;
        r.img_.resize(img_.size());
        for (size_t i = 0; i < img_.size(); ++i) r.img_[img_[i]] = static_cast<uint16_t>(i);
        return r;
    }

    /// Composition acts left-to-right through the argument: (a*b)(x) = a(b(x)).
    friend Perm operator*(const Perm& a, const Perm& b) {
        if (a.degree() != b.degree()) throw error("permutation degree mismatch");
        Perm r;
        r.img_.resize(a.img_.size());
        for (size_t i = 0; i < a.img_.size(); ++i) r.img_[i] = a.img_[b.img_[i]];
        return r;
    }

    /// Sorted image of a sorted index set.
    IndexSet apply(const IndexSet& I) const {
        IndexSet J(I.size());
        for (size_t i = 0; i < I.size(); ++i) J[i] = img_[I[i]];
        std::sort(J.begin(), J.end());
        return J;
    }

    bool operator==(const Perm& o) const { return img_ == o.img_; }
    bool operator!=(const Perm& o) const { return img_ != o.img_; }
    bool operator<(const Perm& o) const { return img_ < o.img_; }

    std::vector<long> one_line_1based() const {
        std::vector<long> v(img_.size());
        for (size_t i = 0; i < img_.size(); ++i) v[i] = img_[i] + 1;
        return v;
    }

    std::string str() const {
        std::string s = "[";
        for (size_t i = 0; i < img_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(img_[i] + 1);
        }
        return s + "]";
    }

private:
    std::vector<uint16_t> img_;
};

} // namespace chambers
