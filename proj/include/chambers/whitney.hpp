#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

#include "count.hpp"
#include "error.hpp"

namespace chambers {

/// Unsigned Whitney numbers b_0, ..., b_d of an arrangement in dimension d:
/// b_i sums |mu| over flats of codimension i. Always d+1 entries, trailing
/// zeros included.
struct WhitneyVector {
    std::vector<Count> b;

    WhitneyVector() = default;
    explicit WhitneyVector(unsigned dim) : b(dim + 1) {}

    unsigned dim() const { return static_cast<unsigned>(b.size()) - 1; }

    bool operator==(const WhitneyVector&) const = default;

    std::string str() const {
        std::string out;
        for (size_t i = 0; i < b.size(); ++i) {
            if (i) out += ' ';
            out += b[i].str();
        }
        return out;
    }
};

/// Number of connected components of the complement, by the alternating sum
/// identity: |chi(-1)| = sum_i b_i.
inline Count number_of_chambers(const WhitneyVector& w) {
    Count total;
    for (const Count& c : w.b) total += c;
    return total;
}

/// Characteristic polynomial chi(t) = sum_i (-1)^i b_i t^(d-i), stored as
/// signed coefficients in descending powers of t.
struct CharPoly {
    unsigned dim = 0;
    std::vector<mpz_class> coeff;  // coeff[i] multiplies t^(dim-i)

    bool operator==(const CharPoly&) const = default;

    mpz_class evaluate(const mpz_class& x) const {
        mpz_class acc = 0;
        for (const mpz_class& c : coeff) acc = acc * x + c;
        return acc;
    }

    std::string str() const {
        std::string out;
        for (size_t i = 0; i < coeff.size(); ++i) {
            if (coeff[i] == 0) continue;
            const bool neg = coeff[i] < 0;
            if (out.empty()) {
                if (neg) out += '-';
            } else {
                out += neg ? " - " : " + ";
            }
            mpz_class mag = abs(coeff[i]);
            const unsigned p = dim - static_cast<unsigned>(i);
            if (mag != 1 || p == 0) {
                out += mag.get_str();
                if (p > 0) out += '*';
            }
            if (p > 1)
                out += "t^" + std::to_string(p);
            else if (p == 1)
                out += 't';
        }
        return out.empty() ? "0" : out;
    }
};

inline CharPoly characteristic_polynomial(const WhitneyVector& w) {
    CharPoly p;
    p.dim = w.dim();
    p.coeff.reserve(w.b.size());
    for (size_t i = 0; i < w.b.size(); ++i)
        p.coeff.push_back(i % 2 == 0 ? w.b[i].value() : -w.b[i].value());
    return p;
}

/// Inverse of characteristic_polynomial; rejects sign patterns that no
/// Whitney vector produces.
inline WhitneyVector whitney_from_charpoly(const CharPoly& p) {
    WhitneyVector w;
    w.b.reserve(p.coeff.size());
    for (size_t i = 0; i < p.coeff.size(); ++i) {
        mpz_class v = i % 2 == 0 ? p.coeff[i] : -p.coeff[i];
        if (v < 0) throw error("coefficient of t^" + std::to_string(p.dim - i) +
                               " has the wrong sign for a characteristic polynomial");
        w.b.push_back(Count(v));
    }
    return w;
}

} // namespace chambers
