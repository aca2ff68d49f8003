#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "arrangement.hpp"
#include "count.hpp"
#include "error.hpp"
#include "flats.hpp"
#include "whitney.hpp"

namespace chambers {

/// Reference Whitney numbers by inclusion-exclusion over all 2^n subsets:
/// b_i = (-1)^i * sum of (-1)^|I| over consistent I of rank i. Exponential,
/// meant only to check the real engines on small inputs.
inline WhitneyVector whitney_bruteforce(const Arrangement& A) {
    const unsigned n = static_cast<unsigned>(A.size());
    if (n > 20) throw error("brute force supports at most 20 hyperplanes");
    const unsigned d = A.dim();
    std::vector<long long> s(d + 1, 0);
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        IndexSet I;
        for (unsigned i = 0; i < n; ++i)
            if (mask & (1u << i)) I.push_back(static_cast<uint16_t>(i));
        FlatBasis b = flat_basis(A, I);
        if (!b.consistent) continue;
        s[b.rank()] += std::popcount(mask) % 2 == 0 ? 1 : -1;
    }
    WhitneyVector w(d);
    for (unsigned i = 0; i <= d; ++i) {
        const long long v = i % 2 == 0 ? s[i] : -s[i];
        if (v < 0) throw error("internal: negative Whitney number from inclusion-exclusion");
        w.b[i] = Count(static_cast<unsigned long>(v));
    }
    return w;
}

namespace detail {

/// Rational scalar reduced to F_p, or an error when the denominator
/// vanishes there.
inline unsigned long reduce_mod(const mpq_class& x, unsigned long p) {
    const mpz_class pm = p;
    mpz_class den = x.get_den() % pm;
    if (den == 0) throw error("denominator divisible by " + std::to_string(p) +
                              ", coefficients are not defined modulo p");
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pm.get_mpz_t());
    mpz_class num = x.get_num() % pm;
    mpz_class val = ((num * inv) % pm + pm) % pm;
    return val.get_ui();
}

inline bool is_prime(unsigned long p) {
    const mpz_class z = p;
    return mpz_probab_prime_p(z.get_mpz_t(), 40) > 0;
}

inline unsigned long next_prime_at_least(unsigned long x) {
    mpz_class z = x > 0 ? x - 1 : 0, out;
    mpz_nextprime(out.get_mpz_t(), z.get_mpz_t());
    return out.get_ui();
}

} // namespace detail

/// Number of points of F_p^d avoiding every hyperplane, by enumerating the
/// whole space. For primes where the intersection pattern does not
/// degenerate this equals chi(p). Dimension is capped at 3 to keep p^d
/// enumerable.
inline Count count_points_mod_p(const Arrangement& A, unsigned long p,
                                unsigned long point_budget = 100000000ul) {
    if (A.field() != 0) throw error("point counting needs rational coefficients");
    if (A.dim() > 3) throw error("point counting supports dimension at most 3");
    if (!detail::is_prime(p)) throw error(std::to_string(p) + " is not prime");
    const unsigned d = A.dim();
    unsigned long points = 1;
    for (unsigned i = 0; i < d; ++i) {
        if (points > point_budget / p) throw error("point budget exceeded");
        points *= p;
    }

    const size_t n = A.size();
    std::vector<std::vector<unsigned long>> rows(n);
    std::vector<unsigned long> consts(n);
    for (size_t h = 0; h < n; ++h) {
        rows[h].resize(d);
        for (unsigned j = 0; j < d; ++j) rows[h][j] = detail::reduce_mod(A[h].coeffs[j].rat(), p);
        consts[h] = detail::reduce_mod(A[h].constant.rat(), p);
    }

    unsigned long count = 0;
    std::vector<unsigned long> x(d, 0);
    for (unsigned long it = 0; it < points; ++it) {
        bool avoided = true;
        for (size_t h = 0; h < n && avoided; ++h) {
            unsigned long acc = 0;
            for (unsigned j = 0; j < d; ++j) acc = (acc + rows[h][j] * x[j]) % p;
            avoided = acc != consts[h];
        }
        if (avoided) ++count;
        for (unsigned j = 0; j < d; ++j) {
            if (++x[j] < p) break;
            x[j] = 0;
        }
    }
    return Count(count);
}

struct InterpolationOptions {
    unsigned long prime_floor = 11;
    unsigned rounds = 5;
    unsigned long point_budget = 100000000ul;
};

/// Characteristic polynomial from finite-field point counts: evaluate at
/// d+1 admissible primes, interpolate exactly over Q, then confirm the
/// result at one more prime. A degenerate prime choice fails the integrity
/// or verification checks and the whole round is retried with a floor four
/// times higher.
inline CharPoly charpoly_by_interpolation(const Arrangement& A, InterpolationOptions opts = {}) {
    if (A.field() != 0) throw error("interpolation needs rational coefficients");
    if (A.dim() > 3) throw error("interpolation supports dimension at most 3");
    const unsigned d = A.dim();

    unsigned long floor = opts.prime_floor;
    std::string last_failure = "no admissible primes";
    for (unsigned round = 0; round < opts.rounds; ++round, floor *= 4) {
        std::vector<unsigned long> primes;
        std::vector<Count> counts;
        unsigned long p = floor;
        bool budget_ok = true;
        while (primes.size() < d + 2) {
            p = detail::next_prime_at_least(p);
            try {
                counts.push_back(count_points_mod_p(A, p, opts.point_budget));
                primes.push_back(p);
            } catch (const error& e) {
                if (std::string(e.what()).find("budget") != std::string::npos) {
                    budget_ok = false;
                    last_failure = e.what();
                    break;
                }
                // denominator hit this prime; move on to the next one
            }
            ++p;
        }
        if (!budget_ok) break;

        // exact Lagrange interpolation through (primes[i], counts[i]), i <= d
        std::vector<mpq_class> poly(d + 1, 0);
        for (unsigned i = 0; i <= d; ++i) {
            std::vector<mpq_class> numer{1};
            mpq_class denom = 1;
            for (unsigned j = 0; j <= d; ++j) {
                if (j == i) continue;
                numer.resize(numer.size() + 1, 0);
                for (size_t k = numer.size(); k-- > 1;)
                    numer[k] = numer[k - 1] - mpq_class(primes[j]) * numer[k];
                numer[0] = -mpq_class(primes[j]) * numer[0];
                denom *= mpq_class(primes[i]) - mpq_class(primes[j]);
            }
            const mpq_class scale = mpq_class(counts[i].value()) / denom;
            for (size_t k = 0; k < numer.size(); ++k) poly[k] += numer[k] * scale;
        }

        CharPoly result;
        result.dim = d;
        result.coeff.assign(d + 1, 0);
        bool integral = true;
        for (unsigned k = 0; k <= d; ++k) {
            mpq_class c = poly[d - k];  // poly is ascending, CharPoly descending
            c.canonicalize();
            if (c.get_den() != 1) {
                integral = false;
                break;
            }
            result.coeff[k] = c.get_num();
        }
        if (!integral) {
            last_failure = "interpolated coefficients are not integers";
            continue;
        }
        if (result.coeff[0] != 1) {
            last_failure = "interpolated polynomial is not monic";
            continue;
        }
        try {
            whitney_from_charpoly(result);
        } catch (const error& e) {
            last_failure = e.what();
            continue;
        }
        if (result.evaluate(mpz_class(primes[d + 1])) != counts[d + 1].value()) {
            last_failure = "verification prime disagrees with the interpolation";
            continue;
        }
        return result;
    }
    throw error("interpolation failed: " + last_failure);
}

} // namespace chambers
