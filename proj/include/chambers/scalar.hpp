#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <utility>

#include "error.hpp"

namespace chambers {

/// Exact scalar in Q (field() == 0) or in the real quadratic field Q(sqrt(m))
/// for squarefree m >= 2, stored as the pair p + q*sqrt(m) with rational p, q.
/// All arithmetic is exact; GMP keeps the rational parts canonical.
///
/// Scalars from different fields never mix silently: binary operations throw
/// on a field mismatch, and rationals are lifted into a quadratic field
/// explicitly via promoted().
class FieldScalar {
public:
    FieldScalar() : m_(0) {}

    static FieldScalar rational(mpq_class r) {
        if (r.get_den() == 0) throw error("zero denominator");
        r.canonicalize();
        FieldScalar s;
        s.p_ = std::move(r);
        return s;
    }

    static FieldScalar rational(long num, long den = 1) {
        if (den == 0) throw error("zero denominator");
        mpq_class r(num, den);
        r.canonicalize();
        return rational(std::move(r));
    }

    static FieldScalar quadratic(mpq_class p, mpq_class q, unsigned long m) {
        check_field_index(m);
        if (p.get_den() == 0 || q.get_den() == 0) throw error("zero denominator");
        p.canonicalize();
        q.canonicalize();
        FieldScalar s;
        s.m_ = m;
        s.p_ = std::move(p);
        s.q_ = std::move(q);
        return s;
    }

    static FieldScalar zero(unsigned long m) {
        return m == 0 ? FieldScalar() : quadratic(0, 0, m);
    }

    static FieldScalar one(unsigned long m) {
        return m == 0 ? rational(1) : quadratic(1, 0, m);
    }

    /// Parses the textual grammar: "7", "-3/4", "1/2+3/2*sqrt(5)",
    /// "2*sqrt(5)", "-sqrt(5)", "1-sqrt(5)". Whitespace is ignored. The sqrt
    /// argument must equal m; plain rationals are accepted in any field and
    /// lifted. m == 0 means plain Q and rejects sqrt terms.
    static FieldScalar parse(const std::string& text, unsigned long m = 0);

    unsigned long field() const { return m_; }
    const mpq_class& rat() const { return p_; }
    const mpq_class& irr() const { return q_; }

    bool is_zero() const { return p_ == 0 && q_ == 0; }

    /// Sign under the real embedding with sqrt(m) > 0: -1, 0 or +1.
    int compare_zero() const {
        int sp = sgn(p_), sq = sgn(q_);
        if (sq == 0) return sp;
        if (sp == 0) return sq;
        if (sp == sq) return sp;
        // Opposite signs: compare |p| against |q|*sqrt(m) via squares.
        mpq_class disc = p_ * p_ - mpq_class(static_cast<unsigned long>(m_)) * q_ * q_;
        return sp * sgn(disc);
    }

    /// Lift into Q(sqrt(m)). No-op when already there; a quadratic scalar
    /// cannot move to a different field.
    FieldScalar promoted(unsigned long m) const {
        if (m_ == m) return *this;
        if (m_ != 0) throw error("cannot promote " + field_name(m_) + " scalar to " + field_name(m));
        return quadratic(p_, 0, m);
    }

    FieldScalar operator-() const {
        FieldScalar s(*this);
        s.p_ = -s.p_;
        s.q_ = -s.q_;
        return s;
    }

    FieldScalar& operator+=(const FieldScalar& o) {
        check_same_field(*this, o);
        p_ += o.p_;
        q_ += o.q_;
        return *this;
    }

    FieldScalar& operator-=(const FieldScalar& o) {
        check_same_field(*this, o);
        p_ -= o.p_;
        q_ -= o.q_;
        return *this;
    }

    FieldScalar& operator*=(const FieldScalar& o) {
        check_same_field(*this, o);
        if (m_ == 0) {
            p_ *= o.p_;
            return *this;
        }
        mpq_class p = p_ * o.p_ + mpq_class(static_cast<unsigned long>(m_)) * q_ * o.q_;
        mpq_class q = p_ * o.q_ + q_ * o.p_;
        p_ = std::move(p);
        q_ = std::move(q);
        return *this;
    }

    FieldScalar& operator/=(const FieldScalar& o) { return *this *= o.inverse(); }

    friend FieldScalar operator+(FieldScalar a, const FieldScalar& b) { return a += b; }
    friend FieldScalar operator-(FieldScalar a, const FieldScalar& b) { return a -= b; }
    friend FieldScalar operator*(FieldScalar a, const FieldScalar& b) { return a *= b; }
    friend FieldScalar operator/(FieldScalar a, const FieldScalar& b) { return a /= b; }

    FieldScalar inverse() const {
        if (is_zero()) throw error("division by zero");
        if (m_ == 0) {
            FieldScalar s;
            s.p_ = 1 / p_;
            return s;
        }
        // (p + q*sqrt(m))^-1 = (p - q*sqrt(m)) / (p^2 - m*q^2); the norm is
        // nonzero because sqrt(m) is irrational.
        mpq_class norm = p_ * p_ - mpq_class(static_cast<unsigned long>(m_)) * q_ * q_;
        FieldScalar s;
        s.m_ = m_;
        s.p_ = p_ / norm;
        s.q_ = -q_ / norm;
        return s;
    }

    /// Equality is exact; scalars from different fields are simply unequal.
    bool operator==(const FieldScalar& o) const { return m_ == o.m_ && p_ == o.p_ && q_ == o.q_; }
    bool operator!=(const FieldScalar& o) const { return !(*this == o); }

    /// Total order under the real embedding. Same field required.
    bool operator<(const FieldScalar& o) const { return (*this - o).compare_zero() < 0; }
    bool operator>(const FieldScalar& o) const { return o < *this; }
    bool operator<=(const FieldScalar& o) const { return !(o < *this); }
    bool operator>=(const FieldScalar& o) const { return !(*this < o); }

    /// Deterministic rendering within the parse grammar: "num/den" for
    /// rational values, "p+q*sqrt(m)" (with signs folded and trivial parts
    /// dropped) for quadratic ones. parse(str(), field()) round-trips.
    std::string str() const {
        if (m_ == 0 || q_ == 0) return p_.get_str();
        std::string root = sqrt_str(abs(q_));
        if (p_ == 0) return sgn(q_) < 0 ? "-" + root : root;
        return p_.get_str() + (sgn(q_) < 0 ? "-" : "+") + root;
    }

    static std::string field_name(unsigned long m) {
        return m == 0 ? "Q" : "Q(sqrt(" + std::to_string(m) + "))";
    }

private:
    unsigned long m_;
    mpq_class p_, q_;

    std::string sqrt_str(const mpq_class& coeff) const {
        std::string root = "sqrt(" + std::to_string(m_) + ")";
        return coeff == 1 ? root : coeff.get_str() + "*" + root;
    }

    static void check_field_index(unsigned long m) {
        if (m < 2) throw error("quadratic field index must be >= 2");
        if (m > (1ul << 32)) throw error("quadratic field index too large");
        for (unsigned long i = 2; i * i <= m; ++i)
            if (m % (i * i) == 0)
                throw error("field index " + std::to_string(m) + " is not squarefree");
    }

    static void check_same_field(const FieldScalar& a, const FieldScalar& b) {
        if (a.m_ != b.m_)
            throw error("field mismatch: " + field_name(a.m_) + " vs " + field_name(b.m_));
    }
};

inline FieldScalar FieldScalar::parse(const std::string& text, unsigned long m) {
    const std::string& s = text;

    auto fail = [&](const std::string& why) -> void {
        throw error("cannot parse scalar '" + text + "': " + why);
    };

    size_t pos = 0;
    auto skip_ws = [&]() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    };
    auto parse_uint = [&]() -> std::string {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected digits at position " + std::to_string(start));
        return s.substr(start, pos - start);
    };

    struct Term {
        mpq_class coeff;
        bool is_sqrt = false;
        unsigned long arg = 0;
    };

    auto parse_term = [&](bool sign_required) -> Term {
        Term t;
        int sign = 1;
        skip_ws();
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            if (s[pos] == '-') sign = -1;
            ++pos;
        } else if (sign_required) {
            fail("expected '+' or '-' at position " + std::to_string(pos));
        }
        auto parse_sqrt_arg = [&]() {
            pos += 5; // "sqrt("
            std::string arg = parse_uint();
            skip_ws();
            if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
            ++pos;
            t.is_sqrt = true;
            t.arg = std::stoul(arg);
        };
        skip_ws();
        if (s.compare(pos, 5, "sqrt(") == 0) {
            t.coeff = 1;
            parse_sqrt_arg();
        } else {
            mpz_class num(parse_uint(), 10);
            mpz_class den(1);
            skip_ws();
            if (pos < s.size() && s[pos] == '/') {
                ++pos;
                den = mpz_class(parse_uint(), 10);
                if (den == 0) fail("zero denominator");
            }
            t.coeff = mpq_class(num, den);
            t.coeff.canonicalize();
            skip_ws();
            if (pos < s.size() && s[pos] == '*') {
                ++pos;
                skip_ws();
                if (s.compare(pos, 5, "sqrt(") != 0) fail("expected sqrt( after '*'");
                parse_sqrt_arg();
            }
        }
        if (sign < 0) t.coeff = -t.coeff;
        return t;
    };

    Term first = parse_term(false);
    skip_ws();
    bool have_second = pos < s.size();
    Term second;
    if (have_second) second = parse_term(true);
    skip_ws();
    if (pos != s.size()) fail("trailing characters at position " + std::to_string(pos));

    mpq_class p = 0, q = 0;
    unsigned long arg = 0;
    auto absorb = [&](const Term& t) {
        if (t.is_sqrt) {
            if (arg != 0) fail("more than one sqrt term");
            arg = t.arg;
            q = t.coeff;
        } else {
            p = t.coeff;
        }
    };
    absorb(first);
    if (have_second) {
        if (first.is_sqrt == second.is_sqrt) fail("expected one rational and one sqrt term");
        absorb(second);
    }

    if (arg != 0) {
        if (m == 0) throw error("scalar '" + text + "' uses " + field_name(arg) + " in a rational context");
        if (arg != m)
            throw error("scalar '" + text + "' uses " + field_name(arg) + " inside " + field_name(m));
    }
    if (m == 0) return rational(std::move(p));
    return quadratic(std::move(p), std::move(q), m);
}

} // namespace chambers
