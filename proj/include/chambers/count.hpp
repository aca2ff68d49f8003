#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>

#include "error.hpp"

namespace chambers {

/// Arbitrary-precision cardinality. Chamber counts, Whitney numbers and node
/// multiplicities outgrow 64-bit integers on medium-size inputs already, so
/// every countable quantity goes through this type. Non-negative by
/// construction; there is deliberately no subtraction.
class Count {
public:
    Count() : v_(0) {}
    Count(unsigned long n) : v_(n) {}
    explicit Count(mpz_class v) : v_(std::move(v)) {
        if (sgn(v_) < 0) throw error("Count must be non-negative");
    }

    static Count from_string(const std::string& s) {
        try {
            return Count(mpz_class(s, 10));
        } catch (const std::invalid_argument&) {
            throw error("cannot parse count '" + s + "'");
        }
    }

    const mpz_class& value() const { return v_; }
    std::string str() const { return v_.get_str(); }
    bool is_zero() const { return v_ == 0; }

    Count& operator+=(const Count& o) {
        v_ += o.v_;
        return *this;
    }
    Count& operator*=(const Count& o) {
        v_ *= o.v_;
        return *this;
    }
    friend Count operator+(Count a, const Count& b) { return a += b; }
    friend Count operator*(Count a, const Count& b) { return a *= b; }

    bool operator==(const Count& o) const { return v_ == o.v_; }
    bool operator!=(const Count& o) const { return v_ != o.v_; }
    bool operator<(const Count& o) const { return v_ < o.v_; }
    bool operator<=(const Count& o) const { return v_ <= o.v_; }
    bool operator>(const Count& o) const { return v_ > o.v_; }
    bool operator>=(const Count& o) const { return v_ >= o.v_; }

private:
    mpz_class v_;
};

} // namespace chambers
