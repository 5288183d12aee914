#pragma once

// Sign plus log2-magnitude representation for products like 2^k Theta_k
// prod cos(...) whose magnitudes overflow or underflow doubles long before
// the mathematics becomes uninteresting.

#include "cantorft/dyadic.hpp"

#include <cmath>
#include <limits>

namespace cantorft {

struct SignedLog {
    int sign = 0;           // -1, 0, +1
    double log2_mag = -std::numeric_limits<double>::infinity();

    static SignedLog zero() { return {}; }
    static SignedLog one() { return {1, 0.0}; }

    static SignedLog from_double(double v) {
        if (v == 0.0) return zero();
        return {v > 0 ? 1 : -1, std::log2(std::fabs(v))};
    }

    static SignedLog from_pow2(int sign, double log2_mag) {
        if (sign == 0) return zero();
        return {sign, log2_mag};
    }

    static SignedLog from_dyadic(const Dyadic& v) {
        if (v.is_zero()) return zero();
        // log2(|m|) + e with |m| reduced to double through its top bits
        Dyadic a = v.abs();
        std::int64_t top = a.floor_log2();
        // scale into [1,2) exactly: a * 2^-top
        double frac = a.mul_pow2(-top).to_double();
        return {v.sign(), static_cast<double>(top) + std::log2(frac)};
    }

    bool is_zero() const { return sign == 0; }

    double to_double() const {
        if (sign == 0) return 0.0;
        return sign * std::exp2(log2_mag);
    }

    friend SignedLog operator*(const SignedLog& a, const SignedLog& b) {
        if (a.sign == 0 || b.sign == 0) return zero();
        return {a.sign * b.sign, a.log2_mag + b.log2_mag};
    }
    SignedLog& operator*=(const SignedLog& o) { *this = *this * o; return *this; }

    SignedLog mul_pow2(double e) const {
        if (sign == 0) return zero();
        return {sign, log2_mag + e};
    }

    SignedLog abs() const { return {sign == 0 ? 0 : 1, log2_mag}; }

    // |a| < |b|
    friend bool abs_less(const SignedLog& a, const SignedLog& b) {
        if (a.sign == 0) return b.sign != 0;
        if (b.sign == 0) return false;
        return a.log2_mag < b.log2_mag;
    }
};

}  // namespace cantorft
