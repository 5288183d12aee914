#pragma once

// Exact dyadic rationals m * 2^e with arbitrary-precision m, plus directed
// rounding and interval arithmetic on them. Everything the construction
// touches (dissection ratios, interval endpoints, Theta products) lives in
// this ring, so equality and order are decidable.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace cantorft {

using BigInt = boost::multiprecision::cpp_int;

namespace detail {

// cpp_int shifts of negative values misbehave for some operand shapes;
// all shifting here goes through explicit magnitudes.
inline BigInt shl(const BigInt& v, std::int64_t k) {
    if (v.sign() >= 0) return v << k;
    BigInt m = -v;
    m <<= k;
    return -m;
}
inline BigInt shr_floor(const BigInt& v, std::int64_t k) {
    if (v.sign() >= 0) return v >> k;
    BigInt m = -v;  // floor(-m / 2^k) = -ceil(m / 2^k)
    BigInt q = m >> k;
    BigInt r = m - (q << k);
    if (!r.is_zero()) ++q;
    return -q;
}
inline BigInt shr_ceil(const BigInt& v, std::int64_t k) {
    if (v.sign() < 0) {
        BigInt m = -v;
        return -(m >> k);
    }
    BigInt q = v >> k;
    BigInt r = v - (q << k);
    if (!r.is_zero()) ++q;
    return q;
}

}  // namespace detail

class Dyadic {
public:
    Dyadic() : num_(0), exp_(0) {}
    Dyadic(long long v) : num_(v), exp_(0) { normalize(); }
    Dyadic(BigInt num, std::int64_t exp) : num_(std::move(num)), exp_(exp) { normalize(); }

    // 2^e
    static Dyadic pow2(std::int64_t e) { return Dyadic(BigInt(1), e); }
    // p / 2^q
    static Dyadic ratio(BigInt p, std::int64_t q) { return Dyadic(std::move(p), -q); }
    static Dyadic half() { return Dyadic(BigInt(1), -1); }

    // 1 - 2^-a, for a >= 1
    static Dyadic one_minus_pow2(std::int64_t a) {
        if (a < 1) throw std::invalid_argument("one_minus_pow2: a must be >= 1");
        return Dyadic((BigInt(1) << a) - 1, -a);
    }

    const BigInt& num() const { return num_; }
    std::int64_t exp() const { return exp_; }

    bool is_zero() const { return num_.is_zero(); }
    int sign() const { return num_.sign(); }

    Dyadic operator-() const { return Dyadic(-num_, exp_); }

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        std::int64_t e = std::min(a.exp_, b.exp_);
        return Dyadic(detail::shl(a.num_, a.exp_ - e) + detail::shl(b.num_, b.exp_ - e), e);
    }
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
        return Dyadic(a.num_ * b.num_, a.exp_ + b.exp_);
    }
    Dyadic& operator+=(const Dyadic& o) { *this = *this + o; return *this; }
    Dyadic& operator-=(const Dyadic& o) { *this = *this - o; return *this; }
    Dyadic& operator*=(const Dyadic& o) { *this = *this * o; return *this; }

    Dyadic mul_pow2(std::int64_t e) const {
        if (is_zero()) return Dyadic();
        return Dyadic(num_, exp_ + e);
    }

    friend bool operator==(const Dyadic& a, const Dyadic& b) { return (a - b).is_zero(); }
    friend bool operator!=(const Dyadic& a, const Dyadic& b) { return !(a == b); }
    friend bool operator<(const Dyadic& a, const Dyadic& b) { return (a - b).sign() < 0; }
    friend bool operator>(const Dyadic& a, const Dyadic& b) { return (a - b).sign() > 0; }
    friend bool operator<=(const Dyadic& a, const Dyadic& b) { return (a - b).sign() <= 0; }
    friend bool operator>=(const Dyadic& a, const Dyadic& b) { return (a - b).sign() >= 0; }

    Dyadic abs() const { return sign() < 0 ? -*this : *this; }

    // Number of significant bits in the (odd) numerator.
    std::size_t bit_size() const {
        return num_.is_zero() ? 0 : boost::multiprecision::msb(boost::multiprecision::abs(num_)) + 1;
    }

    // floor(log2(|x|)); requires x != 0.
    std::int64_t floor_log2() const {
        if (is_zero()) throw std::domain_error("floor_log2 of zero");
        return static_cast<std::int64_t>(boost::multiprecision::msb(boost::multiprecision::abs(num_))) + exp_;
    }

    // Nearest double; overflow saturates, underflow flushes toward zero.
    double to_double() const {
        if (is_zero()) return 0.0;
        std::int64_t top = floor_log2();
        if (top > 1030) return sign() > 0 ? std::numeric_limits<double>::infinity()
                                          : -std::numeric_limits<double>::infinity();
        if (top < -1080) return 0.0;
        // keep 64 leading bits of the numerator
        BigInt a = boost::multiprecision::abs(num_);
        std::size_t bits = bit_size();
        std::int64_t shift = 0;
        if (bits > 64) {
            shift = static_cast<std::int64_t>(bits - 64);
            a >>= shift;
        }
        double m = static_cast<double>(a.convert_to<std::uint64_t>());
        return std::ldexp(sign() * m, static_cast<int>(exp_ + shift));
    }

    // Largest dyadic with mantissa of at most `prec` bits that is <= *this.
    Dyadic round_down(unsigned prec) const {
        if (is_zero() || bit_size() <= prec) return *this;
        std::int64_t drop = static_cast<std::int64_t>(bit_size() - prec);
        return Dyadic(detail::shr_floor(num_, drop), exp_ + drop);
    }
    // Smallest dyadic with mantissa of at most `prec` bits that is >= *this.
    Dyadic round_up(unsigned prec) const {
        if (is_zero() || bit_size() <= prec) return *this;
        std::int64_t drop = static_cast<std::int64_t>(bit_size() - prec);
        return Dyadic(detail::shr_ceil(num_, drop), exp_ + drop);
    }

    // Canonical text form "p/2^q" (q >= 0), integers printed plainly.
    std::string to_string() const {
        if (is_zero()) return "0";
        if (exp_ >= 0) return detail::shl(num_, exp_).str();
        return num_.str() + "/2^" + std::to_string(-exp_);
    }

    static Dyadic parse(const std::string& text) {
        auto fail = [&]() -> Dyadic {
            throw std::invalid_argument("not a dyadic rational: '" + text + "'");
        };
        auto pos = text.find('/');
        if (pos == std::string::npos) {
            for (std::size_t i = 0; i < text.size(); ++i) {
                char c = text[i];
                if (!(std::isdigit(static_cast<unsigned char>(c)) || (i == 0 && (c == '-' || c == '+'))))
                    return fail();
            }
            if (text.empty() || text == "-" || text == "+") return fail();
            return Dyadic(BigInt(text), 0);
        }
        std::string p = text.substr(0, pos), rest = text.substr(pos + 1);
        if (rest.rfind("2^", 0) != 0) return fail();
        std::string q = rest.substr(2);
        if (p.empty() || q.empty()) return fail();
        try {
            return Dyadic(BigInt(p), -static_cast<std::int64_t>(std::stoll(q)));
        } catch (const std::exception&) {
            return fail();
        }
    }

private:
    void normalize() {
        if (num_.is_zero()) { exp_ = 0; return; }
        bool neg = num_.sign() < 0;
        BigInt mag = neg ? BigInt(-num_) : num_;
        std::size_t tz = boost::multiprecision::lsb(mag);
        if (tz > 0) {
            mag >>= tz;
            num_ = neg ? BigInt(-mag) : mag;
            exp_ += static_cast<std::int64_t>(tz);
        }
    }

    BigInt num_;        // odd, or zero
    std::int64_t exp_;  // value = num_ * 2^exp_
};

// Closed interval [lo, hi] of dyadics; ops round outward to `prec` mantissa
// bits so deep products stay cheap while remaining rigorous enclosures.
struct DInterval {
    Dyadic lo, hi;

    static DInterval exact(const Dyadic& v) { return {v, v}; }
    static DInterval of(Dyadic a, Dyadic b) {
        if (a > b) std::swap(a, b);
        return {std::move(a), std::move(b)};
    }

    bool contains(const Dyadic& v) const { return lo <= v && v <= hi; }
    Dyadic width() const { return hi - lo; }
    Dyadic mid() const { return (lo + hi).mul_pow2(-1); }
    double mid_double() const { return mid().to_double(); }
    // Outward double pair (lo rounded down is not representable exactly in
    // general; to_double is nearest, so pad by one ulp-ish when reporting).
    double width_double() const { return width().to_double(); }

    DInterval neg() const { return {-hi, -lo}; }
};

inline DInterval iround(const DInterval& x, unsigned prec) {
    return {x.lo.round_down(prec), x.hi.round_up(prec)};
}

inline DInterval iadd(const DInterval& a, const DInterval& b, unsigned prec) {
    return iround({a.lo + b.lo, a.hi + b.hi}, prec);
}

inline DInterval isub(const DInterval& a, const DInterval& b, unsigned prec) {
    return iround({a.lo - b.hi, a.hi - b.lo}, prec);
}

inline DInterval imul(const DInterval& a, const DInterval& b, unsigned prec) {
    Dyadic p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    Dyadic lo = p1, hi = p1;
    for (const Dyadic* p : {&p2, &p3, &p4}) {
        if (*p < lo) lo = *p;
        if (*p > hi) hi = *p;
    }
    return iround({lo, hi}, prec);
}

inline DInterval iscale2(const DInterval& a, std::int64_t e) {
    return {a.lo.mul_pow2(e), a.hi.mul_pow2(e)};
}

inline DInterval ihull(const DInterval& a, const DInterval& b) {
    return {a.lo < b.lo ? a.lo : b.lo, a.hi > b.hi ? a.hi : b.hi};
}

inline DInterval iabs(const DInterval& a) {
    if (a.lo.sign() >= 0) return a;
    if (a.hi.sign() <= 0) return a.neg();
    Dyadic m = (-a.lo) > a.hi ? -a.lo : a.hi;
    return {Dyadic(), m};
}

}  // namespace cantorft
