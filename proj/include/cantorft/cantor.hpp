#pragma once

// White/black interval recursion with exact dyadic endpoints, the signed-sum
// midpoint formula, and point-membership descent for E^(1) and the tensor
// set E. Shallow generations are materialized exactly; point queries descend
// with capped-precision enclosures and escalate, so verdicts are never
// floating-point guesses.

#include "cantorft/dyadic.hpp"
#include "cantorft/schedule.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace cantorft {

struct IntervalGeneration {
    std::int64_t k = 0;
    std::vector<std::pair<Dyadic, Dyadic>> whites;  // closed, 2^k of them
    std::vector<std::pair<Dyadic, Dyadic>> blacks;  // open, concentric, 2^k of them
};

// Materializes W_k and B_k. Requires exact Theta tables deep enough and
// 2^k within the item budget; deep schedules answer point queries instead.
inline IntervalGeneration generation(const Schedule& s, std::int64_t k,
                                     std::size_t max_items = std::size_t(1) << 20) {
    if (k < 0 || k > s.k_cap()) throw std::out_of_range("generation: k outside [0, k_cap]");
    if (k >= 62 || (std::uint64_t(1) << k) > max_items)
        throw std::invalid_argument("generation: 2^k exceeds materialization budget");
    if (k + 1 > s.exact_theta_limit())
        throw std::invalid_argument("generation: exact Theta tables exhausted at this depth");

    std::vector<Dyadic> lefts{Dyadic::ratio(BigInt(-1), 1)};  // -1/2
    for (std::int64_t j = 0; j < k; ++j) {
        Dyadic th_next = *s.big_theta_exact(j + 1);
        Dyadic th_cur = *s.big_theta_exact(j);
        std::vector<Dyadic> next;
        next.reserve(lefts.size() * 2);
        for (const Dyadic& l : lefts) {
            next.push_back(l);                      // left child [l, l + Theta_{j+1}]
            next.push_back(l + th_cur - th_next);   // right child [r - Theta_{j+1}, r]
        }
        lefts = std::move(next);
    }

    IntervalGeneration out;
    out.k = k;
    Dyadic th_k = *s.big_theta_exact(k);
    Dyadic th_k1 = *s.big_theta_exact(k + 1);
    out.whites.reserve(lefts.size());
    out.blacks.reserve(lefts.size());
    for (const Dyadic& l : lefts) {
        out.whites.emplace_back(l, l + th_k);
        out.blacks.emplace_back(l + th_k1, l + th_k - th_k1);
    }
    return out;
}

// Midpoints of B_k via { sum_{j<k} sigma_j (1-theta_j) Theta_j / 2 }, sorted.
inline std::vector<Dyadic> black_midpoints(const Schedule& s, std::int64_t k,
                                           std::size_t max_items = std::size_t(1) << 20) {
    if (k < 0 || k > s.k_cap()) throw std::out_of_range("black_midpoints: k outside [0, k_cap]");
    if (k >= 62 || (std::uint64_t(1) << k) > max_items)
        throw std::invalid_argument("black_midpoints: 2^k exceeds materialization budget");
    if (k > s.exact_theta_limit())
        throw std::invalid_argument("black_midpoints: exact Theta tables exhausted");

    std::vector<Dyadic> mids{Dyadic(0)};
    for (std::int64_t j = 0; j < k; ++j) {
        Dyadic c = ((*s.big_theta_exact(j)) - (*s.big_theta_exact(j + 1))).mul_pow2(-1);
        // (1-theta_j) Theta_j / 2 = (Theta_j - Theta_{j+1}) / 2
        std::vector<Dyadic> next;
        next.reserve(mids.size() * 2);
        for (const Dyadic& m : mids) {
            next.push_back(m - c);
            next.push_back(m + c);
        }
        mids = std::move(next);
    }
    std::sort(mids.begin(), mids.end());
    return mids;
}

enum class CantorKind { inside, in_black, outside_domain, undetermined };

struct CantorVerdict {
    CantorKind kind = CantorKind::undetermined;
    std::int64_t k = 0;   // depth reached (inside) or black generation (in_black)
    int parity = +1;      // (-1)^k for in_black
    bool k_in_S = false;  // whether the containing black's generation is in S

    bool is_inside() const { return kind == CantorKind::inside; }
};

namespace detail {

// One descent pass at fixed precision (prec = 0 means exact).
// Returns true when it reached a decision, false on ambiguity.
inline bool descend_pass(const Schedule& s, const Dyadic& x, std::int64_t depth, unsigned prec,
                         CantorVerdict& out) {
    const Dyadic half = Dyadic::half();
    if (x < -half || x > half) {
        out = {CantorKind::outside_domain, 0, +1, false};
        return true;
    }
    if (x == -half || x == half) {
        out = {CantorKind::inside, depth, +1, false};  // endpoints survive forever
        return true;
    }

    DInterval L = DInterval::exact(-half);
    DInterval TH = DInterval::exact(Dyadic(1));
    DInterval X = DInterval::exact(x);
    bool exact_mode = (prec == 0);
    const unsigned P = exact_mode ? 1u << 30 : prec;

    for (std::int64_t k = 0; k < depth; ++k) {
        if (exact_mode && k + 1 > s.exact_theta_limit()) return false;
        DInterval th_next = exact_mode ? DInterval::exact(*s.big_theta_exact(k + 1))
                                       : imul(TH, s.theta_interval(k, P), P);
        DInterval b1 = iadd(L, th_next, P);                  // left child right endpoint
        DInterval b2 = iadd(L, isub(TH, th_next, P), P);     // right child left endpoint

        if (exact_mode) {
            if (x == b1.lo || x == b2.lo) {
                out = {CantorKind::inside, depth, +1, false};  // becomes an endpoint
                return true;
            }
            if (x < b1.lo) {
                TH = th_next;  // left child, L unchanged
            } else if (x > b2.lo) {
                L = b2;
                TH = th_next;
            } else {
                out = {CantorKind::in_black, k, (k % 2 == 0) ? +1 : -1, s.in_S(k)};
                return true;
            }
        } else {
            if (x < b1.lo) {
                TH = th_next;
            } else if (x > b2.hi) {
                L = DInterval{b2.lo, b2.hi};
                TH = th_next;
            } else if (x > b1.hi && x < b2.lo) {
                out = {CantorKind::in_black, k, (k % 2 == 0) ? +1 : -1, s.in_S(k)};
                return true;
            } else {
                return false;  // within the rounding band of a boundary
            }
        }
    }
    out = {CantorKind::inside, depth, +1, false};
    return true;
}

}  // namespace detail

// Membership descent: Inside(depth) iff x in union W_depth; in_black
// identifies the unique open black interval containing x. Cost O(depth).
inline CantorVerdict in_cantor_1d(const Schedule& s, const Dyadic& x, std::int64_t depth) {
    if (depth < 0 || depth > s.k_cap()) throw std::out_of_range("depth outside [0, k_cap]");
    CantorVerdict v;
    if (detail::descend_pass(s, x, depth, 0, v)) return v;  // exact while tables last
    for (unsigned prec : {320u, 1536u, 8192u, 16384u})
        if (detail::descend_pass(s, x, depth, prec, v)) return v;
    return {CantorKind::undetermined, 0, +1, false};
}

struct TensorVerdict {
    bool inside = false;
    bool undetermined = false;
    std::vector<CantorVerdict> coords;
};

// x in E iff every coordinate lies in [-1/2,1/2] and some coordinate is in E^(1).
inline TensorVerdict in_E(const Schedule& s, std::span<const Dyadic> x, std::int64_t depth) {
    TensorVerdict out;
    bool any_inside = false, any_undet = false, all_in_box = true;
    for (const Dyadic& xi : x) {
        CantorVerdict v = in_cantor_1d(s, xi, depth);
        if (v.kind == CantorKind::outside_domain) all_in_box = false;
        if (v.kind == CantorKind::inside) any_inside = true;
        if (v.kind == CantorKind::undetermined) any_undet = true;
        out.coords.push_back(v);
    }
    out.inside = all_in_box && any_inside;
    out.undetermined = !out.inside && all_in_box && any_undet;
    return out;
}

}  // namespace cantorft
