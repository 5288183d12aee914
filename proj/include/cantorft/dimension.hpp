#pragma once

// Finite-scale dimension diagnostics: covering counts and the box-counting
// quotient for the upper direction, the natural measure's Frostman-type
// ratio on canonical test boxes for the lower direction. Everything is
// labeled by its scale k; nothing here extrapolates to the limit.

#include "cantorft/dyadic.hpp"
#include "cantorft/schedule.hpp"
#include "cantorft/signed_log.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cantorft {

struct CoveringEstimate {
    SignedLog count;                  // 2^k * ceil(Theta_k^{-(d-1)}) * d
    std::optional<BigInt> count_exact;
    double dim_estimate = 0.0;        // log count / log(1/Theta_k)
};

inline CoveringEstimate covering_estimate(const Schedule& s, std::int64_t k, int d) {
    if (d < 1) throw std::invalid_argument("covering_estimate: d >= 1");
    if (k < 1 || k > s.k_cap())
        throw std::invalid_argument("covering_estimate: k must be in [1, k_cap] (k = 0 divides by log 1)");
    double log2_theta = s.log2_big_theta(k);
    double log2_count = static_cast<double>(k) + static_cast<double>(d - 1) * (-log2_theta) +
                        std::log2(static_cast<double>(d));
    CoveringEstimate out;
    out.count = SignedLog::from_pow2(1, log2_count);
    out.dim_estimate = log2_count / (-log2_theta);
    if (log2_count < 62) {
        // exact integer count: 2^k * ceil(Theta_k^{-(d-1)}) * d
        if (d == 1) {
            out.count_exact = BigInt(1) << k;
        } else if (auto th = s.big_theta_exact(k)) {
            // ceil(Theta^{-(d-1)}) with Theta = m 2^e: Theta^{-(d-1)} = 2^{-e(d-1)} / m^{d-1}
            BigInt md = 1;
            for (int i = 0; i < d - 1; ++i) md *= th->num();
            std::int64_t e = -th->exp() * (d - 1);
            BigInt num = BigInt(1) << e;
            BigInt c = (num + md - 1) / md;
            out.count_exact = (c << k) * d;
        }
    }
    return out;
}

// mu(W_k x T) = 2^{-k} |T|: exact mass of an axis-aligned box, the Cantor
// axis being coordinate 0. General boxes count every generation-k white met.
inline Dyadic natural_measure_mass(const Schedule& s, std::int64_t k,
                                   const std::vector<std::pair<Dyadic, Dyadic>>& box) {
    if (box.empty()) throw std::invalid_argument("natural_measure_mass: empty box");
    if (k < 0 || k + 1 > s.exact_theta_limit())
        throw std::invalid_argument("natural_measure_mass: k beyond exact Theta budget");
    const Dyadic a0 = box[0].first, b0 = box[0].second;
    if (a0 > b0) throw std::invalid_argument("natural_measure_mass: box side reversed");

    // cross-section measure prod_{i>=1} |box_i intersect [-1/2,1/2]|
    Dyadic cross(1);
    const Dyadic half = Dyadic::half();
    for (std::size_t i = 1; i < box.size(); ++i) {
        Dyadic lo = box[i].first < -half ? -half : box[i].first;
        Dyadic hi = box[i].second > half ? half : box[i].second;
        if (hi <= lo) return Dyadic(0);
        cross *= hi - lo;
    }

    // count generation-k whites meeting [a0, b0]
    struct Walker {
        const Schedule& s;
        const Dyadic &a, &b;
        std::int64_t k;
        BigInt count(const Dyadic& l, std::int64_t gen) {
            Dyadic r = l + *s.big_theta_exact(gen);
            if (b < l || a > r) return 0;
            if (a <= l && r <= b) return BigInt(1) << (k - gen);
            if (gen == k) return 1;
            Dyadic tn = *s.big_theta_exact(gen + 1);
            return count(l, gen + 1) + count(l + (r - l) - tn, gen + 1);
        }
    } walker{s, a0, b0, k};
    BigInt n = walker.count(Dyadic::ratio(BigInt(-1), 1), 0);
    return Dyadic(n, -k) * cross;
}

struct FrostmanRecord {
    std::int64_t k = 0;
    double ratio_single = 0.0;  // mu(U)/diam(U)^{d-eps}, U = one white box
    double ratio_pair = 0.0;    // U spanning two sibling whites (parent span)
    double worst = 0.0;
    double bound = 0.0;  // 4 * 2^{d-1}
    bool holds = false;
};

struct FrostmanReport {
    FrostmanRecord record;
    std::int64_t empirical_N_eps = -1;  // smallest k0 with Theta_k^{1/k} >= 2^{-1/(1-eps)} onward
};

// Worst mu(U)/diam(U)^{d-eps} over the canonical scale-k test boxes:
// one white W_k (and its (d-1)-cube cross-section of matching side), and the
// span of the two sibling whites inside one W_{k-1}.
inline FrostmanReport frostman_ratio(const Schedule& s, std::int64_t k, int d, double eps) {
    if (k < 1 || k > s.k_cap()) throw std::invalid_argument("frostman_ratio: k in [1, k_cap]");
    if (d < 1) throw std::invalid_argument("frostman_ratio: d >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("frostman_ratio: eps > 0");

    auto ratio_log2 = [&](double log2_span, double log2_mass1d) {
        // box = span x cube(side span): mu = mass1d * span^{d-1}, diam = span sqrt(d)
        double log2_mu = log2_mass1d + static_cast<double>(d - 1) * log2_span;
        double log2_diam = log2_span + 0.5 * std::log2(static_cast<double>(d));
        return log2_mu - (static_cast<double>(d) - eps) * log2_diam;
    };

    FrostmanReport rep;
    FrostmanRecord& r = rep.record;
    r.k = k;
    r.bound = 4.0 * std::exp2(static_cast<double>(d - 1));
    r.ratio_single = std::exp2(ratio_log2(s.log2_big_theta(k), static_cast<double>(-k)));
    r.ratio_pair = std::exp2(ratio_log2(s.log2_big_theta(k - 1), static_cast<double>(-k + 1)));
    r.worst = std::max(r.ratio_single, r.ratio_pair);
    r.holds = r.worst <= r.bound;

    const double target = -1.0 / (1.0 - eps);  // need log2 Theta_k / k >= target
    std::int64_t n_eps = -1;
    for (std::int64_t kk = s.k_cap(); kk >= 1; --kk) {
        if (s.log2_big_theta(kk) / static_cast<double>(kk) >= target)
            n_eps = kk;
        else
            break;
    }
    rep.empirical_N_eps = n_eps;
    return rep;
}

struct DimensionRecord {
    std::int64_t k = 0;
    double log2_theta = 0.0;
    double count_log2 = 0.0;
    double dim_estimate = 0.0;
    double frostman_worst = 0.0;
    bool frostman_holds = false;
};

struct DimensionReport {
    ScheduleSpec schedule;
    int d = 1;
    double eps = 0.0;
    std::int64_t empirical_N_eps = -1;
    std::vector<DimensionRecord> records;
};

inline DimensionReport dimension_report(const Schedule& s, std::int64_t kmax, int d, double eps) {
    DimensionReport rep;
    rep.schedule = s.spec();
    rep.d = d;
    rep.eps = eps;
    std::int64_t step = std::max<std::int64_t>(1, kmax / 64);
    for (std::int64_t k = 1; k <= kmax; k += step) {
        auto ce = covering_estimate(s, k, d);
        auto fr = frostman_ratio(s, k, d, eps);
        rep.records.push_back({k, s.log2_big_theta(k), ce.count.log2_mag, ce.dim_estimate,
                               fr.record.worst, fr.record.holds});
        rep.empirical_N_eps = fr.empirical_N_eps;
    }
    return rep;
}

}  // namespace cantorft
