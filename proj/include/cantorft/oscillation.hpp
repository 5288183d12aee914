#pragma once

// g^(1), g, white-interval averages with the closed-form series and the
// one-step recursion, the oscillation lower bound for consecutive S pairs,
// and divergence witnesses (the nested box pairs whose averages refuse to
// converge at points of E).

#include "cantorft/cantor.hpp"
#include "cantorft/dyadic.hpp"
#include "cantorft/schedule.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cantorft {

enum class G1Value { minus_one, zero, plus_one, undetermined };

inline G1Value g1_from_verdict(const CantorVerdict& v) {
    switch (v.kind) {
        case CantorKind::outside_domain: return G1Value::zero;
        case CantorKind::in_black:
            if (!v.k_in_S) return G1Value::zero;
            return v.parity > 0 ? G1Value::plus_one : G1Value::minus_one;
        case CantorKind::inside: return G1Value::undetermined;
        default: return G1Value::undetermined;
    }
}

inline G1Value g1_eval(const Schedule& s, const Dyadic& x, std::int64_t depth) {
    return g1_from_verdict(in_cantor_1d(s, x, depth));
}

// Product over coordinates; a determined zero wins over undetermined factors.
inline G1Value g_eval(const Schedule& s, std::span<const Dyadic> x, std::int64_t depth) {
    int sign = 1;
    bool undet = false;
    for (const Dyadic& xi : x) {
        switch (g1_eval(s, xi, depth)) {
            case G1Value::zero: return G1Value::zero;
            case G1Value::minus_one: sign = -sign; break;
            case G1Value::plus_one: break;
            case G1Value::undetermined: undet = true; break;
        }
    }
    if (undet) return G1Value::undetermined;
    return sign > 0 ? G1Value::plus_one : G1Value::minus_one;
}

// ---- white-interval averages -------------------------------------------

struct WhiteAverage {
    DInterval partial;               // enclosure of the truncated series
    Dyadic tail;                     // certified bound for the dropped tail
    DInterval full;                  // partial +- tail
    std::optional<Dyadic> exact_partial;  // exact truncated sum, when affordable
    std::int64_t jmax = 0;
};

// Certified tail of sum_{j in S, j > jmax} 2^{j-k} (1-2theta_j) Theta_j / Theta_k:
// each S member past jmax shrinks the running factor by at least 2, so the
// whole tail is at most 2^{E(k) - E(jmax+1) + 1}.
inline Dyadic average_tail_bound(const Schedule& s, std::int64_t k, std::int64_t jmax) {
    std::int64_t e = s.exponent_drift(k) - s.exponent_drift(jmax + 1) + 1;
    return Dyadic::pow2(e);
}

// a_k = avg over any W_k of g^(1), truncated at jmax:
//   sum_{j in S, k <= j <= jmax} (-1)^j (1-2theta_j) 2^{j-k} Theta_j/Theta_k.
inline WhiteAverage white_average(const Schedule& s, std::int64_t k, std::int64_t jmax,
                                  unsigned prec = 192) {
    if (k < 0 || k > jmax || jmax > s.k_cap())
        throw std::out_of_range("white_average: need 0 <= k <= jmax <= k_cap");

    WhiteAverage out;
    out.jmax = jmax;
    DInterval sum = DInterval::exact(Dyadic(0));
    DInterval P = DInterval::exact(Dyadic(1));  // prod_{i in [k,j), i not in S} (1-alpha_i)
    bool exact_ok = jmax <= s.exact_theta_limit();
    Dyadic exact_sum(0);

    for (std::int64_t j = k; j <= jmax; ++j) {
        if (s.in_S(j)) {
            int w = s.w_of(j);
            Dyadic amp = Dyadic(1) - Dyadic::pow2(1 - w);  // 1 - 2 theta_j
            std::int64_t shift = s.exponent_drift(k) - s.exponent_drift(j);
            DInterval term = imul(P, DInterval::exact(amp.mul_pow2(shift)), prec);
            if (j % 2 != 0) term = term.neg();
            sum = iadd(sum, term, prec);
            if (exact_ok) {
                // 2^{j-k} Theta_j / Theta_k exactly, via the cached Theta prefix
                Dyadic ratio = Dyadic(1);
                for (std::int64_t i = k; i < j; ++i) ratio *= s.theta(i);
                Dyadic t = amp * ratio.mul_pow2(j - k);
                exact_sum += (j % 2 == 0) ? t : -t;
            }
        } else {
            P = imul(P, s.one_minus_alpha_interval(j, prec), prec);
        }
    }
    out.partial = sum;
    out.tail = average_tail_bound(s, k, jmax);
    out.full = iadd(sum, DInterval{-out.tail, out.tail}, prec);
    if (exact_ok) out.exact_partial = exact_sum;
    return out;
}

// Rigorous a_k enclosures for all k <= kmax, by running the recursion
//   a_k = 2 theta_k a_{k+1} + [k in S] (-1)^k (1 - 2 theta_k)
// downward from the trivial seed |a| <= 1 at kmax+1.
class AverageTable {
public:
    AverageTable(const Schedule& s, std::int64_t kmax, unsigned prec = 192)
        : kmax_(kmax) {
        if (kmax < 0 || kmax > s.k_cap())
            throw std::out_of_range("AverageTable: kmax must lie in [0, k_cap]");
        a_.assign(static_cast<std::size_t>(kmax) + 2, DInterval{Dyadic(-1), Dyadic(1)});
        for (std::int64_t k = kmax; k >= 0; --k) {
            DInterval next = a_[static_cast<std::size_t>(k + 1)];
            DInterval val;
            if (s.in_S(k)) {
                int w = s.w_of(k);
                DInterval scaled = iscale2(DInterval::exact(Dyadic(1)), 1 - w);  // 2 theta_k
                val = imul(next, scaled, prec);
                Dyadic c = Dyadic(1) - Dyadic::pow2(1 - w);
                if (k % 2 != 0) c = -c;
                val = iadd(val, DInterval::exact(c), prec);
            } else {
                val = imul(next, s.one_minus_alpha_interval(k, prec), prec);
            }
            // |a_k| <= 1 always; intersecting keeps enclosures tight at the seed
            if (val.lo < Dyadic(-1)) val.lo = Dyadic(-1);
            if (val.hi > Dyadic(1)) val.hi = Dyadic(1);
            a_[static_cast<std::size_t>(k)] = val;
        }
    }

    std::int64_t kmax() const { return kmax_; }
    const DInterval& at(std::int64_t k) const {
        if (k < 0 || k > kmax_ + 1) throw std::out_of_range("AverageTable::at");
        return a_[static_cast<std::size_t>(k)];
    }

private:
    std::int64_t kmax_;
    std::vector<DInterval> a_;
};

struct OscillationGap {
    DInterval gap;       // |a_k - a_{k+1}|
    Dyadic lower_bound;  // 2 (1-2theta_k)(1-2theta_{k+1})
    bool certified;      // gap.lo >= lower_bound
};

inline OscillationGap oscillation_gap(const Schedule& s, std::int64_t k, const AverageTable& table,
                                      unsigned prec = 192) {
    if (!(k >= 0 && k + 1 <= s.k_cap() && s.in_S(k) && s.in_S(k + 1)))
        throw std::invalid_argument("oscillation_gap: needs k, k+1 in S");
    OscillationGap out;
    out.gap = iabs(isub(table.at(k), table.at(k + 1), prec));
    Dyadic c1 = Dyadic(1) - Dyadic::pow2(1 - s.w_of(k));
    Dyadic c2 = Dyadic(1) - Dyadic::pow2(1 - s.w_of(k + 1));
    out.lower_bound = (c1 * c2).mul_pow2(1);
    out.certified = out.gap.lo >= out.lower_bound;
    return out;
}

// ---- divergence witnesses ----------------------------------------------

struct BadPoint : std::runtime_error {
    explicit BadPoint(const std::string& why) : std::runtime_error("bad point: " + why) {}
};
struct InsufficientGoodPairs : std::runtime_error {
    explicit InsufficientGoodPairs(const std::string& why)
        : std::runtime_error("insufficient good pairs: " + why) {}
};

struct WitnessBox {
    // per-coordinate closed intervals; enclosures have width 0 when exact
    std::vector<DInterval> corner_lo, corner_hi;
    bool corners_exact = true;
};

struct WitnessPairRecord {
    std::int64_t k = 0, kp = 0;  // oriented: |a_k| > 4eps^2, both averages over gen k / kp
    DInterval avg_k, avg_kp;     // 1-d averages
    Dyadic gap_lower;            // certified lower bound for |avg over Q_even - Q_odd|
    Dyadic threshold;            // 2^{2d+1} eps^{2d}
    double eccentricity = 1.0;   // of the mixed box
    WitnessBox q_even, q_odd;
};

struct DivergenceWitness {
    std::vector<Dyadic> point;
    Dyadic eps;
    int d = 1;
    std::int64_t cantor_axis = 0;  // the coordinate carrying the k/k' swap
    std::vector<WitnessPairRecord> pairs;
};

namespace detail {

// One routing pass toward the generation-`gen` white containing x.
// prec = 0 runs exactly while the Theta tables last; returns false on
// ambiguity (point within the rounding band of a child boundary).
inline bool white_interval_pass(const Schedule& s, const Dyadic& x, std::int64_t gen,
                                unsigned prec, std::pair<DInterval, DInterval>& out) {
    const bool exact_mode = (prec == 0);
    const unsigned P = exact_mode ? 1u << 30 : prec;
    DInterval L = DInterval::exact(Dyadic::ratio(BigInt(-1), 1));
    DInterval TH = DInterval::exact(Dyadic(1));
    for (std::int64_t k = 0; k < gen; ++k) {
        if (exact_mode && k + 1 > s.exact_theta_limit()) return false;
        DInterval th_next = exact_mode ? DInterval::exact(*s.big_theta_exact(k + 1))
                                       : imul(TH, s.theta_interval(k, P), P);
        DInterval b1 = iadd(L, th_next, P);
        DInterval b2 = iadd(L, isub(TH, th_next, P), P);
        if (exact_mode) {
            if (x <= b1.lo) {
                TH = th_next;  // ties: x is the left child's right endpoint
            } else if (x >= b2.lo) {
                L = b2;
                TH = th_next;
            } else {
                throw BadPoint("coordinate left the white tree during box construction");
            }
        } else {
            if (x < b1.lo) {
                TH = th_next;
            } else if (x > b2.hi) {
                L = DInterval{b2.lo, b2.hi};
                TH = th_next;
            } else {
                return false;
            }
        }
    }
    out = {L, iadd(L, TH, P)};
    return true;
}

// Enclosure of the generation-`gen` white interval containing x. The caller
// must already know x survives to this generation.
inline std::pair<DInterval, DInterval> white_interval_at(const Schedule& s, const Dyadic& x,
                                                         std::int64_t gen, unsigned prec) {
    std::pair<DInterval, DInterval> out;
    if (white_interval_pass(s, x, gen, 0, out)) return out;
    for (unsigned p : {prec, 4 * prec, 16 * prec, 16384u})
        if (white_interval_pass(s, x, gen, p, out)) return out;
    throw BadPoint("coordinate too entangled with white boundaries to materialize its box");
}

}  // namespace detail

// Finds `count` certified pairs (k(a), k'(a)) from the schedule's good pairs
// and builds the box pairs Q_{2a}, Q_{2a+1} around x. Box averages come from
// the tensor identity (product of 1-d averages), never from sampling.
inline DivergenceWitness divergence_witness(const Schedule& s, std::span<const Dyadic> x,
                                            const Dyadic& eps, int count, unsigned prec = 192) {
    const int d = static_cast<int>(x.size());
    if (d < 1) throw BadPoint("empty point");
    if (!(eps > Dyadic(0) && eps < Dyadic::pow2(-s.M())))
        throw std::invalid_argument("divergence_witness: need eps in (0, 2^-M)");

    const std::int64_t horizon = s.k_cap();
    std::vector<CantorVerdict> verdicts;
    std::int64_t cantor_axis = -1;
    for (int i = 0; i < d; ++i) {
        CantorVerdict v = in_cantor_1d(s, x[i], horizon);
        if (v.kind == CantorKind::outside_domain) throw BadPoint("coordinate outside [-1/2,1/2]");
        if (v.kind == CantorKind::undetermined)
            throw BadPoint("coordinate undetermined at the horizon");
        if (v.kind == CantorKind::inside && cantor_axis < 0) cantor_axis = i;
        if (v.kind == CantorKind::in_black && !v.k_in_S)
            throw BadPoint("coordinate sits in a black interval of a generation outside S; "
                           "g vanishes nearby, so x is a Lebesgue point");
        verdicts.push_back(v);
    }
    if (cantor_axis < 0)
        throw BadPoint("no coordinate lies in E^(1); the complement of E is open, so x is a "
                       "Lebesgue point");

    // Depth below which g^(1) is not yet locked to +-1 around non-Cantor coords:
    // require Theta_{k} <= dist(x_i, boundary of its black interval), via
    // Theta_k <= 2^{-k*}.
    std::int64_t k_min = 0;
    for (int i = 0; i < d; ++i) {
        if (verdicts[i].kind != CantorKind::in_black) continue;
        // recover the black interval enclosure by re-descending
        auto [wl, wr] = detail::white_interval_at(s, x[i], verdicts[i].k, prec);
        DInterval th_next = imul(isub(wr, wl, prec),
                                 s.theta_interval(verdicts[i].k, prec), prec);
        DInterval bl = iadd(wl, th_next, prec);
        DInterval br = isub(wr, th_next, prec);
        Dyadic dist = x[i] - bl.hi;
        Dyadic dist2 = br.lo - x[i];
        if (dist2 < dist) dist = dist2;
        if (dist.sign() <= 0) throw BadPoint("coordinate too close to a black boundary to certify");
        std::int64_t need = -dist.floor_log2() + 1;  // 2^{-need} <= dist
        while (k_min <= horizon && s.k_star(k_min) < need) ++k_min;
    }

    AverageTable table(s, horizon, prec);
    const Dyadic eps2 = eps * eps;
    const Dyadic thr_quarter = eps2.mul_pow2(2);            // 4 eps^2
    const Dyadic thr_gap = eps2.mul_pow2(3);                // 8 eps^2
    Dyadic thr_box = thr_gap;                                // 2^{2d+1} eps^{2d}
    for (int i = 1; i < d; ++i) thr_box = thr_box * thr_quarter;

    DivergenceWitness out;
    out.point.assign(x.begin(), x.end());
    out.eps = eps;
    out.d = d;
    out.cantor_axis = cantor_axis;

    for (const GoodPair& gp : s.good_pairs(horizon - 1)) {
        if (static_cast<int>(out.pairs.size()) >= count) break;
        if (gp.k < k_min) continue;

        // theta_k, theta_{k+1} in (eps, 1/2 - eps), exactly
        Dyadic th1 = Dyadic::pow2(-gp.w_k), th2 = Dyadic::pow2(-gp.w_k1);
        Dyadic cap = Dyadic::half() - eps;
        if (!(th1 > eps && th2 > eps && th1 < cap && th2 < cap)) continue;

        // orientation: pick the half of the pair whose average is certifiably large
        const DInterval& a_lo_gen = table.at(gp.k);
        const DInterval& a_hi_gen = table.at(gp.k + 1);
        DInterval gap = iabs(isub(a_lo_gen, a_hi_gen, prec));
        if (!(gap.lo > thr_gap)) continue;

        std::int64_t ka, kp;
        if (iabs(a_lo_gen).lo > thr_quarter) {
            ka = gp.k;
            kp = gp.k + 1;
        } else if (iabs(a_hi_gen).lo > thr_quarter) {
            ka = gp.k + 1;
            kp = gp.k;
        } else {
            continue;  // neither side certifiable
        }

        // eccentricity of the mixed box: 1/theta over the smaller index
        double ecc = std::exp2(static_cast<double>(s.w_of(std::min(ka, kp))));
        // invariant: bounded by 1/(2 eps), i.e. theta_min >= 2 eps
        if (!(Dyadic::pow2(-s.w_of(std::min(ka, kp))) >= eps.mul_pow2(1))) continue;

        WitnessPairRecord rec;
        rec.k = ka;
        rec.kp = kp;
        rec.avg_k = table.at(ka);
        rec.avg_kp = table.at(kp);
        rec.threshold = thr_box;
        rec.eccentricity = ecc;

        // certified lower bound for the box-average gap via the tensor identity
        DInterval total = gap;
        for (int i = 0; i < d; ++i) {
            if (i == cantor_axis) continue;
            if (verdicts[i].kind == CantorKind::in_black) continue;  // |avg| = 1
            total = imul(total, iabs(table.at(ka)), prec);
        }
        rec.gap_lower = total.lo;
        if (!(rec.gap_lower > thr_box)) continue;

        // boxes: per coordinate, sides of length Theta_{ka} (Q_even) and the
        // cantor axis swapped to Theta_{kp} (Q_odd)
        auto side_for = [&](int i, std::int64_t gen) -> std::pair<DInterval, DInterval> {
            if (verdicts[i].kind == CantorKind::inside)
                return detail::white_interval_at(s, x[i], gen, prec);
            DInterval th = s.big_theta_interval(gen, prec);
            DInterval h = iscale2(th, -1);
            return {isub(DInterval::exact(x[i]), h, prec), iadd(DInterval::exact(x[i]), h, prec)};
        };
        bool exact = std::max(ka, kp) <= s.exact_theta_limit();
        rec.q_even.corners_exact = exact;
        rec.q_odd.corners_exact = exact;
        for (int i = 0; i < d; ++i) {
            auto [lo_e, hi_e] = side_for(i, ka);
            rec.q_even.corner_lo.push_back(lo_e);
            rec.q_even.corner_hi.push_back(hi_e);
            auto [lo_o, hi_o] = side_for(i, i == cantor_axis ? kp : ka);
            rec.q_odd.corner_lo.push_back(lo_o);
            rec.q_odd.corner_hi.push_back(hi_o);
        }
        out.pairs.push_back(std::move(rec));
    }

    if (static_cast<int>(out.pairs.size()) < count)
        throw InsufficientGoodPairs("found " + std::to_string(out.pairs.size()) + " of " +
                                    std::to_string(count) + " requested pairs within k_cap=" +
                                    std::to_string(s.k_cap()));
    return out;
}

}  // namespace cantorft
