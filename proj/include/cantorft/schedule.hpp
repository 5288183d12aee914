#pragma once

// Parameter schedules: the index set S, weights w, scale offsets r(s),
// perturbation radii delta(n), error terms alpha_j, and every derived table
// (w+, chi+, k*, Theta products). A Schedule is immutable once built.
//
// All alpha_j and delta(n) are powers of two, so the hard invariants reduce
// to integer exponent comparisons and stay exactly checkable at any depth.

#include "cantorft/config.hpp"
#include "cantorft/dyadic.hpp"
#include "cantorft/signed_log.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cantorft {

inline std::int64_t isqrt64(std::int64_t s) {
    if (s < 0) throw std::domain_error("isqrt of negative");
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(s)));
    while (r > 0 && r * r > s) --r;
    while ((r + 1) * (r + 1) <= s) ++r;
    return r;
}

// delta(n) = 2^{-exponent(n)}, strictly decreasing in n.
struct DeltaTable {
    std::vector<std::int64_t> exps;  // exponents for n = 0..exps.size()-1

    std::int64_t exponent(std::int64_t n) const {
        if (n < 0) throw std::domain_error("delta exponent: n < 0");
        std::int64_t e;
        if (n < static_cast<std::int64_t>(exps.size())) {
            e = exps[static_cast<std::size_t>(n)];
        } else {
            // conservative fallback delta(n) = 4^{-n}
            e = 2 * n;
            if (!exps.empty()) {
                std::int64_t last = exps.back() + (n - static_cast<std::int64_t>(exps.size()) + 1);
                e = std::max(e, last);
            }
        }
        return e;
    }

    Dyadic value(std::int64_t n) const { return Dyadic::pow2(-exponent(n)); }

    // enforce delta(n+1) < delta(n) by bumping exponents
    void monotonize() {
        for (std::size_t n = 1; n < exps.size(); ++n)
            exps[n] = std::max(exps[n], exps[n - 1] + 1);
    }
};

// Candidate radii for n = 1..8 found by the phase-perturbation search in
// cantorft::cosineineq (delta_search, seed 20240801, 8 sampled phase vectors,
// p grid {1.001, 1.1, 1.5, 2}); n = 0 pinned to 1/4, larger n fall back to
// 4^{-n}. Sampling can only falsify, so these are candidates, not certified.
inline DeltaTable builtin_delta_table() {
    DeltaTable t;
    t.exps = {2, 4, 5, 6, 7, 8, 9, 10, 11};
    t.monotonize();
    return t;
}

inline DeltaTable fallback_delta_table() {
    DeltaTable t;
    t.exps = {2};
    return t;
}

struct ScheduleSpec {
    std::string name = "default";
    std::int64_t k_cap = 1000;
    std::uint64_t seed = 0;
};

struct GoodPair {
    std::int64_t k = 0;  // k, k+1 in S with w(k), w(k+1) <= M
    int w_k = 0, w_k1 = 0;
};

class Schedule {
public:
    static constexpr std::int64_t kMaxKCap = 2'000'000;
    static constexpr std::size_t kExactBitBudget = std::size_t(1) << 21;

    // members/ws: the finite part of S within [0, k_cap], sorted ascending.
    // alpha_override, when nonempty, replaces the derived alpha exponents
    // (schedules built this way may violate the invariants; validate_schedule
    // is the checker).
    Schedule(ScheduleSpec spec, std::vector<std::int64_t> members, std::vector<int> ws,
             int M, DeltaTable delta, std::vector<std::int64_t> alpha_override = {})
        : spec_(std::move(spec)), s_members_(std::move(members)), w_members_(std::move(ws)),
          M_(M), delta_(std::move(delta)), alpha_override_(std::move(alpha_override)) {
        if (spec_.k_cap < 1) throw std::invalid_argument("k_cap must be >= 1");
        if (spec_.k_cap > kMaxKCap)
            throw std::invalid_argument("k_cap exceeds materialization limit");
        if (s_members_.size() != w_members_.size())
            throw std::invalid_argument("S members / weights size mismatch");
        const std::size_t n = static_cast<std::size_t>(spec_.k_cap) + 2;
        in_s_.assign(n, 0);
        for (std::size_t i = 0; i < s_members_.size(); ++i) {
            std::int64_t m = s_members_[i];
            if (m < 0 || m > spec_.k_cap) throw std::invalid_argument("S member out of range");
            if (i > 0 && s_members_[i - 1] >= m) throw std::invalid_argument("S members not sorted");
            if (w_members_[i] < 2) throw std::invalid_argument("w must be >= 2");
            in_s_[static_cast<std::size_t>(m)] = 1;
        }
        build_tables();
    }

    const ScheduleSpec& spec() const { return spec_; }
    std::int64_t k_cap() const { return spec_.k_cap; }
    int M() const { return M_; }
    const DeltaTable& delta_table() const { return delta_; }
    const std::vector<std::int64_t>& s_members() const { return s_members_; }

    bool in_S(std::int64_t j) const {
        check_range(j);
        return in_s_[static_cast<std::size_t>(j)] != 0;
    }

    int w_of(std::int64_t j) const {
        auto it = std::lower_bound(s_members_.begin(), s_members_.end(), j);
        if (it == s_members_.end() || *it != j) throw std::out_of_range("w(j): j not in S");
        return w_members_[static_cast<std::size_t>(it - s_members_.begin())];
    }

    // alpha_j = 2^{-alpha_exp(j)}
    std::int64_t alpha_exp(std::int64_t j) const {
        check_range(j);
        return a_[static_cast<std::size_t>(j)];
    }
    Dyadic alpha(std::int64_t j) const { return Dyadic::pow2(-alpha_exp(j)); }

    // exact dissection ratio; numerator can be large for deep j not in S
    Dyadic theta(std::int64_t j) const {
        check_range(j);
        if (in_S(j)) return Dyadic::pow2(-w_of(j));
        return Dyadic::one_minus_pow2(alpha_exp(j)).mul_pow2(-1);
    }

    double theta_double(std::int64_t j) const {
        check_range(j);
        if (in_S(j)) return std::exp2(static_cast<double>(-w_of(j)));
        std::int64_t a = alpha_exp(j);
        if (a > 60) return 0.5;
        return 0.5 * (1.0 - std::exp2(static_cast<double>(-a)));
    }

    // rigorous enclosure of theta_j
    DInterval theta_interval(std::int64_t j, unsigned prec) const {
        if (in_S(j)) return DInterval::exact(theta(j));
        std::int64_t a = alpha_exp(j);
        if (a <= static_cast<std::int64_t>(prec))
            return DInterval::exact(theta(j));
        Dyadic lo = Dyadic::one_minus_pow2(static_cast<std::int64_t>(prec)).mul_pow2(-1);
        return {lo, Dyadic::half()};
    }

    std::int64_t w_plus(std::int64_t k) const {
        check_range_incl(k);
        return w_plus_[static_cast<std::size_t>(k)];
    }
    std::int64_t chi_plus(std::int64_t k) const {
        check_range_incl(k);
        return chi_plus_[static_cast<std::size_t>(k)];
    }
    std::int64_t k_star(std::int64_t k) const { return k + w_plus(k) - chi_plus(k); }
    // E(k) = k* - k = w+(k) - chi+(k); the dyadic-exponent drift of 2^k Theta_k
    std::int64_t exponent_drift(std::int64_t k) const { return w_plus(k) - chi_plus(k); }

    // log2 Theta_k = -k* + sum_{j<k, j not in S} log2(1 - alpha_j)
    double log2_big_theta(std::int64_t k) const {
        check_range_incl(k);
        return static_cast<double>(-k_star(k)) + log2_corr_[static_cast<std::size_t>(k)];
    }

    SignedLog big_theta_log(std::int64_t k) const {
        return SignedLog::from_pow2(1, log2_big_theta(k));
    }

    std::optional<Dyadic> big_theta_exact(std::int64_t k) const {
        check_range_incl(k);
        if (static_cast<std::size_t>(k) < theta_prefix_.size())
            return theta_prefix_[static_cast<std::size_t>(k)];
        return std::nullopt;
    }

    // (1-theta_j) Theta_j = Theta_j - Theta_{j+1}, correctly rounded where the
    // exact prefixes reach, exp2 of the log tables beyond
    double coeff_double(std::int64_t j) const {
        check_range(j);
        if (static_cast<std::size_t>(j) < coeff_dbl_.size())
            return coeff_dbl_[static_cast<std::size_t>(j)];
        return std::exp2(std::log2(1.0 - theta_double(j)) + log2_big_theta(j));
    }

    // (1-2 theta_k) Theta_k = Theta_k - 2 Theta_{k+1}
    double blen_double(std::int64_t k) const {
        check_range(k);
        if (static_cast<std::size_t>(k) < blen_dbl_.size())
            return blen_dbl_[static_cast<std::size_t>(k)];
        return std::exp2(std::log2(1.0 - 2.0 * theta_double(k)) + log2_big_theta(k));
    }

    // rigorous enclosure of Theta_k at any depth
    DInterval big_theta_interval(std::int64_t k, unsigned prec = 192) const {
        check_range_incl(k);
        DInterval acc = DInterval::exact(Dyadic(1));
        for (std::int64_t j = 0; j < k; ++j) {
            if (in_S(j)) continue;
            acc = imul(acc, one_minus_alpha_interval(j, prec), prec);
        }
        return iscale2(acc, -k_star(k));
    }

    // enclosure of prod_{j in [from,to), j not in S} (1 - alpha_j)
    DInterval alpha_product_interval(std::int64_t from, std::int64_t to, unsigned prec = 192) const {
        DInterval acc = DInterval::exact(Dyadic(1));
        for (std::int64_t j = from; j < to; ++j) {
            if (in_S(j)) continue;
            acc = imul(acc, one_minus_alpha_interval(j, prec), prec);
        }
        return acc;
    }

    DInterval one_minus_alpha_interval(std::int64_t j, unsigned prec) const {
        std::int64_t a = alpha_exp(j);
        if (a <= static_cast<std::int64_t>(prec))
            return DInterval::exact(Dyadic::one_minus_pow2(a));
        return {Dyadic::one_minus_pow2(static_cast<std::int64_t>(prec)), Dyadic(1)};
    }

    std::int64_t r(std::int64_t s) const { return isqrt64(s); }

    std::int64_t delta_exp(std::int64_t n) const { return delta_.exponent(n); }
    Dyadic delta(std::int64_t n) const { return delta_.value(n); }

    std::vector<GoodPair> good_pairs(std::int64_t horizon) const {
        std::vector<GoodPair> out;
        for (std::size_t i = 0; i + 1 < s_members_.size(); ++i) {
            if (s_members_[i + 1] != s_members_[i] + 1) continue;
            if (s_members_[i] + 1 > horizon) break;
            if (w_members_[i] <= M_ && w_members_[i + 1] <= M_)
                out.push_back({s_members_[i], w_members_[i], w_members_[i + 1]});
        }
        return out;
    }

    std::int64_t exact_theta_limit() const {
        return static_cast<std::int64_t>(theta_prefix_.size()) - 1;
    }

    KvFile to_kv() const {
        KvFile f;
        f.set("name", spec_.name);
        f.set("k_cap", std::to_string(spec_.k_cap));
        f.set("seed", std::to_string(spec_.seed));
        return f;
    }

private:
    void check_range(std::int64_t j) const {
        if (j < 0 || j > spec_.k_cap) throw std::out_of_range("index outside [0, k_cap]");
    }
    void check_range_incl(std::int64_t k) const {
        if (k < 0 || k > spec_.k_cap + 1) throw std::out_of_range("index outside [0, k_cap+1]");
    }

    void build_tables() {
        const std::size_t n = static_cast<std::size_t>(spec_.k_cap) + 2;
        w_plus_.assign(n, 0);
        chi_plus_.assign(n, 0);
        log2_corr_.assign(n, 0.0);
        a_.assign(n, 0);

        // alpha_j = min(alpha_{j-1}/2, delta(2(j+1)^2)/2, 1/4); all powers of two
        for (std::size_t j = 0; j + 1 < n; ++j) {
            std::int64_t jj = static_cast<std::int64_t>(j);
            std::int64_t d = delta_.exponent(2 * (jj + 1) * (jj + 1));
            std::int64_t e = std::max<std::int64_t>(d + 1, 2);
            if (j > 0) e = std::max(e, a_[j - 1] + 1);
            a_[j] = e;
        }
        a_[n - 1] = a_[n - 2] + 1;
        for (std::size_t j = 0; j < alpha_override_.size() && j < n; ++j)
            a_[j] = alpha_override_[j];

        for (std::size_t k = 1; k < n; ++k) {
            std::size_t j = k - 1;
            bool s = in_s_[j] != 0;
            w_plus_[k] = w_plus_[k - 1] + (s ? w_of(static_cast<std::int64_t>(j)) : 0);
            chi_plus_[k] = chi_plus_[k - 1] + (s ? 1 : 0);
            double corr = 0.0;
            if (!s && a_[j] <= 62)
                corr = std::log2(1.0 - std::exp2(static_cast<double>(-a_[j])));
            log2_corr_[k] = log2_corr_[k - 1] + corr;
        }

        // exact Theta prefix, up to the bit budget
        theta_prefix_.clear();
        theta_prefix_.push_back(Dyadic(1));
        for (std::int64_t k = 0; k <= spec_.k_cap; ++k) {
            Dyadic next = theta_prefix_.back() * theta(k);
            if (next.bit_size() > kExactBitBudget) break;
            theta_prefix_.push_back(std::move(next));
        }
        for (std::size_t j = 0; j + 1 < theta_prefix_.size(); ++j) {
            coeff_dbl_.push_back((theta_prefix_[j] - theta_prefix_[j + 1]).to_double());
            blen_dbl_.push_back((theta_prefix_[j] - theta_prefix_[j + 1].mul_pow2(1)).to_double());
        }
    }

    ScheduleSpec spec_;
    std::vector<std::int64_t> s_members_;
    std::vector<int> w_members_;
    int M_;
    DeltaTable delta_;
    std::vector<std::int64_t> alpha_override_;

    std::vector<std::uint8_t> in_s_;
    std::vector<std::int64_t> a_;
    std::vector<std::int64_t> w_plus_, chi_plus_;  // prefix sums at index k
    std::vector<double> log2_corr_;
    std::vector<Dyadic> theta_prefix_;  // Theta_0..Theta_m exact
    std::vector<double> coeff_dbl_, blen_dbl_;
};

// ---- builders ----------------------------------------------------------

// S = {n^3 : n >= 2} union {n^6 + 1 : n >= 2};
// w(n^3) = n for non-square n, w(n^6) = w(n^6+1) = 2.
inline Schedule build_default_schedule(std::int64_t k_cap,
                                       DeltaTable delta = builtin_delta_table(),
                                       std::uint64_t seed = 0) {
    std::vector<std::int64_t> members;
    std::vector<int> ws;
    std::vector<std::pair<std::int64_t, int>> items;
    for (std::int64_t nn = 2; nn * nn * nn <= k_cap; ++nn) {
        std::int64_t m = nn * nn * nn;
        std::int64_t rt = isqrt64(nn);
        bool square = rt * rt == nn;
        items.emplace_back(m, square ? 2 : static_cast<int>(nn));
    }
    for (std::int64_t nn = 2;; ++nn) {
        std::int64_t p = nn * nn;
        std::int64_t m6 = p * p * p;
        if (m6 + 1 > k_cap) break;
        items.emplace_back(m6 + 1, 2);
    }
    std::sort(items.begin(), items.end());
    for (auto& [m, w] : items) {
        members.push_back(m);
        ws.push_back(w);
    }
    return Schedule({"default", k_cap, seed}, std::move(members), std::move(ws), 2, std::move(delta));
}

// S = all of [0, k_cap], constant weight -> theta = 2^{-w} everywhere.
inline Schedule build_const_schedule(std::int64_t k_cap, int w = 2) {
    std::vector<std::int64_t> members(static_cast<std::size_t>(k_cap) + 1);
    for (std::int64_t j = 0; j <= k_cap; ++j) members[static_cast<std::size_t>(j)] = j;
    std::vector<int> ws(members.size(), w);
    return Schedule({"const-2^-" + std::to_string(w), k_cap, 0}, std::move(members), std::move(ws),
                    w, builtin_delta_table());
}

// S = {}; theta_j = (1 - alpha_j)/2 everywhere.
inline Schedule build_empty_schedule(std::int64_t k_cap) {
    return Schedule({"empty-s", k_cap, 0}, {}, {}, 2, builtin_delta_table());
}

// S = {0}.
inline Schedule build_single_schedule(std::int64_t k_cap, int w0 = 2) {
    return Schedule({"single-s0", k_cap, 0}, {0}, {w0}, w0, builtin_delta_table());
}

inline Schedule build_custom_schedule(std::string name, std::int64_t k_cap,
                                      std::vector<std::int64_t> members, std::vector<int> ws,
                                      int M = 2) {
    return Schedule({std::move(name), k_cap, 0}, std::move(members), std::move(ws), M,
                    builtin_delta_table());
}

inline Schedule build_schedule(const ScheduleSpec& spec) {
    if (spec.name == "default") return build_default_schedule(spec.k_cap, builtin_delta_table(), spec.seed);
    if (spec.name == "default-fallback-delta")
        return build_default_schedule(spec.k_cap, fallback_delta_table(), spec.seed);
    if (spec.name.rfind("const-2^-", 0) == 0)
        return build_const_schedule(spec.k_cap, std::stoi(spec.name.substr(9)));
    if (spec.name == "const-quarter") return build_const_schedule(spec.k_cap, 2);
    if (spec.name == "empty-s") return build_empty_schedule(spec.k_cap);
    if (spec.name == "single-s0") return build_single_schedule(spec.k_cap);
    throw std::invalid_argument("unknown schedule preset: " + spec.name);
}

inline Schedule schedule_from_kv(const KvFile& f) {
    ScheduleSpec spec;
    spec.name = f.get_or("name", "default");
    spec.k_cap = f.has("k_cap") ? f.get_int("k_cap") : 1000;
    spec.seed = f.has("seed") ? static_cast<std::uint64_t>(f.get_int("seed")) : 0;
    return build_schedule(spec);
}

// ---- validation --------------------------------------------------------

struct TrendPoint {
    std::int64_t k = 0;
    double value = 0.0;
};

struct ValidationReport {
    std::int64_t horizon = 0;
    std::vector<std::string> violations;  // exact-invariant failures only

    std::vector<TrendPoint> w_over_wplus;      // at S members
    std::vector<TrendPoint> chi_over_wplus;    // checkpoints
    std::vector<TrendPoint> wplus_over_k;      // checkpoints
    std::vector<TrendPoint> r_over_wplus;      // checkpoints
    std::vector<TrendPoint> theta_geo;         // Theta_k^{1/k} checkpoints
    std::vector<GoodPair> good_pairs;

    bool ok() const { return violations.empty(); }
};

inline ValidationReport validate_schedule(const Schedule& s, std::int64_t horizon) {
    if (horizon > s.k_cap()) throw std::invalid_argument("horizon exceeds k_cap");
    ValidationReport rep;
    rep.horizon = horizon;
    auto violate = [&](const std::string& msg) { rep.violations.push_back(msg); };

    // theta_j in (0, 1/2); alpha chain; e:alphadelta -- exact exponent checks
    for (std::int64_t j = 0; j <= horizon; ++j) {
        if (s.in_S(j)) {
            if (s.w_of(j) < 2) violate("w(" + std::to_string(j) + ") < 2");
        } else if (s.alpha_exp(j) < 2) {
            violate("alpha_" + std::to_string(j) + " > 1/4");
        }
        if (j < horizon && s.alpha_exp(j + 1) < s.alpha_exp(j) + 1)
            violate("alpha chain broken at j=" + std::to_string(j));
        std::int64_t smax = (j + 1) * (j + 1) - 1;  // r(s) <= j iff s <= smax
        if (s.alpha_exp(j) - 1 < s.delta_exp(2 * smax))
            violate("2 alpha_j > inf delta(2s) at j=" + std::to_string(j));
    }

    // delta monotone over the table's explicit range
    for (std::int64_t n = 1; n <= 16; ++n)
        if (s.delta_exp(n) <= s.delta_exp(n - 1))
            violate("delta not strictly decreasing at n=" + std::to_string(n));

    // Theta sandwich 2^{-k*-1} <= Theta_k <= 2^{-k*}, via rigorous enclosures
    {
        const unsigned prec = 192;
        DInterval acc = DInterval::exact(Dyadic(1));
        for (std::int64_t k = 0; k <= horizon; ++k) {
            if (acc.lo < Dyadic::half())
                violate("Theta sandwich lower bound fails at k=" + std::to_string(k));
            if (acc.hi > Dyadic(1))
                violate("Theta sandwich upper bound fails at k=" + std::to_string(k));
            if (k < horizon && !s.in_S(k))
                acc = imul(acc, s.one_minus_alpha_interval(k, prec), prec);
        }
    }

    // w+(k1) <= w+(k2) - 2 for consecutive S members (w >= 2 everywhere)
    {
        auto& mem = s.s_members();
        for (std::size_t i = 0; i + 1 < mem.size(); ++i) {
            if (mem[i + 1] > horizon) break;
            if (s.w_plus(mem[i]) > s.w_plus(mem[i + 1]) - 2)
                violate("w+ gap < 2 between S members " + std::to_string(mem[i]) + "," +
                        std::to_string(mem[i + 1]));
        }
    }

    rep.good_pairs = s.good_pairs(horizon);
    if (rep.good_pairs.empty())
        violate("no good pair (k, k+1 in S with w <= M) within horizon");

    // trend reports (asymptotics -- never abort)
    for (std::int64_t m : s.s_members()) {
        if (m > horizon) break;
        if (s.w_plus(m) > 0)
            rep.w_over_wplus.push_back({m, static_cast<double>(s.w_of(m)) / static_cast<double>(s.w_plus(m))});
    }
    for (int i = 1; i <= 10; ++i) {
        std::int64_t k = horizon * i / 10;
        if (k < 1) continue;
        if (s.w_plus(k) > 0) {
            rep.chi_over_wplus.push_back({k, static_cast<double>(s.chi_plus(k)) / static_cast<double>(s.w_plus(k))});
            rep.r_over_wplus.push_back({k, static_cast<double>(s.r(k)) / static_cast<double>(s.w_plus(k))});
        }
        rep.wplus_over_k.push_back({k, static_cast<double>(s.w_plus(k)) / static_cast<double>(k)});
        rep.theta_geo.push_back({k, std::exp2(s.log2_big_theta(k) / static_cast<double>(k))});
    }
    return rep;
}

}  // namespace cantorft
