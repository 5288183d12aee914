#pragma once

// Desk-scale machinery for the L^p membership argument: the index sets
// J_{k,s} with their combinatorial bounds, near-dyadic phase deviations, the
// integrals I^p_{k,s}, the Minkowski decomposition terms A_k^p, and
// truncated norms of the majorant H.
//
// The analytic content splits into exact combinatorics (checked to deep
// horizons in integer exponent arithmetic) and quadrature (bounded-domain,
// scale* capped near 26 because the domain Theta_s^{-1} grows like 2^{s*}).

#include "cantorft/cosineineq.hpp"
#include "cantorft/dyadic.hpp"
#include "cantorft/fourier.hpp"
#include "cantorft/index_set.hpp"
#include "cantorft/quadrature.hpp"
#include "cantorft/schedule.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <vector>

namespace cantorft {

// ---- J_{k,s} and its bounds ----------------------------------------------

struct JksRecord {
    IndexSet J;
    std::int64_t size_lower = 0;  // k* - w+(k) - r(s)
    std::int64_t b_upper = 0;     // chi+(k) + 1
    std::int64_t sup_upper = 0;   // s* - r(s)*
    bool bounds_ok = false;
};

// J_{k,s} = { j* - r(s)* + 1 : j not in S, r(s) <= j <= k-1 }
inline JksRecord J_ks(const Schedule& s, std::int64_t k, std::int64_t scale) {
    if (scale > s.k_cap() || k > scale || k < s.r(scale))
        throw std::invalid_argument("J_ks: need r(scale) <= k <= scale <= k_cap");
    const std::int64_t rs = s.r(scale);
    const std::int64_t rstar = s.k_star(rs);
    std::vector<std::int64_t> xs;
    for (std::int64_t j = rs; j <= k - 1; ++j)
        if (!s.in_S(j)) xs.push_back(s.k_star(j) - rstar + 1);
    JksRecord rec;
    rec.J = IndexSet(std::move(xs));
    rec.size_lower = s.k_star(k) - s.w_plus(k) - rs;
    rec.b_upper = s.chi_plus(k) + 1;
    rec.sup_upper = s.k_star(scale) - rstar;
    rec.bounds_ok = static_cast<std::int64_t>(rec.J.size()) >= rec.size_lower &&
                    rec.J.components() <= rec.b_upper &&
                    rec.J.sup() <= rec.sup_upper;
    return rec;
}

// ---- phase deviations ------------------------------------------------------

struct PhaseDeviation {
    std::int64_t target_exp = 0;       // dyadic target 2^{-target_exp}
    DInterval ratio;                   // phase / target, rigorous enclosure
    int side = 0;                      // -1 below target, +1 above, 0 enclosure straddles 1
    bool bound_ok = false;             // |phase - target| <= target delta(2 scale), certified
    Dyadic delta2s;
    std::optional<Dyadic> exact_phase;         // when within the bit budget
    std::optional<Dyadic> exact_target_ratio;  // phase / target exactly
};

// phase = (1-theta_j) Theta_{r(s)}^{-1} Theta_j for j not in S, target
// 2^{-(j*-r(s)*+1)}. The ratio is (1+alpha_j) prod_{i in [r,j), i not in S}
// (1-alpha_i); the delta(2s) bound follows from exact exponent comparisons.
inline PhaseDeviation phase_deviation(const Schedule& s, std::int64_t j, std::int64_t scale,
                                      unsigned prec = 192) {
    if (s.in_S(j) || j < s.r(scale) || scale > s.k_cap() || j > s.k_cap())
        throw std::invalid_argument("phase_deviation: need j not in S, r(scale) <= j <= k_cap");
    const std::int64_t rs = s.r(scale);
    PhaseDeviation out;
    out.target_exp = s.k_star(j) - s.k_star(rs) + 1;
    out.delta2s = s.delta(2 * scale);
    const std::int64_t d = s.delta_exp(2 * scale);

    // ratio enclosure: (1 + alpha_j) * prod (1 - alpha_i)
    DInterval ratio = s.alpha_product_interval(rs, j, prec);
    if (s.alpha_exp(j) <= static_cast<std::int64_t>(prec)) {
        ratio = imul(ratio, DInterval::exact(Dyadic(1) + s.alpha(j)), prec);
    } else {
        ratio = imul(ratio, DInterval{Dyadic(1), Dyadic(1) + Dyadic::pow2(-static_cast<std::int64_t>(prec))},
                     prec);
    }
    out.ratio = ratio;
    out.side = ratio.hi <= Dyadic(1) ? -1 : (ratio.lo >= Dyadic(1) ? +1 : 0);

    // exact verdict: upper needs alpha_j <= delta; lower needs
    // 2 alpha_{min nonS in [r, j)} <= delta (or the product empty)
    bool upper_ok = s.alpha_exp(j) >= d;  // alpha_j <= delta(2s)
    bool lower_ok = true;
    for (std::int64_t i = rs; i < j; ++i) {
        if (s.in_S(i)) continue;
        lower_ok = s.alpha_exp(i) - 1 >= d;  // 2 alpha_i <= delta; first non-S is smallest
        break;
    }
    out.bound_ok = upper_ok && lower_ok;
    if (!out.bound_ok) {
        // fall back to the enclosure
        Dyadic lo_bound = Dyadic(1) - out.delta2s, hi_bound = Dyadic(1) + out.delta2s;
        out.bound_ok = ratio.lo >= lo_bound && ratio.hi <= hi_bound;
    }

    // exact rational phase when every factor fits the budget
    if (j <= s.exact_theta_limit()) {
        Dyadic r_exact(1);
        for (std::int64_t i = rs; i < j; ++i)
            if (!s.in_S(i)) r_exact *= Dyadic::one_minus_pow2(s.alpha_exp(i));
        r_exact *= Dyadic(1) + s.alpha(j);
        out.exact_target_ratio = r_exact;
        out.exact_phase = r_exact.mul_pow2(-out.target_exp);
    }
    return out;
}

// ---- deep combinatorial sweep (criterion-9 style) --------------------------

struct CombinatoricsReport {
    std::int64_t horizon = 0;
    long long jks_checked = 0;
    long long phase_checked = 0;
    long long deviations_above_target = 0;  // phase > target happens when no non-S index precedes j
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Exact O(1)-per-pair verification of the three J_{k,s} bounds, the phase
// deviation bound, and both Theta sandwiches, over all scales <= horizon.
inline CombinatoricsReport norms_combinatorics(const Schedule& s, std::int64_t horizon) {
    if (horizon > s.k_cap()) throw std::invalid_argument("horizon exceeds k_cap");
    CombinatoricsReport rep;
    rep.horizon = horizon;
    auto violate = [&](const std::string& m) {
        if (rep.violations.size() < 32) rep.violations.push_back(m);
    };

    // prefix tables: non-S block starts, next non-S index
    const std::size_t n = static_cast<std::size_t>(horizon) + 2;
    std::vector<std::int64_t> block_start_prefix(n + 1, 0);
    std::vector<std::int64_t> next_non_s(n + 1, horizon + 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        bool ns = !s.in_S(static_cast<std::int64_t>(j));
        bool start = ns && (j == 0 || s.in_S(static_cast<std::int64_t>(j) - 1));
        block_start_prefix[j + 1] = block_start_prefix[j] + (start ? 1 : 0);
    }
    for (std::int64_t j = horizon; j >= 0; --j)
        next_non_s[static_cast<std::size_t>(j)] =
            s.in_S(j) ? next_non_s[static_cast<std::size_t>(j) + 1] : j;

    for (std::int64_t scale = 1; scale <= horizon; ++scale) {
        const std::int64_t rs = s.r(scale);
        if (rs > scale) continue;
        const std::int64_t rstar = s.k_star(rs);
        const std::int64_t d = s.delta_exp(2 * scale);
        const std::int64_t sstar = s.k_star(scale);
        std::int64_t prev_nonS = -1;  // largest non-S index seen so far in [rs, k-1]
        for (std::int64_t k = rs; k <= scale; ++k) {
            // J_{k,scale} bounds, all in O(1)
            ++rep.jks_checked;
            std::int64_t cnt = (k - rs) - (s.chi_plus(k) - s.chi_plus(rs));
            std::int64_t size_lower = s.k_star(k) - s.w_plus(k) - rs;
            if (cnt < size_lower) violate("J size bound at k=" + std::to_string(k) + ", s=" + std::to_string(scale));
            std::int64_t blocks = block_start_prefix[static_cast<std::size_t>(k)] -
                                  block_start_prefix[static_cast<std::size_t>(rs)];
            if (rs >= 1 && !s.in_S(rs) && !s.in_S(rs - 1) && k > rs) ++blocks;  // run straddles rs
            if (blocks > s.chi_plus(k) + 1)
                violate("b(J) bound at k=" + std::to_string(k) + ", s=" + std::to_string(scale));
            if (prev_nonS >= 0) {
                std::int64_t sup = s.k_star(prev_nonS) - rstar + 1;
                if (sup > sstar - rstar)
                    violate("sup(J) bound at k=" + std::to_string(k) + ", s=" + std::to_string(scale));
            }
            // phase deviation: each j = k not in S, visited once per scale
            if (k <= scale - 1 && !s.in_S(k)) {
                ++rep.phase_checked;
                bool upper_ok = s.alpha_exp(k) >= d;
                std::int64_t first = next_non_s[static_cast<std::size_t>(rs)];
                bool lower_ok = first >= k || s.alpha_exp(first) - 1 >= d;
                if (!(upper_ok && lower_ok))
                    violate("phase deviation bound at j=" + std::to_string(k) + ", s=" + std::to_string(scale));
                if (first >= k) ++rep.deviations_above_target;  // empty product: ratio = 1 + alpha_j > 1
                // e:partialThetabd lower side is the same lower_ok condition
            }
            if (k <= scale - 1 && !s.in_S(k)) prev_nonS = k;
        }
    }
    return rep;
}

// ---- streaming composite quadrature over large domains ---------------------

namespace detail {

// k-way merged stream of cosine zeros (pi/2 + t pi)/phase over (a, b)
class ZeroStream {
public:
    ZeroStream(std::span<const double> phases, double a, double b) : b_(b) {
        for (double ph : phases) {
            if (!(ph > 0.0)) continue;
            if (kPi / ph > (b - a)) continue;  // no zero can land inside
            double t0 = std::max(std::ceil((a * ph / kPi) - 0.5), 0.0);
            double x = (0.5 + t0) * kPi / ph;
            while (x <= a) {
                t0 += 1.0;
                x = (0.5 + t0) * kPi / ph;
            }
            if (x < b) heap_.push({x, ph, t0});
        }
    }

    // next breakpoint strictly inside (prev, b), or b when exhausted
    double next(double prev) {
        while (!heap_.empty()) {
            Entry e = heap_.top();
            if (e.x > prev) return e.x;
            heap_.pop();
            e.t += 1.0;
            e.x = (0.5 + e.t) * kPi / e.phase;
            if (e.x < b_) heap_.push(e);
        }
        return b_;
    }

    void advance_past(double x) {
        while (!heap_.empty() && heap_.top().x <= x) {
            Entry e = heap_.top();
            heap_.pop();
            e.t += 1.0;
            e.x = (0.5 + e.t) * kPi / e.phase;
            if (e.x < b_) heap_.push(e);
        }
    }

private:
    struct Entry {
        double x, phase, t;
        bool operator<(const Entry& o) const { return x > o.x; }  // min-heap
    };
    std::priority_queue<Entry> heap_;
    double b_;
};

// composite GK15 with one level of recursive refinement per panel
template <class F>
void refine_panel(const F& f, double a, double b, double local_tol, int depth, double& val,
                  double& err, long long& evals) {
    double e = 0.0;
    double v = gk15_panel(f, a, b, e);
    evals += 15;
    if (e <= local_tol || depth >= 24 || (b - a) < 1e-12 * (std::fabs(a) + 1.0)) {
        val += v;
        err += e;
        return;
    }
    double mid = 0.5 * (a + b);
    refine_panel(f, a, mid, 0.5 * local_tol, depth + 1, val, err, evals);
    refine_panel(f, mid, b, 0.5 * local_tol, depth + 1, val, err, evals);
}

}  // namespace detail

// Integrates f over [a, b] splitting at every zero of every cos(phase * xi)
// factor, streamed so that multi-million-panel domains never materialize.
template <class F>
QuadResult composite_cos_integrate(const F& f, std::span<const double> phases, double a, double b,
                                   double rel_tol, long long max_evals) {
    QuadResult out;
    if (!(b > a)) return out;
    detail::ZeroStream zs(phases, a, b);
    double prev = a;
    double per_len_tol = rel_tol / (b - a);
    while (prev < b) {
        double nxt = zs.next(prev);
        if (nxt <= prev) nxt = b;
        double local_tol = per_len_tol * (nxt - prev);
        detail::refine_panel(f, prev, nxt, std::max(local_tol, 1e-18), 0, out.value, out.abs_error,
                             out.evaluations);
        zs.advance_past(nxt);
        prev = nxt;
        if (out.evaluations > max_evals) {
            out.converged = false;
            return out;
        }
    }
    out.converged = true;
    return out;
}

// ---- I^p_{k,s} --------------------------------------------------------------

struct IpksResult {
    QuadResult quad;
    double upper_limit = 0.0;   // Theta_s^{-1}
    double paper_bound = 0.0;   // 8 Theta_s^{-1} Theta_k 2^{w+(k)+r(s)} C_p^{chi+(k)+1}
    bool dominated = false;     // quad <= paper_bound within error
};

// I^p_{k,s} = int_0^{Theta_s^{-1}} prod_{j<k} |cos((1-theta_j) Theta_j pi xi)|^p dxi.
// The reported companion bound carries this implementation's explicit
// constant 8 (from e:Thetabd slack on both ends and the factor 2 of the
// perturbed lemma at eps = 1).
template <class Model>
IpksResult I_pks(const Model& model, const Schedule& s, std::int64_t k, std::int64_t scale,
                 double p, double rel_tol = 1e-4, long long max_evals = 400'000'000) {
    if (k < 0 || k > scale) throw std::invalid_argument("I_pks: need 0 <= k <= scale");
    if (s.k_star(scale) > 26) throw std::invalid_argument("I_pks: scale* beyond quadrature budget");
    IpksResult out;
    out.upper_limit = std::exp2(-model.log2_big_theta(scale));

    std::vector<double> phases;
    for (std::int64_t j = 0; j < k; ++j) phases.push_back(model.coeff(j) * kPi);

    if (phases.empty()) {
        out.quad = {out.upper_limit, 0.0, 0, true};
    } else {
        auto f = [&](double xi) {
            double prod = 1.0;
            for (double ph : phases) prod *= std::fabs(std::cos(ph * xi));
            if (prod <= 0.0) return 0.0;
            return std::pow(prod, p);
        };
        double scale_guess = out.upper_limit;  // integrand <= 1
        out.quad = composite_cos_integrate(f, phases, 0.0, out.upper_limit,
                                           rel_tol * scale_guess, max_evals);
        // phase representation slack: arguments carry ~2^-53 relative error
        out.quad.abs_error += out.upper_limit * p * static_cast<double>(k) * out.upper_limit *
                              kPi * 0x1.0p-52;
    }
    CpValue cp = c_p(p);
    double log2_bound = 3.0 - model.log2_big_theta(scale) + model.log2_big_theta(k) +
                        static_cast<double>(s.w_plus(k) + s.r(scale)) +
                        static_cast<double>(s.chi_plus(k) + 1) * std::log2(cp.value);
    out.paper_bound = std::exp2(log2_bound);
    out.dominated = out.quad.value - out.quad.abs_error <= out.paper_bound;
    return out;
}

// ---- A_k and truncated H norms ---------------------------------------------

struct AkTerm {
    std::int64_t scale = 0;
    double weight = 0.0;     // (Theta_s / Theta_k)^p, 1 for the leading term
    IpksResult integral;     // I^p_{k,k} or I^p_{k,s+1}
    double contribution = 0.0;
    double majorant = 0.0;   // geometric trend (Theta_s/Theta_k)^{p-1-eps} 2^{-(1-1/p-2eps) w+(k)}
};

struct AkResult {
    std::int64_t k = 0;
    double p = 0.0;
    double value = 0.0;      // A_k = 2^k Theta_k (sum of contributions)^{1/p}
    double abs_error = 0.0;
    std::vector<AkTerm> terms;
    bool tail_trend_ok = false;  // last contributions decay along the majorant
    double eps_used = 0.0;
};

// A_k^p = 2^k Theta_k ( I_{k,k} + sum_{s>=k} (Theta_s/Theta_k)^p I_{k,s+1} )^{1/p}
template <class Model>
AkResult A_k_term(const Model& model, const Schedule& s, std::int64_t k, double p,
                  std::int64_t smax, double eps = -1.0, double rel_tol = 1e-4,
                  long long max_evals = 400'000'000) {
    if (!s.in_S(k)) throw std::invalid_argument("A_k_term: k must lie in S");
    AkResult out;
    out.k = k;
    out.p = p;
    out.eps_used = eps > 0.0 ? eps : std::min((1.0 - 1.0 / p) / 4.0, (p - 1.0) / 2.0);

    double inner = 0.0, inner_err = 0.0;
    {
        AkTerm lead;
        lead.scale = k;
        lead.weight = 1.0;
        lead.integral = I_pks(model, s, k, k, p, rel_tol, max_evals);
        lead.contribution = lead.integral.quad.value;
        lead.majorant = std::exp2(-(1.0 - 1.0 / p - 2.0 * out.eps_used) * static_cast<double>(s.w_plus(k)));
        inner += lead.contribution;
        inner_err += lead.integral.quad.abs_error;
        out.terms.push_back(std::move(lead));
    }
    for (std::int64_t sc = k; sc <= smax; ++sc) {
        if (s.k_star(sc + 1) > 26) break;  // quadrature budget
        AkTerm t;
        t.scale = sc;
        t.weight = std::exp2(p * (model.log2_big_theta(sc) - model.log2_big_theta(k)));
        t.integral = I_pks(model, s, k, sc + 1, p, rel_tol, max_evals);
        t.contribution = t.weight * t.integral.quad.value;
        t.majorant = std::exp2(-(1.0 - 1.0 / p - 2.0 * out.eps_used) * static_cast<double>(s.w_plus(k)) +
                               (p - 1.0 - out.eps_used) *
                                   (model.log2_big_theta(sc) - model.log2_big_theta(k)));
        inner += t.contribution;
        inner_err += t.weight * t.integral.quad.abs_error;
        out.terms.push_back(std::move(t));
    }
    double front = std::exp2(static_cast<double>(k) + model.log2_big_theta(k));
    out.value = front * std::pow(inner, 1.0 / p);
    out.abs_error = (inner > 0.0)
                        ? front * std::pow(inner, 1.0 / p) * inner_err / (p * inner)
                        : 0.0;
    // decay flag: the last three s-terms decrease
    std::size_t m = out.terms.size();
    out.tail_trend_ok = m >= 3 && out.terms[m - 1].contribution <= out.terms[m - 2].contribution &&
                        out.terms[m - 2].contribution <= out.terms[m - 3].contribution;
    return out;
}

// One streaming pass over [0, Xi]: slice integrals of H^p and of every
// individual term f_k^p at the given checkpoint scales.
struct HNormProfile {
    double p = 0.0;
    std::int64_t kmax = 0;
    std::vector<double> checkpoints;              // ascending, last = Xi
    std::vector<double> h_slices, h_slice_errors; // per [chk_{i-1}, chk_i]
    std::vector<std::int64_t> term_ks;            // S members <= kmax
    std::vector<std::vector<double>> fk_slices;   // [term][slice]
    long long evaluations = 0;
    bool converged = true;

    double h_total() const {
        double t = 0.0;
        for (double v : h_slices) t += v;
        return t;
    }
    double h_total_error() const {
        double t = 0.0;
        for (double v : h_slice_errors) t += v;
        return t;
    }
    double fk_total(std::size_t i) const {
        double t = 0.0;
        for (double v : fk_slices[i]) t += v;
        return t;
    }
};

template <class Model>
HNormProfile h_norm_profile(const Model& model, const Schedule& s, double p,
                            std::vector<double> checkpoints, std::int64_t kmax,
                            double rel_tol = 3e-4, long long max_evals = 600'000'000) {
    HNormProfile prof;
    prof.p = p;
    prof.kmax = std::min(kmax, model.kmax_limit());
    std::sort(checkpoints.begin(), checkpoints.end());
    prof.checkpoints = checkpoints;
    prof.term_ks = model.s_members_in(0, prof.kmax);
    prof.fk_slices.assign(prof.term_ks.size(), {});

    // phases for zero-splitting: only factors that oscillate within the domain
    const double Xi = checkpoints.empty() ? 0.0 : checkpoints.back();
    std::vector<double> coeffs(static_cast<std::size_t>(prof.kmax), 0.0);
    std::vector<double> phases;
    for (std::int64_t j = 0; j < prof.kmax; ++j) {
        coeffs[static_cast<std::size_t>(j)] = model.coeff(j);
        double ph = coeffs[static_cast<std::size_t>(j)] * kPi;
        if (ph > 0.0 && kPi / ph < Xi) phases.push_back(ph);
    }

    const std::size_t nterms = prof.term_ks.size();
    std::vector<double> log2_front(nterms), log2_theta_k(nterms);
    for (std::size_t i = 0; i < nterms; ++i) {
        log2_front[i] = model.log2_2k_theta(prof.term_ks[i]);
        log2_theta_k[i] = model.log2_big_theta(prof.term_ks[i]);
    }

    // f(x) -> (H^p, f_0^p, f_1^p, ...)
    auto eval = [&](double xi, std::vector<double>& vals) {
        double pix = kPi * xi;
        double log2_x = xi > 0.0 ? std::log2(xi) : -1e300;
        double prefix = 0.0;  // log2 prod_{j<k} |cos|
        bool dead = false;
        double H = 0.0;
        std::size_t ti = 0;
        for (std::int64_t j = 0; j <= prof.kmax && ti < nterms; ++j) {
            if (ti < nterms && prof.term_ks[ti] == j) {
                double fk = 0.0;
                if (!dead) {
                    double e = log2_theta_k[ti] + log2_x;
                    double denom = e > 60.0 ? e : std::log1p(std::exp2(e)) / 0.6931471805599453;
                    fk = std::exp2(log2_front[ti] - denom + prefix);
                }
                vals[ti + 1] = fk;
                H += fk;
                ++ti;
            }
            if (!dead && xi > 0.0 && j < prof.kmax) {
                double c = std::fabs(std::cos(coeffs[static_cast<std::size_t>(j)] * pix));
                if (c == 0.0) {
                    dead = true;
                } else {
                    prefix += std::log2(c);
                }
            }
        }
        vals[0] = H;
    };

    // scalar integrand views over the shared evaluation
    auto integrate_slice = [&](double a, double b, std::vector<double>& out_vals,
                               std::vector<double>& out_errs) {
        out_vals.assign(nterms + 1, 0.0);
        out_errs.assign(nterms + 1, 0.0);
        detail::ZeroStream zs(phases, a, b);
        double prev = a;
        double per_len = rel_tol / std::max(b - a, 1e-300);
        std::vector<double> tmp(nterms + 1);
        // GK15 vector accumulation per panel, one refinement level on error
        std::function<void(double, double, double, int)> panel = [&](double lo, double hi,
                                                                     double ltol, int depth) {
            const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
            std::vector<double> g7(nterms + 1, 0.0), k15(nterms + 1, 0.0);
            eval(c, tmp);
            prof.evaluations += 1;
            for (std::size_t t = 0; t <= nterms; ++t) {
                double v = (t == 0) ? std::pow(tmp[0], p) : std::pow(tmp[t], p);
                g7[t] += detail::kGK15[0][1] * v;
                k15[t] += detail::kGK15[0][2] * v;
            }
            for (int i = 1; i < 8; ++i) {
                for (double sgn : {+1.0, -1.0}) {
                    eval(c + sgn * h * detail::kGK15[i][0], tmp);
                    prof.evaluations += 1;
                    for (std::size_t t = 0; t <= nterms; ++t) {
                        double v = std::pow(tmp[t], p);
                        g7[t] += detail::kGK15[i][1] * v;
                        k15[t] += detail::kGK15[i][2] * v;
                    }
                }
            }
            double err0 = std::fabs(k15[0] - g7[0]) * h;
            if (err0 > ltol && depth < 12) {
                panel(lo, c, 0.5 * ltol, depth + 1);
                panel(c, hi, 0.5 * ltol, depth + 1);
                return;
            }
            for (std::size_t t = 0; t <= nterms; ++t) {
                out_vals[t] += k15[t] * h;
                out_errs[t] += std::fabs(k15[t] - g7[t]) * h;
            }
        };
        while (prev < b) {
            double nxt = zs.next(prev);
            if (nxt <= prev) nxt = b;
            panel(prev, nxt, std::max(per_len * (nxt - prev), 1e-18), 0);
            zs.advance_past(nxt);
            prev = nxt;
            if (prof.evaluations > max_evals) {
                prof.converged = false;
                return;
            }
        }
    };

    double a = 0.0;
    std::vector<double> vals, errs;
    for (double b : prof.checkpoints) {
        integrate_slice(a, b, vals, errs);
        prof.h_slices.push_back(vals[0]);
        prof.h_slice_errors.push_back(errs[0]);
        for (std::size_t t = 0; t < nterms; ++t) prof.fk_slices[t].push_back(vals[t + 1]);
        if (!prof.converged) break;
        a = b;
    }
    return prof;
}

// int_0^Xi H^p, truncation kmax; monotone in both Xi and kmax.
template <class Model>
QuadResult H_norm_truncated(const Model& model, const Schedule& s, double p, double Xi,
                            std::int64_t kmax, double rel_tol = 3e-4,
                            long long max_evals = 600'000'000) {
    auto prof = h_norm_profile(model, s, p, {Xi}, kmax, rel_tol, max_evals);
    QuadResult q;
    q.value = prof.h_total();
    q.abs_error = prof.h_total_error();
    q.evaluations = prof.evaluations;
    q.converged = prof.converged;
    return q;
}

struct MinkowskiReport {
    double p = 0.0;
    double Xi = 0.0;
    double lhs_norm = 0.0;        // ||H||_{L^p[0,Xi]} (truncated H)
    double lhs_error = 0.0;
    double rhs_triangle = 0.0;    // sum_k ||f_k||_{L^p[0,Xi]}
    double rhs_ak = 0.0;          // sum over k with A_k computable at desk scale
    std::vector<std::int64_t> ak_ks;
    double empirical_constant = 0.0;  // lhs / rhs_triangle
    bool violated = false;            // lhs > rhs_triangle beyond combined error
};

template <class Model>
MinkowskiReport minkowski_consistency(const Model& model, const Schedule& s, double p, double Xi,
                                      std::int64_t kmax, std::int64_t smax, double rel_tol = 3e-4,
                                      long long max_evals = 600'000'000) {
    MinkowskiReport rep;
    rep.p = p;
    rep.Xi = Xi;
    auto prof = h_norm_profile(model, s, p, {Xi}, kmax, rel_tol, max_evals);
    rep.lhs_norm = std::pow(prof.h_total(), 1.0 / p);
    rep.lhs_error = prof.h_total() > 0.0
                        ? rep.lhs_norm * prof.h_total_error() / (p * prof.h_total())
                        : 0.0;
    double rhs = 0.0, rhs_err = 0.0;
    for (std::size_t t = 0; t < prof.term_ks.size(); ++t) {
        double ip = prof.fk_total(t);
        rhs += std::pow(ip, 1.0 / p);
        if (ip > 0.0) rhs_err += std::pow(ip, 1.0 / p) / (p * ip);  // slope * error folded below
    }
    rep.rhs_triangle = rhs;
    for (std::int64_t k : prof.term_ks) {
        if (s.k_star(k) > 26) continue;
        auto ak = A_k_term(model, s, k, p, smax, -1.0, rel_tol, max_evals);
        rep.rhs_ak += ak.value;
        rep.ak_ks.push_back(k);
    }
    rep.empirical_constant = rep.rhs_triangle > 0.0 ? rep.lhs_norm / rep.rhs_triangle : 0.0;
    rep.violated = rep.lhs_norm - rep.lhs_error > rep.rhs_triangle * (1.0 + 1e-9) + 1e-12;
    return rep;
}

}  // namespace cantorft
