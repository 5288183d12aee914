#pragma once

// The incomplete-cosine-product integral inequality and its perturbed form:
//   int_0^{2^{n-1} pi} prod_{j in J} |cos(2^-j xi)|^p dxi <= 2^{n-|J|-1} pi C_p^{b(J)}
// with C_p = 2 pi^p sum s^-p, the A(q,r) tiling's intermediate bounds, and a
// falsification-style search for the perturbation radius delta(n).

#include "cantorft/dyadic.hpp"
#include "cantorft/index_set.hpp"
#include "cantorft/prng.hpp"
#include "cantorft/quadrature.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cantorft {

enum class Verdict { verified, violated, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::verified: return "Verified";
        case Verdict::violated: return "Violated";
        default: return "Inconclusive";
    }
}

struct CpValue {
    double value = 0.0;
    double abs_error = 0.0;
};

// C_p = 2 pi^p zeta(p), via partial sum plus Euler-Maclaurin tail.
inline CpValue c_p(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("c_p: series diverges for p <= 1");
    const int N = 4000;
    double sum = 0.0, comp = 0.0;
    for (int s = N; s >= 1; --s) {  // ascending magnitudes; compensated
        double t = std::pow(static_cast<double>(s), -p);
        double y = t - comp;
        double u = sum + y;
        comp = (u - sum) - y;
        sum = u;
    }
    double Nd = N;
    double tail = std::pow(Nd, 1.0 - p) / (p - 1.0) - 0.5 * std::pow(Nd, -p) +
                  p * std::pow(Nd, -p - 1.0) / 12.0;
    double tail_err = p * (p + 1.0) * (p + 2.0) * std::pow(Nd, -p - 3.0) / 720.0;
    double zeta = sum + tail;
    double scale = 2.0 * std::pow(kPi, p);
    return {scale * zeta, scale * (tail_err + 1e-13 * zeta)};
}

// 2^{n-|J|-1} pi C^{b(J)}; C defaults to C_p
inline double lemma31_bound(const IndexSet& J, int n, double constant) {
    double b = std::exp2(static_cast<double>(n - static_cast<std::int64_t>(J.size()) - 1)) * kPi;
    for (std::int64_t i = 0; i < J.components(); ++i) b *= constant;
    return b;
}

// lhs integral, exploiting that the integrand is even and 2^{max J} pi
// periodic: integrate one half-period and scale.
inline QuadResult lemma31_lhs(const IndexSet& J, int n, double p, double abs_tol = 1e-7,
                              long long max_evals = 4'000'000) {
    if (n < 1 || (!J.empty() && J.sup() > n))
        throw std::invalid_argument("lemma31_lhs: need J subset of {1..n}");
    const double upper = std::exp2(static_cast<double>(n - 1)) * kPi;
    if (J.empty()) return {upper, 0.0, 0, true};

    const std::int64_t m = J.sup();
    const double half_period = std::exp2(static_cast<double>(m - 1)) * kPi;
    const double copies = std::exp2(static_cast<double>(n - m));
    std::vector<double> phases;
    phases.reserve(J.size());
    for (std::int64_t j : J.elems()) phases.push_back(std::exp2(static_cast<double>(-j)));

    QuadResult q = integrate_cos_product(phases, p, 0.0, half_period, abs_tol / copies, max_evals);
    q.value *= copies;
    q.abs_error *= copies;
    return q;
}

struct Lemma31Check {
    IndexSet J;
    int n = 0;
    double p = 0.0;
    QuadResult lhs;
    double bound = 0.0;      // nominal
    double bound_lo = 0.0;   // bound minus its own uncertainty
    double bound_hi = 0.0;
    Verdict verdict = Verdict::inconclusive;
};

// Verified iff value + err <= bound (uncertainty on the unfavorable side);
// constant_override swaps C_p for a supplied constant (negative controls).
inline Lemma31Check lemma31_check(const IndexSet& J, int n, double p,
                                  std::optional<double> constant_override = std::nullopt,
                                  double abs_tol = 1e-7, long long max_evals = 4'000'000) {
    Lemma31Check out;
    out.J = J;
    out.n = n;
    out.p = p;
    out.lhs = lemma31_lhs(J, n, p, abs_tol, max_evals);

    double c, c_err;
    if (constant_override) {
        c = *constant_override;
        c_err = 0.0;
    } else {
        CpValue cp = c_p(p);
        c = cp.value;
        c_err = cp.abs_error;
    }
    out.bound = lemma31_bound(J, n, c);
    std::int64_t b = J.components();
    if (b == 0) {
        out.bound_lo = out.bound_hi = out.bound;
    } else {
        double rel = static_cast<double>(b) * (c_err / c + 4e-15);
        out.bound_lo = out.bound * (1.0 - rel);
        out.bound_hi = out.bound * (1.0 + rel);
    }

    if (!out.lhs.converged) {
        out.verdict = Verdict::inconclusive;
    } else if (out.lhs.value + out.lhs.abs_error <= out.bound_lo) {
        out.verdict = Verdict::verified;
    } else if (out.lhs.value - out.lhs.abs_error > out.bound_hi) {
        out.verdict = Verdict::violated;
    } else {
        out.verdict = Verdict::inconclusive;
    }
    return out;
}

// ---- A(q,r) tiling ------------------------------------------------------

struct TileRecord {
    double a = 0.0, b = 0.0;          // the tile A(q,r)
    QuadResult j0_integral;           // int_{A(q,r)} prod_{j in J0} |cos|^p
    QuadResult j0_one_period;         // int_0^{2^{n0-1} pi} of the same
    bool periodicity_match = false;   // equal within combined error (+ slack)
    double run_sup = 0.0;             // certified sup of prod_{j=l..m} |cos| over the tile
    double run_sup_bound = 0.0;       // pi / (1 + 2^{n0-l} pi r)
    bool sup_holds = false;
};

// Per-tile bounds for the decomposition J1 = J0 union {l..m}, sup(J0)+2 <= l <= m <= n.
inline TileRecord tiling_bounds(const IndexSet& J0, int l, int m, int n, double p,
                                std::int64_t q, std::int64_t r, double abs_tol = 1e-8,
                                long long max_evals = 2'000'000) {
    if (!(J0.sup() + 2 <= l && l <= m && m <= n))
        throw std::invalid_argument("tiling_bounds: invalid decomposition");
    const std::int64_t n0 = std::max<std::int64_t>(J0.sup(), 0);
    if (q < 0 || q >= (std::int64_t(1) << (n - m)) || r < 0 || r >= (std::int64_t(1) << (m - n0)))
        throw std::invalid_argument("tiling_bounds: tile index out of range");

    TileRecord rec;
    rec.a = (std::exp2(static_cast<double>(m - 1)) * q + std::exp2(static_cast<double>(n0 - 1)) * r) * kPi;
    rec.b = rec.a + std::exp2(static_cast<double>(n0 - 1)) * kPi;

    std::vector<double> ph0;
    for (std::int64_t j : J0.elems()) ph0.push_back(std::exp2(static_cast<double>(-j)));
    rec.j0_integral = integrate_cos_product(ph0, p, rec.a, rec.b, abs_tol, max_evals);
    rec.j0_one_period = integrate_cos_product(ph0, p, 0.0, std::exp2(static_cast<double>(n0 - 1)) * kPi,
                                              abs_tol, max_evals);
    double gap = std::fabs(rec.j0_integral.value - rec.j0_one_period.value);
    rec.periodicity_match =
        gap <= rec.j0_integral.abs_error + rec.j0_one_period.abs_error + 1e-9 * (1.0 + rec.j0_one_period.value);

    // certified sup of the run factor by grid + Lipschitz padding:
    // |d/dxi prod cos(2^-j xi)| <= sum 2^-j <= 2^{1-l}
    const int grid_n = 40000;
    double h = (rec.b - rec.a) / grid_n;
    double mx = 0.0;
    for (int i = 0; i <= grid_n; ++i) {
        double xi = rec.a + h * i;
        double prod = 1.0;
        for (int j = l; j <= m; ++j) prod *= std::fabs(std::cos(std::exp2(static_cast<double>(-j)) * xi));
        mx = std::max(mx, prod);
    }
    rec.run_sup = mx + std::exp2(static_cast<double>(1 - l)) * h * 0.5;
    rec.run_sup_bound = kPi / (1.0 + std::exp2(static_cast<double>(n0 - l)) * kPi * r);
    rec.sup_holds = rec.run_sup <= rec.run_sup_bound;
    return rec;
}

// ---- perturbed phases (Lemma on near-dyadic products) -------------------

struct PerturbedCheck {
    QuadResult lhs;
    double bound = 0.0;
    Verdict verdict = Verdict::inconclusive;
};

// int_0^{2^{n-1} pi} prod |cos(phi_j xi)|^p dxi vs (1+eps) 2^{n-|J|-1} pi C_p^{b(J)}.
// Perturbed phases lose exact periodicity, so the full interval is integrated.
inline PerturbedCheck perturbed_check(const IndexSet& J, int n, double p,
                                      std::span<const double> phases, double eps,
                                      double abs_tol = 1e-6, long long max_evals = 6'000'000) {
    if (phases.size() != J.size())
        throw std::invalid_argument("perturbed_check: one phase per element of J");
    PerturbedCheck out;
    const double upper = std::exp2(static_cast<double>(n - 1)) * kPi;
    if (J.empty()) {
        out.lhs = {upper, 0.0, 0, true};
    } else {
        out.lhs = integrate_cos_product(phases, p, 0.0, upper, abs_tol, max_evals);
    }
    CpValue cp = c_p(p);
    double c_lo = cp.value - cp.abs_error;
    double bound_lo = (1.0 + eps) * lemma31_bound(J, n, c_lo);
    out.bound = (1.0 + eps) * lemma31_bound(J, n, cp.value);
    if (!out.lhs.converged)
        out.verdict = Verdict::inconclusive;
    else if (out.lhs.value + out.lhs.abs_error <= bound_lo * (1.0 - 4e-15 * (1 + J.components())))
        out.verdict = Verdict::verified;
    else if (out.lhs.value - out.lhs.abs_error > out.bound * (1.0 + 4e-15 * (1 + J.components())))
        out.verdict = Verdict::violated;
    else
        out.verdict = Verdict::inconclusive;
    return out;
}

// ---- delta search -------------------------------------------------------

struct DeltaSearchResult {
    std::int64_t exponent = 0;  // delta = 2^-exponent
    bool from_fallback = false;
    long long checks = 0;
};

// Largest delta = 2^-m (falsification-tested, not certified) such that
// perturbed_check verifies for every J subset of {1..n}, p over a fixed grid
// of [1.001, p0], and corner plus `samples` seeded random phase vectors.
inline DeltaSearchResult delta_search(int n, double p0, double eps, int samples,
                                      std::uint64_t seed, double abs_tol = 1e-5,
                                      long long max_evals = 1'500'000) {
    if (n < 1 || n > 12) throw std::invalid_argument("delta_search: n in [1, 12]");
    std::vector<double> p_grid{1.001, 1.1, 1.5, p0};
    std::sort(p_grid.begin(), p_grid.end());
    p_grid.erase(std::unique(p_grid.begin(), p_grid.end()), p_grid.end());
    while (!p_grid.empty() && p_grid.back() > p0) p_grid.pop_back();

    DeltaSearchResult res;
    for (std::int64_t m = 2; m <= std::max(2 * n, 16); ++m) {
        double delta = std::exp2(static_cast<double>(-m));
        Prng rng(seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(m)));
        bool all_ok = true;

        for (std::uint64_t mask = 1; mask < (1ull << n) && all_ok; ++mask) {
            IndexSet J = IndexSet::from_mask(mask);
            // corner and sampled deviation patterns, shared across p
            std::vector<std::vector<double>> pattern_list;
            pattern_list.push_back(std::vector<double>(J.size(), +1.0));
            pattern_list.push_back(std::vector<double>(J.size(), -1.0));
            std::vector<double> alt_a(J.size()), alt_b(J.size());
            for (std::size_t i = 0; i < J.size(); ++i) {
                alt_a[i] = (i % 2 == 0) ? +1.0 : -1.0;
                alt_b[i] = -alt_a[i];
            }
            pattern_list.push_back(alt_a);
            pattern_list.push_back(alt_b);
            for (int t = 0; t < samples; ++t) {
                std::vector<double> u(J.size());
                for (auto& x : u) x = rng.next_signed_unit();
                pattern_list.push_back(std::move(u));
            }

            for (const auto& pat : pattern_list) {
                std::vector<double> phases(J.size());
                for (std::size_t i = 0; i < J.size(); ++i)
                    phases[i] = std::exp2(static_cast<double>(-J.elems()[i])) * (1.0 + pat[i] * delta);
                for (double p : p_grid) {
                    ++res.checks;
                    auto chk = perturbed_check(J, n, p, phases, eps, abs_tol, max_evals);
                    if (chk.verdict != Verdict::verified) {
                        all_ok = false;
                        break;
                    }
                }
                if (!all_ok) break;
            }
        }
        if (all_ok) {
            res.exponent = m;
            return res;
        }
    }
    res.exponent = 2 * n;  // conservative fallback 4^{-n}
    res.from_fallback = true;
    return res;
}

}  // namespace cantorft
