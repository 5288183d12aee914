#pragma once

// The transform series: ghat1 via the exact cosine-product expansion, the
// tensor ghat, the majorant H, Euler's sinc product with its truncation
// sandwich, and transforms of natural Cantor measures with decay scans.
//
// Term magnitudes like 2^k Theta_k prod cos are assembled in the log2
// domain (SignedLog) and only then summed in native precision; 2^k alone
// overflows doubles over the useful k range.

#include "cantorft/quadrature.hpp"
#include "cantorft/schedule.hpp"
#include "cantorft/signed_log.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace cantorft {

// ---- models -------------------------------------------------------------

// Data the series needs from a construction: S membership, the cosine phase
// coefficients (1-theta_j) Theta_j, black lengths, and tail information.
struct ScheduleModel {
    const Schedule* s = nullptr;

    std::int64_t kmax_limit() const { return s->k_cap(); }
    bool in_S(std::int64_t k) const { return s->in_S(k); }
    // phase coefficient (1-theta_j) Theta_j and black length (1-2theta_k) Theta_k,
    // as correctly rounded doubles (0.0 once they underflow)
    double coeff(std::int64_t j) const { return s->coeff_double(j); }
    double blen(std::int64_t k) const { return s->blen_double(k); }
    double log2_coeff(std::int64_t j) const {
        return std::log2(1.0 - s->theta_double(j)) + s->log2_big_theta(j);
    }
    double log2_blen(std::int64_t k) const {
        return std::log2(1.0 - 2.0 * s->theta_double(k)) + s->log2_big_theta(k);
    }
    double log2_2k_theta(std::int64_t k) const {
        return static_cast<double>(k) + s->log2_big_theta(k);
    }
    double log2_big_theta(std::int64_t k) const { return s->log2_big_theta(k); }
    // bound for sum_{k in S, k > K} 2^k Theta_k: successive S members halve
    // the running factor at least once each
    double tail_log2_beyond(std::int64_t K) const {
        std::int64_t idx = std::min(K + 1, s->k_cap() + 1);
        return 1.0 - static_cast<double>(s->exponent_drift(idx));
    }
    std::vector<std::int64_t> s_members_in(std::int64_t lo, std::int64_t hi) const {
        std::vector<std::int64_t> out;
        for (std::int64_t m : s->s_members())
            if (m >= lo && m <= hi) out.push_back(m);
        return out;
    }
};

// Constant dissection ratio, S = all generations (middle-thirds etc.).
struct ConstThetaModel {
    double theta = 1.0 / 3.0;
    std::int64_t limit = 4096;

    std::int64_t kmax_limit() const { return limit; }
    bool in_S(std::int64_t) const { return true; }
    double coeff(std::int64_t j) const { return std::exp2(log2_coeff(j)); }
    double blen(std::int64_t k) const { return std::exp2(log2_blen(k)); }
    double log2_coeff(std::int64_t j) const {
        return std::log2(1.0 - theta) + static_cast<double>(j) * std::log2(theta);
    }
    double log2_blen(std::int64_t k) const {
        return std::log2(1.0 - 2.0 * theta) + static_cast<double>(k) * std::log2(theta);
    }
    double log2_2k_theta(std::int64_t k) const {
        return static_cast<double>(k) * (1.0 + std::log2(theta));
    }
    double log2_big_theta(std::int64_t k) const {
        return static_cast<double>(k) * std::log2(theta);
    }
    double tail_log2_beyond(std::int64_t K) const {
        // sum_{k>K} (2 theta)^k = (2 theta)^{K+1} / (1 - 2 theta)
        double l2t = 1.0 + std::log2(theta);  // log2(2 theta) < 0
        return static_cast<double>(K + 1) * l2t - std::log2(1.0 - 2.0 * theta);
    }
    std::vector<std::int64_t> s_members_in(std::int64_t lo, std::int64_t hi) const {
        std::vector<std::int64_t> out;
        for (std::int64_t k = std::max<std::int64_t>(lo, 0); k <= hi; ++k) out.push_back(k);
        return out;
    }
};

// ---- primitives ----------------------------------------------------------

// prod_j cos(phases[j] * xi), sign tracked, magnitude in log2 domain.
inline SignedLog cos_product(std::span<const double> phases, double xi) {
    SignedLog acc = SignedLog::one();
    for (double ph : phases) {
        double c = std::cos(ph * xi);
        if (c == 0.0) return SignedLog::zero();
        acc.sign *= (c > 0 ? 1 : -1);
        acc.log2_mag += std::log2(std::fabs(c));
    }
    return acc;
}

// sinc(u) = sin(u)/u, safe at u = 0
inline double sinc(double u) {
    if (std::fabs(u) < 1e-8) return 1.0;  // 1 - u^2/6 within an ulp
    return std::sin(u) / u;
}

struct FtValue {
    double value = 0.0;
    double tail_bound = 0.0;
    std::int64_t kmax_used = 0;
    bool inconclusive = false;  // tail did not reach the requested tolerance
};

// ---- ghat1 / ghat --------------------------------------------------------

// ghat1(xi) = sum_{k in S} (-1)^k sin(|B_k| pi xi)/(pi xi) 2^k prod_{j<k} cos((1-theta_j) Theta_j pi xi)
template <class Model>
FtValue ghat1(const Model& model, double xi, std::int64_t kmax) {
    kmax = std::min(kmax, model.kmax_limit());
    FtValue out;
    out.kmax_used = kmax;
    const double ax = std::fabs(xi);
    const double pix = kPi * ax;

    double sum = 0.0, comp = 0.0;
    SignedLog prefix = SignedLog::one();  // prod_{j<k} cos(c_j pi xi)
    for (std::int64_t k = 0; k <= kmax; ++k) {
        if (model.in_S(k) && prefix.sign != 0) {
            // term magnitude: 2^k |B_k| |sinc(|B_k| pi xi)| * |prefix|;
            // the front is assembled in the log2 domain (2^k alone overflows),
            // the trigonometric arguments in native doubles
            double b = model.blen(k);
            double sv = (ax == 0.0) ? 1.0 : sinc(b * pix);
            SignedLog term = prefix;
            term.log2_mag += static_cast<double>(k) +
                             (b > 0.0 ? std::log2(b) : model.log2_blen(k));
            term *= SignedLog::from_double(sv == 0.0 ? 0.0 : sv);
            if (k % 2 != 0) term.sign = -term.sign;
            double t = term.to_double();
            double y = t - comp;
            double u = sum + y;
            comp = (u - sum) - y;
            sum = u;
        }
        if (k < kmax) {
            if (ax != 0.0) {
                double f = std::cos(model.coeff(k) * pix);
                prefix *= SignedLog::from_double(f);
                if (prefix.sign == 0) break;
            }
        }
    }
    out.value = sum;

    // tail: sum_{k in S, k > kmax} 2^k min(|B_k|, 1/(pi |xi|))
    double tail = 0.0;
    for (std::int64_t k : model.s_members_in(kmax + 1, model.kmax_limit())) {
        double l2 = static_cast<double>(k) + model.log2_blen(k);
        if (ax != 0.0) l2 = std::min(l2, static_cast<double>(k) - std::log2(pix));
        tail += std::exp2(l2);
    }
    tail += std::exp2(model.tail_log2_beyond(model.kmax_limit()));
    out.tail_bound = tail;
    return out;
}

// smallest kmax whose tail bound meets tol; capped at the model's limit
template <class Model>
FtValue ghat1_auto(const Model& model, double xi, double tol) {
    std::int64_t kmax = 16;
    FtValue v;
    for (;;) {
        v = ghat1(model, xi, kmax);
        if (v.tail_bound <= tol || kmax >= model.kmax_limit()) break;
        kmax *= 2;
    }
    v.inconclusive = v.tail_bound > tol;
    return v;
}

// tensor product over coordinates with first-order error propagation
template <class Model>
FtValue ghat(const Model& model, std::span<const double> xi, std::int64_t kmax) {
    FtValue out;
    out.kmax_used = kmax;
    std::vector<FtValue> parts;
    parts.reserve(xi.size());
    for (double x : xi) parts.push_back(ghat1(model, x, kmax));
    double prod = 1.0;
    for (auto& p : parts) prod *= p.value;
    double err = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        double other = 1.0;
        for (std::size_t j = 0; j < parts.size(); ++j)
            if (j != i) other *= std::fabs(parts[j].value) + parts[j].tail_bound;
        err += parts[i].tail_bound * other;
    }
    out.value = prod;
    out.tail_bound = err;
    return out;
}

// ---- majorant H ----------------------------------------------------------

// H(xi) = sum_{k in S} 2^k Theta_k / (1 + Theta_k xi) prod_{j<k} |cos((1-theta_j) Theta_j pi xi)|
template <class Model>
FtValue H_eval(const Model& model, double xi, std::int64_t kmax) {
    if (xi < 0.0) throw std::invalid_argument("H_eval: xi must be nonnegative");
    kmax = std::min(kmax, model.kmax_limit());
    FtValue out;
    out.kmax_used = kmax;
    const double log2_x = (xi == 0.0) ? -std::numeric_limits<double>::infinity() : std::log2(xi);
    const double pix = kPi * xi;

    double sum = 0.0;
    double prefix_abs = 0.0;  // log2 prod |cos|
    bool prefix_zero = false;
    for (std::int64_t k = 0; k <= kmax; ++k) {
        if (model.in_S(k) && !prefix_zero) {
            double l2_theta_k = model.log2_2k_theta(k) - static_cast<double>(k);
            double denom;  // log2(1 + Theta_k xi)
            double e = l2_theta_k + log2_x;
            if (e > 60.0)
                denom = e;
            else
                denom = std::log1p(std::exp2(e)) / 0.6931471805599453;
            sum += std::exp2(model.log2_2k_theta(k) - denom + prefix_abs);
        }
        if (k < kmax && xi != 0.0) {
            double f = std::fabs(std::cos(model.coeff(k) * pix));
            if (f == 0.0) { prefix_zero = true; break; }
            prefix_abs += std::log2(f);
        }
    }
    out.value = sum;

    double tail = 0.0;
    for (std::int64_t k : model.s_members_in(kmax + 1, model.kmax_limit()))
        tail += std::exp2(model.log2_2k_theta(k));
    tail += std::exp2(model.tail_log2_beyond(model.kmax_limit()));
    out.tail_bound = tail;
    return out;
}

// ---- Euler product and Cantor measure transforms -------------------------

// prod_{j=1}^n cos(2^-j xi); equals sinc between the truncation sandwich
// bounds for |xi| <= 2^{n-1} pi.
inline double euler_product(double xi, int n) {
    if (n < 1) throw std::invalid_argument("euler_product: n >= 1");
    double prod = 1.0;
    for (int j = 1; j <= n; ++j) prod *= std::cos(std::ldexp(xi, -j));
    return prod;
}

struct MeasureFt {
    double value = 0.0;
    double tail_flag = 0.0;  // relative wobble bound of dropped factors; inf when oscillatory
};

// muhat at generation kmax: prod_{j<kmax} cos(pi (1-theta_j) Theta_j xi)
template <class Model>
MeasureFt cantor_measure_ft(const Model& model, double xi, std::int64_t kmax) {
    kmax = std::min(kmax, model.kmax_limit());
    MeasureFt out;
    const double ax = std::fabs(xi);
    if (ax == 0.0) {
        out.value = 1.0;
        out.tail_flag = 0.0;
        return out;
    }
    const double pix = kPi * ax;
    const double log2_pix = std::log2(pix);
    SignedLog acc = SignedLog::one();
    for (std::int64_t j = 0; j < kmax; ++j) {
        acc *= SignedLog::from_double(std::cos(model.coeff(j) * pix));
        if (acc.sign == 0) break;
    }
    out.value = acc.to_double();

    // remaining phases u_j <= pi xi Theta_kmax 2^{-(j-kmax)}; if the first is
    // below 1/2 the dropped product is 1 + O(sum u_j^2)
    double first = model.log2_coeff(kmax < model.kmax_limit() ? kmax : model.kmax_limit()) + log2_pix;
    if (first < -1.0) {
        double s2 = std::exp2(2.0 * first) * (4.0 / 3.0);
        out.tail_flag = s2;  // |prod cos(u) - 1| <= sum u^2 / 2 * e^{...} ~ s2
    } else {
        out.tail_flag = std::numeric_limits<double>::infinity();
    }
    return out;
}

// ---- decay scan -----------------------------------------------------------

struct DecayScanEntry {
    double beta = 0.0;
    double sup = 0.0;
    double arg_at_sup = 0.0;
    double window_sups[4] = {0, 0, 0, 0};  // quartiles of the grid
    bool growing = false;                  // late records: evidence against e:fdec
};

// Empirical sup of |xi|^{beta/2} |muhat(xi)| over the grid; diagnostic only.
inline std::vector<DecayScanEntry> decay_exponent_scan(
    const std::function<double(double)>& abs_ft, std::span<const double> betas,
    std::span<const double> grid) {
    std::vector<DecayScanEntry> out;
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = abs_ft(grid[i]);
    for (double beta : betas) {
        DecayScanEntry e;
        e.beta = beta;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double w = std::pow(std::fabs(grid[i]), beta / 2.0) * vals[i];
            std::size_t q = std::min<std::size_t>(3, 4 * i / std::max<std::size_t>(grid.size(), 1));
            e.window_sups[q] = std::max(e.window_sups[q], w);
            if (w > e.sup) {
                e.sup = w;
                e.arg_at_sup = grid[i];
            }
        }
        double early = std::max({e.window_sups[0], e.window_sups[1], e.window_sups[2]});
        e.growing = e.window_sups[3] > 1.05 * early;
        out.push_back(e);
    }
    return out;
}

}  // namespace cantorft
