#pragma once

// Gauss-Kronrod panels with zero-aligned splitting for |cos|^p products.
// Error estimates are the classical |K15 - G7| differences summed over
// panels; they are honest under the engine's piecewise-analyticity
// assumption (integrands here are analytic between the enumerated cosine
// zeros, with |.|^p cusps only at panel endpoints).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <span>
#include <vector>

namespace cantorft {

inline constexpr double kPi = 3.14159265358979323846;

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    long long evaluations = 0;
    bool converged = true;
};

namespace detail {

// G7-K15 node/weight table: {abscissa, gauss weight, kronrod weight}
inline constexpr double kGK15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

}  // namespace detail

template <class F>
inline double gk15_panel(const F& f, double a, double b, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double y0 = f(c);
    double g7 = detail::kGK15[0][1] * y0;
    double k15 = detail::kGK15[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        double dx = h * detail::kGK15[i][0];
        double y = f(c + dx) + f(c - dx);
        g7 += detail::kGK15[i][1] * y;
        k15 += detail::kGK15[i][2] * y;
    }
    g7 *= h;
    k15 *= h;
    err = std::fabs(k15 - g7);
    return k15;
}

// Adaptive integration over [a, b], starting from the given breakpoints and
// bisecting the worst panel until the summed error estimate drops below
// abs_tol or the evaluation budget runs out.
template <class F>
inline QuadResult integrate_adaptive(const F& f, double a, double b, double abs_tol,
                                     long long max_evals,
                                     std::span<const double> breakpoints = {}) {
    QuadResult out;
    if (!(b > a)) return out;

    struct Panel {
        double a, b, value, err;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    std::priority_queue<Panel> heap;
    double total = 0.0, total_err = 0.0;

    auto push_panel = [&](double lo, double hi) {
        double e = 0.0;
        double v = gk15_panel(f, lo, hi, e);
        out.evaluations += 15;
        heap.push({lo, hi, v, e});
        total += v;
        total_err += e;
    };

    double prev = a;
    for (double x : breakpoints) {
        if (x <= prev || x >= b) continue;
        push_panel(prev, x);
        prev = x;
    }
    push_panel(prev, b);

    while (total_err > abs_tol && out.evaluations + 30 <= max_evals && !heap.empty()) {
        Panel p = heap.top();
        if (p.err <= 0.0) break;
        heap.pop();
        total -= p.value;
        total_err -= p.err;
        double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b) {  // cannot split further in doubles
            total += p.value;
            total_err += p.err;
            break;
        }
        push_panel(p.a, mid);
        push_panel(mid, p.b);
    }
    // drain: totals already track everything in the heap
    out.value = total;
    out.abs_error = total_err;
    out.converged = total_err <= abs_tol;
    return out;
}

// Zeros of cos(phase * xi) inside (a, b), i.e. xi = (pi/2 + t pi)/phase.
inline void append_cos_zeros(double phase, double a, double b, std::size_t cap,
                             std::vector<double>& out) {
    if (!(phase > 0.0)) return;
    const double pi = 3.14159265358979323846;
    double t0 = std::ceil((a * phase / pi) - 0.5);
    for (double t = std::max(t0, 0.0);; t += 1.0) {
        double x = (0.5 + t) * pi / phase;
        if (x >= b) break;
        if (x > a) out.push_back(x);
        if (out.size() > cap) return;
    }
}

// integral over [a,b] of prod_j |cos(phases[j] * xi)|^p
inline QuadResult integrate_cos_product(std::span<const double> phases, double p, double a,
                                        double b, double abs_tol, long long max_evals) {
    if (phases.empty()) {
        // constant integrand 1
        return {b - a, 0.0, 0, true};
    }
    std::vector<double> brk;
    const std::size_t cap = 1u << 21;
    for (double ph : phases) append_cos_zeros(ph, a, b, cap, brk);
    if (brk.size() > cap) brk.clear();  // too oscillatory to pre-split; rely on adaptivity
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

    auto f = [&](double xi) {
        double prod = 1.0;
        for (double ph : phases) prod *= std::fabs(std::cos(ph * xi));
        if (prod == 0.0) return 0.0;
        return (p == 1.0) ? prod : std::pow(prod, p);
    };
    return integrate_adaptive(f, a, b, abs_tol, max_evals, brk);
}

}  // namespace cantorft
