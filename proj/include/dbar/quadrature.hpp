#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "dbar/errors.hpp"

namespace dbar {

/// Adaptive Gauss-Kronrod (7-15) quadrature with interval bisection.
/// Unbounded supports are handled by the substitution r = t / (1 - t).
namespace quad {

// QUADPACK 15-point Kronrod rule on [-1, 1]; nodes are +/- xgk[i].
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

// Embedded 7-point Gauss weights (nodes are xgk[1], xgk[3], xgk[5], xgk[7]).
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct IntervalResult {
    double integral;
    double error;
};

template <typename F>
IntervalResult kronrod15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);
    double resk = kWgk[7] * fv[7];
    double resg = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 3; ++i) {
        const int j = 2 * i + 1;
        resg += kWg[i] * (fv[j] + fv[14 - j]);
    }
    return {resk * h, std::abs((resk - resg) * h)};
}

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-300;
    std::size_t max_evals = 1'000'000;
};

/// Globally adaptive bisection on [a, b]: refine the interval with the
/// largest error estimate until the total satisfies the tolerance.
template <typename F>
double integrate(const F& f, double a, double b, const Options& opt = {}) {
    struct Piece {
        double a, b, integral, error;
        bool operator<(const Piece& o) const { return error < o.error; }
    };
    std::priority_queue<Piece> heap;
    auto first = kronrod15(f, a, b);
    heap.push({a, b, first.integral, first.error});
    double total = first.integral;
    double toterr = first.error;
    std::size_t evals = 15;
    while (toterr > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (evals + 30 > opt.max_evals)
            throw QuadratureFailure("quadrature: evaluation budget exhausted");
        Piece worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            throw QuadratureFailure("quadrature: interval cannot be subdivided further");
        auto left = kronrod15(f, worst.a, mid);
        auto right = kronrod15(f, mid, worst.b);
        total += left.integral + right.integral - worst.integral;
        toterr += left.error + right.error - worst.error;
        heap.push({worst.a, mid, left.integral, left.error});
        heap.push({mid, worst.b, right.integral, right.error});
        evals += 30;
    }
    return total;
}

/// Integral over [0, inf) via r = t / (1 - t).
template <typename F>
double integrate_half_line(const F& f, const Options& opt = {}) {
    auto g = [&f](double t) {
        const double om = 1.0 - t;
        const double r = t / om;
        return f(r) / (om * om);
    };
    return integrate(g, 0.0, 1.0, opt);
}

} // namespace quad

/// 1-D radial weight on [0, R] or [0, inf).
struct RadialWeight {
    std::function<double(double)> w;
    double upper = 0.0;      // ignored when infinite
    bool infinite = false;
};

/// 2*pi * Integral r^(2j+1) w(r) dr over the support, i.e. the j-th moment
/// of the circle-invariant measure w(|z|) dA on C.
inline double quadrature_radial_moment(const RadialWeight& weight, int j,
                                       const quad::Options& opt = {}) {
    if (j < 0) throw InvalidGrade("quadrature_radial_moment: j must be >= 0");
    auto f = [&](double r) { return std::pow(r, 2 * j + 1) * weight.w(r); };
    const double value = weight.infinite ? quad::integrate_half_line(f, opt)
                                         : quad::integrate(f, 0.0, weight.upper, opt);
    const double m = 2.0 * M_PI * value;
    if (!(m > 0.0))
        throw NonpositiveMoment("quadrature_radial_moment: nonpositive result for j=" +
                                std::to_string(j));
    return m;
}

} // namespace dbar
