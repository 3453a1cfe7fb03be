#pragma once

// Double-exponential quadrature: tanh-sinh on finite intervals and
// exp-sinh on half-lines. Integrable algebraic endpoint singularities are
// handled by the variable transform; nodes that would round onto an
// endpoint are dropped.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <type_traits>
#include <utility>

#include "freelevy/jet.hpp"

namespace freelevy::quad {

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const cplx& x) { return std::abs(x); }
inline double magnitude(const Jet& x) { return std::max(std::abs(x.v), std::abs(x.d)); }

struct Options {
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    int max_level = 12;
};

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    int levels = 0;
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kTMax = 6.5;

// Runs the level loop shared by both rules. `sweep(h, first, step)` must add
// the contributions of nodes t = first*h, (first+step)*h, ... on both sides
// and return {sum, evaluations}.
template <class T, class Sweep>
Result<T> refine(Sweep&& sweep, T center, double h0, const Options& opt) {
    Result<T> r;
    double h = h0;
    auto [s0, n0] = sweep(h, 1, 1);
    T sum = center + s0;
    r.evaluations = n0 + 1;
    T prev = sum * h;
    for (int level = 1; level <= opt.max_level; ++level) {
        h *= 0.5;
        auto [s, n] = sweep(h, 1, 2);
        sum = sum + s;
        r.evaluations += n;
        T cur = sum * h;
        const double err = magnitude(cur - prev);
        r.value = cur;
        r.error = err;
        r.levels = level;
        if (level >= 3 && err <= std::max(opt.abs_tol, opt.rel_tol * magnitude(cur))) {
            r.converged = true;
            return r;
        }
        prev = cur;
    }
    return r;
}

} // namespace detail

/// Tanh-sinh rule on a finite interval [a, b].
template <class F>
auto tanh_sinh(F&& f, double a, double b, const Options& opt = {})
    -> Result<std::decay_t<decltype(f(a))>> {
    using T = std::decay_t<decltype(f(a))>;
    using detail::kHalfPi;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    if (!(half > 0.0)) return Result<T>{T{}, 0.0, 0, 0, true};

    auto sweep = [&](double h, int first, int step) {
        T s{};
        int n = 0;
        for (int k = first;; k += step) {
            const double t = k * h;
            if (t > detail::kTMax) break;
            const double u = kHalfPi * std::sinh(t);
            const double e = std::exp(-2.0 * u);
            // distance of the node from the nearer endpoint, in units of `half`
            const double comp = 2.0 * e / (1.0 + e);
            const double ch = std::cosh(u);
            const double w = half * kHalfPi * std::cosh(t) / (ch * ch);
            const double delta = half * comp;
            const double xr = b - delta;
            const double xl = a + delta;
            bool any = false;
            if (xr != b && xr > mid) { s = s + f(xr) * w; ++n; any = true; }
            if (xl != a && xl < mid) { s = s + f(xl) * w; ++n; any = true; }
            if (!any || w == 0.0) break;
        }
        return std::pair<T, int>{s, n};
    };
    const T center = f(mid) * (half * kHalfPi);
    return detail::refine<T>(sweep, center, 1.0, opt);
}

/// Exp-sinh rule on the half-line [a, +inf).
template <class F>
auto exp_sinh(F&& f, double a, const Options& opt = {})
    -> Result<std::decay_t<decltype(f(a))>> {
    using T = std::decay_t<decltype(f(a))>;
    using detail::kHalfPi;
    auto node = [&](double t, T& acc) {
        const double u = kHalfPi * std::sinh(t);
        if (u > 700.0) return false;
        const double delta = std::exp(u);
        const double x = a + delta;
        if (x == a || !std::isfinite(x)) return false;
        const double w = kHalfPi * std::cosh(t) * delta;
        const T v = f(x);
        acc = acc + v * w;
        return true;
    };
    auto sweep = [&](double h, int first, int step) {
        T s{};
        int n = 0;
        for (int k = first;; k += step) {
            const double t = k * h;
            if (t > detail::kTMax) break;
            bool ok = false;
            if (node(t, s)) { ++n; ok = true; }
            if (node(-t, s)) { ++n; ok = true; }
            if (!ok) break;
        }
        return std::pair<T, int>{s, n};
    };
    T center{};
    node(0.0, center);
    return detail::refine<T>(sweep, center, 1.0, opt);
}

/// Integral over [a, b] where either endpoint may be infinite.
template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {})
    -> Result<std::decay_t<decltype(f(0.0))>> {
    using T = std::decay_t<decltype(f(0.0))>;
    const bool lo_inf = std::isinf(a);
    const bool hi_inf = std::isinf(b);
    if (!lo_inf && !hi_inf) return tanh_sinh(f, a, b, opt);
    if (!lo_inf && hi_inf) return exp_sinh(f, a, opt);
    if (lo_inf && !hi_inf) {
        return exp_sinh([&](double y) -> T { return f(-y); }, -b, opt);
    }
    auto left = exp_sinh([&](double y) -> T { return f(-y); }, 0.0, opt);
    auto right = exp_sinh(f, 0.0, opt);
    Result<T> r;
    r.value = left.value + right.value;
    r.error = left.error + right.error;
    r.levels = std::max(left.levels, right.levels);
    r.evaluations = left.evaluations + right.evaluations;
    r.converged = left.converged && right.converged;
    return r;
}

} // namespace freelevy::quad
