#pragma once

// Scalar numerical kernels: bracketed root finding, adaptive Gauss-Kronrod
// quadrature and an embedded Runge-Kutta (Dormand-Prince 5(4)) integrator.

#include "lsw/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <string>
#include <vector>

namespace lsw::numerics
{

/// Stopping criterion shared by the iterative kernels. A quantity q with
/// error estimate e is accepted when e <= max(abs_tol, rel_tol * |q|).
struct Tolerance {
    double abs_tol = 1e-14;
    double rel_tol = 1e-12;
    std::size_t max_iter = 200;

    void validate() const
    {
        if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0) || (abs_tol == 0.0 && rel_tol == 0.0)) {
            throw DomainError("tolerance: abs_tol and rel_tol must be >= 0 and not both zero");
        }
        if (max_iter < 1) {
            throw DomainError("tolerance: max_iter must be >= 1");
        }
    }

    double bound(double scale) const
    {
        return std::max(abs_tol, rel_tol * std::abs(scale));
    }
};

inline constexpr Tolerance root_tolerance{1e-14, 1e-12, 200};
inline constexpr Tolerance quad_tolerance{1e-13, 1e-10, 2000};
inline constexpr Tolerance ode_tolerance{1e-12, 1e-10, 100000};

/// Final bracket of a root search. `x` is the returned root estimate and the
/// sign change of f lies in [x - width, x + width].
struct RootBracket {
    double lo;
    double hi;
    double x;
    double width;
    std::size_t iterations;
};

/// Bisection on [lo, hi]. f(lo) and f(hi) must differ in sign (or one of
/// them vanish); the bracket is halved until its width meets `tol`.
template <class F>
RootBracket bracket_root(F&& f, double lo, double hi, const Tolerance& tol = root_tolerance)
{
    tol.validate();
    if (!(lo < hi)) {
        throw DomainError("find_root: requires lo < hi");
    }
    double flo = f(lo);
    double fhi = f(hi);
    if (!std::isfinite(flo) || !std::isfinite(fhi)) {
        throw DomainError("find_root: non-finite function value at bracket end");
    }
    if (flo == 0.0) {
        return {lo, lo, lo, 0.0, 0};
    }
    if (fhi == 0.0) {
        return {hi, hi, hi, 0.0, 0};
    }
    if (std::signbit(flo) == std::signbit(fhi)) {
        throw BracketError("find_root: f(lo) and f(hi) have the same sign");
    }
    for (std::size_t it = 1; it <= tol.max_iter; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (hi - lo <= 2.0 * tol.bound(mid) || mid <= lo || mid >= hi) {
            return {lo, hi, mid, 0.5 * (hi - lo), it - 1};
        }
        const double fm = f(mid);
        if (!std::isfinite(fm)) {
            throw DomainError("find_root: non-finite function value inside bracket");
        }
        if (fm == 0.0) {
            return {mid, mid, mid, 0.0, it};
        }
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        }
        else {
            hi = mid;
        }
    }
    throw ConvergenceError("find_root: maximum number of iterations exceeded");
}

template <class F>
double find_root(F&& f, double lo, double hi, const Tolerance& tol = root_tolerance)
{
    return bracket_root(std::forward<F>(f), lo, hi, tol).x;
}

namespace detail
{

// 15-point Kronrod nodes on [0, 1] (symmetric) with the embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod_15(F& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    if (!std::isfinite(fc)) {
        throw DomainError("integrate: non-finite integrand at x = " + std::to_string(center));
    }
    double kronrod = kronrod_weights[7] * fc;
    double gauss = gauss_weights[3] * fc;
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        if (!std::isfinite(f1) || !std::isfinite(f2)) {
            throw DomainError("integrate: non-finite integrand near x = " + std::to_string(center));
        }
        kronrod += kronrod_weights[j] * (f1 + f2);
        if (j % 2 == 1) {
            gauss += gauss_weights[j / 2] * (f1 + f2);
        }
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (7, 15) quadrature. The panel with the
/// largest error estimate is bisected until the summed estimate meets `tol`
/// or `tol.max_iter` panels exist. Reversed limits give the negated integral.
template <class F>
double integrate(F&& f, double a, double b, const Tolerance& tol = quad_tolerance)
{
    tol.validate();
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("integrate: limits must be finite");
    }
    if (a == b) {
        return 0.0;
    }
    if (b < a) {
        return -integrate(std::forward<F>(f), b, a, tol);
    }

    std::priority_queue<detail::Panel> panels;
    panels.push(detail::gauss_kronrod_15(f, a, b));
    double value = panels.top().value;
    double error = panels.top().error;
    while (error > tol.bound(value)) {
        if (panels.size() >= tol.max_iter) {
            throw ConvergenceError("integrate: subdivision limit reached");
        }
        const detail::Panel worst = panels.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {
            break; // no representable midpoint; accept the current estimate
        }
        panels.pop();
        const detail::Panel left = detail::gauss_kronrod_15(f, worst.a, mid);
        const detail::Panel right = detail::gauss_kronrod_15(f, mid, worst.b);
        panels.push(left);
        panels.push(right);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        if (error < 0.0) {
            error = 0.0;
        }
    }

    // Re-sum from scratch to avoid drift from the running updates.
    double total = 0.0;
    while (!panels.empty()) {
        total += panels.top().value;
        panels.pop();
    }
    return total;
}

/// Integrates over consecutive break points, e.g. {0, 1, z_max}.
template <class F>
double integrate_pieces(F&& f, const std::vector<double>& breaks, const Tolerance& tol = quad_tolerance)
{
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        total += integrate(f, breaks[i], breaks[i + 1], tol);
    }
    return total;
}

namespace detail
{

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    // b - b* (difference between fifth and fourth order weights).
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

struct DpStep {
    double y;
    double error;
};

template <class F>
DpStep dormand_prince_step(F& f, double x, double y, double h)
{
    using T = DormandPrince;
    const double k1 = f(x, y);
    const double k2 = f(x + T::c2 * h, y + h * T::a21 * k1);
    const double k3 = f(x + T::c3 * h, y + h * (T::a31 * k1 + T::a32 * k2));
    const double k4 = f(x + T::c4 * h, y + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3));
    const double k5 = f(x + T::c5 * h, y + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4));
    const double k6 =
        f(x + h, y + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5));
    const double y_new = y + h * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
    const double k7 = f(x + h, y_new);
    const double err = h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 + T::e7 * k7);
    return {y_new, std::abs(err)};
}

} // namespace detail

/// Integrates dy/dx = f(x, y) from (x0, y0) to x1 with Dormand-Prince 5(4)
/// and local error control. x1 < x0 integrates backwards.
template <class F>
double solve_ode(F&& f, double y0, double x0, double x1, const Tolerance& tol = ode_tolerance)
{
    tol.validate();
    if (!std::isfinite(y0) || !std::isfinite(x0) || !std::isfinite(x1)) {
        throw DomainError("solve_ode: non-finite initial data");
    }
    if (x0 == x1) {
        return y0;
    }
    const double direction = x1 > x0 ? 1.0 : -1.0;
    const double span = std::abs(x1 - x0);
    double h = direction * span / 64.0;
    double x = x0;
    double y = y0;
    for (std::size_t it = 0; it < tol.max_iter; ++it) {
        if (direction * (x + h - x1) > 0.0) {
            h = x1 - x;
        }
        const detail::DpStep step = detail::dormand_prince_step(f, x, y, h);
        if (!std::isfinite(step.y) || !std::isfinite(step.error)) {
            throw IntegrationError("solve_ode: non-finite state near x = " + std::to_string(x));
        }
        const double scale = tol.bound(std::max(std::abs(y), std::abs(step.y)));
        const double ratio = step.error / scale;
        if (ratio <= 1.0) {
            x += h;
            y = step.y;
            if (direction * (x - x1) >= 0.0) {
                return y;
            }
        }
        const double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
        h *= factor;
        if (std::abs(h) <= 1e-15 * std::max(1.0, std::abs(x))) {
            throw IntegrationError("solve_ode: step size underflow near x = " + std::to_string(x));
        }
    }
    throw ConvergenceError("solve_ode: maximum number of steps exceeded");
}

/// Same scheme with `steps` equal steps and no error control (fifth order).
template <class F>
double solve_ode_fixed(F&& f, double y0, double x0, double x1, std::size_t steps)
{
    if (steps == 0) {
        throw DomainError("solve_ode_fixed: steps must be >= 1");
    }
    const double h = (x1 - x0) / static_cast<double>(steps);
    double y = y0;
    for (std::size_t i = 0; i < steps; ++i) {
        y = detail::dormand_prince_step(f, x0 + static_cast<double>(i) * h, y, h).y;
        if (!std::isfinite(y)) {
            throw IntegrationError("solve_ode_fixed: non-finite state");
        }
    }
    return y;
}

} // namespace lsw::numerics
