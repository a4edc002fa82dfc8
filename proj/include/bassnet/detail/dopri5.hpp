#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "bassnet/errors.hpp"

namespace bassnet::detail {

struct Dopri5Options {
    double rtol = 1e-12;
    double atol = 1e-14;
    long max_steps = 50'000'000L;
};

struct Dopri5Stats {
    double achieved_tol = 0.0; // max accepted local error estimate (absolute)
    long accepted = 0;
    long rejected = 0;
};

// Adaptive Dormand-Prince 5(4) with FSAL.  Integrates y' = rhs(y) from t0,
// clamping steps so that every entry of `times` (strictly ascending,
// times.front() >= t0) is hit exactly; on_grid(i, t, y) is invoked at each
// grid time.  rhs(y, dydt) must not alias its arguments.
template <class RHS, class OnGrid>
Dopri5Stats dopri5_integrate(RHS&& rhs, std::vector<double> y, double t0,
                             const std::vector<double>& times, OnGrid&& on_grid,
                             const Dopri5Options& opt = {}) {
    require(!times.empty(), Errc::bad_grid, "empty time grid");
    require(times.front() >= t0, Errc::bad_grid, "grid starts before t0");
    for (std::size_t i = 1; i < times.size(); ++i)
        require(times[i] > times[i - 1], Errc::bad_grid,
                "time grid must be strictly ascending");

    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n),
        ytmp(n), ynew(n);
    Dopri5Stats stats;

    double t = t0;
    rhs(y, k1); // kept fresh across steps: FSAL on accept, unchanged on reject

    // Initial step size from the classic |y|/|y'| heuristic.
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sc = opt.atol + opt.rtol * std::abs(y[i]);
        d0 += (y[i] / sc) * (y[i] / sc);
        d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    double h = (d1 > 0.0) ? 0.01 * std::sqrt(d0 / d1) : 1e-6;
    const double span = times.back() - t0;
    if (span > 0.0) h = std::min(h, span);

    std::size_t next = 0;
    // Emit grid points that coincide with the start.
    while (next < times.size() && times[next] == t) {
        on_grid(next, t, y);
        ++next;
    }

    long steps = 0;
    while (next < times.size()) {
        require(++steps <= opt.max_steps, Errc::tolerance_not_met,
                "step budget exhausted");
        const double t_target = times[next];
        bool clamped = false;
        if (t + h >= t_target) {
            h = t_target - t;
            clamped = true;
        }
        require(h > t_target * 1e-18 + 1e-300, Errc::tolerance_not_met,
                "step size underflow");

        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(ytmp, k2);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                  a54 * k4[i]);
        rhs(ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                  a64 * k4[i] + a65 * k5[i]);
        rhs(ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                  b5 * k5[i] + b6 * k6[i]);
        rhs(ynew, k7); // FSAL stage

        double err_sq = 0.0, err_abs = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                  e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc =
                opt.atol +
                opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err_sq += (e / sc) * (e / sc);
            err_abs = std::max(err_abs, std::abs(e));
        }
        const double err = std::sqrt(err_sq / static_cast<double>(n));

        if (err <= 1.0) {
            t = clamped ? t_target : t + h;
            y.swap(ynew);
            k1.swap(k7);           // FSAL: reuse the last stage
            ++stats.accepted;
            stats.achieved_tol = std::max(stats.achieved_tol, err_abs);
            if (clamped) {
                on_grid(next, t, y);
                ++next;
            }
        } else {
            ++stats.rejected; // y unchanged, so k1 = f(y) is still valid
        }
        const double factor =
            std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 10.0);
        h *= factor;
    }
    return stats;
}

} // namespace bassnet::detail
