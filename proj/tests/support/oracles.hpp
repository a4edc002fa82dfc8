// Shared oracles for the test suite.
//
// The frozen constants below were derived OUTSIDE this library with an
// independent 50-digit computation (mpmath): circle/line survivals via the
// matrix exponential of the arc ODE system u_k' = -(kp+q)u_k + q u_{k+1}
// (k < M), u_M' = -Mp u_M, which was itself validated term-by-term in exact
// rational arithmetic against the 2^M-state master equation.  They pin this
// library's independent implementations (series evaluation, ODE solver,
// Monte Carlo) to values it did not produce.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bassnet/bassnet.hpp"

namespace oracles {

// Runs f and reports the bassnet error code it throws, if any.
template <class F>
inline std::optional<bassnet::Errc> error_code_of(F&& f) {
    try {
        std::forward<F>(f)();
    } catch (const bassnet::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

// --- circle / line / 1d closed-form values --------------------------------

// f_circle(t=1; p=0.3, q=0.6, M=5)
inline constexpr double f_circle_1_03_06_5 = 0.31724925293906594;

// s_circle(t=1; p=0.1, q=0.5, M=2); the hand formula
// (q e^{-2pt} - p e^{-(p+q)t}) / (q - p) gives the same digits.
inline constexpr double s_circle_1_01_05_2 = 0.8862105323239707;
inline constexpr double f_circle_1_01_05_2 = 0.11378946767602929;

// f_1d(t=1; p=0.3, q=0.6)
inline constexpr double f_1d_1_03_06 = 0.31725677471378654;

// Two-sided line survival [S_2](t=1; p=0.2, qL=0.3, qR=0.5, M=4).
inline constexpr double s_line2_1_aniso = 0.76188694746006446;

// Two-sided isotropic line survival [S_2](t=1; p=0.2, qL=qR=0.4, M=4);
// equals the last-influence quadrature below to 40 digits.
inline constexpr double s_line2_1_iso = 0.76297364344876491;

// Two-node network p1=p2=0.3 with a single edge 1 -> 2 of rate 0.5:
// S_2(t) = e^{-pt}(e^{-pt} + p(e^{-qt} - e^{-pt})/(p - q)) at t=1, and
// the joint survival S_{1,2}(t) = e^{-(p1+p2)t}.
inline constexpr double direct_edge_S2_1 = 0.69803564405923369;
inline constexpr double direct_edge_S12_1 = 0.54881163609402643;
inline constexpr double direct_edge_f2_1 = 0.30196435594076631;

// Circle-product gap e^{-pt} s(q1+q2) - s(q1) s(q2) at t=0.05 for
// p=0.11, q1=q2=0.2, M=8.  The gap's leading Taylor order is t^(M+1), so
// the true value sits far below double rounding noise; it was computed in
// exact rational arithmetic (Taylor) and confirmed with 60-digit matrix
// exponentials.  The library's extended-precision path must reproduce it.
inline constexpr double circle_product_gap_extreme = 3.66675151307064e-22;
inline constexpr double circle_product_gap_extreme_rel_tol = 1e-8;

// Covariance of f(x)=x and g(x)=x^2 under the weight w(x)=2x on [0,1]:
// E[fg] - E[f]E[g] = 2/5 - (2/3)(1/2) = 1/15.
inline constexpr double chebyshev_margin_x_x2_2x = 1.0 / 15.0;

// --- adaptive Simpson quadrature -------------------------------------------

namespace detail {

inline double simpson_rec(const std::function<double(double)>& f, double a,
                          double b, double fa, double fm, double fb,
                          double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-10) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

// --- last-influence quadrature for the isotropic two-sided line -----------
//
// For the two-sided line with total incoming rate q split evenly
// (qL = qR = q/2), conditioning on the time of the last potential
// influence event gives
//   [S_j](t) = e^{-(p+q)t} (1 + (q/2) A_j(t)),
//   A_j(t) = Int_0^t e^{(p+q)tau} [ s(tau,j) s(tau,M-j)
//                                 + s(tau,j-1) s(tau,M-j+1) ] dtau,
// where s(tau,k) is the k-node circle survival at rates (p, q/2) and
// s(tau,0) := 1.  This route never multiplies the factors the library's
// product formula uses, so it cross-checks that formula structurally.

inline double s_line_two_sided_quadrature(double t, double p, double q_total,
                                          int j, int M, double tol = 1e-10) {
    const double h = 0.5 * q_total;
    auto sc = [&](double tau, int k) {
        return k == 0 ? 1.0 : bassnet::s_circle(tau, p, h, k);
    };
    if (t == 0.0) return 1.0;
    auto integrand = [&](double tau) {
        return std::exp((p + q_total) * tau) *
               (sc(tau, j) * sc(tau, M - j) +
                sc(tau, j - 1) * sc(tau, M - j + 1));
    };
    const double A = integrate(integrand, 0.0, t, tol);
    return std::exp(-(p + q_total) * t) * (1.0 + h * A);
}

// --- exact law of the discrete-time scheme ---------------------------------
//
// The discrete simulation scheme freezes rates over steps of length dt and
// adopts node j in a step with probability 1 - e^{-lambda_j dt}, all nodes
// independently given the current state.  For small M its state law is an
// exactly computable Markov chain; this DP gives the scheme's true mean
// adoption level after n steps, so Monte Carlo output can be tested against
// the scheme's own law (no time-discretization error involved) and the
// scheme's law against the continuous model (pure O(dt) bias, no noise).

inline std::vector<double> discrete_scheme_level_law(const bassnet::Network& net,
                                                     double dt, int n_steps) {
    const int M = net.M();
    const std::size_t S = std::size_t(1) << M;
    std::vector<double> prob(S, 0.0), next(S);
    prob[0] = 1.0;
    std::vector<double> level(std::size_t(n_steps) + 1);
    auto mean_level = [&] {
        double acc = 0.0;
        for (std::size_t x = 0; x < S; ++x)
            if (prob[x] > 0.0)
                acc += prob[x] * double(std::popcount(std::uint64_t(x)));
        return acc / M;
    };
    level[0] = mean_level();
    for (int n = 1; n <= n_steps; ++n) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t x = 0; x < S; ++x) {
            if (prob[x] == 0.0) continue;
            std::vector<int> free;
            std::vector<double> padopt;
            for (int j = 1; j <= M; ++j) {
                if (x & (std::size_t(1) << (j - 1))) continue;
                double lam = net.p(j);
                for (const auto& [k, rate] : net.in(j))
                    if (x & (std::size_t(1) << (k - 1))) lam += rate;
                free.push_back(j);
                padopt.push_back(-std::expm1(-lam * dt));
            }
            const std::size_t F = free.size();
            for (std::size_t sub = 0; sub < (std::size_t(1) << F); ++sub) {
                double w = prob[x];
                std::size_t y = x;
                for (std::size_t b = 0; b < F; ++b) {
                    if (sub & (std::size_t(1) << b)) {
                        w *= padopt[b];
                        y |= std::size_t(1) << (free[b] - 1);
                    } else {
                        w *= 1.0 - padopt[b];
                    }
                }
                next[y] += w;
            }
        }
        prob.swap(next);
        level[std::size_t(n)] = mean_level();
    }
    return level;
}

} // namespace oracles
