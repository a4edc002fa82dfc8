#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <quadmath.h>

#include "bassnet/errors.hpp"
#include "bassnet/exact.hpp"
#include "bassnet/generators.hpp"

namespace bassnet {

// Closed-form adoption/survival formulas for one-dimensional structures.
//
// The circle series has denominators q - j*p (j = 1..M-1); parameters with
// min_j |q - j*p| < 1e-6 * p are treated as singular.  Singular inputs are
// either refused (singular_fallback = false) or rerouted: through the exact
// master-equation solver when 2^M fits the state cap, otherwise through an
// averaged +/- relative perturbation of q evaluated in quad precision.
//
// Precision policy for the alternating series: long double up to M = 25,
// __float128 beyond (cancellation grows with M and q/p).

struct FormulaOptions {
    bool singular_fallback = true;
    int state_cap = 16; // cap for the exact-solver fallback
};

namespace detail {

inline long double real_exp(long double x) { return expl(x); }
inline __float128 real_exp(__float128 x) { return expq(x); }

// f_circle as a finite exponential series; valid away from q = j*p.
template <class Real>
Real f_circle_series(Real t, Real p, Real q, int M) {
    // c[i], i = 1..M-1, computed as c_{M-k} for k = 1..M-1:
    //   c_{M-k} = 1 - q^k / prod_{j=1..k} (q - j p)
    //               - sum_{d=1..k-1} ((-q/p)^d / d!) c_{M-k+d}
    std::vector<Real> c(std::size_t(M) + 1, Real(0));
    const Real mqp = -q / p;
    Real qpow = Real(1), denom = Real(1);
    for (int k = 1; k <= M - 1; ++k) {
        qpow *= q;
        denom *= q - Real(k) * p;
        Real inner = Real(0), w = Real(1);
        for (int d = 1; d <= k - 1; ++d) {
            w *= mqp / Real(d);
            inner += w * c[std::size_t(M - k + d)];
        }
        c[std::size_t(M - k)] = Real(1) - qpow / denom - inner;
    }
    // f = 1 - sum_{k=1..M-1} c_k (-q)^{k-1} / (p^{k-1} (k-1)!) e^{-(k p + q) t}
    //       - e^{-M p t} prod_{j=1..M-1} (-q) / (j p - q)
    Real acc = Real(0), coef = Real(1);
    for (int k = 1; k <= M - 1; ++k) {
        acc += c[std::size_t(k)] * coef * real_exp(-(Real(k) * p + q) * t);
        coef *= mqp / Real(k);
    }
    Real tail = real_exp(-Real(M) * p * t);
    for (int j = 1; j <= M - 1; ++j) tail *= -q / (Real(j) * p - q);
    return Real(1) - acc - tail;
}

inline bool circle_is_singular(double p, double q, int M) {
    for (int j = 1; j <= M - 1; ++j)
        if (std::abs(q - j * p) < 1e-6 * p) return true;
    return false;
}

inline void check_formula_args(double t, double p, double q, int M) {
    require(t >= 0.0 && std::isfinite(t), Errc::bad_grid, "t must be >= 0");
    require(std::isfinite(p) && p > 0.0, Errc::singular_parameters,
            "p must be positive");
    require(std::isfinite(q) && q >= 0.0, Errc::negative_rate,
            "q must be nonnegative");
    require(M >= 1, Errc::invalid_size, "M must be >= 1");
}

inline double f_circle_regular(double t, double p, double q, int M) {
    if (M <= 25) {
        const long double v = f_circle_series<long double>(t, p, q, M);
        return clamp01(double(v));
    }
    const __float128 v = f_circle_series<__float128>(t, p, q, M);
    return clamp01(double(v));
}

inline double f_circle_perturbed(double t, double p, double q, int M) {
    const double delta = 1e-5 * q;
    const __float128 lo =
        f_circle_series<__float128>(t, p, __float128(q - delta), M);
    const __float128 hi =
        f_circle_series<__float128>(t, p, __float128(q + delta), M);
    return clamp01(double((lo + hi) / 2));
}

} // namespace detail

// Adoption probability of a node on the one-sided circle of M nodes
// (equivalently, of node M on the one-sided line).
inline std::vector<double> f_circle_grid(const std::vector<double>& times,
                                         double p, double q, int M,
                                         const FormulaOptions& opt = {}) {
    for (double t : times) detail::check_formula_args(t, p, q, M);
    std::vector<double> out;
    out.reserve(times.size());
    if (!detail::circle_is_singular(p, q, M)) {
        for (double t : times) out.push_back(detail::f_circle_regular(t, p, q, M));
        return out;
    }
    require(opt.singular_fallback, Errc::singular_parameters,
            "q within 1e-6*p of j*p and fallback disabled");
    if (M <= opt.state_cap) {
        // One exact solve over the sorted, deduplicated grid.
        std::vector<double> grid = times;
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        SolveOptions sopt;
        sopt.state_cap = opt.state_cap;
        const Curve f = f_node(gen_circle(M, p, q), 1, grid, sopt);
        for (double t : times) {
            const std::size_t i =
                std::lower_bound(grid.begin(), grid.end(), t) - grid.begin();
            out.push_back(f.values[i]);
        }
        return out;
    }
    for (double t : times) out.push_back(detail::f_circle_perturbed(t, p, q, M));
    return out;
}

inline double f_circle(double t, double p, double q, int M,
                       const FormulaOptions& opt = {}) {
    return f_circle_grid({t}, p, q, M, opt)[0];
}

inline double s_circle(double t, double p, double q, int M,
                       const FormulaOptions& opt = {}) {
    return 1.0 - f_circle(t, p, q, M, opt);
}

// M -> infinity limit of the circle (the infinite one-sided 1D lattice):
// f(t) = 1 - exp(-(p+q) t + q (1 - e^{-p t}) / p).
inline double s_1d(double t, double p, double q) {
    detail::check_formula_args(t, p, q, 1);
    return std::exp(-(p + q) * t + q * (1.0 - std::exp(-p * t)) / p);
}

inline double f_1d(double t, double p, double q) { return 1.0 - s_1d(t, p, q); }

// Node j on the one-sided line (influence flows j-1 -> j): only the first
// j nodes matter, so this is the circle value at size j.
inline double f_line_one_sided(double t, double p, double q, int j,
                               const FormulaOptions& opt = {}) {
    return f_circle(t, p, q, j, opt);
}

// Node j on the two-sided line of M nodes, receiving at rate qL from its
// left neighbor and qR from its right neighbor:
//   [S_j] = e^{p t} [S_circle](t; p, qL, j) [S_circle](t; p, qR, M - j + 1).
inline double s_line_two_sided(double t, double p, double qL, double qR,
                               int j, int M, const FormulaOptions& opt = {}) {
    detail::check_formula_args(t, p, qL, M);
    detail::check_formula_args(t, p, qR, M);
    require(j >= 1 && j <= M, Errc::index_out_of_range,
            "node index " + std::to_string(j));
    const double left = s_circle(t, p, qL, j, opt);
    const double right = s_circle(t, p, qR, M - j + 1, opt);
    return detail::clamp01(std::exp(p * t) * left * right);
}

inline double f_line_two_sided(double t, double p, double qL, double qR,
                               int j, int M, const FormulaOptions& opt = {}) {
    return 1.0 - s_line_two_sided(t, p, qL, qR, j, M, opt);
}

// Expected adoption level (1/M) sum_j f_j on the one-sided line.
inline double f_level_line_one_sided(double t, double p, double q, int M,
                                     const FormulaOptions& opt = {}) {
    detail::check_formula_args(t, p, q, M);
    double s = 0.0;
    for (int j = 1; j <= M; ++j) s += f_circle(t, p, q, j, opt);
    return s / M;
}

} // namespace bassnet
