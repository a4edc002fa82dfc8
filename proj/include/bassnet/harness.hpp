#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "bassnet/analysis.hpp"
#include "bassnet/chebyshev.hpp"
#include "bassnet/closedform.hpp"
#include "bassnet/exact.hpp"
#include "bassnet/generators.hpp"
#include "bassnet/io.hpp"
#include "bassnet/montecarlo.hpp"
#include "bassnet/network.hpp"
#include "bassnet/partition.hpp"
#include "bassnet/rng.hpp"

namespace bassnet {

// Machine verification of the library's structural claims (inequalities,
// equalities, dichotomies) at desk scale.  Each check produces a
// CheckReport whose fixtures carry the observed margin (slack before the
// claim would be violated) so failures are auditable.  Exact-method checks
// rely only on the master-equation solver and closed forms; Monte Carlo
// checks never claim strictness beyond 3 standard errors.

namespace checktol {
// |residual| bound for equality claims (solver tolerance is 1e-12; curves
// combine a handful of values).
inline constexpr double equality = 1e-9;
// Allowed numeric undershoot when verifying a non-strict inequality.
inline constexpr double inequality_slack = 1e-10;
// Minimum observed margin to call an inequality strict: 100x solver tol.
inline constexpr double strict_floor = 1e-10;
// Strict floor when a gap is evaluated in extended precision (the circle
// series in 128-bit floats carries ~1e-30 absolute rounding): inequalities
// whose contact at t -> 0 is of order t^M have genuine margins far below
// double noise at the first grid points, yet far above this.
inline constexpr double strict_floor_hp = 1e-27;
// A strict dichotomy branch must show at least this margin somewhere.
inline constexpr double strict_evidence = 1e-7;
// When a gap can only be evaluated at master-equation accuracy (singular
// series parameters), strictness is asserted from this time on; earlier
// grid points get the nonnegativity check only.
inline constexpr double strict_from_fallback = 1.0;
} // namespace checktol

struct FixtureResult {
    std::string name;
    bool pass = false;
    double margin = 0.0;
    std::string details;
};

struct CheckReport {
    std::string id;
    std::string method; // Exact | MonteCarlo | Formula
    bool pass = true;
    double min_margin = std::numeric_limits<double>::infinity();
    std::vector<FixtureResult> fixtures;

    void add(std::string name, bool ok, double margin, std::string details = "") {
        pass = pass && ok;
        min_margin = std::min(min_margin, margin);
        fixtures.push_back({std::move(name), ok, margin, std::move(details)});
    }
};

// t = 0 plus 50 log-spaced points in [0.05, 5].
inline std::vector<double> default_time_grid() {
    std::vector<double> t{0.0};
    const double lo = 0.05, hi = 5.0;
    for (int i = 0; i < 50; ++i)
        t.push_back(lo * std::pow(hi / lo, double(i) / 49.0));
    return t;
}

namespace detail {

inline std::string fmt(double v) { return format_double(v); }

// Smallest value of diff over grid entries with t > 0.
inline double min_positive_t(const std::vector<double>& times,
                             const std::vector<double>& diff) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < times.size(); ++i)
        if (times[i] > 0.0) m = std::min(m, diff[i]);
    return m;
}

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Survival on the one-sided circle in 128-bit floats (regular parameters
// only); q = 0 degenerates to e^{-pt}.  All arguments arrive as 128-bit
// values: a double-rounded p*t perturbs e^{-pt} by ~|pt| * 1e-16, and a
// double-rounded q1+q2 perturbs S by a similar amount, both swamping gaps
// that close like t^M (the exact sum of two doubles fits in 128 bits).
inline __float128 s_circle_hp(__float128 t, __float128 p, __float128 q,
                              int M) {
    if (q == 0 || M == 1) return real_exp(-p * t);
    return __float128(1) - f_circle_series<__float128>(t, p, q, M);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Pair checks: [S_{i,j}] >= [S_i][S_j]; equality exactly when no node is
// influential to both i and j; identity
// [S_{i,j}] - [S_i][S_j] = f_{i,j} - f_i f_j.
// ---------------------------------------------------------------------------

namespace detail {

inline void add_pair_fixtures(CheckReport& r, const Network& net,
                              const StateDistribution& dist, int i, int j) {
    const Curve Si = survival_from(dist, {i});
    const Curve Sj = survival_from(dist, {j});
    const Curve Sij = survival_from(dist, {i, j});
    const Curve Fij = f_pair_from(dist, i, j);
    double min_diff = std::numeric_limits<double>::infinity();
    double max_diff = -std::numeric_limits<double>::infinity();
    double max_ident = 0.0;
    for (std::size_t n = 0; n < dist.times.size(); ++n) {
        const double d = Sij.values[n] - Si.values[n] * Sj.values[n];
        min_diff = std::min(min_diff, d);
        max_diff = std::max(max_diff, d);
        const double fi = 1.0 - Si.values[n], fj = 1.0 - Sj.values[n];
        max_ident = std::max(max_ident,
                             std::abs(d - (Fij.values[n] - fi * fj)));
    }
    const std::string suffix = " i=" + std::to_string(i) + " j=" +
                               std::to_string(j);
    r.add("pair-inequality" + suffix, min_diff >= -checktol::inequality_slack,
          min_diff, "min_t ([S_ij] - [S_i][S_j]) = " + fmt(min_diff));
    r.add("pair-identity" + suffix, max_ident <= checktol::equality,
          checktol::equality - max_ident,
          "max |([S_ij]-[S_i][S_j]) - (f_ij - f_i f_j)| = " + fmt(max_ident));
    if (common_influential_node_exists(net, i, j)) {
        r.add("pair-dichotomy strict" + suffix,
              max_diff > checktol::strict_evidence,
              max_diff - checktol::strict_evidence,
              "common influential node exists; max diff = " + fmt(max_diff));
    } else {
        const double dev = std::max(std::abs(min_diff), std::abs(max_diff));
        r.add("pair-dichotomy equality" + suffix, dev <= checktol::equality,
              checktol::equality - dev,
              "no common influential node; max |diff| = " + fmt(dev));
    }
}

} // namespace detail

inline CheckReport check_pair(const Network& net, int i, int j,
                              const std::vector<double>& times,
                              int state_cap = 16) {
    require(i != j, Errc::bad_omega, "pair needs two distinct nodes");
    SolveOptions opt;
    opt.state_cap = state_cap;
    CheckReport r;
    r.id = "pair " + net.label() + " i=" + std::to_string(i) + " j=" +
           std::to_string(j);
    r.method = "Exact";
    const StateDistribution dist = solve(net, times, opt);
    detail::add_pair_fixtures(r, net, dist, i, j);
    return r;
}

// All node pairs of one network from a single solve.
inline CheckReport check_pair_all(const Network& net,
                                  const std::vector<double>& times,
                                  int state_cap = 16) {
    require(net.M() >= 2, Errc::invalid_size, "need at least two nodes");
    SolveOptions opt;
    opt.state_cap = state_cap;
    CheckReport r;
    r.id = "pair-all " + net.label();
    r.method = "Exact";
    const StateDistribution dist = solve(net, times, opt);
    for (int i = 1; i <= net.M(); ++i)
        for (int j = i + 1; j <= net.M(); ++j)
            detail::add_pair_fixtures(r, net, dist, i, j);
    return r;
}

// ---------------------------------------------------------------------------
// Funnel checks around a partition {A, B, {j}}.
// ---------------------------------------------------------------------------

inline CheckReport check_funnel(const Network& net, const Partition& part,
                                const std::vector<double>& times,
                                int state_cap = 16) {
    validate_partition(net, part);
    SolveOptions opt;
    opt.state_cap = state_cap;
    CheckReport r;
    r.id = "funnel " + net.label() + " j=" + std::to_string(part.j);
    r.method = "Exact";

    auto Sj = [&](const Network& n2, int node) {
        return survival(n2, {node}, times, opt).values;
    };
    const std::vector<double> S_full = Sj(net, part.j);
    const std::vector<double> S_A = Sj(derive(net, part, DerivedKind::A), part.j);
    const std::vector<double> S_B = Sj(derive(net, part, DerivedKind::B), part.j);
    const std::vector<double> S_Pj = Sj(derive(net, part, DerivedKind::Pj), part.j);
    const std::vector<double> S_APj =
        Sj(derive(net, part, DerivedKind::APj), part.j);
    const std::vector<double> S_BPj =
        Sj(derive(net, part, DerivedKind::BPj), part.j);
    const double pj = net.p(part.j);
    std::vector<double> ext(times.size());
    for (std::size_t n = 0; n < times.size(); ++n)
        ext[n] = std::exp(-pj * times[n]);

    double res_pj = 0.0, res_a = 0.0, res_b = 0.0;
    double min_ineq = std::numeric_limits<double>::infinity();
    double min_ratio = std::numeric_limits<double>::infinity();
    double max_diff = -std::numeric_limits<double>::infinity();
    double max_absdiff = 0.0;
    for (std::size_t n = 0; n < times.size(); ++n) {
        res_pj = std::max(res_pj, std::abs(S_Pj[n] - ext[n]));
        res_a = std::max(res_a, std::abs(S_APj[n] - S_A[n] * ext[n]));
        res_b = std::max(res_b, std::abs(S_BPj[n] - S_B[n] * ext[n]));
        const double d = S_full[n] - S_A[n] * S_B[n] * ext[n];
        min_ineq = std::min(min_ineq, d);
        max_diff = std::max(max_diff, d);
        max_absdiff = std::max(max_absdiff, std::abs(d));
        min_ratio = std::min(min_ratio,
                             S_full[n] - S_APj[n] * S_BPj[n] / ext[n]);
    }
    r.add("funnel-isolated-rate", res_pj <= checktol::equality,
          checktol::equality - res_pj,
          "max |S_Pj - e^{-p_j t}| = " + detail::fmt(res_pj));
    r.add("funnel-single-side A", res_a <= checktol::equality,
          checktol::equality - res_a,
          "max |S_APj - S_A e^{-p_j t}| = " + detail::fmt(res_a));
    r.add("funnel-single-side B", res_b <= checktol::equality,
          checktol::equality - res_b,
          "max |S_BPj - S_B e^{-p_j t}| = " + detail::fmt(res_b));
    r.add("funnel-inequality", min_ineq >= -checktol::inequality_slack,
          min_ineq,
          "min_t (S_full - S_A S_B e^{-p_j t}) = " + detail::fmt(min_ineq));
    r.add("funnel-ratio", min_ratio >= -checktol::inequality_slack, min_ratio,
          "min_t (S_full - S_APj S_BPj e^{p_j t}) = " + detail::fmt(min_ratio));
    const bool funnel = is_funnel_node(net, part);
    if (funnel) {
        r.add("funnel-dichotomy equality", max_absdiff <= checktol::equality,
              checktol::equality - max_absdiff,
              "funnel node; max |diff| = " + detail::fmt(max_absdiff));
    } else {
        r.add("funnel-dichotomy strict", max_diff > checktol::strict_evidence,
              max_diff - checktol::strict_evidence,
              "not a funnel node; max diff = " + detail::fmt(max_diff));
    }
    const bool cut = is_vertex_cut(net, part);
    r.add("vertexcut-implies-funnel", !cut || funnel, (!cut || funnel) ? 1.0 : -1.0,
          std::string("vertex cut: ") + (cut ? "yes" : "no") +
              ", funnel node: " + (funnel ? "yes" : "no"));

    // Splitting j into (j_A, j_B, j_p) preserves the joint nonadoption law:
    // [S_j in N] = [S_{j_A, j_B, j_p} in the split network].  Out-edges of j
    // are non-influential to {j} and are reduced away first.
    const Network red = indifference_reduce(net, {part.j});
    const Network split = split_node(red, part);
    const std::vector<double> S_split =
        survival(split, {part.j, net.M() + 1, net.M() + 2}, times, opt).values;
    double res_split = 0.0;
    for (std::size_t n = 0; n < times.size(); ++n)
        res_split = std::max(res_split, std::abs(S_split[n] - S_full[n]));
    r.add("funnel-split-network", res_split <= checktol::equality,
          checktol::equality - res_split,
          "max |S_split - S_full| = " + detail::fmt(res_split));
    return r;
}

// ---------------------------------------------------------------------------
// Circle checks.
// ---------------------------------------------------------------------------

// [S_circle](q1) [S_circle](q2) < e^{-pt} [S_circle](q1+q2) for t > 0,
// M >= 3; the M -> infinity analogue is an identity for s_1d.
//
// The gap closes like t^M as t -> 0 (the two sides differ only once the
// adoption wave wraps the circle), so genuine margins at the smallest grid
// times sit far below double rounding.  With regular parameters the gap is
// therefore evaluated in 128-bit floats and certified against the
// extended-precision floor; with singular parameters (master-equation
// fallback, ~1e-12 accuracy) small times get the nonnegativity check only
// and strictness is asserted from t >= 1.
inline CheckReport check_circle_product(const std::vector<double>& times,
                                        double p, double q1, double q2, int M,
                                        const FormulaOptions& fopt = {}) {
    require(M >= 3, Errc::invalid_size, "product comparison needs M >= 3");
    require(q1 > 0.0 && q2 > 0.0, Errc::negative_rate, "q1, q2 must be > 0");
    CheckReport r;
    r.id = "circle-product M=" + std::to_string(M) + " p=" + detail::fmt(p) +
           " q1=" + detail::fmt(q1) + " q2=" + detail::fmt(q2);
    r.method = "Formula";
    const bool hp = !detail::circle_is_singular(p, q1, M) &&
                    !detail::circle_is_singular(p, q2, M) &&
                    !detail::circle_is_singular(p, q1 + q2, M);
    std::vector<double> gap(times.size());
    if (hp) {
        const __float128 P = p, Q1 = q1, Q2 = q2, Q12 = __float128(q1) + q2;
        for (std::size_t n = 0; n < times.size(); ++n) {
            const __float128 T = times[n];
            const __float128 e = detail::real_exp(-P * T);
            gap[n] = double(e * detail::s_circle_hp(T, P, Q12, M) -
                            detail::s_circle_hp(T, P, Q1, M) *
                                detail::s_circle_hp(T, P, Q2, M));
        }
    } else {
        const std::vector<double> f1 = f_circle_grid(times, p, q1, M, fopt);
        const std::vector<double> f2 = f_circle_grid(times, p, q2, M, fopt);
        const std::vector<double> f12 =
            f_circle_grid(times, p, q1 + q2, M, fopt);
        for (std::size_t n = 0; n < times.size(); ++n)
            gap[n] = std::exp(-p * times[n]) * (1.0 - f12[n]) -
                     (1.0 - f1[n]) * (1.0 - f2[n]);
    }
    const double noise = hp ? checktol::strict_floor_hp : checktol::strict_floor;
    const double t_strict = hp ? 0.0 : checktol::strict_from_fallback;
    double min_gap = std::numeric_limits<double>::infinity();
    double min_strict = std::numeric_limits<double>::infinity();
    double boundary = 0.0;
    bool has_zero = false, has_strict = false;
    for (std::size_t n = 0; n < times.size(); ++n) {
        if (times[n] > 0.0) {
            min_gap = std::min(min_gap, gap[n]);
            if (times[n] > t_strict) {
                min_strict = std::min(min_strict, gap[n]);
                has_strict = true;
            }
        } else {
            has_zero = true;
            boundary = std::abs(gap[n]);
        }
    }
    if (has_zero)
        r.add("circle-product-boundary t=0", boundary <= 1e-12,
              1e-12 - boundary, "|gap(0)| = " + detail::fmt(boundary));
    const std::string how = hp ? "extended precision" : "exact fallback";
    r.add("circle-product nonneg", min_gap >= -noise, min_gap,
          "min_{t>0} (e^{-pt} S(q1+q2) - S(q1) S(q2)) = " +
              detail::fmt(min_gap) + " (" + how + ")");
    if (has_strict)
        r.add("circle-product strict" + std::string(hp ? "" : " t>=1"),
              min_strict > noise, min_strict,
              "min gap over certified range = " + detail::fmt(min_strict) +
                  " (" + how + ")");
    double max_res = 0.0;
    for (double t : times)
        max_res = std::max(max_res,
                           std::abs(s_1d(t, p, q1) * s_1d(t, p, q2) -
                                    std::exp(-p * t) * s_1d(t, p, q1 + q2)));
    r.add("s1d-product-identity", max_res < 1e-12, 1e-12 - max_res,
          "max |s(q1) s(q2) - e^{-pt} s(q1+q2)| = " + detail::fmt(max_res));
    return r;
}

// Closed form against the master equations on the one-sided circle.
inline CheckReport check_circle_formula_exact(const std::vector<double>& times,
                                              double p, double q, int M,
                                              int state_cap = 16) {
    CheckReport r;
    r.id = "circle-formula M=" + std::to_string(M) + " p=" + detail::fmt(p) +
           " q=" + detail::fmt(q);
    r.method = "Exact";
    SolveOptions sopt;
    sopt.state_cap = state_cap;
    FormulaOptions fopt;
    fopt.state_cap = state_cap;
    const std::vector<double> ff = f_circle_grid(times, p, q, M, fopt);
    const Curve fe = f_node(gen_circle(M, p, q), 1, times, sopt);
    double max_res = 0.0;
    for (std::size_t n = 0; n < times.size(); ++n)
        max_res = std::max(max_res, std::abs(ff[n] - fe.values[n]));
    if (M == 1) {
        double res1 = max_res;
        for (std::size_t n = 0; n < times.size(); ++n)
            res1 = std::max(res1,
                            std::abs(ff[n] - (1.0 - std::exp(-p * times[n]))));
        r.add("circle-single-node", res1 <= 1e-10, 1e-10 - res1,
              "max |f - (1 - e^{-pt})| = " + detail::fmt(res1));
    } else {
        r.add("circle-formula-exact M=" + std::to_string(M), max_res <= 1e-8,
              1e-8 - max_res, "max |formula - exact| = " + detail::fmt(max_res));
    }
    return r;
}

// One- and two-sided circles with qR + qL = q share all single-node
// marginals.
inline CheckReport check_sided_equivalence(const std::vector<double>& times,
                                           double p, double q, int M,
                                           int state_cap = 16) {
    require(M >= 2, Errc::invalid_size, "sided comparison needs M >= 2");
    CheckReport r;
    r.id = "circle-sided M=" + std::to_string(M) + " p=" + detail::fmt(p) +
           " q=" + detail::fmt(q);
    r.method = "Exact";
    SolveOptions opt;
    opt.state_cap = state_cap;
    const StateDistribution one = solve(gen_circle(M, p, q), times, opt);
    const double splits[3][2] = {{0.5, 0.5}, {0.25, 0.75}, {0.1, 0.9}};
    for (const auto& s : splits) {
        const double qR = s[0] * q, qL = s[1] * q;
        const StateDistribution two =
            solve(gen_circle_two_sided(M, p, qR, qL), times, opt);
        double max_res = 0.0;
        for (int j = 1; j <= M; ++j) {
            const Curve a = f_node_from(one, j);
            const Curve b = f_node_from(two, j);
            for (std::size_t n = 0; n < times.size(); ++n)
                max_res = std::max(max_res,
                                   std::abs(a.values[n] - b.values[n]));
        }
        r.add("circle-sided-equivalence qR=" + detail::fmt(qR) +
                  " qL=" + detail::fmt(qL),
              max_res <= checktol::equality, checktol::equality - max_res,
              "max_j max_t |f_1s - f_2s| = " + detail::fmt(max_res));
    }
    return r;
}

// f_circle(.,p,q,M) increases to f_1d as M grows (monotone convergence).
inline CheckReport check_f1d_limit(const std::vector<double>& times, double p,
                                   double q, const FormulaOptions& fopt = {}) {
    CheckReport r;
    r.id = "circle-f1d-limit p=" + detail::fmt(p) + " q=" + detail::fmt(q);
    r.method = "Formula";
    const int Ms[3] = {10, 20, 40};
    double gaps[3];
    for (int k = 0; k < 3; ++k) {
        const std::vector<double> f = f_circle_grid(times, p, q, Ms[k], fopt);
        double g = 0.0, signed_min = std::numeric_limits<double>::infinity();
        for (std::size_t n = 0; n < times.size(); ++n) {
            const double d = f_1d(times[n], p, q) - f[n];
            g = std::max(g, std::abs(d));
            signed_min = std::min(signed_min, d);
        }
        gaps[k] = g;
        if (k == 0)
            r.add("f1d-limit from-below", signed_min >= -checktol::equality,
                  signed_min, "min_t (f_1d - f_circle(M=10)) = " +
                      detail::fmt(signed_min));
    }
    // Monotone convergence is asserted up to evaluation rounding: once a gap
    // falls below ~1e-11 the series and its limit agree to double noise, so
    // doubling M cannot shrink the measured gap further.
    const double noise = 1e-11;
    const bool decreasing =
        gaps[1] <= gaps[0] + noise && gaps[2] <= gaps[1] + noise;
    const bool resolved = gaps[0] > 1e-9;
    const bool ok = decreasing && gaps[2] <= 1e-9 &&
                    (!resolved || gaps[0] > gaps[2]);
    r.add("f1d-limit convergence", ok, 1e-9 - gaps[2],
          "gaps M=10/20/40: " + detail::fmt(gaps[0]) + ", " +
              detail::fmt(gaps[1]) + ", " + detail::fmt(gaps[2]));
    return r;
}

// ---------------------------------------------------------------------------
// Line checks.
// ---------------------------------------------------------------------------

// Closed forms for both sidednesses against the master equations, plus
// monotonicity of adoption along the one-sided line.
inline CheckReport check_line_formulas(const std::vector<double>& times,
                                       double p, double qL, double qR, int M,
                                       int state_cap = 16) {
    require(M >= 2, Errc::invalid_size, "line checks need M >= 2");
    CheckReport r;
    r.id = "line-formulas M=" + std::to_string(M) + " p=" + detail::fmt(p) +
           " qL=" + detail::fmt(qL) + " qR=" + detail::fmt(qR);
    r.method = "Exact";
    SolveOptions sopt;
    sopt.state_cap = state_cap;
    FormulaOptions fopt;
    fopt.state_cap = state_cap;
    const double q = qL + qR;

    const StateDistribution one = solve(gen_line(M, p, q), times, sopt);
    double res1 = 0.0;
    for (int j = 1; j <= M; ++j) {
        const Curve fe = f_node_from(one, j);
        const std::vector<double> ff = f_circle_grid(times, p, q, j, fopt);
        for (std::size_t n = 0; n < times.size(); ++n)
            res1 = std::max(res1, std::abs(fe.values[n] - ff[n]));
    }
    r.add("line-onesided-formula", res1 <= 1e-8, 1e-8 - res1,
          "max_j max_t |exact - circle formula at size j| = " +
              detail::fmt(res1));

    const StateDistribution two =
        solve(gen_line_two_sided(M, p, qL, qR), times, sopt);
    double res2 = 0.0;
    for (int j = 1; j <= M; ++j) {
        const Curve fe = f_node_from(two, j);
        for (std::size_t n = 0; n < times.size(); ++n) {
            const double sf = s_line_two_sided(times[n], p, qL, qR, j, M, fopt);
            res2 = std::max(res2, std::abs((1.0 - fe.values[n]) - sf));
        }
    }
    r.add("line-twosided-formula", res2 <= 1e-8, 1e-8 - res2,
          "max_j max_t |exact - product formula| = " + detail::fmt(res2));

    // Adoption strictly increases along the one-sided line; increments at
    // small t shrink like (qt)^j, so strictness is asserted from t >= 0.5.
    double weak = std::numeric_limits<double>::infinity();
    double strict = std::numeric_limits<double>::infinity();
    for (int j = 1; j < M; ++j) {
        const std::vector<double> fj = f_circle_grid(times, p, q, j, fopt);
        const std::vector<double> fj1 = f_circle_grid(times, p, q, j + 1, fopt);
        for (std::size_t n = 0; n < times.size(); ++n) {
            if (times[n] <= 0.0) continue;
            weak = std::min(weak, fj1[n] - fj[n]);
            if (times[n] >= 0.5) strict = std::min(strict, fj1[n] - fj[n]);
        }
    }
    r.add("line-monotone weak", weak >= -1e-12, weak,
          "min_{t>0,j} (f_{j+1} - f_j) = " + detail::fmt(weak));
    r.add("line-monotone strict t>=0.5", strict > checktol::strict_floor,
          strict, "min_{t>=0.5,j} (f_{j+1} - f_j) = " + detail::fmt(strict));
    return r;
}

// One-sided diffusion with q = qL + qR is strictly slower than two-sided
// (qL, qR): per symmetric node pair and per expected level, for t > 0.
// Interior pair gaps close like high powers of t (the sidedness of a node's
// influence is only felt once waves from both line ends meet), so the same
// extended-precision strategy as the circle product applies.
inline CheckReport check_line_comparison(const std::vector<double>& times,
                                         double p, double qL, double qR, int M,
                                         const FormulaOptions& fopt = {}) {
    require(M >= 2, Errc::invalid_size, "line comparison needs M >= 2");
    require(qL > 0.0 && qR > 0.0, Errc::negative_rate, "qL, qR must be > 0");
    CheckReport r;
    r.id = "line-comparison M=" + std::to_string(M) + " p=" + detail::fmt(p) +
           " qL=" + detail::fmt(qL) + " qR=" + detail::fmt(qR);
    r.method = "Formula";
    const double q = qL + qR;
    const bool hp = !detail::circle_is_singular(p, q, M) &&
                    !detail::circle_is_singular(p, qL, M) &&
                    !detail::circle_is_singular(p, qR, M);
    // pair_gap[n][k-1] and level_gap[n], formed before any rounding to
    // double when the extended path is available.
    std::vector<std::vector<double>> pair_gap(times.size(),
                                              std::vector<double>(M));
    std::vector<double> level_gap(times.size());
    if (hp) {
        const __float128 P = p, QL = qL, QR = qR, Q = __float128(qL) + qR;
        for (std::size_t n = 0; n < times.size(); ++n) {
            const __float128 T = times[n];
            const __float128 ep = detail::real_exp(P * T);
            std::vector<__float128> g(M + 1); // f2s_j - f1s_j
            __float128 lvl = 0;
            for (int j = 1; j <= M; ++j) {
                const __float128 s2 = ep *
                                      detail::s_circle_hp(T, P, QL, j) *
                                      detail::s_circle_hp(T, P, QR, M - j + 1);
                g[j] = detail::s_circle_hp(T, P, Q, j) - s2;
                lvl += g[j];
            }
            for (int k = 1; k <= M; ++k)
                pair_gap[n][k - 1] = double(g[k] + g[M + 1 - k]);
            level_gap[n] = double(lvl / M);
        }
    } else {
        std::vector<std::vector<double>> f1(M + 1), f2(M + 1);
        for (int j = 1; j <= M; ++j) {
            f1[j] = f_circle_grid(times, p, q, j, fopt);
            f2[j].resize(times.size());
            for (std::size_t n = 0; n < times.size(); ++n)
                f2[j][n] = f_line_two_sided(times[n], p, qL, qR, j, M, fopt);
        }
        for (std::size_t n = 0; n < times.size(); ++n) {
            double lvl = 0.0;
            for (int k = 1; k <= M; ++k) {
                const int mk = M + 1 - k;
                pair_gap[n][k - 1] =
                    (f2[k][n] + f2[mk][n]) - (f1[k][n] + f1[mk][n]);
                lvl += f2[k][n] - f1[k][n];
            }
            level_gap[n] = lvl / M;
        }
    }
    const double noise = hp ? checktol::strict_floor_hp : checktol::strict_floor;
    const double t_strict = hp ? 0.0 : checktol::strict_from_fallback;
    const std::string how = hp ? "extended precision" : "exact fallback";
    double min_pair = std::numeric_limits<double>::infinity();
    double strict_pair = std::numeric_limits<double>::infinity();
    double min_level = std::numeric_limits<double>::infinity();
    double strict_level = std::numeric_limits<double>::infinity();
    double boundary = 0.0;
    bool has_zero = false, has_strict = false;
    for (std::size_t n = 0; n < times.size(); ++n) {
        if (times[n] <= 0.0) {
            has_zero = true;
            boundary = std::max(boundary, std::abs(level_gap[n]));
            continue;
        }
        double worst = *std::min_element(pair_gap[n].begin(),
                                         pair_gap[n].end());
        min_pair = std::min(min_pair, worst);
        min_level = std::min(min_level, level_gap[n]);
        if (times[n] > t_strict) {
            strict_pair = std::min(strict_pair, worst);
            strict_level = std::min(strict_level, level_gap[n]);
            has_strict = true;
        }
    }
    r.add("line-comparison-pairs nonneg", min_pair >= -noise, min_pair,
          "min_{t>0,k} pair-sum gap = " + detail::fmt(min_pair) + " (" + how +
              ")");
    r.add("line-comparison-level nonneg", min_level >= -noise, min_level,
          "min_{t>0} level gap = " + detail::fmt(min_level) + " (" + how + ")");
    if (has_strict) {
        const std::string range = hp ? "" : " t>=1";
        r.add("line-comparison-pairs strict" + range, strict_pair > noise,
              strict_pair, "min pair-sum gap over certified range = " +
                  detail::fmt(strict_pair) + " (" + how + ")");
        r.add("line-comparison-level strict" + range, strict_level > noise,
              strict_level, "min level gap over certified range = " +
                  detail::fmt(strict_level) + " (" + how + ")");
    }
    if (has_zero)
        r.add("line-comparison-boundary t=0", boundary <= 1e-12,
              1e-12 - boundary, "|level gap(0)| = " + detail::fmt(boundary));
    return r;
}

// ---------------------------------------------------------------------------
// Dimension checks: torus vs circle, and the ray-star intersection study.
// ---------------------------------------------------------------------------

struct DimensionOptions {
    int state_cap = 16;
    long mc_runs = 100000;
    std::uint64_t seed = 777;
    std::vector<int> ray_lengths{4, 8}; // empty = skip the ray study
};

// N rays of length L feeding one hub.  The hub is a funnel node across the
// rays, so its survival is e^{-pt} (S_single / e^{-pt})^N where S_single is
// its survival with a lone ray; as L grows this converges to
// s_1d(t; p, N qt).
inline CheckReport check_ray_convergence(const std::vector<double>& times,
                                         double p, double qt, int N,
                                         const std::vector<int>& lengths,
                                         int state_cap = 16) {
    require(N >= 1, Errc::invalid_size, "need N >= 1 rays");
    require(!lengths.empty(), Errc::invalid_size, "need ray lengths");
    for (std::size_t i = 1; i < lengths.size(); ++i)
        require(lengths[i] > lengths[i - 1], Errc::invalid_size,
                "ray lengths must be increasing");
    CheckReport r;
    r.id = "ray N=" + std::to_string(N) + " qt=" + detail::fmt(qt);
    r.method = "Exact";
    SolveOptions opt;
    opt.state_cap = state_cap;
    std::vector<double> slim(times.size());
    for (std::size_t n = 0; n < times.size(); ++n)
        slim[n] = s_1d(std::max(times[n], 0.0), p, N * qt);

    std::vector<double> gaps;
    std::vector<double> first_comb;
    for (int L : lengths) {
        const std::vector<double> S1 =
            survival(gen_ray_star(1, L, p, qt), {L + 1}, times, opt).values;
        double g = 0.0;
        std::vector<double> comb(times.size());
        for (std::size_t n = 0; n < times.size(); ++n) {
            const double e = std::exp(-p * times[n]);
            comb[n] = e * std::pow(S1[n] / e, N);
            g = std::max(g, std::abs(comb[n] - slim[n]));
        }
        gaps.push_back(g);
        if (first_comb.empty()) first_comb = comb;
    }
    if (std::int64_t(N) * lengths.front() + 1 <= state_cap) {
        const int L0 = lengths.front();
        const std::vector<double> S_full =
            survival(gen_ray_star(N, L0, p, qt), {N * L0 + 1}, times, opt)
                .values;
        double res = 0.0;
        for (std::size_t n = 0; n < times.size(); ++n)
            res = std::max(res, std::abs(S_full[n] - first_comb[n]));
        r.add("ray-star-combination L=" + std::to_string(L0),
              res <= checktol::equality, checktol::equality - res,
              "max |S_full - combined| = " + detail::fmt(res));
    }
    double min_drop = std::numeric_limits<double>::infinity();
    std::string gap_list;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (i) min_drop = std::min(min_drop, gaps[i - 1] - gaps[i]);
        gap_list += (i ? ", " : "") + detail::fmt(gaps[i]);
    }
    const bool shrinking = gaps.size() < 2 || min_drop > 0.0;
    r.add("ray-intersection gap-shrinks", shrinking,
          gaps.size() < 2 ? gaps.front() : min_drop,
          "gaps to s_1d(t;p,N qt) over L=(" + gap_list + ")");
    return r;
}

// Toroidal lattice beats the circle of its side length: f_torus(t) >
// f_circle(t; M1) for t > 0.  Exact when M1^D fits the state cap, Monte
// Carlo otherwise (claimed only beyond 3 standard errors).
inline CheckReport check_dimension_bound(const std::vector<double>& times,
                                         double p, double q, int D, int M1,
                                         Sided sided,
                                         const DimensionOptions& dopt = {}) {
    require(D >= 2, Errc::invalid_size, "dimension comparison needs D >= 2");
    CheckReport r;
    const char* sname = sided == Sided::one ? "one" : "two";
    r.id = "dimension D=" + std::to_string(D) + " M1=" + std::to_string(M1) +
           " sided=" + sname;
    FormulaOptions fopt;
    fopt.state_cap = dopt.state_cap;
    const std::vector<double> fc = f_circle_grid(times, p, q, M1, fopt);
    std::int64_t M_total = 1;
    for (int i = 0; i < D; ++i) M_total *= M1;
    if (M_total <= dopt.state_cap) {
        r.method = "Exact";
        SolveOptions sopt;
        sopt.state_cap = dopt.state_cap;
        const Curve fT = f_node(gen_torus(D, M1, p, q, sided), 1, times, sopt);
        double min_gap = std::numeric_limits<double>::infinity();
        double at1 = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t n = 0; n < times.size(); ++n) {
            if (times[n] <= 0.0) continue;
            const double gap = fT.values[n] - fc[n];
            min_gap = std::min(min_gap, gap);
            if (times[n] == 1.0) at1 = gap;
        }
        r.add(std::string("dimension-torus exact sided=") + sname,
              min_gap > checktol::strict_floor, min_gap,
              "min_{t>0} (f_torus - f_circle) = " + detail::fmt(min_gap) +
                  (std::isnan(at1) ? "" : ", gap(1) = " + detail::fmt(at1)));
    } else {
        r.method = "MonteCarlo";
        const Network torus = gen_torus(D, M1, p, q, sided);
        const Estimate est = estimate(torus, {Target::level()}, times,
                                      dopt.mc_runs, dopt.seed)[0];
        double min_margin = std::numeric_limits<double>::infinity();
        double min_z = std::numeric_limits<double>::infinity();
        for (std::size_t n = 0; n < times.size(); ++n) {
            if (times[n] <= 0.0) continue;
            const double gap = est.mean[n] - fc[n];
            min_margin = std::min(min_margin, gap - 3.0 * est.stderr_[n]);
            if (est.stderr_[n] > 0.0) min_z = std::min(min_z, gap / est.stderr_[n]);
        }
        r.add(std::string("dimension-torus mc sided=") + sname, min_margin > 0.0,
              min_margin,
              "min_{t>0} (mean - f_circle - 3 stderr) = " +
                  detail::fmt(min_margin) + ", min z = " + detail::fmt(min_z) +
                  ", runs = " + std::to_string(dopt.mc_runs));
    }
    if (!dopt.ray_lengths.empty()) {
        const CheckReport ray = check_ray_convergence(
            times, p, q / 2.0, 2, dopt.ray_lengths, dopt.state_cap);
        for (const FixtureResult& f : ray.fixtures)
            r.add(f.name, f.pass, f.margin, f.details);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Chebyshev wrappers.
// ---------------------------------------------------------------------------

inline CheckReport chebyshev_check_1d(const std::vector<double>& f,
                                      const std::vector<double>& g,
                                      const std::vector<double>& w, double a,
                                      double b, const std::string& name = "") {
    CheckReport r;
    r.id = "chebyshev-1d" + (name.empty() ? "" : " " + name);
    r.method = "Formula";
    const ChebyshevOutcome out = chebyshev_1d(f, g, w, a, b);
    r.add("chebyshev-1d" + (name.empty() ? "" : " " + name), out.pass,
          out.margin,
          "lhs = " + detail::fmt(out.lhs) + ", rhs = " + detail::fmt(out.rhs) +
              (out.equality_expected ? ", equality expected" : ""));
    return r;
}

inline CheckReport chebyshev_check_multid(const GridFn& f, const GridFn& g,
                                          const std::string& name = "") {
    CheckReport r;
    r.id = "chebyshev-multid" + (name.empty() ? "" : " " + name);
    r.method = "Formula";
    const ChebyshevOutcome out = chebyshev_multid(f, g);
    r.add("chebyshev-multid" + (name.empty() ? "" : " " + name), out.pass,
          out.margin,
          "lhs = " + detail::fmt(out.lhs) + ", rhs = " + detail::fmt(out.rhs) +
              (out.equality_expected ? ", equality expected" : ""));
    return r;
}

// ---------------------------------------------------------------------------
// Fixture construction: named topologies and seeded random fixtures.
// ---------------------------------------------------------------------------

// Two disjoint directed chains feeding the focal node 8.
inline Network funnel_two_chains() {
    std::vector<Edge> e{{1, 2, 0.4}, {2, 3, 0.4}, {3, 8, 0.4},
                        {4, 5, 0.4}, {5, 6, 0.4}, {6, 7, 0.4}, {7, 8, 0.4}};
    return Network(8, std::vector<double>(8, 0.2), std::move(e), "two-chains");
}

// One chain crosses from A into B (edge 1 -> 4), yet the focal node 8 still
// has exactly one incoming route per side that shares no common influencer.
inline Network funnel_cross_linked() {
    std::vector<Edge> e{{2, 3, 0.4}, {3, 8, 0.4}, {1, 4, 0.4}, {4, 5, 0.4},
                        {5, 6, 0.4}, {6, 7, 0.4}, {7, 8, 0.4}};
    return Network(8, std::vector<double>(8, 0.2), std::move(e),
                   "cross-linked");
}

inline Partition eight_node_partition() { return {{1, 2, 3}, {4, 5, 6, 7}, 8}; }

// Erdos-Renyi-style random fixture: M uniform in [M_min, M_max], each
// ordered pair an edge with probability 0.35, rates U(0.1, 1), p U(0.05, 0.5).
inline Network random_network(std::uint64_t seed, int M_min = 3, int M_max = 7) {
    Xoshiro256PP rng(seed, 0xA1);
    const int M = M_min + int(rng() % std::uint64_t(M_max - M_min + 1));
    std::vector<double> p(M);
    for (double& v : p) v = 0.05 + 0.45 * rng.u01();
    std::vector<Edge> edges;
    for (int k = 1; k <= M; ++k)
        for (int j = 1; j <= M; ++j) {
            if (k == j) continue;
            const double coin = rng.u01(), rate = 0.1 + 0.9 * rng.u01();
            if (coin < 0.35) edges.push_back({k, j, rate});
        }
    return Network(M, std::move(p), std::move(edges),
                   "random M=" + std::to_string(M) + " seed=" +
                       std::to_string(seed));
}

// Random partition {A, B, {j}} with both sides forced nonempty.
inline Partition random_partition(std::uint64_t seed, const Network& net) {
    require(net.M() >= 3, Errc::invalid_size,
            "partitions need at least 3 nodes");
    Xoshiro256PP rng(seed, 0xB2);
    Partition part;
    part.j = 1 + int(rng() % std::uint64_t(net.M()));
    for (int k = 1; k <= net.M(); ++k) {
        if (k == part.j) continue;
        (rng.u01() < 0.5 ? part.A : part.B).push_back(k);
    }
    if (part.A.empty()) {
        part.A.push_back(part.B.back());
        part.B.pop_back();
    }
    if (part.B.empty()) {
        part.B.push_back(part.A.back());
        part.A.pop_back();
    }
    return part;
}

// ---------------------------------------------------------------------------
// Families and batteries.
// ---------------------------------------------------------------------------

struct VerifyOptions {
    std::vector<double> times;       // empty = default_time_grid()
    int state_cap = 16;
    long mc_runs = 100000;
    std::uint64_t seed = 12345;
    std::vector<int> ray_lengths{4, 8};
};

namespace detail {

inline std::vector<double> grid_of(const VerifyOptions& opt) {
    return opt.times.empty() ? default_time_grid() : opt.times;
}

inline void sort_reports(std::vector<CheckReport>& reports) {
    std::stable_sort(reports.begin(), reports.end(),
                     [](const CheckReport& a, const CheckReport& b) {
                         return a.id < b.id;
                     });
}

} // namespace detail

inline std::vector<CheckReport> verify_family(const std::string& family,
                                              const VerifyOptions& opt = {}) {
    const std::vector<double> times = detail::grid_of(opt);
    const int cap = opt.state_cap;
    std::vector<CheckReport> out;
    if (family == "pair") {
        const Network disconnected(
            4, std::vector<double>(4, 0.3),
            {{1, 2, 0.5}, {3, 4, 0.5}}, "two-components");
        out.push_back(check_pair(disconnected, 2, 4, times, cap));
        const Network direct(2, std::vector<double>(2, 0.3), {{1, 2, 0.5}},
                             "direct-edge");
        out.push_back(check_pair(direct, 1, 2, times, cap));
        for (std::uint64_t seed : {11u, 12u, 13u})
            out.push_back(check_pair_all(random_network(seed), times, cap));
    } else if (family == "funnel") {
        const Network path(
            3, std::vector<double>(3, 0.25),
            {{1, 2, 0.4}, {2, 1, 0.4}, {2, 3, 0.4}, {3, 2, 0.4}},
            "two-sided-path");
        out.push_back(check_funnel(path, {{1}, {3}, 2}, times, cap));
        out.push_back(check_funnel(gen_circle_two_sided(5, 0.2, 0.25, 0.25),
                                   {{1, 2}, {4, 5}, 3}, times, cap));
        out.push_back(
            check_funnel(funnel_two_chains(), eight_node_partition(), times, cap));
        out.push_back(check_funnel(funnel_cross_linked(), eight_node_partition(),
                                   times, cap));
        for (std::uint64_t seed : {21u, 22u, 23u}) {
            const Network net = random_network(seed);
            out.push_back(
                check_funnel(net, random_partition(seed, net), times, cap));
        }
    } else if (family == "circle") {
        out.push_back(check_circle_product(times, 0.2, 0.4, 0.4, 6));
        out.push_back(check_circle_product(times, 0.2, 0.2, 0.5, 3));
        out.push_back(check_circle_product(times, 0.5, 0.5, 0.5, 4));
        for (int M : {1, 2, 5, 8}) {
            out.push_back(check_circle_formula_exact(times, 0.3, 0.6, M, cap));
            out.push_back(check_circle_formula_exact(times, 1.0, 0.3, M, cap));
        }
        out.push_back(check_sided_equivalence(times, 0.3, 0.6, 4, cap));
        out.push_back(check_sided_equivalence(times, 0.2, 0.8, 6, cap));
        out.push_back(check_f1d_limit(times, 0.3, 0.6));
    } else if (family == "line") {
        out.push_back(check_line_formulas(times, 0.25, 0.3, 0.5, 5, cap));
        out.push_back(check_line_formulas(times, 0.3, 0.45, 0.15, 8, cap));
        out.push_back(check_line_comparison(times, 0.1, 0.25, 0.25, 2));
        out.push_back(check_line_comparison(times, 0.25, 0.1, 0.7, 5));
        out.push_back(check_line_comparison(times, 0.3, 0.4, 0.4, 10));
    } else if (family == "dimension") {
        DimensionOptions dopt;
        dopt.state_cap = cap;
        dopt.mc_runs = opt.mc_runs;
        dopt.seed = opt.seed;
        dopt.ray_lengths = opt.ray_lengths;
        out.push_back(
            check_dimension_bound(times, 0.5, 0.5, 2, 3, Sided::two, dopt));
        dopt.ray_lengths.clear();
        out.push_back(
            check_dimension_bound(times, 0.5, 0.5, 2, 3, Sided::one, dopt));
        out.push_back(check_dimension_bound({0.5, 1.0}, 0.5, 0.5, 2, 20,
                                            Sided::two, dopt));
    } else if (family == "chebyshev") {
        std::vector<double> x(101), x2(101), w1(101), w2x(101), c(101, 1.0);
        for (int i = 0; i <= 100; ++i) {
            x[std::size_t(i)] = i / 100.0;
            x2[std::size_t(i)] = x[std::size_t(i)] * x[std::size_t(i)];
            w1[std::size_t(i)] = 1.0;
            w2x[std::size_t(i)] = 2.0 * x[std::size_t(i)];
        }
        // The trapezoid weight 2x has integral exactly 1 on [0,1].
        out.push_back(chebyshev_check_1d(x, x, w1, 0.0, 1.0, "f=g=x w=1"));
        out.push_back(chebyshev_check_1d(c, x, w1, 0.0, 1.0, "f const"));
        out.push_back(chebyshev_check_1d(x, x2, w2x, 0.0, 1.0, "f=x g=x^2 w=2x"));
        const int n = 21;
        GridFn fx{{n, n}, {}}, gy{{n, n}, {}}, sum{{n, n}, {}};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double xi = i / double(n - 1), yj = j / double(n - 1);
                fx.values.push_back(xi);
                gy.values.push_back(yj);
                sum.values.push_back(xi + yj);
            }
        out.push_back(chebyshev_check_multid(fx, gy, "f=x g=y"));
        out.push_back(chebyshev_check_multid(sum, sum, "f=g=x+y"));
        // D=1 grid must agree with the 1D check on the same samples.
        GridFn f1{{101}, x}, g1{{101}, x};
        CheckReport consistency = chebyshev_check_multid(f1, g1, "D=1");
        const ChebyshevOutcome o1 = chebyshev_1d(x, x, w1, 0.0, 1.0);
        const double dmargin =
            std::abs(consistency.fixtures[0].margin - o1.margin);
        consistency.add("chebyshev-multid-1d-consistency", dmargin <= 1e-12,
                        1e-12 - dmargin,
                        "margin difference vs 1D check = " +
                            detail::fmt(dmargin));
        out.push_back(std::move(consistency));
    } else {
        fail(Errc::bad_format, "unknown verify family '" + family + "'");
    }
    detail::sort_reports(out);
    return out;
}

inline const std::vector<std::string>& verify_families() {
    static const std::vector<std::string> f{"pair",  "funnel",    "circle",
                                            "line",  "dimension", "chebyshev"};
    return f;
}

inline std::vector<CheckReport> verify_all(const VerifyOptions& opt = {}) {
    std::vector<CheckReport> out;
    for (const std::string& fam : verify_families()) {
        std::vector<CheckReport> part = verify_family(fam, opt);
        out.insert(out.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON: reports out, fixture files in.
// ---------------------------------------------------------------------------

inline nlohmann::json reports_to_json(const std::vector<CheckReport>& reports) {
    nlohmann::json out;
    bool all = true;
    auto checks = nlohmann::json::array();
    for (const CheckReport& r : reports) {
        all = all && r.pass;
        nlohmann::json c;
        c["id"] = r.id;
        c["method"] = r.method;
        c["pass"] = r.pass;
        c["min_margin"] = r.min_margin;
        auto fixtures = nlohmann::json::array();
        for (const FixtureResult& f : r.fixtures)
            fixtures.push_back({{"name", f.name},
                                {"pass", f.pass},
                                {"margin", f.margin},
                                {"details", f.details}});
        c["fixtures"] = std::move(fixtures);
        checks.push_back(std::move(c));
    }
    out["pass"] = all;
    out["checks"] = std::move(checks);
    return out;
}

namespace detail {

inline double jnum(const nlohmann::json& j, const char* key) {
    require(j.contains(key) && j[key].is_number(), Errc::bad_format,
            std::string("fixture needs a number \"") + key + "\"");
    return j[key].get<double>();
}

inline int jint(const nlohmann::json& j, const char* key) {
    require(j.contains(key) && j[key].is_number_integer(), Errc::bad_format,
            std::string("fixture needs an integer \"") + key + "\"");
    return j[key].get<int>();
}

inline std::vector<int> jints(const nlohmann::json& j, const char* key) {
    require(j.contains(key) && j[key].is_array(), Errc::bad_format,
            std::string("fixture needs an integer array \"") + key + "\"");
    std::vector<int> out;
    for (const auto& v : j[key]) {
        require(v.is_number_integer(), Errc::bad_format,
                std::string("\"") + key + "\" entries must be integers");
        out.push_back(v.get<int>());
    }
    return out;
}

inline std::vector<double> jnums(const nlohmann::json& j, const char* key) {
    require(j.contains(key) && j[key].is_array(), Errc::bad_format,
            std::string("fixture needs a number array \"") + key + "\"");
    std::vector<double> out;
    for (const auto& v : j[key]) {
        require(v.is_number(), Errc::bad_format,
                std::string("\"") + key + "\" entries must be numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

inline void apply_margin_floor(CheckReport& r, double floor) {
    r.pass = true;
    for (FixtureResult& f : r.fixtures) {
        if (f.margin < floor) {
            f.pass = false;
            f.details += " (margin below required floor " + fmt(floor) + ")";
        }
        r.pass = r.pass && f.pass;
    }
}

} // namespace detail

// Runs the checks described by a fixtures document:
//   {"checks": [{"family": "...", ...params, "times": [...],
//                "require_margin": x, "id": "..."}]}
// Entries not matching `family` are skipped ("all" keeps everything).
inline std::vector<CheckReport> verify_fixtures_json(
    const nlohmann::json& doc, const std::string& family,
    const VerifyOptions& opt = {}) {
    require(doc.is_object() && doc.contains("checks") &&
                doc["checks"].is_array(),
            Errc::bad_format, "fixtures file needs a \"checks\" array");
    std::vector<CheckReport> out;
    for (const auto& entry : doc["checks"]) {
        require(entry.is_object() && entry.contains("family") &&
                    entry["family"].is_string(),
                Errc::bad_format, "each check needs a \"family\" string");
        const std::string fam = entry["family"].get<std::string>();
        if (family != "all" && family != fam) continue;
        const std::vector<double> times = entry.contains("times")
                                              ? detail::jnums(entry, "times")
                                              : detail::grid_of(opt);
        CheckReport r;
        if (fam == "pair") {
            require(entry.contains("net"), Errc::bad_format,
                    "pair fixture needs \"net\"");
            const Network net = network_from_json(entry["net"]);
            if (entry.contains("i") || entry.contains("j"))
                r = check_pair(net, detail::jint(entry, "i"),
                               detail::jint(entry, "j"), times, opt.state_cap);
            else
                r = check_pair_all(net, times, opt.state_cap);
        } else if (fam == "funnel") {
            require(entry.contains("net"), Errc::bad_format,
                    "funnel fixture needs \"net\"");
            const Network net = network_from_json(entry["net"]);
            Partition part{detail::jints(entry, "A"), detail::jints(entry, "B"),
                           detail::jint(entry, "j")};
            r = check_funnel(net, part, times, opt.state_cap);
        } else if (fam == "circle") {
            const std::string kind = entry.value("kind", "product");
            if (kind == "product")
                r = check_circle_product(times, detail::jnum(entry, "p"),
                                         detail::jnum(entry, "q1"),
                                         detail::jnum(entry, "q2"),
                                         detail::jint(entry, "M"));
            else if (kind == "formula")
                r = check_circle_formula_exact(
                    times, detail::jnum(entry, "p"), detail::jnum(entry, "q"),
                    detail::jint(entry, "M"), opt.state_cap);
            else if (kind == "sided")
                r = check_sided_equivalence(times, detail::jnum(entry, "p"),
                                            detail::jnum(entry, "q"),
                                            detail::jint(entry, "M"),
                                            opt.state_cap);
            else if (kind == "f1d")
                r = check_f1d_limit(times, detail::jnum(entry, "p"),
                                    detail::jnum(entry, "q"));
            else
                fail(Errc::bad_format, "unknown circle kind '" + kind + "'");
        } else if (fam == "line") {
            const std::string kind = entry.value("kind", "comparison");
            if (kind == "comparison")
                r = check_line_comparison(times, detail::jnum(entry, "p"),
                                          detail::jnum(entry, "qL"),
                                          detail::jnum(entry, "qR"),
                                          detail::jint(entry, "M"));
            else if (kind == "formulas")
                r = check_line_formulas(times, detail::jnum(entry, "p"),
                                        detail::jnum(entry, "qL"),
                                        detail::jnum(entry, "qR"),
                                        detail::jint(entry, "M"),
                                        opt.state_cap);
            else
                fail(Errc::bad_format, "unknown line kind '" + kind + "'");
        } else if (fam == "dimension") {
            DimensionOptions dopt;
            dopt.state_cap = opt.state_cap;
            dopt.mc_runs = entry.contains("mc_runs")
                               ? long(detail::jint(entry, "mc_runs"))
                               : opt.mc_runs;
            dopt.seed = opt.seed;
            dopt.ray_lengths = entry.contains("ray_lengths")
                                   ? detail::jints(entry, "ray_lengths")
                                   : std::vector<int>{};
            const std::string sided = entry.value("sided", "two");
            require(sided == "one" || sided == "two", Errc::bad_format,
                    "\"sided\" must be \"one\" or \"two\"");
            r = check_dimension_bound(
                times, detail::jnum(entry, "p"), detail::jnum(entry, "q"),
                detail::jint(entry, "D"), detail::jint(entry, "M1"),
                sided == "one" ? Sided::one : Sided::two, dopt);
        } else if (fam == "chebyshev") {
            const std::string kind = entry.value("kind", "1d");
            if (kind == "1d") {
                r = chebyshev_check_1d(
                    detail::jnums(entry, "f"), detail::jnums(entry, "g"),
                    detail::jnums(entry, "w"), detail::jnum(entry, "a"),
                    detail::jnum(entry, "b"), entry.value("id", ""));
            } else if (kind == "multid") {
                GridFn f{detail::jints(entry, "dims"), detail::jnums(entry, "f")};
                GridFn g{f.dims, detail::jnums(entry, "g")};
                r = chebyshev_check_multid(f, g, entry.value("id", ""));
            } else {
                fail(Errc::bad_format, "unknown chebyshev kind '" + kind + "'");
            }
        } else {
            fail(Errc::bad_format, "unknown verify family '" + fam + "'");
        }
        if (entry.contains("id") && entry["id"].is_string())
            r.id = entry["id"].get<std::string>();
        if (entry.contains("require_margin"))
            detail::apply_margin_floor(r, detail::jnum(entry, "require_margin"));
        out.push_back(std::move(r));
    }
    detail::sort_reports(out);
    return out;
}

// ---------------------------------------------------------------------------
// Claims manifest: every structural claim the build verifies, with where it
// is verified.  "verify:<family>" claims surface as fixture names (prefix
// match) in that family's reports; "test:<slug>" claims are covered by the
// equally named property tests in the test suite.
// ---------------------------------------------------------------------------

struct Claim {
    std::string id;
    std::string statement;
    std::string via;
};

inline const std::vector<Claim>& claims_manifest() {
    static const std::vector<Claim> m{
        {"pair-inequality", "[S_{i,j}] >= [S_i][S_j] for every node pair",
         "verify:pair"},
        {"pair-identity",
         "[S_{i,j}] - [S_i][S_j] = f_{i,j} - f_i f_j identically",
         "verify:pair"},
        {"pair-dichotomy",
         "equality holds iff no node is influential to both i and j, "
         "otherwise the gap exceeds 1e-7 somewhere",
         "verify:pair"},
        {"funnel-inequality",
         "S_full >= S_A S_B e^{-p_j t} for every partition {A, B, {j}}",
         "verify:funnel"},
        {"funnel-dichotomy",
         "the funnel inequality is an equality iff j is a funnel node",
         "verify:funnel"},
        {"funnel-isolated-rate",
         "with all in-edges of j removed, S_j = e^{-p_j t}", "verify:funnel"},
        {"funnel-single-side",
         "cutting one side exactly factors out e^{-p_j t}: S_APj = S_A "
         "e^{-p_j t} and S_BPj = S_B e^{-p_j t}",
         "verify:funnel"},
        {"funnel-ratio", "S_full >= S_APj S_BPj e^{p_j t}", "verify:funnel"},
        {"funnel-split-network",
         "splitting j into (j_A, j_B, j_p) preserves the nonadoption law of j",
         "verify:funnel"},
        {"vertexcut-implies-funnel",
         "if j separates A from B then j is a funnel node", "verify:funnel"},
        {"circle-product",
         "[S_circle](q1) [S_circle](q2) < e^{-pt} [S_circle](q1+q2) for t > 0, "
         "M >= 3",
         "verify:circle"},
        {"s1d-product-identity",
         "s_1d(q1) s_1d(q2) = e^{-pt} s_1d(q1+q2) identically",
         "verify:circle"},
        {"circle-formula-exact",
         "the circle series equals the master-equation solution",
         "verify:circle"},
        {"circle-single-node", "[S_circle](t; p, q, 1) = e^{-pt}",
         "verify:circle"},
        {"circle-sided-equivalence",
         "one- and two-sided circles with qR + qL = q share all single-node "
         "marginals",
         "verify:circle"},
        {"f1d-limit",
         "f_circle increases to f_1d = 1 - exp(-(p+q)t + q(1-e^{-pt})/p) as M "
         "grows",
         "verify:circle"},
        {"line-onesided-formula",
         "node j of the one-sided line has the circle-of-size-j law",
         "verify:line"},
        {"line-twosided-formula",
         "[S_j] = e^{pt} [S_circle](qL, j) [S_circle](qR, M-j+1) on the "
         "two-sided line",
         "verify:line"},
        {"line-monotone",
         "adoption strictly increases along the one-sided line", "verify:line"},
        {"line-comparison-pairs",
         "f^{1s}_k + f^{1s}_{M+1-k} < f^{2s}_k + f^{2s}_{M+1-k} for t > 0 when "
         "q = qL + qR",
         "verify:line"},
        {"line-comparison-level",
         "expected adoption level: one-sided < two-sided for t > 0",
         "verify:line"},
        {"dimension-torus",
         "f_torus(t; p, q, M1^D) > f_circle(t; p, q, M1) for t > 0, D >= 2",
         "verify:dimension"},
        {"ray-intersection",
         "the hub of N length-L rays converges to s_1d(t; p, N qt) with gaps "
         "shrinking in L",
         "verify:dimension"},
        {"ray-star-combination",
         "hub survival factors as e^{-pt} (S_single/e^{-pt})^N across rays",
         "verify:dimension"},
        {"chebyshev-1d",
         "int f g w >= int f w * int g w for comonotone f, g and positive "
         "normalized w; equality iff one factor is constant",
         "verify:chebyshev"},
        {"chebyshev-multid",
         "the product-measure version on [0,1]^D; equality iff no coordinate "
         "is shared",
         "verify:chebyshev"},
        {"line-isotropic-quadrature",
         "the two-sided line formula matches the isotropic quadrature "
         "representation",
         "test:line-isotropic-quadrature"},
        {"dominance-monotonicity",
         "coordinatewise-larger rates give pointwise larger adoption curves",
         "test:dominance-monotonicity"},
        {"dominance-strict-witness",
         "a dominated network adopts strictly slower at j iff some strict "
         "coordinate is influential to j",
         "test:dominance-strict-witness"},
        {"indifference-invariance",
         "removing non-influential edges leaves [S_Omega] unchanged",
         "test:indifference-invariance"},
        {"influential-edge-effect",
         "removing an influential edge changes [S_Omega]",
         "test:influential-edge-effect"},
        {"discretization-convergence",
         "the synchronous dt scheme converges to the exact law as dt -> 0",
         "test:discretization-convergence"},
        {"mc-reproducibility",
         "estimates are bit-identical across worker counts for a fixed seed",
         "test:mc-reproducibility"},
        {"master-conservation",
         "the master-equation state distribution stays a probability vector",
         "test:master-conservation"},
    };
    return m;
}

} // namespace bassnet
