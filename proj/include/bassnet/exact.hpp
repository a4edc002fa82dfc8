#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "bassnet/detail/dopri5.hpp"
#include "bassnet/errors.hpp"
#include "bassnet/network.hpp"

namespace bassnet {

// The 2^M-state continuous-time Markov chain: state x is a bitmask of
// adopters (node j <-> bit j-1), transitions flip single bits 0 -> 1 at rate
// lambda_j(x) = p_j + sum_{k in x} q_{k,j}.  The forward Kolmogorov system
// is integrated with an adaptive Dormand-Prince 5(4) scheme; the generator
// is triangular with respect to adopter count (adoption only adds
// adopters), which the right-hand side realizes by construction.

struct SolveOptions {
    int state_cap = 16;   // refuse M > state_cap (2^M states)
    double rtol = 1e-12;
    double atol = 1e-14;
};

struct StateDistribution {
    int M = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> probs; // per time; index = adopter bitmask
    double tol = 0.0;                       // max local error estimate achieved
};

enum class CurveKind { S_Omega, f_node, f_level, S_pair, residual };

struct Curve {
    std::vector<double> times;
    std::vector<double> values;
    CurveKind kind = CurveKind::S_Omega;
    std::string meta;
};

namespace detail {

inline std::uint64_t node_mask(const Network& net, const std::vector<int>& nodes) {
    std::uint64_t mask = 0;
    for (int j : nodes) {
        require(j >= 1 && j <= net.M(), Errc::index_out_of_range,
                "node index " + std::to_string(j));
        mask |= std::uint64_t(1) << (j - 1);
    }
    return mask;
}

// Integrates the master equations, invoking observe(grid_index, t, y) at
// every grid time; returns the achieved tolerance.  Memory: one rate table
// of 2^M * M doubles plus ~10 state vectors.
template <class Observer>
double solve_observe(const Network& net, const std::vector<double>& times,
                     Observer&& observe, const SolveOptions& opt = {}) {
    const int M = net.M();
    require(M <= opt.state_cap, Errc::budget_exceeded,
            "M=" + std::to_string(M) + " exceeds the state cap " +
                std::to_string(opt.state_cap) + " (would need ~" +
                std::to_string(((std::uint64_t(1) << M) * (M + 12) * 8) >> 20) +
                " MiB)");
    require(!times.empty() && times.front() >= 0.0, Errc::bad_grid,
            "time grid must be nonempty with times[0] >= 0");
    const std::size_t S = std::size_t(1) << M;

    // Dense q matrix (row = source, column = target), 0-based.
    std::vector<double> q(std::size_t(M) * M, 0.0);
    for (const Edge& e : net.edges())
        q[std::size_t(e.from - 1) * M + (e.to - 1)] = e.rate;

    // lam[x*M + j] = p_j + sum_{k in x} q_{k,j}, filled by peeling the
    // lowest set bit of x.
    std::vector<double> lam(S * M);
    for (int j = 0; j < M; ++j) lam[j] = net.p_vector()[j];
    for (std::size_t x = 1; x < S; ++x) {
        const std::size_t low = x & (~x + 1);
        const int k = std::countr_zero(low);
        const double* prev = &lam[(x ^ low) * M];
        const double* qrow = &q[std::size_t(k) * M];
        double* row = &lam[x * M];
        for (int j = 0; j < M; ++j) row[j] = prev[j] + qrow[j];
    }

    const std::size_t full = S - 1;
    auto rhs = [&](const std::vector<double>& y, std::vector<double>& dy) {
        std::fill(dy.begin(), dy.end(), 0.0);
        for (std::size_t x = 0; x < S; ++x) {
            const double px = y[x];
            if (px == 0.0) continue;
            const double* row = &lam[x * M];
            double out = 0.0;
            for (std::size_t nz = full & ~x; nz; nz &= nz - 1) {
                const int j = std::countr_zero(nz);
                const double r = row[j];
                out += r;
                dy[x | (std::size_t(1) << j)] += r * px;
            }
            dy[x] -= out * px;
        }
    };

    std::vector<double> y0(S, 0.0);
    y0[0] = 1.0; // X_j(0) = 0 for all j
    Dopri5Options ode;
    ode.rtol = opt.rtol;
    ode.atol = opt.atol;
    auto checked = [&](std::size_t i, double t, const std::vector<double>& y) {
        double sum = 0.0, lo = 0.0;
        for (double v : y) {
            sum += v;
            if (v < lo) lo = v;
        }
        require(std::abs(sum - 1.0) <= 1e-8, Errc::tolerance_not_met,
                "probability mass drifted to " + std::to_string(sum));
        require(lo >= -1e-9, Errc::tolerance_not_met,
                "negative state probability " + std::to_string(lo));
        observe(i, t, y);
    };
    const Dopri5Stats stats = dopri5_integrate(rhs, std::move(y0), 0.0, times,
                                               checked, ode);
    return stats.achieved_tol;
}

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

} // namespace detail

// Full distribution at every grid time.
inline StateDistribution solve(const Network& net, const std::vector<double>& times,
                               const SolveOptions& opt = {}) {
    StateDistribution dist;
    dist.M = net.M();
    dist.times = times;
    dist.probs.resize(times.size());
    dist.tol = detail::solve_observe(
        net, times,
        [&](std::size_t i, double, const std::vector<double>& y) {
            dist.probs[i] = y;
        },
        opt);
    return dist;
}

// --- projections of an already-computed distribution -----------------------

// [S_Omega](t) = P(every node of Omega still a nonadopter).
inline Curve survival_from(const StateDistribution& dist,
                           const std::vector<int>& omega) {
    require(!omega.empty(), Errc::bad_omega, "Omega must be nonempty");
    std::uint64_t mask = 0;
    for (int j : omega) {
        require(j >= 1 && j <= dist.M, Errc::index_out_of_range,
                "node index " + std::to_string(j));
        mask |= std::uint64_t(1) << (j - 1);
    }
    Curve c;
    c.times = dist.times;
    c.kind = omega.size() == 2 ? CurveKind::S_pair : CurveKind::S_Omega;
    c.meta = "survival omega_mask=" + std::to_string(mask);
    c.values.reserve(dist.times.size());
    for (const auto& y : dist.probs) {
        double s = 0.0;
        for (std::size_t x = 0; x < y.size(); ++x)
            if ((x & mask) == 0) s += y[x];
        c.values.push_back(detail::clamp01(s));
    }
    return c;
}

// P(X_i = X_j = 1): both adopted.
inline Curve f_pair_from(const StateDistribution& dist, int i, int j) {
    const std::uint64_t mask = (std::uint64_t(1) << (i - 1)) |
                               (std::uint64_t(1) << (j - 1));
    Curve c;
    c.times = dist.times;
    c.kind = CurveKind::f_node;
    c.meta = "f_pair";
    for (const auto& y : dist.probs) {
        double s = 0.0;
        for (std::size_t x = 0; x < y.size(); ++x)
            if ((x & mask) == mask) s += y[x];
        c.values.push_back(detail::clamp01(s));
    }
    return c;
}

inline Curve f_node_from(const StateDistribution& dist, int j) {
    Curve c = survival_from(dist, {j});
    for (double& v : c.values) v = 1.0 - v;
    c.kind = CurveKind::f_node;
    c.meta = "f_node j=" + std::to_string(j);
    return c;
}

// f(t) = (1/M) sum_j f_j(t) = (1/M) E[#adopters].
inline Curve f_level_from(const StateDistribution& dist) {
    Curve c;
    c.times = dist.times;
    c.kind = CurveKind::f_level;
    c.meta = "f_level";
    for (const auto& y : dist.probs) {
        double s = 0.0;
        for (std::size_t x = 0; x < y.size(); ++x)
            s += y[x] * std::popcount(x);
        c.values.push_back(detail::clamp01(s / dist.M));
    }
    return c;
}

// --- streaming variants (no full history stored) ----------------------------

inline Curve survival(const Network& net, const std::vector<int>& omega,
                      const std::vector<double>& times,
                      const SolveOptions& opt = {}) {
    const std::uint64_t mask = detail::node_mask(net, omega);
    require(!omega.empty(), Errc::bad_omega, "Omega must be nonempty");
    Curve c;
    c.times = times;
    c.values.assign(times.size(), 0.0);
    c.kind = omega.size() == 2 ? CurveKind::S_pair : CurveKind::S_Omega;
    c.meta = "survival";
    detail::solve_observe(
        net, times,
        [&](std::size_t i, double, const std::vector<double>& y) {
            double s = 0.0;
            for (std::size_t x = 0; x < y.size(); ++x)
                if ((x & mask) == 0) s += y[x];
            c.values[i] = detail::clamp01(s);
        },
        opt);
    for (std::size_t i = 1; i < c.values.size(); ++i)
        require(c.values[i] <= c.values[i - 1] + 1e-9, Errc::tolerance_not_met,
                "survival curve not monotone");
    return c;
}

inline Curve f_node(const Network& net, int j, const std::vector<double>& times,
                    const SolveOptions& opt = {}) {
    Curve c = survival(net, {j}, times, opt);
    for (double& v : c.values) v = 1.0 - v;
    c.kind = CurveKind::f_node;
    c.meta = "f_node j=" + std::to_string(j);
    return c;
}

inline Curve f_level(const Network& net, const std::vector<double>& times,
                     const SolveOptions& opt = {}) {
    Curve c;
    c.times = times;
    c.values.assign(times.size(), 0.0);
    c.kind = CurveKind::f_level;
    c.meta = "f_level";
    detail::solve_observe(
        net, times,
        [&](std::size_t i, double, const std::vector<double>& y) {
            double s = 0.0;
            for (std::size_t x = 0; x < y.size(); ++x)
                s += y[x] * std::popcount(x);
            c.values[i] = detail::clamp01(s / net.M());
        },
        opt);
    return c;
}

inline Curve s_pair(const Network& net, int i, int j,
                    const std::vector<double>& times,
                    const SolveOptions& opt = {}) {
    require(i != j, Errc::bad_omega, "pair needs two distinct nodes");
    return survival(net, {i, j}, times, opt);
}

// Residual of the identity ([S_{i,j}] - [S_i][S_j]) - (f_{i,j} - f_i f_j);
// must vanish to solver accuracy.
inline Curve pair_identity_check(const Network& net, int i, int j,
                                 const std::vector<double>& times,
                                 const SolveOptions& opt = {}) {
    require(i != j, Errc::bad_omega, "pair needs two distinct nodes");
    const std::uint64_t bi = detail::node_mask(net, {i});
    const std::uint64_t bj = detail::node_mask(net, {j});
    Curve c;
    c.times = times;
    c.values.assign(times.size(), 0.0);
    c.kind = CurveKind::residual;
    c.meta = "pair_identity i=" + std::to_string(i) + " j=" + std::to_string(j);
    detail::solve_observe(
        net, times,
        [&](std::size_t n, double, const std::vector<double>& y) {
            double s_ij = 0.0, s_i = 0.0, s_j = 0.0, f_ij = 0.0;
            for (std::size_t x = 0; x < y.size(); ++x) {
                const bool ai = (x & bi) != 0, aj = (x & bj) != 0;
                if (!ai && !aj) s_ij += y[x];
                if (!ai) s_i += y[x];
                if (!aj) s_j += y[x];
                if (ai && aj) f_ij += y[x];
            }
            const double f_i = 1.0 - s_i, f_j = 1.0 - s_j;
            c.values[n] = (s_ij - s_i * s_j) - (f_ij - f_i * f_j);
        },
        opt);
    return c;
}

} // namespace bassnet
