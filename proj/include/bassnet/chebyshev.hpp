#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bassnet/errors.hpp"

namespace bassnet {

// Weighted Chebyshev integral inequality on sampled grids.
//
// For comonotone f and g (both nondecreasing or both nonincreasing) and a
// nonnegative weight w with integral 1:  int f g w  >=  int f w * int g w.
// The discrete counterpart with an internally normalized trapezoid measure
// holds to rounding (sum_{i<j} a_i a_j (f_i - f_j)(g_i - g_j) >= 0), so a
// verification tolerance of 1e-9 measures the claim rather than quadrature
// truncation.  Multi-D (uniform weight on [0,1]^D) is the product-measure
// version: coordinatewise comonotone grids are positively correlated;
// equality holds exactly when no coordinate is shared (for each coordinate,
// at least one factor is constant in it).

struct ChebyshevOutcome {
    double lhs = 0.0;    // integral of f*g against the normalized measure
    double rhs = 0.0;    // product of the single-factor integrals
    double margin = 0.0; // lhs - rhs
    bool equality_expected = false; // structural equality condition
    bool pass = false;
};

namespace detail {

struct MonotoneClass {
    bool up = false;   // some strictly increasing consecutive pair
    bool down = false; // some strictly decreasing consecutive pair
    bool constant() const { return !up && !down; }
    bool monotone() const { return !(up && down); }
};

inline MonotoneClass classify_sequence(const std::vector<double>& v) {
    MonotoneClass m;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[i - 1]) m.up = true;
        if (v[i] < v[i - 1]) m.down = true;
    }
    return m;
}

inline void require_comonotone(const MonotoneClass& f, const MonotoneClass& g,
                               const std::string& where) {
    require(f.monotone(), Errc::not_monotone, "f is not monotone " + where);
    require(g.monotone(), Errc::not_monotone, "g is not monotone " + where);
    require(f.constant() || g.constant() || f.up == g.up, Errc::not_monotone,
            "f and g are monotone in opposite directions " + where);
}

inline bool chebyshev_pass(double margin, bool equality_expected) {
    constexpr double tol = 1e-9;
    if (margin < -tol) return false;
    return !equality_expected || std::abs(margin) <= tol;
}

} // namespace detail

// f, g, w sampled at n >= 2 uniform points on [a, b].
inline ChebyshevOutcome chebyshev_1d(const std::vector<double>& f,
                                     const std::vector<double>& g,
                                     const std::vector<double>& w,
                                     double a, double b) {
    const std::size_t n = f.size();
    require(g.size() == n && w.size() == n, Errc::size_mismatch,
            "f, g, w must have equal length");
    require(n >= 2, Errc::invalid_size, "need at least 2 sample points");
    require(std::isfinite(a) && std::isfinite(b) && a < b, Errc::bad_grid,
            "need a < b");
    for (double v : w)
        require(std::isfinite(v) && v >= 0.0, Errc::bad_weight,
                "weight must be nonnegative");

    const detail::MonotoneClass mf = detail::classify_sequence(f);
    const detail::MonotoneClass mg = detail::classify_sequence(g);
    detail::require_comonotone(mf, mg, "on [a, b]");

    const double h = (b - a) / double(n - 1);
    double total = 0.0;
    auto coeff = [&](std::size_t i) {
        return (i == 0 || i == n - 1) ? 0.5 * h : h;
    };
    for (std::size_t i = 0; i < n; ++i) total += coeff(i) * w[i];
    require(std::abs(total - 1.0) <= 1e-6, Errc::bad_weight,
            "weight must integrate to 1 (got " + std::to_string(total) + ")");

    double ef = 0.0, eg = 0.0, efg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double m = coeff(i) * w[i] / total;
        ef += m * f[i];
        eg += m * g[i];
        efg += m * f[i] * g[i];
    }
    ChebyshevOutcome out;
    out.lhs = efg;
    out.rhs = ef * eg;
    out.margin = efg - ef * eg;
    out.equality_expected = mf.constant() || mg.constant();
    out.pass = detail::chebyshev_pass(out.margin, out.equality_expected);
    return out;
}

// Tensor grid of samples on [0,1]^D, row-major with the last coordinate
// fastest; dims[d] >= 2 points per coordinate.
struct GridFn {
    std::vector<int> dims;
    std::vector<double> values;
};

inline ChebyshevOutcome chebyshev_multid(const GridFn& f, const GridFn& g) {
    const std::size_t D = f.dims.size();
    require(D >= 1 && D <= 4, Errc::invalid_size, "need 1 <= D <= 4");
    require(g.dims == f.dims, Errc::size_mismatch, "grids must share dims");
    std::size_t N = 1;
    for (int d : f.dims) {
        require(d >= 2, Errc::invalid_size, "each coordinate needs >= 2 points");
        N *= std::size_t(d);
    }
    require(f.values.size() == N && g.values.size() == N, Errc::size_mismatch,
            "values must match the grid size");

    std::vector<std::size_t> stride(D, 1);
    for (std::size_t d = D; d-- > 1;)
        stride[d - 1] = stride[d] * std::size_t(f.dims[d]);

    // Directional classification per coordinate, aggregated over all lines.
    std::vector<detail::MonotoneClass> cf(D), cg(D);
    for (std::size_t d = 0; d < D; ++d) {
        const std::size_t s = stride[d];
        const std::size_t n = std::size_t(f.dims[d]);
        for (std::size_t base = 0; base < N; ++base) {
            if ((base / s) % n != 0) continue; // not the start of a d-line
            for (std::size_t i = 1; i < n; ++i) {
                const std::size_t prev = base + (i - 1) * s, cur = base + i * s;
                if (f.values[cur] > f.values[prev]) cf[d].up = true;
                if (f.values[cur] < f.values[prev]) cf[d].down = true;
                if (g.values[cur] > g.values[prev]) cg[d].up = true;
                if (g.values[cur] < g.values[prev]) cg[d].down = true;
            }
        }
        detail::require_comonotone(cf[d], cg[d],
                                   "along coordinate " + std::to_string(d + 1));
    }

    // Product trapezoid measure, normalized per coordinate.
    std::vector<std::vector<double>> u(D);
    for (std::size_t d = 0; d < D; ++d) {
        const std::size_t n = std::size_t(f.dims[d]);
        const double h = 1.0 / double(n - 1);
        u[d].assign(n, h);
        u[d].front() = u[d].back() = 0.5 * h;
        double s = 0.0;
        for (double v : u[d]) s += v;
        for (double& v : u[d]) v /= s;
    }
    double ef = 0.0, eg = 0.0, efg = 0.0;
    for (std::size_t idx = 0; idx < N; ++idx) {
        double m = 1.0;
        for (std::size_t d = 0; d < D; ++d)
            m *= u[d][(idx / stride[d]) % std::size_t(f.dims[d])];
        ef += m * f.values[idx];
        eg += m * g.values[idx];
        efg += m * f.values[idx] * g.values[idx];
    }
    ChebyshevOutcome out;
    out.lhs = efg;
    out.rhs = ef * eg;
    out.margin = efg - ef * eg;
    out.equality_expected = true;
    for (std::size_t d = 0; d < D; ++d)
        if (!cf[d].constant() && !cg[d].constant()) out.equality_expected = false;
    out.pass = detail::chebyshev_pass(out.margin, out.equality_expected);
    return out;
}

} // namespace bassnet
