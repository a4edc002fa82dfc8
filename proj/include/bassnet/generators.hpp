#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bassnet/errors.hpp"
#include "bassnet/network.hpp"

namespace bassnet {

namespace detail {

inline void check_rate_nonneg(double r, const char* name) {
    require(r >= 0.0, Errc::negative_rate,
            std::string(name) + " must be >= 0");
}

// Accumulates parallel edges (used by the torus generator when neighbors
// coincide) and drops zero-rate entries.
class EdgeAccumulator {
  public:
    void add(int from, int to, double rate) {
        if (rate > 0.0) rates_[{from, to}] += rate;
    }
    std::vector<Edge> take() const {
        std::vector<Edge> edges;
        edges.reserve(rates_.size());
        for (const auto& [key, rate] : rates_)
            edges.push_back({key.first, key.second, rate});
        return edges;
    }

  private:
    std::map<std::pair<int, int>, double> rates_;
};

} // namespace detail

// One-sided circle: nodes 1..M on a ring, each influenced by its left
// neighbor only, i.e. q_{k,j} = q iff (j - k) mod M = 1.  M=1 is an isolated
// node; M=2 has both edges 1->2 and 2->1 at rate q (the left neighbor of
// each node is the other node).
inline Network gen_circle(int M, double p, double q) {
    require(M >= 1, Errc::invalid_size, "circle needs M >= 1");
    detail::check_rate_nonneg(q, "q");
    detail::EdgeAccumulator acc;
    if (M >= 2)
        for (int k = 1; k <= M; ++k) acc.add(k, k % M + 1, q);
    return Network(M, std::vector<double>(M, p), acc.take(),
                   "circle-1s M=" + std::to_string(M));
}

// Two-sided circle: q_{k,j} = qL from the left neighbor ((j - k) mod M = 1)
// and qR from the right neighbor ((k - j) mod M = 1).  For M=2 the left and
// right neighbors coincide, so the parallel edges merge into one of rate
// qL + qR, preserving q_in = qL + qR.
inline Network gen_circle_two_sided(int M, double p, double qR, double qL) {
    require(M >= 1, Errc::invalid_size, "circle needs M >= 1");
    detail::check_rate_nonneg(qR, "qR");
    detail::check_rate_nonneg(qL, "qL");
    detail::EdgeAccumulator acc;
    if (M >= 2)
        for (int k = 1; k <= M; ++k) {
            acc.add(k, k % M + 1, qL);         // k is the left neighbor of k+1
            acc.add(k % M + 1, k, qR);         // k+1 is the right neighbor of k
        }
    return Network(M, std::vector<double>(M, p), acc.take(),
                   "circle-2s M=" + std::to_string(M));
}

// One-sided line (path) 1 -> 2 -> ... -> M: q_{k,j} = q iff j - k = 1.
inline Network gen_line(int M, double p, double q) {
    require(M >= 1, Errc::invalid_size, "line needs M >= 1");
    detail::check_rate_nonneg(q, "q");
    detail::EdgeAccumulator acc;
    for (int k = 1; k < M; ++k) acc.add(k, k + 1, q);
    return Network(M, std::vector<double>(M, p), acc.take(),
                   "line-1s M=" + std::to_string(M));
}

// Two-sided line: q_{k,j} = qL if j - k = +1 (influence from the left
// neighbor) and qR if j - k = -1 (influence from the right neighbor).
inline Network gen_line_two_sided(int M, double p, double qL, double qR) {
    require(M >= 1, Errc::invalid_size, "line needs M >= 1");
    detail::check_rate_nonneg(qL, "qL");
    detail::check_rate_nonneg(qR, "qR");
    detail::EdgeAccumulator acc;
    for (int k = 1; k < M; ++k) {
        acc.add(k, k + 1, qL);
        acc.add(k + 1, k, qR);
    }
    return Network(M, std::vector<double>(M, p), acc.take(),
                   "line-2s M=" + std::to_string(M));
}

enum class Sided { one, two };

// Node id of the lattice point with 0-based coordinates c[0..D-1], side M1.
inline int torus_node_id(int D, int M1, const std::vector<int>& c) {
    int id = 0, stride = 1;
    for (int i = 0; i < D; ++i) {
        id += c[i] * stride;
        stride *= M1;
    }
    return id + 1;
}

// D-dimensional toroidal lattice with M1^D nodes, periodic in every
// coordinate.  One-sided: each node is influenced by its D "minus e_i"
// neighbors at rate q/D; two-sided: by its 2D nearest neighbors at rate
// q/(2D).  Parallel edges that arise when M1 = 2 (the +e_i and -e_i
// neighbors coincide) are merged by summing rates, so q_in = q for every
// node in all cases.
inline Network gen_torus(int D, int M1, double p, double q, Sided sided,
                         std::int64_t max_nodes = std::int64_t(1) << 22) {
    require(D >= 1, Errc::invalid_size, "torus needs D >= 1");
    require(M1 >= 2, Errc::invalid_size, "torus needs M1 >= 2");
    detail::check_rate_nonneg(q, "q");
    std::int64_t nodes = 1;
    for (int i = 0; i < D; ++i) {
        nodes *= M1;
        require(nodes <= max_nodes, Errc::budget_exceeded,
                "torus with M1^D > " + std::to_string(max_nodes) + " nodes");
    }
    const int M = static_cast<int>(nodes);
    const double rate = sided == Sided::one ? q / D : q / (2 * D);
    detail::EdgeAccumulator acc;
    std::vector<int> c(D, 0);
    for (int id = 1; id <= M; ++id) {
        for (int i = 0; i < D; ++i) {
            std::vector<int> nb = c;
            nb[i] = (c[i] + M1 - 1) % M1;                    // j - e_i
            acc.add(torus_node_id(D, M1, nb), id, rate);
            if (sided == Sided::two) {
                nb[i] = (c[i] + 1) % M1;                     // j + e_i
                acc.add(torus_node_id(D, M1, nb), id, rate);
            }
        }
        for (int i = 0; i < D && ++c[i] == M1; ++i) c[i] = 0;
    }
    return Network(M, std::vector<double>(M, p), acc.take(),
                   std::string("torus-") + (sided == Sided::one ? "1s" : "2s") +
                       " D=" + std::to_string(D) + " M1=" + std::to_string(M1));
}

// N directed rays of length L feeding a hub.  Ray r occupies nodes
// (r-1)L+1 .. rL ordered from the far end inward; the hub is node N*L+1.
// All edges carry rate qt, so the hub has in-degree N (for L >= 1) and
// q_in(hub) = N*qt.  With N=1 this is exactly the one-sided line of L+1
// nodes ending at the hub.
inline Network gen_ray_star(int N, int L, double p, double qt) {
    require(N >= 1, Errc::invalid_size, "ray star needs N >= 1");
    require(L >= 1, Errc::invalid_size, "ray star needs L >= 1");
    detail::check_rate_nonneg(qt, "qt");
    const int M = N * L + 1;
    const int hub = M;
    detail::EdgeAccumulator acc;
    for (int r = 1; r <= N; ++r) {
        const int base = (r - 1) * L;
        for (int i = 1; i < L; ++i) acc.add(base + i, base + i + 1, qt);
        acc.add(base + L, hub, qt);
    }
    return Network(M, std::vector<double>(M, p), acc.take(),
                   "ray-star N=" + std::to_string(N) +
                       " L=" + std::to_string(L));
}

} // namespace bassnet
