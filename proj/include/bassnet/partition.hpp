#pragma once

#include <string>
#include <vector>

#include "bassnet/errors.hpp"
#include "bassnet/network.hpp"

namespace bassnet {

// Partition {A, B, {j}} of the node set: A and B nonempty, and A, B, {j}
// mutually disjoint with union equal to [1..M].
struct Partition {
    std::vector<int> A;
    std::vector<int> B;
    int j = 0;
};

namespace detail {

// 0 = unassigned, 1 = A, 2 = B, 3 = j.  Throws unless part is a partition.
inline std::vector<char> partition_sides(const Network& net,
                                         const Partition& part) {
    const int M = net.M();
    std::vector<char> side(M + 1, 0);
    auto place = [&](int node, char tag, const char* what) {
        require(node >= 1 && node <= M, Errc::invalid_partition,
                std::string(what) + " contains node " + std::to_string(node) +
                    " outside [1.." + std::to_string(M) + "]");
        require(side[node] == 0, Errc::invalid_partition,
                "node " + std::to_string(node) + " assigned twice");
        side[node] = tag;
    };
    require(!part.A.empty() && !part.B.empty(), Errc::invalid_partition,
            "A and B must be nonempty");
    place(part.j, 3, "{j}");
    for (int a : part.A) place(a, 1, "A");
    for (int b : part.B) place(b, 2, "B");
    for (int k = 1; k <= M; ++k)
        require(side[k] != 0, Errc::invalid_partition,
                "node " + std::to_string(k) + " not covered by A, B, or {j}");
    return side;
}

} // namespace detail

inline void validate_partition(const Network& net, const Partition& part) {
    (void)detail::partition_sides(net, part);
}

// The derived networks used by the funnel machinery, all relative to a
// partition {A, B, {j}}:
//   Full — identity copy of the network.
//   A    — p_j set to 0 and the in-edges of j from B removed (j can adopt
//          only through direct edges from A).           B is symmetric.
//   Pj   — every in-edge of j removed, p_j kept (external influence only).
//   APj  — only the in-edges of j from B removed (A edges and p_j kept).
//          BPj is symmetric.
//   Split — the node-splitting construction, see split_node below.
enum class DerivedKind { Full, A, B, Pj, APj, BPj, Split };

inline Network split_node(const Network& net, const Partition& part);

inline Network derive(const Network& net, const Partition& part,
                      DerivedKind kind) {
    const std::vector<char> side = detail::partition_sides(net, part);
    if (kind == DerivedKind::Split) return split_node(net, part);

    std::vector<double> p = net.p_vector();
    if (kind == DerivedKind::A || kind == DerivedKind::B) p[part.j - 1] = 0.0;

    auto drop_in_edge_of_j = [&](const Edge& e) {
        if (e.to != part.j) return false;
        switch (kind) {
            case DerivedKind::A:
            case DerivedKind::APj: return side[e.from] == 2; // cut B -> j
            case DerivedKind::B:
            case DerivedKind::BPj: return side[e.from] == 1; // cut A -> j
            case DerivedKind::Pj: return true;               // cut all -> j
            default: return false;                            // Full
        }
    };
    std::vector<Edge> edges;
    for (const Edge& e : net.edges())
        if (!drop_in_edge_of_j(e)) edges.push_back(e);
    return Network(net.M(), std::move(p), std::move(edges), net.label());
}

// Splits node j into three nodes: j_A (reuses j's id) inherits the in-edges
// from A and has p = 0; j_B (id M+1) inherits the in-edges from B with
// p = 0; j_p (id M+2) has p = p_j and no in-edges.  All other nodes keep
// their ids, rates, and edges.  Requires that no edges emanate from j
// (apply indifference reduction first); none of the three replacement nodes
// has out-edges either.
inline Network split_node(const Network& net, const Partition& part) {
    const std::vector<char> side = detail::partition_sides(net, part);
    require(net.out(part.j).empty(), Errc::out_edges_present,
            "node " + std::to_string(part.j) +
                " has out-edges; reduce them away before splitting");
    const int M = net.M();
    const int jA = part.j, jB = M + 1, jP = M + 2;
    std::vector<double> p = net.p_vector();
    p.resize(M + 2, 0.0);
    p[jP - 1] = net.p(part.j);
    p[jA - 1] = 0.0;
    std::vector<Edge> edges;
    for (const Edge& e : net.edges()) {
        if (e.to != part.j) {
            edges.push_back(e);
        } else if (side[e.from] == 1) {
            edges.push_back({e.from, jA, e.rate});
        } else {
            edges.push_back({e.from, jB, e.rate});
        }
    }
    return Network(M + 2, std::move(p), std::move(edges),
                   net.label() + " split(j=" + std::to_string(part.j) + ")");
}

} // namespace bassnet
