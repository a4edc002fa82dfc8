#pragma once

#include <string>
#include <vector>

#include "bassnet/errors.hpp"
#include "bassnet/network.hpp"
#include "bassnet/partition.hpp"

namespace bassnet {

namespace detail {

inline std::vector<char> omega_mask(const Network& net,
                                    const std::vector<int>& omega,
                                    bool proper_subset_required) {
    require(!omega.empty(), Errc::bad_omega, "Omega must be nonempty");
    std::vector<char> mask(net.M() + 1, 0);
    int count = 0;
    for (int v : omega) {
        require(v >= 1 && v <= net.M(), Errc::bad_omega,
                "Omega contains node " + std::to_string(v) + " outside [1.." +
                    std::to_string(net.M()) + "]");
        if (!mask[v]) ++count;
        mask[v] = 1;
    }
    require(!proper_subset_required || count < net.M(), Errc::bad_omega,
            "Omega must be a proper subset of the node set");
    return mask;
}

// Nodes with a directed path to some seed (seeds included), following
// in-edges backwards; node `skip` (0 = none) is treated as deleted.
inline std::vector<char> reverse_reachable(const Network& net,
                                           const std::vector<char>& seed_mask,
                                           int skip = 0) {
    std::vector<char> seen(net.M() + 1, 0);
    std::vector<int> queue;
    for (int v = 1; v <= net.M(); ++v)
        if (seed_mask[v] && v != skip) {
            seen[v] = 1;
            queue.push_back(v);
        }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int v = queue[head];
        for (const auto& [src, rate] : net.in(v)) {
            (void)rate;
            if (src == skip || seen[src]) continue;
            seen[src] = 1;
            queue.push_back(src);
        }
    }
    return seen;
}

} // namespace bassnet::detail

// True iff m is in Omega or a directed path m ~> Omega exists.
inline bool is_influential_node(const Network& net, int m,
                                const std::vector<int>& omega) {
    require(m >= 1 && m <= net.M(), Errc::index_out_of_range,
            "node index " + std::to_string(m));
    const auto mask = detail::omega_mask(net, omega, /*proper=*/false);
    return detail::reverse_reachable(net, mask)[m] != 0;
}

// True iff k is outside Omega and either m is in Omega or a directed path
// m ~> Omega avoids k.  Requires that the edge k -> m exists and that Omega
// is a proper nonempty subset of the nodes.
inline bool is_influential_edge(const Network& net, int k, int m,
                                const std::vector<int>& omega) {
    require(net.has_edge(k, m), Errc::no_such_edge,
            "no edge (" + std::to_string(k) + "," + std::to_string(m) + ")");
    const auto mask = detail::omega_mask(net, omega, /*proper=*/true);
    if (mask[k]) return false;
    if (mask[m]) return true;
    return detail::reverse_reachable(net, mask, /*skip=*/k)[m] != 0;
}

// Influence flag for every edge of net.edges() (same order), sharing one
// backward search per distinct edge source.
inline std::vector<char> influential_edge_flags(const Network& net,
                                                const std::vector<int>& omega) {
    const auto mask = detail::omega_mask(net, omega, /*proper=*/true);
    const auto& edges = net.edges();
    std::vector<char> flags(edges.size(), 0);
    std::vector<char> reach;
    int cached_source = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        if (mask[e.from]) continue;       // emanates from Omega
        if (mask[e.to]) {
            flags[i] = 1;
            continue;
        }
        if (e.from != cached_source) {    // edges are sorted by source
            cached_source = e.from;
            reach = detail::reverse_reachable(net, mask, /*skip=*/e.from);
        }
        flags[i] = reach[e.to];
    }
    return flags;
}

// Removes every edge that is non-influential to Omega.  The nonadoption
// probability of Omega is provably unchanged; idempotent.
inline Network indifference_reduce(const Network& net,
                                   const std::vector<int>& omega) {
    const auto flags = influential_edge_flags(net, omega);
    std::vector<Edge> kept;
    for (std::size_t i = 0; i < flags.size(); ++i)
        if (flags[i]) kept.push_back(net.edges()[i]);
    return Network(net.M(), net.p_vector(), std::move(kept), net.label());
}

// True iff deleting node j disconnects A from B.  Because A, B, {j} cover
// all nodes, any path between A and B in the j-deleted graph must use a
// direct A-B edge, so the predicate reduces to: no edge between A and B in
// either direction.  (Undirected reading: direction of the crossing edge
// does not matter.)
inline bool is_vertex_cut(const Network& net, const Partition& part) {
    const auto side = detail::partition_sides(net, part);
    for (const Edge& e : net.edges()) {
        const char a = side[e.from], b = side[e.to];
        if ((a == 1 && b == 2) || (a == 2 && b == 1)) return false;
    }
    return true;
}

// True iff no node of A or B is influential to j in both derived networks
// (j can adopt through A-edges only) and (j can adopt through B-edges only).
inline bool is_funnel_node(const Network& net, const Partition& part) {
    validate_partition(net, part);
    const Network netA = derive(net, part, DerivedKind::A);
    const Network netB = derive(net, part, DerivedKind::B);
    std::vector<char> jmask(net.M() + 1, 0);
    jmask[part.j] = 1;
    const auto reachA = detail::reverse_reachable(netA, jmask);
    const auto reachB = detail::reverse_reachable(netB, jmask);
    for (int m = 1; m <= net.M(); ++m)
        if (m != part.j && reachA[m] && reachB[m]) return false;
    return true;
}

// True iff some node (i itself and j itself included) is influential to
// both i and j.  This is the dichotomy predicate for the pair inequality:
// the inequality is strict exactly when such a node exists.
inline bool common_influential_node_exists(const Network& net, int i, int j) {
    std::vector<char> mi(net.M() + 1, 0), mj(net.M() + 1, 0);
    require(i >= 1 && i <= net.M() && j >= 1 && j <= net.M(),
            Errc::index_out_of_range, "node pair indices");
    mi[i] = 1;
    mj[j] = 1;
    const auto ri = detail::reverse_reachable(net, mi);
    const auto rj = detail::reverse_reachable(net, mj);
    for (int m = 1; m <= net.M(); ++m)
        if (ri[m] && rj[m]) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Dominance
// ---------------------------------------------------------------------------

enum class DominanceRelation { Equal, WeaklyDominated, StrictlyDominated, Incomparable };

inline const char* to_string(DominanceRelation r) {
    switch (r) {
        case DominanceRelation::Equal: return "equal";
        case DominanceRelation::WeaklyDominated: return "weakly_dominated";
        case DominanceRelation::StrictlyDominated: return "strictly_dominated";
        case DominanceRelation::Incomparable: return "incomparable";
    }
    return "unknown";
}

// A coordinate where the first network's rate is strictly below the
// second's: either p at `node`, or q on the edge `from -> to`.
struct DominanceWitness {
    enum class Kind { P, Q } kind = Kind::P;
    int node = 0; // for P
    int from = 0, to = 0; // for Q
};

struct DominanceResult {
    DominanceRelation relation = DominanceRelation::Incomparable;
    std::vector<DominanceWitness> witnesses;
};

// Coordinatewise comparison of netA against netB (absent edges count as
// rate 0).  StrictlyDominated means netA <= netB everywhere with at least
// one strict coordinate; witnesses list the strict coordinates where netA
// is below netB.  With sparse-zero semantics "<= everywhere and not equal"
// always has a strict coordinate, so WeaklyDominated is never returned; the
// enum value exists for interface completeness.  "netA >= netB with some
// strict coordinate" reports Incomparable (netA is *not* dominated); swap
// the arguments to test the other direction.
inline DominanceResult dominance_compare(const Network& netA,
                                         const Network& netB) {
    require(netA.M() == netB.M(), Errc::size_mismatch,
            "node counts differ: " + std::to_string(netA.M()) + " vs " +
                std::to_string(netB.M()));
    DominanceResult result;
    bool any_below = false, any_above = false;
    for (int j = 1; j <= netA.M(); ++j) {
        const double a = netA.p(j), b = netB.p(j);
        if (a < b) {
            any_below = true;
            result.witnesses.push_back(
                {DominanceWitness::Kind::P, j, 0, 0});
        } else if (a > b) {
            any_above = true;
        }
    }
    // Merge the two sorted edge lists to visit the union of edge keys.
    const auto& ea = netA.edges();
    const auto& eb = netB.edges();
    std::size_t ia = 0, ib = 0;
    auto key_less = [](const Edge& x, const Edge& y) {
        return x.from != y.from ? x.from < y.from : x.to < y.to;
    };
    while (ia < ea.size() || ib < eb.size()) {
        double a = 0.0, b = 0.0;
        int from, to;
        if (ib == eb.size() || (ia < ea.size() && key_less(ea[ia], eb[ib]))) {
            a = ea[ia].rate; from = ea[ia].from; to = ea[ia].to; ++ia;
        } else if (ia == ea.size() || key_less(eb[ib], ea[ia])) {
            b = eb[ib].rate; from = eb[ib].from; to = eb[ib].to; ++ib;
        } else {
            a = ea[ia].rate; b = eb[ib].rate;
            from = ea[ia].from; to = ea[ia].to; ++ia; ++ib;
        }
        if (a < b) {
            any_below = true;
            result.witnesses.push_back({DominanceWitness::Kind::Q, 0, from, to});
        } else if (a > b) {
            any_above = true;
        }
    }
    if (any_below && any_above) {
        result.relation = DominanceRelation::Incomparable;
    } else if (any_above) {
        result.relation = DominanceRelation::Incomparable; // netA not dominated
        result.witnesses.clear();
    } else if (any_below) {
        result.relation = DominanceRelation::StrictlyDominated;
    } else {
        result.relation = DominanceRelation::Equal;
    }
    if (result.relation == DominanceRelation::Incomparable)
        result.witnesses.clear();
    return result;
}

// Given netA dominated by netB, decides whether the adoption probability of
// node j is *strictly* lower in netA: true iff some strict coordinate is
// influential to {j} in netB (a p-witness at an influential node, or a
// q-witness on an influential edge).
inline bool strict_dominance_predicts_node(const Network& netA,
                                           const Network& netB, int j) {
    const DominanceResult cmp = dominance_compare(netA, netB);
    require(cmp.relation == DominanceRelation::WeaklyDominated ||
                cmp.relation == DominanceRelation::StrictlyDominated,
            Errc::not_dominated, "first network is not dominated by second");
    const std::vector<int> omega{j};
    for (const DominanceWitness& w : cmp.witnesses) {
        if (w.kind == DominanceWitness::Kind::P) {
            if (is_influential_node(netB, w.node, omega)) return true;
        } else {
            if (netB.M() >= 2 && is_influential_edge(netB, w.from, w.to, omega))
                return true;
        }
    }
    return false;
}

} // namespace bassnet
