// Influence predicates, indifference reduction, vertex cuts, funnel nodes,
// and rate-vector dominance — including their exact dynamical consequences.

#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"

using namespace bassnet;
using oracles::error_code_of;

namespace {

// 1 -> 2 -> 3, plus 3 -> 4 hanging off, p = 0.2, all rates 0.5
Network chain4() {
    return Network(4, {0.2, 0.2, 0.2, 0.2},
                   {{1, 2, 0.5}, {2, 3, 0.5}, {3, 4, 0.5}}, "chain4");
}

} // namespace

TEST_CASE("influential nodes follow directed paths into Omega") {
    const Network net = chain4();
    // Omega = {2}: 1 and 2 are influential, 3 and 4 are not
    CHECK(is_influential_node(net, 1, {2}));
    CHECK(is_influential_node(net, 2, {2}));
    CHECK_FALSE(is_influential_node(net, 3, {2}));
    CHECK_FALSE(is_influential_node(net, 4, {2}));
    // Omega = {4}: everything upstream is influential
    for (int m = 1; m <= 4; ++m) CHECK(is_influential_node(net, m, {4}));

    CHECK(error_code_of([&] { is_influential_node(net, 1, {}); }) ==
          Errc::bad_omega);
    CHECK(error_code_of([&] { is_influential_node(net, 1, {5}); }) ==
          Errc::bad_omega);
}

TEST_CASE("influential edges are those on some path into Omega that avoids "
          "re-entering the source") {
    const Network net = chain4();
    // edge 2 -> 3 with Omega = {2}: edges leaving Omega never influence it
    CHECK_FALSE(is_influential_edge(net, 2, 3, {2}));
    CHECK(is_influential_edge(net, 1, 2, {2}));
    CHECK(is_influential_edge(net, 2, 3, {3}));
    CHECK(is_influential_edge(net, 2, 3, {4}));

    const auto flags = influential_edge_flags(net, {2});
    REQUIRE(flags.size() == net.edges().size());
    CHECK(bool(flags[0]));        // 1 -> 2
    CHECK_FALSE(bool(flags[1]));  // 2 -> 3
    CHECK_FALSE(bool(flags[2]));  // 3 -> 4

    CHECK(error_code_of([&] { is_influential_edge(net, 1, 3, {2}); }) ==
          Errc::no_such_edge);
}

TEST_CASE("removing a non-influential edge leaves the Omega law unchanged; "
          "removing an influential one does not") {
    const Network net = chain4();
    const std::vector<double> times = {0.0, 0.4, 1.0, 2.0, 4.0};
    const std::vector<int> omega = {2};
    const Curve base = survival(net, omega, times);

    // drop the non-influential edge 2 -> 3
    const Network less(4, net.p_vector(), {{1, 2, 0.5}, {3, 4, 0.5}}, "");
    const Curve same = survival(less, omega, times);
    for (std::size_t n = 0; n < times.size(); ++n)
        CHECK(same.values[n] == Catch::Approx(base.values[n]).margin(1e-12));

    // drop the influential edge 1 -> 2: survival strictly rises
    const Network cut(4, net.p_vector(), {{2, 3, 0.5}, {3, 4, 0.5}}, "");
    const Curve slower = survival(cut, omega, times);
    double max_gap = 0.0;
    for (std::size_t n = 0; n < times.size(); ++n) {
        CHECK(slower.values[n] >= base.values[n] - 1e-12);
        max_gap = std::max(max_gap, slower.values[n] - base.values[n]);
    }
    CHECK(max_gap > 1e-7);
}

TEST_CASE("indifference reduction drops exactly the non-influential edges "
          "and preserves the Omega law") {
    const Network net = chain4();
    const Network red = indifference_reduce(net, {2});
    CHECK(red.edges().size() == 1);
    CHECK(red.q(1, 2) == 0.5);
    CHECK(red.p_vector() == net.p_vector());

    const std::vector<double> times = {0.0, 0.4, 1.0, 2.0, 4.0};
    const Curve a = survival(net, {2}, times);
    const Curve b = survival(red, {2}, times);
    for (std::size_t n = 0; n < times.size(); ++n)
        CHECK(a.values[n] == Catch::Approx(b.values[n]).margin(1e-12));

    // idempotent
    const Network red2 = indifference_reduce(red, {2});
    CHECK(red2.edges().size() == red.edges().size());

    // Omega covering every node is rejected (edge influence needs a
    // proper subset)
    CHECK(error_code_of([&] {
              indifference_reduce(net, {1, 2, 3, 4});
          }) == Errc::bad_omega);
    // Omega = {2,3}: only the incoming edge 1 -> 2 survives; the edges
    // leaving Omega are non-influential to it
    CHECK(indifference_reduce(net, {2, 3}).edges().size() == 1);
    // Omega = {1,2,3}: every edge leaves Omega, so none survives
    CHECK(indifference_reduce(net, {1, 2, 3}).edges().empty());
}

TEST_CASE("vertex cut and funnel predicates") {
    // path 1 <-> 2 <-> 3: the middle separates the ends
    const Network path = gen_line_two_sided(3, 0.2, 0.4, 0.4);
    CHECK(is_vertex_cut(path, {{1}, {3}, 2}));
    CHECK(is_funnel_node(path, {{1}, {3}, 2}));

    // one-sided circle: no single node separates it, but every node is a
    // funnel node for the split into its two arcs because influence then
    // reaches j through one in-edge only
    const Network circle = gen_circle(5, 0.1, 0.4);
    CHECK_FALSE(is_vertex_cut(circle, {{1}, {3, 4, 5}, 2}));
    CHECK(is_funnel_node(circle, {{1}, {3, 4, 5}, 2}));

    // two-sided circle: both neighbours reach j on disjoint sides, and the
    // far side reaches j through *both* derived networks -> not a funnel
    const Network circ2 = gen_circle_two_sided(5, 0.1, 0.3, 0.3);
    CHECK_FALSE(is_vertex_cut(circ2, {{1, 2}, {4, 5}, 3}));
    CHECK_FALSE(is_funnel_node(circ2, {{1, 2}, {4, 5}, 3}));
}

TEST_CASE("common influential node detection matches edge structure") {
    const Network net = chain4();
    // node 1 feeds both 2 and 3
    CHECK(common_influential_node_exists(net, 2, 3));
    // two isolated components
    const Network two(4, {0.1, 0.1, 0.1, 0.1}, {{1, 2, 0.5}, {3, 4, 0.5}},
                      "two");
    CHECK_FALSE(common_influential_node_exists(two, 2, 4));
    CHECK(common_influential_node_exists(two, 1, 2));
}

TEST_CASE("dominance comparison reports the relation and strict witnesses") {
    const Network a(2, {0.1, 0.2}, {{1, 2, 0.5}}, "a");

    // equal
    CHECK(dominance_compare(a, a).relation == DominanceRelation::Equal);

    // strictly dominated through an edge rate
    const Network b_edge(2, {0.1, 0.2}, {{1, 2, 0.7}}, "b");
    const DominanceResult r1 = dominance_compare(a, b_edge);
    CHECK(r1.relation == DominanceRelation::StrictlyDominated);
    REQUIRE(r1.witnesses.size() == 1);
    CHECK(r1.witnesses[0].kind == DominanceWitness::Kind::Q);
    CHECK(r1.witnesses[0].from == 1);
    CHECK(r1.witnesses[0].to == 2);

    // strictly dominated through p and through an extra edge
    const Network b_both(2, {0.1, 0.3}, {{1, 2, 0.5}, {2, 1, 0.2}}, "b");
    const DominanceResult r2 = dominance_compare(a, b_both);
    CHECK(r2.relation == DominanceRelation::StrictlyDominated);
    CHECK(r2.witnesses.size() == 2);

    // incomparable: one rate above, one below
    const Network c(2, {0.2, 0.1}, {{1, 2, 0.5}}, "c");
    CHECK(dominance_compare(a, c).relation ==
          DominanceRelation::Incomparable);
    // the reverse direction is "not dominated", also incomparable
    CHECK(dominance_compare(b_edge, a).relation ==
          DominanceRelation::Incomparable);

    CHECK(error_code_of([&] {
              dominance_compare(a, gen_circle(3, 0.1, 0.2));
          }) == Errc::size_mismatch);
}

TEST_CASE("a strict witness influential to j forces strictly slower "
          "adoption of j, and a non-influential one does not") {
    // nets: 1 -> 2 -> 3; B raises the rate of the edge 1 -> 2
    const Network a(3, {0.2, 0.2, 0.2}, {{1, 2, 0.5}, {2, 3, 0.5}}, "a");
    const Network b(3, {0.2, 0.2, 0.2}, {{1, 2, 0.9}, {2, 3, 0.5}}, "b");
    REQUIRE(dominance_compare(a, b).relation ==
            DominanceRelation::StrictlyDominated);
    CHECK(strict_dominance_predicts_node(a, b, 2));
    CHECK(strict_dominance_predicts_node(a, b, 3));
    CHECK_FALSE(strict_dominance_predicts_node(a, b, 1));

    const std::vector<double> times = {0.0, 0.5, 1.0, 2.0, 4.0};
    for (int j = 1; j <= 3; ++j) {
        const Curve fa = f_node(a, j, times);
        const Curve fb = f_node(b, j, times);
        double max_gap = 0.0;
        for (std::size_t n = 0; n < times.size(); ++n) {
            CHECK(fb.values[n] >= fa.values[n] - 1e-10);
            max_gap = std::max(max_gap, fb.values[n] - fa.values[n]);
        }
        if (strict_dominance_predicts_node(a, b, j)) {
            CHECK(max_gap > 1e-7);
        } else {
            CHECK(max_gap <= 1e-9);
        }
    }

    CHECK(error_code_of([&] { strict_dominance_predicts_node(b, a, 2); }) ==
          Errc::not_dominated);
}
