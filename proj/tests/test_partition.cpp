// Partitions {A, B, {j}}, derived networks, and node splitting.

#include <catch2/catch_amalgamated.hpp>

#include "support/oracles.hpp"

using namespace bassnet;
using oracles::error_code_of;

namespace {
const Network& path5() {
    // 1 <-> 2 <-> 3 <-> 4 <-> 5, p = 0.2, both rates 0.4
    static const Network net = gen_line_two_sided(5, 0.2, 0.4, 0.4);
    return net;
}
} // namespace

TEST_CASE("partition validation") {
    const Partition good{{1, 2}, {4, 5}, 3};
    CHECK_FALSE(error_code_of([&] { validate_partition(path5(), good); }));

    CHECK(error_code_of([&] {
              validate_partition(path5(), {{1, 2}, {4}, 3});
          }) == Errc::invalid_partition); // 5 uncovered
    CHECK(error_code_of([&] {
              validate_partition(path5(), {{1, 2, 4}, {4, 5}, 3});
          }) == Errc::invalid_partition); // 4 twice
    CHECK(error_code_of([&] {
              validate_partition(path5(), {{1, 2, 3}, {4, 5}, 3});
          }) == Errc::invalid_partition); // j inside A
    CHECK(error_code_of([&] {
              validate_partition(path5(), {{}, {1, 2, 4, 5}, 3});
          }) == Errc::invalid_partition); // A empty
    CHECK(error_code_of([&] {
              validate_partition(path5(), {{1, 2}, {4, 6}, 3});
          }) == Errc::invalid_partition); // out of range
}

TEST_CASE("derived networks cut exactly the prescribed in-edges of j") {
    const Partition part{{1, 2}, {4, 5}, 3};
    const Network& net = path5();

    const Network full = derive(net, part, DerivedKind::Full);
    CHECK(full.edges().size() == net.edges().size());
    CHECK(full.p(3) == 0.2);

    // A: p_j = 0, the B -> j edge (4 -> 3) removed, everything else kept
    const Network a = derive(net, part, DerivedKind::A);
    CHECK(a.p(3) == 0.0);
    CHECK(a.q(2, 3) == 0.4);
    CHECK(a.q(4, 3) == 0.0);
    CHECK(a.q(4, 5) == 0.4); // edges not touching j stay
    CHECK(a.q(3, 4) == 0.4); // out-edges of j stay
    CHECK(a.edges().size() == net.edges().size() - 1);

    const Network b = derive(net, part, DerivedKind::B);
    CHECK(b.p(3) == 0.0);
    CHECK(b.q(2, 3) == 0.0);
    CHECK(b.q(4, 3) == 0.4);

    // Pj: all in-edges of j removed, p_j kept
    const Network pj = derive(net, part, DerivedKind::Pj);
    CHECK(pj.p(3) == 0.2);
    CHECK(pj.q(2, 3) == 0.0);
    CHECK(pj.q(4, 3) == 0.0);
    CHECK(pj.edges().size() == net.edges().size() - 2);

    // APj: only the B -> j edge removed, p_j kept
    const Network apj = derive(net, part, DerivedKind::APj);
    CHECK(apj.p(3) == 0.2);
    CHECK(apj.q(2, 3) == 0.4);
    CHECK(apj.q(4, 3) == 0.0);

    const Network bpj = derive(net, part, DerivedKind::BPj);
    CHECK(bpj.p(3) == 0.2);
    CHECK(bpj.q(2, 3) == 0.0);
    CHECK(bpj.q(4, 3) == 0.4);
}

TEST_CASE("split_node rewires j's in-edges onto three fresh roles") {
    const Partition part{{1, 2}, {4, 5}, 3};
    // the construction requires j to have no out-edges; reduce them first
    const Network reduced = indifference_reduce(path5(), {3});
    REQUIRE(reduced.out(3).empty());

    const Network sp = split_node(reduced, part);
    const int M = path5().M();
    CHECK(sp.M() == M + 2);
    // j_A keeps j's id with p = 0 and only the A-side in-edge
    CHECK(sp.p(3) == 0.0);
    CHECK(sp.q(2, 3) == 0.4);
    CHECK(sp.q(4, 3) == 0.0);
    // j_B = M+1: p = 0, only the B-side in-edge
    CHECK(sp.p(M + 1) == 0.0);
    CHECK(sp.q(4, M + 1) == 0.4);
    CHECK(sp.q(2, M + 1) == 0.0);
    // j_p = M+2: p = p_j, no in-edges
    CHECK(sp.p(M + 2) == 0.2);
    CHECK(sp.in(M + 2).empty());
    // none of the three replacement nodes has out-edges
    CHECK(sp.out(3).empty());
    CHECK(sp.out(M + 1).empty());
    CHECK(sp.out(M + 2).empty());

    // refusing to split while out-edges are present
    CHECK(error_code_of([&] { split_node(path5(), part); }) ==
          Errc::out_edges_present);
}

TEST_CASE("splitting preserves the joint nonadoption law of j") {
    // [S_j](t) in N equals [S_{jA, jB, jp}](t) in the split network.
    const Partition part{{1, 2}, {4, 5}, 3};
    const Network reduced = indifference_reduce(path5(), {3});
    const Network sp = split_node(reduced, part);
    const std::vector<double> times = {0.0, 0.3, 0.9, 1.7, 3.0};
    const Curve lhs = survival(path5(), {3}, times);
    const Curve rhs = survival(sp, {3, 6, 7}, times);
    for (std::size_t n = 0; n < times.size(); ++n)
        CHECK(lhs.values[n] == Catch::Approx(rhs.values[n]).margin(1e-10));
}
