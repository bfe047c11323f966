#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kddb/branching.hpp"
#include "kddb/oracle.hpp"
#include "kddb/rng.hpp"
#include "kddb/safebound.hpp"

using namespace kddb;

namespace {

Biclustering random_biclustering(int n, int m, int k, Rng& rng) {
    Biclustering b;
    b.k = k;
    b.row_labels.resize(n);
    b.col_labels.resize(m);
    for (int i = 0; i < n; ++i) {
        b.row_labels[i] = i < k ? i : int(rng.uniform_index(k));
    }
    for (int j = 0; j < m; ++j) {
        b.col_labels[j] = j < k ? j : int(rng.uniform_index(k));
    }
    rng.shuffle(b.row_labels);
    rng.shuffle(b.col_labels);
    return b;
}

}  // namespace

TEST_CASE("integral solutions produce no branching pair") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 4 + int(rng.uniform_index(4));
        int m = 4 + int(rng.uniform_index(4));
        int k = 2 + int(rng.uniform_index(2));
        Biclustering b = random_biclustering(n, m, k, rng);
        arma::mat Z = feasible_gram(b);
        CHECK(!select_pair(Z, ShrinkMap::identity(n, m)).has_value());
    }
}

TEST_CASE("the most undecided entry wins, weighted by side size") {
    // 2 + 2 reduced space; make u pair (0,1) mildly undecided and v pair
    // (0,1) strongly undecided
    arma::mat Z(4, 4, arma::fill::zeros);
    Z(0, 0) = 0.5;
    Z(1, 1) = 0.5;
    Z(0, 1) = Z(1, 0) = 0.02;
    Z(2, 2) = 0.5;
    Z(3, 3) = 0.5;
    Z(2, 3) = Z(3, 2) = 0.2;

    ShrinkMap s = ShrinkMap::identity(2, 2);
    auto p = select_pair(Z, s);
    REQUIRE(p.has_value());
    CHECK(p->side == Side::v);
    CHECK(p->i == 0);
    CHECK(p->j == 1);
    CHECK(p->score == doctest::Approx(2.0 * 0.2).epsilon(1e-12));

    // with a much larger full u side, the same undecidedness on u wins even
    // though the reduced spaces match
    ShrinkMap lop;
    lop.n = 40;
    lop.m = 2;
    lop.groups_u = {std::vector<int>(20), std::vector<int>(20)};
    int t = 0;
    for (auto& g : lop.groups_u) {
        for (auto& x : g) x = t++;
    }
    lop.groups_v = {{0}, {1}};
    auto q = select_pair(Z, lop);
    REQUIRE(q.has_value());
    CHECK(q->side == Side::u);
    CHECK(q->score == doctest::Approx(40.0 * 0.02).epsilon(1e-12));
}

TEST_CASE("ties prefer the u side and then lexicographic order") {
    arma::mat Z(6, 6, arma::fill::zeros);
    Z.diag().fill(0.5);
    // u pairs (0,1), (1,2) and v pair (0,1) all have undecidedness 0.1
    Z(0, 1) = Z(1, 0) = 0.1;
    Z(1, 2) = Z(2, 1) = 0.1;
    Z(3, 4) = Z(4, 3) = 0.1;
    ShrinkMap s = ShrinkMap::identity(3, 3);
    auto p = select_pair(Z, s);
    REQUIRE(p.has_value());
    CHECK(p->side == Side::u);
    CHECK(p->i == 0);
    CHECK(p->j == 1);
}

TEST_CASE("decided tolerance silences small undecidedness") {
    arma::mat Z(4, 4, arma::fill::zeros);
    Z.diag().fill(0.5);
    Z(0, 1) = Z(1, 0) = 5e-5;
    ShrinkMap s = ShrinkMap::identity(2, 2);
    CHECK(!select_pair(Z, s, 1e-4).has_value());
    CHECK(select_pair(Z, s, 1e-6).has_value());
}

TEST_CASE("children partition the node's feasible assignments") {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 4 + int(rng.uniform_index(2));
        int m = 4 + int(rng.uniform_index(2));
        arma::mat A(n, m);
        for (auto& x : A) x = rng.uniform(-1.0, 1.0);
        NodeProblem node = build_root(A, 2);
        if (trial % 2 == 1) node = cl_child(node, Side::u, 0, 1);

        SdpSolution sol = solve_dnn(node, nullptr, 1e-4);
        auto pair = select_pair(sol.Z, node.shrink);
        if (!pair.has_value()) continue;
        if (trial % 2 == 1) {
            // the forbidden entry is held at zero, so it must read as decided
            REQUIRE(!(pair->side == Side::u && pair->i == 0 && pair->j == 1));
        }

        auto [ml, cl] = make_children(node, *pair);
        OracleResult parent = brute_force_node(node);
        OracleResult a = brute_force_node(ml);
        OracleResult b = brute_force_node(cl);
        CHECK(std::max(a.value, b.value) ==
              doctest::Approx(parent.value).epsilon(1e-10));
    }
}

TEST_CASE("child relaxations never beat the parent bound") {
    Rng rng(19);
    arma::mat A(6, 6);
    for (auto& x : A) x = rng.uniform(0.0, 1.0);
    NodeProblem node = build_root(A, 2);
    SdpSolution sol = solve_dnn(node, nullptr, 1e-4);
    SafeBound parent = safe_upper_bound(node, sol);
    auto pair = select_pair(sol.Z, node.shrink);
    REQUIRE(pair.has_value());

    auto [ml, cl] = make_children(node, *pair);
    double slack = 1e-2 * (1.0 + std::abs(parent.value));
    for (const NodeProblem* child : {&ml, &cl}) {
        SdpSolution csol = solve_dnn(*child, nullptr, 1e-4);
        CHECK(csol.objective <= parent.value + slack);
    }
}

TEST_CASE("make_children records the merge remap") {
    arma::mat A(5, 4, arma::fill::ones);
    NodeProblem node = build_root(A, 2);
    BranchPair pair{Side::u, 1, 3, 0.5};
    ShrinkChildInfo info;
    auto [ml, cl] = make_children(node, pair, &info);

    CHECK(ml.shrink.du() == 4);
    CHECK(ml.shrink.groups_u[1] == std::vector<int>{1, 3});
    CHECK(info.u_map == std::vector<int>{0, 1, 2, 1, 3});
    CHECK(info.v_map == std::vector<int>{0, 1, 2, 3});

    CHECK(cl.shrink.du() == 5);
    CHECK(cl.cl_u == std::vector<std::pair<int, int>>{{1, 3}});
}
