#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kddb/oracle.hpp"
#include "kddb/rng.hpp"

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

TEST_CASE("identity matrix splits into unit bicliques") {
    OracleResult r = brute_force(arma::eye(2, 2), 2);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-14));
    // lexicographically smallest maximizer
    CHECK(r.best.row_labels == std::vector<int>{0, 1});
    CHECK(r.best.col_labels == std::vector<int>{0, 1});
}

TEST_CASE("all-ones 3x3 with k=2") {
    arma::mat ones(3, 3, arma::fill::ones);
    OracleResult r = brute_force(ones, 2);
    // best split is (1,2)x(1,2): sqrt(1) + sqrt(4) = 3
    CHECK(r.value == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(objective(ones, r.best) == doctest::Approx(r.value).epsilon(1e-12));
}

TEST_CASE("oracle value dominates random labelings") {
    Rng rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 3 + int(rng.uniform_index(3));
        int m = 3 + int(rng.uniform_index(3));
        int k = 2 + int(rng.uniform_index(2));
        if (k > std::min(n, m)) k = 2;
        arma::mat A(n, m);
        for (auto& x : A) x = rng.uniform(-1.0, 1.0);
        OracleResult r = brute_force(A, k);
        CHECK(objective(A, r.best) == doctest::Approx(r.value).epsilon(1e-12));
        for (int probe = 0; probe < 100; ++probe) {
            Biclustering b = random_biclustering(n, m, k, rng);
            CHECK(objective(A, b) <= r.value + 1e-10);
        }
    }
}

TEST_CASE("oracle value is invariant under row and column permutation") {
    Rng rng(55);
    arma::mat A(5, 4);
    for (auto& x : A) x = rng.uniform(0.0, 1.0);
    OracleResult base = brute_force(A, 2);
    arma::uvec rp = arma::shuffle(arma::regspace<arma::uvec>(0, 4));
    arma::uvec cp = arma::shuffle(arma::regspace<arma::uvec>(0, 3));
    arma::mat P = A.rows(rp);
    P = P.cols(cp);
    OracleResult perm = brute_force(P, 2);
    CHECK(perm.value == doctest::Approx(base.value).epsilon(1e-12));
}

TEST_CASE("oracle guards against oversized search spaces") {
    arma::mat big(20, 20, arma::fill::ones);
    CHECK_THROWS_AS(brute_force(big, 3), std::invalid_argument);
    CHECK_THROWS_AS(brute_force(arma::eye(3, 3), 1), std::invalid_argument);
    CHECK_THROWS_AS(brute_force(arma::eye(3, 3), 4), std::invalid_argument);
}

TEST_CASE("node oracle equals the plain oracle on a root node") {
    Rng rng(81);
    arma::mat A(4, 4);
    for (auto& x : A) x = rng.uniform(-1.0, 1.0);
    NodeProblem root = build_root(A, 2);
    OracleResult a = brute_force(A, 2);
    OracleResult b = brute_force_node(root);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
}

TEST_CASE("node oracle respects merges and cannot-links") {
    Rng rng(82);
    arma::mat A(5, 4);
    for (auto& x : A) x = rng.uniform(0.0, 1.0);
    NodeProblem root = build_root(A, 2);

    NodeProblem merged = shrink_child(root, Side::u, 0, 1);
    OracleResult rm = brute_force_node(merged);
    OracleResult full = brute_force(A, 2);
    CHECK(rm.value <= full.value + 1e-12);
    // the two children of a branching decision partition the labelings,
    // so their node optima reach the parent optimum
    NodeProblem cl = cl_child(root, Side::u, 0, 1);
    OracleResult rc = brute_force_node(cl);
    CHECK(std::max(rm.value, rc.value) ==
          doctest::Approx(full.value).epsilon(1e-12));

    // an infeasible node reports -infinity
    NodeProblem clash = cl_child(root, Side::v, 0, 1);
    clash = cl_child(clash, Side::v, 0, 2);
    clash = cl_child(clash, Side::v, 1, 2);
    clash = cl_child(clash, Side::v, 0, 3);
    clash = cl_child(clash, Side::v, 1, 3);
    clash = cl_child(clash, Side::v, 2, 3);  // K4 cannot be 2-colored
    OracleResult ri = brute_force_node(clash);
    CHECK(ri.value == -std::numeric_limits<double>::infinity());
}
