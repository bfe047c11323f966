#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kddb/numkernel.hpp"
#include "kddb/oracle.hpp"
#include "kddb/relaxation.hpp"
#include "kddb/rng.hpp"

using namespace kddb;

namespace {

constexpr double kTol = 1e-4;

// Residual checks shared by every solved node.
void check_solution_shape(const NodeProblem& node, const SdpSolution& sol) {
    const ShrinkMap& s = node.shrink;
    int d = s.du() + s.dv();
    REQUIRE(int(sol.Z.n_rows) == d);
    CHECK(sol.converged);
    CHECK(sol.kkt_residual <= 10 * kTol);

    double scale = 1.0 + arma::norm(rhs_b(s, node.k));
    CHECK(arma::norm(apply_operator_A(sol.Z, s) - rhs_b(s, node.k)) <
          1e-2 * scale);
    CHECK(sol.Z.min() > -1e-3);
    if (!sol.cut_mult.empty()) CHECK(sol.cut_mult.min() >= 0.0);
    if (!sol.cl_mult.empty()) CHECK(sol.cl_mult.min() >= 0.0);
    CHECK(sol.Q.min() >= 0.0);
}

}  // namespace

TEST_CASE("identity instance solves to two singleton bicliques") {
    arma::mat A = arma::eye(2, 2);
    NodeProblem root = build_root(A, 2);
    SdpSolution sol = solve_dnn(root, nullptr, kTol);
    check_solution_shape(root, sol);
    CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("block-constant instance is tight and survives a merge") {
    // two all-ones blocks: 3x2 and 2x2, best value sqrt(6) + sqrt(4)
    arma::mat A(5, 4, arma::fill::zeros);
    A.submat(0, 0, 2, 1).fill(1.0);
    A.submat(3, 2, 4, 3).fill(1.0);
    double best = std::sqrt(6.0) + 2.0;

    NodeProblem root = build_root(A, 2);
    SdpSolution sol = solve_dnn(root, nullptr, kTol);
    check_solution_shape(root, sol);
    CHECK(sol.objective == doctest::Approx(best).epsilon(1e-2));

    // merging two rows of the same block cannot change the optimum
    NodeProblem child = shrink_child(root, Side::u, 0, 1);
    SdpSolution csol = solve_dnn(child, nullptr, kTol);
    check_solution_shape(child, csol);
    CHECK(csol.objective == doctest::Approx(best).epsilon(1e-2));
    CHECK(csol.objective <= sol.objective + 1e-2);
}

TEST_CASE("planted low-noise root is nearly rank k") {
    PlantedSpec spec{10, 10, 2, 0.1, 42};
    arma::mat A = generate_planted(spec).first;
    NodeProblem root = build_root(A, 2);
    SdpSolution sol = solve_dnn(root, nullptr, kTol);
    check_solution_shape(root, sol);

    arma::vec ev = sym_eig(sol.Z).values;
    double lead = ev(ev.n_elem - 1) + ev(ev.n_elem - 2);
    CHECK(lead / arma::sum(arma::clamp(ev, 0.0, ev.max())) > 0.999);

    OracleResult exact = brute_force(A, 2);
    CHECK(sol.objective >= exact.value - 1e-2);
    CHECK(sol.objective <= exact.value + 1e-2);
}

TEST_CASE("solutions respect the spectral cap") {
    Rng rng(99);
    for (int trial = 0; trial < 5; ++trial) {
        int n = 4 + int(rng.uniform_index(4));
        int m = 4 + int(rng.uniform_index(4));
        arma::mat A(n, m);
        for (auto& x : A) x = rng.uniform(0.0, 1.0);
        NodeProblem root = build_root(A, 2 + trial % 2);
        SdpSolution sol = solve_dnn(root, nullptr, kTol);
        check_solution_shape(root, sol);
        CHECK(sym_eig(sol.Z).values.max() <= 2.0 + 1e-2);
    }
}

TEST_CASE("warm restart reconverges quickly to the same value") {
    PlantedSpec spec{8, 8, 2, 0.3, 7};
    arma::mat A = generate_planted(spec).first;
    NodeProblem root = build_root(A, 2);
    SdpSolution cold = solve_dnn(root, nullptr, kTol);
    check_solution_shape(root, cold);

    SdpSolution hot = solve_dnn(root, &cold, kTol);
    check_solution_shape(root, hot);
    CHECK(hot.objective == doctest::Approx(cold.objective).epsilon(1e-3));
    CHECK(hot.iterations < cold.iterations);

    SdpSolution bad = cold;
    bad.lambda = arma::vec(3, arma::fill::zeros);
    CHECK_THROWS_AS(solve_dnn(root, &bad, kTol), std::invalid_argument);
}

TEST_CASE("cannot-link children zero the linked entry") {
    PlantedSpec spec{6, 6, 2, 0.3, 11};
    arma::mat A = generate_planted(spec).first;
    NodeProblem root = build_root(A, 2);
    NodeProblem child = cl_child(root, Side::u, 0, 1);
    SdpSolution sol = solve_dnn(child, nullptr, kTol);
    check_solution_shape(child, sol);
    CHECK(std::abs(sol.Z(0, 1)) < 1e-3);
}

TEST_CASE("pooled cuts hold at the solution") {
    PlantedSpec spec{8, 8, 3, 0.3, 1618};
    arma::mat A = generate_planted(spec).first;
    NodeProblem root = build_root(A, 3);
    SdpSolution plain = solve_dnn(root, nullptr, kTol);
    check_solution_shape(root, plain);

    arma::mat Zuu = plain.Z.submat(0, 0, 7, 7);
    arma::mat Zvv = plain.Z.submat(8, 8, 15, 15);
    std::vector<Cut> found =
        separate_exact(Zuu, Zvv, root.cuts, 1e-4, 50);
    if (found.empty()) return;  // instance happened to be clean at the root

    for (const Cut& c : found) root.cuts.add(c);
    SdpSolution cut_sol = solve_dnn(root, nullptr, kTol);
    check_solution_shape(root, cut_sol);
    CHECK(cut_sol.objective <= plain.objective + 1e-3);

    Zuu = cut_sol.Z.submat(0, 0, 7, 7);
    Zvv = cut_sol.Z.submat(8, 8, 15, 15);
    for (const Cut& c : root.cuts.cuts()) {
        const arma::mat& blk = c.side == Side::u ? Zuu : Zvv;
        CHECK(violation(blk, c) < 1e-3);
    }
}
