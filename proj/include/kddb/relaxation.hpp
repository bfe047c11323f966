#pragma once

#include <armadillo>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "kddb/cuts.hpp"
#include "kddb/instance.hpp"

namespace kddb {

// Groups of original vertices collapsed by must-link merges. Reduced index ->
// sorted original indices; a root map has singleton groups.
struct ShrinkMap {
    std::vector<std::vector<int>> groups_u;
    std::vector<std::vector<int>> groups_v;
    int n = 0;
    int m = 0;

    int du() const { return static_cast<int>(groups_u.size()); }
    int dv() const { return static_cast<int>(groups_v.size()); }
    arma::vec mult_u() const;
    arma::vec mult_v() const;

    static ShrinkMap identity(int n, int m);
};

// One branch-and-bound node: the reduced instance plus its cannot-link pairs
// and inherited cutting planes. Abar aggregates A over the groups, so the
// reduced objective <Abar, Z_UV> equals the original one.
struct NodeProblem {
    std::shared_ptr<const arma::mat> A;
    int k = 0;
    ShrinkMap shrink;
    std::vector<std::pair<int, int>> cl_u;  // reduced pairs, i < j, sorted
    std::vector<std::pair<int, int>> cl_v;
    CutPool cuts;
    arma::mat Abar;
    int id = 0;
    double parent_bound = std::numeric_limits<double>::infinity();
};

// Output of the first-order solver for the nonnegative SDP relaxation of a
// node. Z is the primal iterate on the reduced space; lambda carries the
// equality multipliers in the order [alpha_U; y_U; alpha_V; y_V]; cut_mult and
// cl_mult are clamped to be nonnegative and Q is entrywise nonnegative, so the
// triple plugs directly into the safe-bound formula.
struct SdpSolution {
    arma::mat Z;
    arma::vec lambda;
    arma::vec cut_mult;
    arma::vec cl_mult;
    arma::mat Q;
    double objective = 0.0;
    double kkt_residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
    double sigma = 1.0;
};

struct DnnOptions {
    int max_iter = 20000;
    double sigma0 = 1.0;
    bool verbose = false;
};

NodeProblem build_root(const arma::mat& A, int k);

// Equality operator of the relaxation, in the fixed row order
// [trace_U; row sums of Z_UU; trace_V; row sums of Z_VV], where sums and
// traces are weighted by the group multiplicities.
arma::vec apply_operator_A(const arma::mat& Z, const ShrinkMap& shrink);
arma::mat adjoint_A(const arma::vec& lambda, const ShrinkMap& shrink);
arma::vec rhs_b(const ShrinkMap& shrink, int k);

// Lifts a reduced matrix back to the full space by duplicating each group's
// rows and columns.
arma::mat expand(const arma::mat& Z, const ShrinkMap& shrink);

// The Gram matrix of a biclustering: entries 1/|U_c|, 1/|V_c| and
// 1/sqrt(|U_c| |V_c|) inside matched clusters, zero elsewhere. It is feasible
// for the relaxation and its objective equals the biclustering's.
arma::mat feasible_gram(const Biclustering& b);

// Same construction on a reduced space: labels are per group and cluster
// cardinalities count original vertices.
arma::mat feasible_gram_reduced(const ShrinkMap& shrink,
                                const std::vector<int>& u_labels,
                                const std::vector<int>& v_labels, int k);

// Index remapping data for a must-link merge, used to carry dual information
// into the child.
struct ShrinkChildInfo {
    std::vector<int> u_map;       // old reduced index -> new reduced index
    std::vector<int> v_map;
    std::vector<int> cut_origin;  // new pool index -> old pool index, -1 if
                                  // the cut was rewritten during the merge
    std::vector<int> cl_origin;   // new cl row (u rows then v rows) -> old
};

// Child with reduced indices i and j merged on the given side. Throws
// std::invalid_argument if (i,j) is cannot-linked or out of range.
NodeProblem shrink_child(const NodeProblem& node, Side side, int i, int j,
                         ShrinkChildInfo* info = nullptr);

// Child with (i,j) forbidden from sharing a cluster on the given side.
NodeProblem cl_child(const NodeProblem& node, Side side, int i, int j);

// Augmented Lagrangian splitting solver for the node relaxation
//   max  <Abar, Z_UV>
//   s.t. apply_operator_A(Z) = rhs_b,  Z(i,j) = 0 on cannot-link pairs,
//        <B_c, Z> <= 0 for pooled cuts,  Z >= 0,  Z PSD.
// kkt_residual is the maximum of relative primal infeasibility, relative dual
// infeasibility and relative duality gap; converged means it reached tol.
SdpSolution solve_dnn(const NodeProblem& node, const SdpSolution* warm,
                      double tol, const DnnOptions& opts = {});

}  // namespace kddb
