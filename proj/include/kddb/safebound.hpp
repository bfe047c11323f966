#pragma once

#include <armadillo>

#include "kddb/relaxation.hpp"

namespace kddb {

struct SafeBound {
    double value = 0.0;           // dual_objective + eig_correction
    double dual_objective = 0.0;  // b^T lambda
    double eig_correction = 0.0;  // -2 * (sum of negative eigenvalues), >= 0
};

// value = dual_objective - 2 * neg_eig_sum(Stilde). Valid because every
// feasible Gram matrix has spectral norm at most 2, so an eigenvalue bound on
// the (possibly indefinite) dual slack matrix repairs any infeasibility.
double safe_bound_from(double dual_objective, const arma::mat& Stilde);

// Rigorous upper bound on the node optimum from any multiplier set with
// nonnegative cut/cl multipliers and nonnegative Q:
//   Stilde = -C + adjoint_A(lambda) + cl and cut adjoints - Q,
// where C is the node objective matrix. Inequality and cannot-link rows have
// zero right-hand side, so only lambda enters the dual objective.
SafeBound safe_upper_bound(const NodeProblem& node, const SdpSolution& sol);

// The dual slack matrix used by safe_upper_bound; exposed for tests.
arma::mat dual_slack(const NodeProblem& node, const SdpSolution& sol);

}  // namespace kddb
