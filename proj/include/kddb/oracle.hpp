#pragma once

#include <armadillo>

#include "kddb/instance.hpp"
#include "kddb/relaxation.hpp"

namespace kddb {

struct OracleResult {
    Biclustering best;
    double value = 0.0;
};

// Exhaustive search over all surjective label assignments; returns the best
// biclustering, preferring the lexicographically smallest labels on exact
// ties. Throws std::invalid_argument when k^(n+m) exceeds 1e8.
OracleResult brute_force(const arma::mat& A, int k);

// Same search on a node's reduced space: labels are per group, cannot-link
// pairs must receive different labels, and cluster sizes count original
// vertices, so the value is comparable with the full-space objective. Returns
// value = -infinity and an empty biclustering when the node admits no
// feasible assignment.
OracleResult brute_force_node(const NodeProblem& node);

}  // namespace kddb
