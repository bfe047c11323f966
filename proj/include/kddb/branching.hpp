#pragma once

#include <optional>
#include <utility>

#include "kddb/relaxation.hpp"

namespace kddb {

struct BranchPair {
    Side side = Side::u;
    int i = 0;
    int j = 0;
    double score = 0.0;
};

// Most fractional co-membership decision in a (reduced-space) solution. A
// pair i < j on one side is decided when Z_ij is near zero (separated) or
// near both diagonal entries (co-clustered); its undecidedness is
//   min(Z_ij, max(|Z_ii - Z_ij|, |Z_jj - Z_ij|)),
// scored by the full side size, and the largest score wins (U before V, then
// lexicographic, on ties). Cannot-linked pairs are skipped: the relaxation
// only drives their entries to zero up to its tolerance, and they are not
// branchable. Returns nothing when every remaining pair is decided within
// decided_tol, i.e. the solution is integral for branching purposes.
std::optional<BranchPair> select_pair(
    const arma::mat& Z, const ShrinkMap& shrink, double decided_tol = 1e-4,
    const std::vector<std::pair<int, int>>& cl_u = {},
    const std::vector<std::pair<int, int>>& cl_v = {});

// Fallback when every pair is decided but a side still has more than k
// groups: the heaviest co-membership entry not yet cannot-linked, scored like
// select_pair. Branching on it either shrinks the side or forces the entry to
// zero, so the tree keeps making progress toward fully shrunk nodes. Returns
// nothing only when both sides are already at k groups.
std::optional<BranchPair> select_forced(const arma::mat& Z,
                                        const NodeProblem& node);

// Children of a branching decision: merge (must-link) and separation
// (cannot-link). Bounds and ids are left for the caller to fill in.
std::pair<NodeProblem, NodeProblem> make_children(const NodeProblem& node,
                                                  const BranchPair& pair,
                                                  ShrinkChildInfo* ml_info =
                                                      nullptr);

}  // namespace kddb
