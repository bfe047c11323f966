#include "kddb/branching.hpp"

#include <algorithm>

namespace kddb {

std::optional<BranchPair> select_pair(
    const arma::mat& Z, const ShrinkMap& shrink, double decided_tol,
    const std::vector<std::pair<int, int>>& cl_u,
    const std::vector<std::pair<int, int>>& cl_v) {
    std::optional<BranchPair> best;
    auto scan = [&](Side side, int offset, int d,
                    const std::vector<std::pair<int, int>>& cl, double weight) {
        for (int i = 0; i < d; ++i) {
            for (int j = i + 1; j < d; ++j) {
                if (std::binary_search(cl.begin(), cl.end(),
                                       std::make_pair(i, j))) {
                    continue;
                }
                double zij = Z(offset + i, offset + j);
                double off = std::max(
                    std::abs(Z(offset + i, offset + i) - zij),
                    std::abs(Z(offset + j, offset + j) - zij));
                double undecided = std::min(zij, off);
                if (undecided <= decided_tol) continue;
                double score = weight * undecided;
                if (!best || score > best->score) {
                    best = BranchPair{side, i, j, score};
                }
            }
        }
    };
    scan(Side::u, 0, shrink.du(), cl_u, static_cast<double>(shrink.n));
    scan(Side::v, shrink.du(), shrink.dv(), cl_v,
         static_cast<double>(shrink.m));
    return best;
}

std::optional<BranchPair> select_forced(const arma::mat& Z,
                                        const NodeProblem& node) {
    std::optional<BranchPair> best;
    auto scan = [&](Side side, int offset, int d,
                    const std::vector<std::pair<int, int>>& cl, double weight) {
        if (d <= node.k) return;
        for (int i = 0; i < d; ++i) {
            for (int j = i + 1; j < d; ++j) {
                if (std::binary_search(cl.begin(), cl.end(),
                                       std::make_pair(i, j))) {
                    continue;
                }
                double score = weight * Z(offset + i, offset + j);
                if (!best || score > best->score) {
                    best = BranchPair{side, i, j, score};
                }
            }
        }
    };
    scan(Side::u, 0, node.shrink.du(), node.cl_u,
         static_cast<double>(node.shrink.n));
    scan(Side::v, node.shrink.du(), node.shrink.dv(), node.cl_v,
         static_cast<double>(node.shrink.m));
    return best;
}

std::pair<NodeProblem, NodeProblem> make_children(const NodeProblem& node,
                                                  const BranchPair& pair,
                                                  ShrinkChildInfo* ml_info) {
    NodeProblem ml = shrink_child(node, pair.side, pair.i, pair.j, ml_info);
    NodeProblem cl = cl_child(node, pair.side, pair.i, pair.j);
    return {std::move(ml), std::move(cl)};
}

}  // namespace kddb
