#include "kddb/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace kddb {

namespace {

// Odometer over base-k label vectors in lexicographic order.
bool next_labels(std::vector<int>& labels, int k) {
    for (int pos = static_cast<int>(labels.size()) - 1; pos >= 0; --pos) {
        if (++labels[pos] < k) return true;
        labels[pos] = 0;
    }
    return false;
}

bool surjective(const std::vector<int>& labels, int k) {
    std::vector<char> hit(k, 0);
    int distinct = 0;
    for (int c : labels) {
        if (!hit[c]) {
            hit[c] = 1;
            ++distinct;
        }
    }
    return distinct == k;
}

void check_size(int k, int total) {
    double combos = std::pow(static_cast<double>(k), total);
    if (combos > 1e8) {
        throw std::invalid_argument(
            "brute_force: search space k^(n+m) exceeds 1e8");
    }
}

// Shared enumeration core. The instance is described by a (possibly reduced)
// matrix, per-row and per-column weights (group cardinalities) and optional
// disequality constraints; the value of a labeling is the weighted density
// sum of the original instance.
struct Enumerator {
    const arma::mat& M;
    arma::vec wrow, wcol;
    const std::vector<std::pair<int, int>>& cl_row;
    const std::vector<std::pair<int, int>>& cl_col;
    int k;

    bool respects(const std::vector<int>& labels,
                  const std::vector<std::pair<int, int>>& cl) const {
        for (auto [a, b] : cl) {
            if (labels[a] == labels[b]) return false;
        }
        return true;
    }

    OracleResult run() const {
        int n = static_cast<int>(M.n_rows);
        int m = static_cast<int>(M.n_cols);
        OracleResult out;
        out.value = -std::numeric_limits<double>::infinity();
        std::vector<int> rl(n, 0);
        do {
            if (!surjective(rl, k) || !respects(rl, cl_row)) continue;
            // Per-cluster aggregates of this row labeling.
            arma::mat colsum(k, m, arma::fill::zeros);
            arma::vec rsize(k, arma::fill::zeros);
            for (int i = 0; i < n; ++i) {
                colsum.row(rl[i]) += M.row(i);
                rsize(rl[i]) += wrow(i);
            }
            std::vector<int> cl_labels(m, 0);
            do {
                if (!surjective(cl_labels, k) ||
                    !respects(cl_labels, cl_col)) {
                    continue;
                }
                arma::vec bsum(k, arma::fill::zeros);
                arma::vec csize(k, arma::fill::zeros);
                for (int j = 0; j < m; ++j) {
                    bsum(cl_labels[j]) += colsum(cl_labels[j], j);
                    csize(cl_labels[j]) += wcol(j);
                }
                double value = 0.0;
                for (int c = 0; c < k; ++c) {
                    value += bsum(c) / std::sqrt(rsize(c) * csize(c));
                }
                if (value > out.value) {
                    out.value = value;
                    out.best.k = k;
                    out.best.row_labels = rl;
                    out.best.col_labels = cl_labels;
                }
            } while (next_labels(cl_labels, k));
        } while (next_labels(rl, k));
        return out;
    }
};

}  // namespace

OracleResult brute_force(const arma::mat& A, int k) {
    int n = static_cast<int>(A.n_rows);
    int m = static_cast<int>(A.n_cols);
    if (k < 2 || k > std::min(n, m)) {
        throw std::invalid_argument("brute_force: k out of range [2, min(n,m)]");
    }
    check_size(k, n + m);
    static const std::vector<std::pair<int, int>> none;
    Enumerator e{A, arma::vec(n, arma::fill::ones),
                 arma::vec(m, arma::fill::ones), none, none, k};
    return e.run();
}

OracleResult brute_force_node(const NodeProblem& node) {
    int du = node.shrink.du(), dv = node.shrink.dv();
    check_size(node.k, du + dv);
    Enumerator e{node.Abar, node.shrink.mult_u(), node.shrink.mult_v(),
                 node.cl_u, node.cl_v, node.k};
    return e.run();
}

}  // namespace kddb
