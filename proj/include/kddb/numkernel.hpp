#pragma once

#include <armadillo>

namespace kddb {

struct EigenPair {
    arma::vec values;   // ascending
    arma::mat vectors;  // columns match values
};

// Full symmetric eigendecomposition. The input is symmetrized once
// (0.5 * (S + S^T)) to absorb round-off; non-finite entries throw
// std::invalid_argument.
EigenPair sym_eig(const arma::mat& S);

// Euclidean projection onto the PSD cone: negative eigenvalues clipped to 0.
arma::mat project_psd(const arma::mat& S);

// Sum of eigenvalues strictly below -1e-12 (0 for a PSD matrix).
double neg_eig_sum(const arma::mat& S);

// Entrywise max(M, 0).
arma::mat project_nonneg(const arma::mat& M);

}  // namespace kddb
