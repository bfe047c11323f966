#include "kddb/numkernel.hpp"

#include <stdexcept>

namespace kddb {

EigenPair sym_eig(const arma::mat& S) {
    if (!S.is_square()) {
        throw std::invalid_argument("sym_eig: matrix must be square");
    }
    if (!S.is_finite()) {
        throw std::invalid_argument("sym_eig: matrix has non-finite entries");
    }
    arma::mat sym = 0.5 * (S + S.t());
    EigenPair out;
    if (!arma::eig_sym(out.values, out.vectors, sym)) {
        throw std::runtime_error("sym_eig: eigendecomposition failed");
    }
    return out;
}

arma::mat project_psd(const arma::mat& S) {
    EigenPair e = sym_eig(S);
    arma::vec clipped = arma::clamp(e.values, 0.0, arma::datum::inf);
    arma::mat out =
        e.vectors * arma::diagmat(clipped) * e.vectors.t();
    return 0.5 * (out + out.t());
}

double neg_eig_sum(const arma::mat& S) {
    EigenPair e = sym_eig(S);
    double s = 0.0;
    for (arma::uword i = 0; i < e.values.n_elem; ++i) {
        if (e.values(i) < -1e-12) s += e.values(i);
    }
    return s;
}

arma::mat project_nonneg(const arma::mat& M) {
    return arma::clamp(M, 0.0, arma::datum::inf);
}

}  // namespace kddb
