#include "kddb/safebound.hpp"

#include <stdexcept>

#include "kddb/numkernel.hpp"

namespace kddb {

double safe_bound_from(double dual_objective, const arma::mat& Stilde) {
    return dual_objective - 2.0 * neg_eig_sum(Stilde);
}

arma::mat dual_slack(const NodeProblem& node, const SdpSolution& sol) {
    int du = node.shrink.du(), dv = node.shrink.dv();
    int d = du + dv;
    if (static_cast<int>(sol.Z.n_rows) != d) {
        throw std::invalid_argument("dual_slack: solution does not match node");
    }
    arma::mat S(d, d, arma::fill::zeros);
    S.submat(0, du, du - 1, d - 1) = -0.5 * node.Abar;
    S.submat(du, 0, d - 1, du - 1) = -0.5 * node.Abar.t();
    S += adjoint_A(sol.lambda, node.shrink);

    std::size_t r = 0;
    for (auto [i, j] : node.cl_u) {
        double w = 0.5 * std::max(0.0, sol.cl_mult(r++));
        S(i, j) += w;
        S(j, i) += w;
    }
    for (auto [i, j] : node.cl_v) {
        double w = 0.5 * std::max(0.0, sol.cl_mult(r++));
        S(du + i, du + j) += w;
        S(du + j, du + i) += w;
    }
    for (std::size_t c = 0; c < node.cuts.size(); ++c) {
        const Cut& cut = node.cuts.cuts()[c];
        double t = std::max(0.0, sol.cut_mult(c));
        int off = cut.side == Side::u ? 0 : du;
        int a = off + cut.i, b = off + cut.j;
        S(a, b) += 0.5 * t;
        S(b, a) += 0.5 * t;
        S(a, a) -= t;
        if (cut.kind == CutKind::triangle) {
            int h = off + cut.h;
            S(a, h) += 0.5 * t;
            S(h, a) += 0.5 * t;
            S(b, h) -= 0.5 * t;
            S(h, b) -= 0.5 * t;
        }
    }
    S -= arma::clamp(sol.Q, 0.0, arma::datum::inf);
    return S;
}

SafeBound safe_upper_bound(const NodeProblem& node, const SdpSolution& sol) {
    arma::mat S = dual_slack(node, sol);
    arma::vec b = rhs_b(node.shrink, node.k);
    SafeBound out;
    out.dual_objective = arma::dot(b, sol.lambda);
    out.eig_correction = -2.0 * neg_eig_sum(S);
    out.value = out.dual_objective + out.eig_correction;
    return out;
}

}  // namespace kddb
