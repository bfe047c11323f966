#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "kddb/numkernel.hpp"
#include "kddb/relaxation.hpp"

// Solves the node relaxation through its dual
//   min b^T y  s.t.  At(y) - C - S - Q = 0,  S PSD,  Q in the dual cone,
// by an augmented Lagrangian with Gauss-Seidel sweeps over y, S and Q; the
// multiplier of the dual constraint is the primal iterate. Cut rows carry an
// explicit slack coordinate so their multipliers stay nonnegative, and
// cannot-link rows are plain equalities whose multipliers are split afterwards
// into a nonnegative part and a contribution to Q.

namespace kddb {

namespace {

struct GlobalCut {
    CutKind kind;
    int i, j, h;  // coordinates in the stacked (U then V) space
};

struct Assembled {
    int du = 0, dv = 0, d = 0;
    int req = 0, qcl = 0, q = 0, rows = 0;
    const ShrinkMap* shrink = nullptr;
    arma::vec btilde;
    arma::mat C;  // objective matrix 0.5 * Wbar
    std::vector<std::pair<int, int>> cl;
    std::vector<GlobalCut> cuts;
    arma::vec diag_gram;
};

Assembled assemble(const NodeProblem& node) {
    Assembled a;
    a.shrink = &node.shrink;
    a.du = node.shrink.du();
    a.dv = node.shrink.dv();
    a.d = a.du + a.dv;
    a.req = 2 + a.du + a.dv;
    a.qcl = static_cast<int>(node.cl_u.size() + node.cl_v.size());
    a.q = static_cast<int>(node.cuts.size());
    a.rows = a.req + a.qcl + a.q;

    a.btilde = arma::vec(a.rows, arma::fill::zeros);
    a.btilde.head(a.req) = rhs_b(node.shrink, node.k);

    a.C = arma::mat(a.d, a.d, arma::fill::zeros);
    a.C.submat(0, a.du, a.du - 1, a.d - 1) = 0.5 * node.Abar;
    a.C.submat(a.du, 0, a.d - 1, a.du - 1) = 0.5 * node.Abar.t();

    a.cl.reserve(a.qcl);
    for (auto [i, j] : node.cl_u) a.cl.push_back({i, j});
    for (auto [i, j] : node.cl_v) a.cl.push_back({a.du + i, a.du + j});
    a.cuts.reserve(a.q);
    for (const Cut& c : node.cuts.cuts()) {
        int off = c.side == Side::u ? 0 : a.du;
        a.cuts.push_back(
            {c.kind, off + c.i, off + c.j, c.h < 0 ? -1 : off + c.h});
    }

    arma::vec eu = node.shrink.mult_u(), ev = node.shrink.mult_v();
    a.diag_gram = arma::vec(a.rows);
    a.diag_gram(0) = arma::dot(eu, eu);
    double eu2 = arma::dot(eu, eu), ev2 = arma::dot(ev, ev);
    for (int i = 0; i < a.du; ++i) {
        a.diag_gram(1 + i) = 0.5 * (eu2 + eu(i) * eu(i));
    }
    a.diag_gram(1 + a.du) = ev2;
    for (int i = 0; i < a.dv; ++i) {
        a.diag_gram(2 + a.du + i) = 0.5 * (ev2 + ev(i) * ev(i));
    }
    for (int r = 0; r < a.qcl; ++r) a.diag_gram(a.req + r) = 0.5;
    for (int c = 0; c < a.q; ++c) {
        a.diag_gram(a.req + a.qcl + c) =
            a.cuts[c].kind == CutKind::pair ? 2.5 : 3.5;
    }
    return a;
}

double cut_value(const GlobalCut& c, const arma::mat& Z) {
    if (c.kind == CutKind::pair) return Z(c.i, c.j) - Z(c.i, c.i);
    return Z(c.i, c.j) + Z(c.i, c.h) - Z(c.i, c.i) - Z(c.j, c.h);
}

void cut_accumulate(const GlobalCut& c, double t, arma::mat& H) {
    H(c.i, c.j) += 0.5 * t;
    H(c.j, c.i) += 0.5 * t;
    H(c.i, c.i) -= t;
    if (c.kind == CutKind::triangle) {
        H(c.i, c.h) += 0.5 * t;
        H(c.h, c.i) += 0.5 * t;
        H(c.j, c.h) -= 0.5 * t;
        H(c.h, c.j) -= 0.5 * t;
    }
}

struct Operators {
    const Assembled& a;

    arma::vec forward(const arma::mat& Z, const arma::vec& s) const {
        arma::vec r(a.rows);
        r.head(a.req) = apply_operator_A(Z, *a.shrink);
        for (int i = 0; i < a.qcl; ++i) {
            r(a.req + i) = Z(a.cl[i].first, a.cl[i].second);
        }
        for (int c = 0; c < a.q; ++c) {
            r(a.req + a.qcl + c) = cut_value(a.cuts[c], Z) + s(c);
        }
        return r;
    }

    void adjoint(const arma::vec& y, arma::mat& H, arma::vec& hs) const {
        H = adjoint_A(y.head(a.req), *a.shrink);
        for (int i = 0; i < a.qcl; ++i) {
            double w = 0.5 * y(a.req + i);
            H(a.cl[i].first, a.cl[i].second) += w;
            H(a.cl[i].second, a.cl[i].first) += w;
        }
        for (int c = 0; c < a.q; ++c) {
            cut_accumulate(a.cuts[c], y(a.req + a.qcl + c), H);
        }
        hs = a.q > 0 ? arma::vec(y.tail(a.q)) : arma::vec();
    }

    arma::vec gram(const arma::vec& y) const {
        arma::mat H;
        arma::vec hs;
        adjoint(y, H, hs);
        return forward(H, hs);
    }
};

// Preconditioned conjugate gradient on the (possibly singular but consistent)
// normal system; warm-started from the previous multiplier vector.
void solve_gram_cg(const Operators& op, const arma::vec& rhs, arma::vec& y,
                   double rel_tol, int max_iter) {
    const arma::vec& dg = op.a.diag_gram;
    double target = rel_tol * std::max(1e-30, arma::norm(rhs));
    arma::vec r = rhs - op.gram(y);
    arma::vec z = r / dg;
    arma::vec p = z;
    double rz = arma::dot(r, z);
    for (int it = 0; it < max_iter; ++it) {
        if (arma::norm(r) <= target) break;
        arma::vec Mp = op.gram(p);
        double pMp = arma::dot(p, Mp);
        if (pMp <= 0) break;
        double alpha = rz / pMp;
        y += alpha * p;
        r -= alpha * Mp;
        z = r / dg;
        double rz_new = arma::dot(r, z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
}

}  // namespace

SdpSolution solve_dnn(const NodeProblem& node, const SdpSolution* warm,
                      double tol, const DnnOptions& opts) {
    Assembled a = assemble(node);
    Operators op{a};

    arma::mat X(a.d, a.d, arma::fill::zeros);
    arma::vec xs(a.q, arma::fill::zeros);
    arma::mat S(a.d, a.d, arma::fill::zeros);
    arma::mat Q(a.d, a.d, arma::fill::zeros);
    arma::vec qs(a.q, arma::fill::zeros);
    arma::vec y(a.rows, arma::fill::zeros);
    double sigma = opts.sigma0;

    if (warm) {
        if (static_cast<int>(warm->Z.n_rows) != a.d ||
            static_cast<int>(warm->lambda.n_elem) != a.req ||
            static_cast<int>(warm->cl_mult.n_elem) != a.qcl ||
            static_cast<int>(warm->cut_mult.n_elem) != a.q) {
            throw std::invalid_argument(
                "solve_dnn: warm start does not match the node");
        }
        X = 0.5 * (warm->Z + warm->Z.t());
        Q = warm->Q;
        y.head(a.req) = warm->lambda;
        if (a.qcl > 0) y.subvec(a.req, a.req + a.qcl - 1) = warm->cl_mult;
        if (a.q > 0) {
            y.tail(a.q) = warm->cut_mult;
            qs = warm->cut_mult;
            for (int c = 0; c < a.q; ++c) {
                xs(c) = std::max(0.0, -cut_value(a.cuts[c], X));
            }
        }
        sigma = warm->sigma;
    }

    // The normal matrix of the y-update is fixed for the whole call; factor it
    // once when small, otherwise fall back to CG.
    arma::mat chol_R;
    bool use_chol = false;
    if (a.rows <= 800) {
        arma::mat M(a.rows, a.rows);
        arma::vec unit(a.rows, arma::fill::zeros);
        for (int c = 0; c < a.rows; ++c) {
            unit(c) = 1.0;
            M.col(c) = op.gram(unit);
            unit(c) = 0.0;
        }
        use_chol = arma::chol(chol_R, 0.5 * (M + M.t()));
    }

    double bnorm = 1.0 + arma::norm(a.btilde);
    double cnorm = 1.0 + arma::norm(a.C, "fro");
    const double gamma = 1.0;

    double rp = 1.0, rd = 1.0, gap = 1.0, kkt = 1.0;
    int iter = 0;
    arma::mat H(a.d, a.d);
    arma::vec hs;
    for (iter = 1; iter <= opts.max_iter; ++iter) {
        // y-update: Gram(y) = forward(C + S + Q, qs) + (forward(X, xs) - b)/sigma
        arma::vec rhs = op.forward(a.C + S + Q, qs);
        rhs += (op.forward(X, xs) - a.btilde) / sigma;
        if (use_chol) {
            y = arma::solve(arma::trimatu(chol_R),
                            arma::solve(arma::trimatl(chol_R.t()), rhs));
        } else {
            solve_gram_cg(op, rhs, y, 1e-8, 400);
        }
        op.adjoint(y, H, hs);

        // S-update: project the S-residual onto the PSD cone.
        arma::mat GS = H - a.C - Q - X / sigma;
        S = project_psd(GS);

        // Q-update: entrywise projection, slack part likewise.
        arma::mat GQ = H - a.C - S - X / sigma;
        Q = arma::clamp(GQ, 0.0, arma::datum::inf);
        if (a.q > 0) qs = arma::clamp(hs - xs / sigma, 0.0, arma::datum::inf);

        // Multiplier step on the dual residual.
        arma::mat DZ = H - a.C - S - Q;
        arma::vec Ds = a.q > 0 ? arma::vec(hs - qs) : arma::vec();
        X -= gamma * sigma * DZ;
        X = 0.5 * (X + X.t());
        if (a.q > 0) xs -= gamma * sigma * Ds;

        arma::vec prim = op.forward(X, xs) - a.btilde;
        double xneg = arma::norm(arma::clamp(X, -arma::datum::inf, 0.0), "fro");
        if (a.q > 0) {
            xneg += arma::norm(arma::clamp(xs, -arma::datum::inf, 0.0));
        }
        rp = std::max(arma::norm(prim) / bnorm,
                      xneg / (1.0 + arma::norm(X, "fro")));
        double dn = arma::norm(DZ, "fro");
        if (a.q > 0) dn = std::hypot(dn, arma::norm(Ds));
        rd = dn / cnorm;
        double pobj = arma::dot(a.C, X);
        double dobj = arma::dot(a.btilde, y);
        gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        kkt = std::max({rp, rd, gap});
        if (kkt <= tol) break;

        if (iter % 50 == 0) {
            double aff = arma::norm(prim) / bnorm;
            if (aff > 5.0 * rd) {
                sigma = std::max(sigma / 2.0, 1e-6);
            } else if (rd > 5.0 * aff) {
                sigma = std::min(sigma * 2.0, 1e8);
            }
        }
        if (opts.verbose && iter % 500 == 0) {
            std::printf("    dnn it %5d  rp %.2e rd %.2e gap %.2e sig %.2e\n",
                        iter, rp, rd, gap, sigma);
        }
    }

    SdpSolution sol;
    sol.Z = X;
    sol.lambda = y.head(a.req);
    sol.cl_mult = a.qcl > 0 ? arma::vec(y.subvec(a.req, a.req + a.qcl - 1))
                            : arma::vec();
    sol.cut_mult = a.q > 0 ? arma::vec(y.tail(a.q)) : arma::vec();
    sol.Q = Q;

    // Make the stored duals admissible for the safe bound: cut multipliers are
    // clamped to zero from below, and the negative side of a cannot-link
    // multiplier moves into the entrywise-nonnegative block.
    if (a.q > 0) {
        sol.cut_mult = arma::clamp(sol.cut_mult, 0.0, arma::datum::inf);
    }
    for (int i = 0; i < a.qcl; ++i) {
        double mu = sol.cl_mult(i);
        if (mu < 0.0) {
            sol.Q(a.cl[i].first, a.cl[i].second) -= 0.5 * mu;
            sol.Q(a.cl[i].second, a.cl[i].first) -= 0.5 * mu;
            sol.cl_mult(i) = 0.0;
        }
    }
    sol.Q = arma::clamp(sol.Q, 0.0, arma::datum::inf);

    sol.objective = arma::dot(a.C, X);
    double xpsd = -std::min(0.0, sym_eig(X).values.min()) /
                  (1.0 + arma::norm(X, "fro"));
    sol.kkt_residual = std::max(kkt, xpsd);
    sol.iterations = std::min(iter, opts.max_iter);
    sol.converged = sol.kkt_residual <= 10.0 * tol;
    sol.sigma = sigma;
    return sol;
}

}  // namespace kddb
