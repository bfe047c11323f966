#include "kddb/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace kddb {

arma::vec ShrinkMap::mult_u() const {
    arma::vec e(groups_u.size());
    for (std::size_t i = 0; i < groups_u.size(); ++i) {
        e(i) = static_cast<double>(groups_u[i].size());
    }
    return e;
}

arma::vec ShrinkMap::mult_v() const {
    arma::vec e(groups_v.size());
    for (std::size_t i = 0; i < groups_v.size(); ++i) {
        e(i) = static_cast<double>(groups_v[i].size());
    }
    return e;
}

ShrinkMap ShrinkMap::identity(int n, int m) {
    ShrinkMap s;
    s.n = n;
    s.m = m;
    s.groups_u.resize(n);
    for (int i = 0; i < n; ++i) s.groups_u[i] = {i};
    s.groups_v.resize(m);
    for (int j = 0; j < m; ++j) s.groups_v[j] = {j};
    return s;
}

NodeProblem build_root(const arma::mat& A, int k) {
    int n = static_cast<int>(A.n_rows);
    int m = static_cast<int>(A.n_cols);
    if (k < 2 || k > std::min(n, m)) {
        throw std::invalid_argument("build_root: k out of range [2, min(n,m)]");
    }
    if (!A.is_finite()) {
        throw std::invalid_argument("build_root: matrix has non-finite entries");
    }
    NodeProblem node;
    node.A = std::make_shared<arma::mat>(A);
    node.k = k;
    node.shrink = ShrinkMap::identity(n, m);
    node.Abar = A;
    return node;
}

arma::vec apply_operator_A(const arma::mat& Z, const ShrinkMap& shrink) {
    int du = shrink.du(), dv = shrink.dv();
    arma::vec eu = shrink.mult_u(), ev = shrink.mult_v();
    arma::vec out(2 + du + dv);
    const arma::mat Zuu = Z.submat(0, 0, du - 1, du - 1);
    const arma::mat Zvv = Z.submat(du, du, du + dv - 1, du + dv - 1);
    out(0) = arma::dot(eu, Zuu.diag());
    out.subvec(1, du) = Zuu * eu;
    out(du + 1) = arma::dot(ev, Zvv.diag());
    out.subvec(du + 2, du + dv + 1) = Zvv * ev;
    return out;
}

arma::mat adjoint_A(const arma::vec& lambda, const ShrinkMap& shrink) {
    int du = shrink.du(), dv = shrink.dv();
    if (static_cast<int>(lambda.n_elem) != 2 + du + dv) {
        throw std::invalid_argument("adjoint_A: lambda has wrong length");
    }
    arma::vec eu = shrink.mult_u(), ev = shrink.mult_v();
    double alpha_u = lambda(0), alpha_v = lambda(du + 1);
    arma::vec yu = lambda.subvec(1, du);
    arma::vec yv = lambda.subvec(du + 2, du + dv + 1);
    arma::mat out(du + dv, du + dv, arma::fill::zeros);
    out.submat(0, 0, du - 1, du - 1) =
        alpha_u * arma::diagmat(eu) + 0.5 * (yu * eu.t() + eu * yu.t());
    out.submat(du, du, du + dv - 1, du + dv - 1) =
        alpha_v * arma::diagmat(ev) + 0.5 * (yv * ev.t() + ev * yv.t());
    return out;
}

arma::vec rhs_b(const ShrinkMap& shrink, int k) {
    int du = shrink.du(), dv = shrink.dv();
    arma::vec b(2 + du + dv, arma::fill::ones);
    b(0) = k;
    b(du + 1) = k;
    return b;
}

arma::mat expand(const arma::mat& Z, const ShrinkMap& shrink) {
    int du = shrink.du(), dv = shrink.dv();
    if (static_cast<int>(Z.n_rows) != du + dv || !Z.is_square()) {
        throw std::invalid_argument("expand: Z does not match the shrink map");
    }
    std::vector<int> owner(shrink.n + shrink.m, -1);
    for (int g = 0; g < du; ++g) {
        for (int p : shrink.groups_u[g]) owner[p] = g;
    }
    for (int g = 0; g < dv; ++g) {
        for (int p : shrink.groups_v[g]) owner[shrink.n + p] = du + g;
    }
    int N = shrink.n + shrink.m;
    arma::mat out(N, N);
    for (int p = 0; p < N; ++p) {
        for (int q = 0; q < N; ++q) {
            out(p, q) = Z(owner[p], owner[q]);
        }
    }
    return out;
}

arma::mat feasible_gram(const Biclustering& b) {
    int n = static_cast<int>(b.row_labels.size());
    int m = static_cast<int>(b.col_labels.size());
    auto violations = validate(b, n, m, b.k);
    if (!violations.empty()) {
        throw std::invalid_argument("feasible_gram: invalid biclustering: " +
                                    violations.front());
    }
    ShrinkMap id = ShrinkMap::identity(n, m);
    return feasible_gram_reduced(id, b.row_labels, b.col_labels, b.k);
}

arma::mat feasible_gram_reduced(const ShrinkMap& shrink,
                                const std::vector<int>& u_labels,
                                const std::vector<int>& v_labels, int k) {
    int du = shrink.du(), dv = shrink.dv();
    if (static_cast<int>(u_labels.size()) != du ||
        static_cast<int>(v_labels.size()) != dv) {
        throw std::invalid_argument(
            "feasible_gram_reduced: labels do not match the shrink map");
    }
    arma::vec eu = shrink.mult_u(), ev = shrink.mult_v();
    std::vector<double> usize(k, 0.0), vsize(k, 0.0);
    for (int i = 0; i < du; ++i) {
        if (u_labels[i] < 0 || u_labels[i] >= k) {
            throw std::invalid_argument(
                "feasible_gram_reduced: label out of range");
        }
        usize[u_labels[i]] += eu(i);
    }
    for (int j = 0; j < dv; ++j) {
        if (v_labels[j] < 0 || v_labels[j] >= k) {
            throw std::invalid_argument(
                "feasible_gram_reduced: label out of range");
        }
        vsize[v_labels[j]] += ev(j);
    }
    for (int c = 0; c < k; ++c) {
        if (usize[c] == 0.0 || vsize[c] == 0.0) {
            throw std::invalid_argument(
                "feasible_gram_reduced: empty cluster " + std::to_string(c));
        }
    }
    arma::mat Z(du + dv, du + dv, arma::fill::zeros);
    for (int i = 0; i < du; ++i) {
        for (int j = 0; j < du; ++j) {
            if (u_labels[i] == u_labels[j]) {
                Z(i, j) = 1.0 / usize[u_labels[i]];
            }
        }
    }
    for (int i = 0; i < dv; ++i) {
        for (int j = 0; j < dv; ++j) {
            if (v_labels[i] == v_labels[j]) {
                Z(du + i, du + j) = 1.0 / vsize[v_labels[i]];
            }
        }
    }
    for (int i = 0; i < du; ++i) {
        for (int j = 0; j < dv; ++j) {
            if (u_labels[i] == v_labels[j]) {
                double w = 1.0 / std::sqrt(usize[u_labels[i]] *
                                           vsize[v_labels[j]]);
                Z(i, du + j) = w;
                Z(du + j, i) = w;
            }
        }
    }
    return Z;
}

namespace {

void check_pair(int d, int i, int j, const char* who) {
    if (i < 0 || j < 0 || i >= d || j >= d || i == j) {
        throw std::invalid_argument(std::string(who) +
                                    ": invalid reduced index pair");
    }
}

struct RemappedCl {
    std::vector<std::pair<int, int>> pairs;  // sorted, unique
    std::vector<int> origin;                 // aligned with pairs
};

RemappedCl remap_cl(const std::vector<std::pair<int, int>>& cl,
                    const std::vector<int>& map, bool apply_map,
                    int origin_offset) {
    std::vector<std::pair<std::pair<int, int>, int>> tagged;
    std::set<std::pair<int, int>> seen;
    for (std::size_t r = 0; r < cl.size(); ++r) {
        int a = cl[r].first, b = cl[r].second;
        if (apply_map) {
            a = map[a];
            b = map[b];
        }
        if (a > b) std::swap(a, b);
        if (!seen.insert({a, b}).second) continue;
        tagged.push_back({{a, b}, origin_offset + static_cast<int>(r)});
    }
    std::sort(tagged.begin(), tagged.end());
    RemappedCl out;
    for (const auto& [p, o] : tagged) {
        out.pairs.push_back(p);
        out.origin.push_back(o);
    }
    return out;
}

}  // namespace

NodeProblem shrink_child(const NodeProblem& node, Side side, int i, int j,
                         ShrinkChildInfo* info) {
    const ShrinkMap& s = node.shrink;
    int d = side == Side::u ? s.du() : s.dv();
    check_pair(d, i, j, "shrink_child");
    if (i > j) std::swap(i, j);
    const auto& cl = side == Side::u ? node.cl_u : node.cl_v;
    if (std::binary_search(cl.begin(), cl.end(), std::make_pair(i, j))) {
        throw std::invalid_argument(
            "shrink_child: pair is cannot-linked in this node");
    }

    NodeProblem child = node;
    auto identity_map = [](int count) {
        std::vector<int> map(count);
        for (int x = 0; x < count; ++x) map[x] = x;
        return map;
    };
    std::vector<int> merged_map(d);
    for (int x = 0; x < d; ++x) {
        if (x == j) {
            merged_map[x] = i;
        } else {
            merged_map[x] = x > j ? x - 1 : x;
        }
    }
    std::vector<int> u_map, v_map;
    if (side == Side::u) {
        u_map = merged_map;
        v_map = identity_map(s.dv());
        auto& groups = child.shrink.groups_u;
        groups[i].insert(groups[i].end(), groups[j].begin(), groups[j].end());
        std::sort(groups[i].begin(), groups[i].end());
        groups.erase(groups.begin() + j);
        child.Abar.row(i) += child.Abar.row(j);
        child.Abar.shed_row(j);
    } else {
        u_map = identity_map(s.du());
        v_map = merged_map;
        auto& groups = child.shrink.groups_v;
        groups[i].insert(groups[i].end(), groups[j].begin(), groups[j].end());
        std::sort(groups[i].begin(), groups[i].end());
        groups.erase(groups.begin() + j);
        child.Abar.col(i) += child.Abar.col(j);
        child.Abar.shed_col(j);
    }

    RemappedCl cl_u_new = remap_cl(node.cl_u, u_map, side == Side::u, 0);
    RemappedCl cl_v_new = remap_cl(node.cl_v, v_map, side == Side::v,
                                   static_cast<int>(node.cl_u.size()));
    child.cl_u = cl_u_new.pairs;
    child.cl_v = cl_v_new.pairs;
    std::vector<int> cl_origin = cl_u_new.origin;
    cl_origin.insert(cl_origin.end(), cl_v_new.origin.begin(),
                     cl_v_new.origin.end());

    // Cut remap. A pair whose endpoints coincide after the merge is a
    // tautology; a triangle whose anchor swallows a leaf likewise. A triangle
    // whose two leaves merge weakens to 2 Z_ig <= Z_ii + Z_gg, which the two
    // pair cuts (i,g) and (g,i) dominate, so those replace it.
    CutPool new_pool;
    std::vector<int> cut_origin;
    auto add_cut = [&](const Cut& c, int origin) {
        if (new_pool.add(c)) cut_origin.push_back(origin);
    };
    for (std::size_t idx = 0; idx < node.cuts.size(); ++idx) {
        Cut c = node.cuts.cuts()[idx];
        const std::vector<int>& map = c.side == Side::u ? u_map : v_map;
        c.i = map[c.i];
        c.j = map[c.j];
        if (c.kind == CutKind::pair) {
            if (c.i == c.j) continue;
            add_cut(c, static_cast<int>(idx));
            continue;
        }
        c.h = map[c.h];
        if (c.i == c.j || c.i == c.h) continue;
        if (c.j == c.h) {
            add_cut({c.side, CutKind::pair, c.i, c.j, -1}, -1);
            add_cut({c.side, CutKind::pair, c.j, c.i, -1}, -1);
            continue;
        }
        if (c.j > c.h) std::swap(c.j, c.h);
        add_cut(c, static_cast<int>(idx));
    }
    child.cuts = new_pool;

    if (info) {
        info->u_map = u_map;
        info->v_map = v_map;
        info->cut_origin = cut_origin;
        info->cl_origin = cl_origin;
    }
    return child;
}

NodeProblem cl_child(const NodeProblem& node, Side side, int i, int j) {
    const ShrinkMap& s = node.shrink;
    int d = side == Side::u ? s.du() : s.dv();
    check_pair(d, i, j, "cl_child");
    if (i > j) std::swap(i, j);
    NodeProblem child = node;
    auto& cl = side == Side::u ? child.cl_u : child.cl_v;
    auto it = std::lower_bound(cl.begin(), cl.end(), std::make_pair(i, j));
    if (it == cl.end() || *it != std::make_pair(i, j)) {
        cl.insert(it, {i, j});
    }
    return child;
}

}  // namespace kddb
