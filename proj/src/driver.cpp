#include "kddb/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

#include "kddb/branching.hpp"
#include "kddb/cuts.hpp"
#include "kddb/numkernel.hpp"
#include "kddb/oracle.hpp"
#include "kddb/rng.hpp"
#include "kddb/rounding.hpp"
#include "kddb/safebound.hpp"

namespace kddb {

namespace {

double rel_gap(double ub, double lb) {
    if (!std::isfinite(ub)) return std::numeric_limits<double>::infinity();
    return (ub - lb) / std::max(std::abs(ub), 1e-9);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t x = Rng::splitmix64(a + 0x51ed270b9f5971a5ULL);
    x = Rng::splitmix64(x ^ (b + 0x9e3779b97f4a7c15ULL));
    return Rng::splitmix64(x ^ (c + 0x2545f4914f6cdd1dULL));
}

// Exact k-colorability of the cannot-link graph by backtracking; bails out
// optimistically when the step budget runs dry (the node then stays open,
// which only costs work, never correctness).
bool k_colorable(int nverts, const std::vector<std::pair<int, int>>& edges,
                 int k) {
    if (nverts <= k) return true;
    std::vector<std::vector<int>> adj(nverts);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> order(nverts);
    for (int i = 0; i < nverts; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (adj[a].size() != adj[b].size()) {
            return adj[a].size() > adj[b].size();
        }
        return a < b;
    });
    std::vector<int> color(nverts, -1);
    long budget = 200000;
    std::function<bool(int)> rec = [&](int pos) -> bool {
        if (pos == nverts) return true;
        if (--budget < 0) return true;
        int vtx = order[pos];
        int cap = std::min(k, pos + 1);  // symmetry break on fresh colors
        for (int c = 0; c < cap; ++c) {
            bool ok = true;
            for (int nb : adj[vtx]) {
                if (color[nb] == c) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            color[vtx] = c;
            if (rec(pos + 1)) return true;
            color[vtx] = -1;
        }
        return false;
    };
    return rec(0);
}

bool node_feasible(const NodeProblem& node) {
    if (node.shrink.du() < node.k || node.shrink.dv() < node.k) return false;
    return k_colorable(node.shrink.du(), node.cl_u, node.k) &&
           k_colorable(node.shrink.dv(), node.cl_v, node.k);
}

struct Entry {
    NodeProblem node;
    SdpSolution warm;
    bool has_warm = false;
};

struct EntryCmp {
    bool operator()(const Entry& a, const Entry& b) const {
        if (a.node.parent_bound != b.node.parent_bound) {
            return a.node.parent_bound < b.node.parent_bound;
        }
        return a.node.id > b.node.id;
    }
};

// Carries the parent's primal/dual information onto a must-link child by a
// congruence with the (multiplicity-weighted) merge matrix.
SdpSolution remap_warm_ml(const SdpSolution& sol, const NodeProblem& parent,
                          const NodeProblem& child, const ShrinkChildInfo& info,
                          Side side, int i, int j) {
    int du_old = parent.shrink.du(), dv_old = parent.shrink.dv();
    int d_old = du_old + dv_old;
    int du_new = child.shrink.du(), dv_new = child.shrink.dv();
    int d_new = du_new + dv_new;

    arma::vec e = side == Side::u ? parent.shrink.mult_u()
                                  : parent.shrink.mult_v();
    double wi = e(i) / (e(i) + e(j));
    double wj = e(j) / (e(i) + e(j));

    arma::mat P(d_new, d_old, arma::fill::zeros);
    for (int x = 0; x < du_old; ++x) {
        int g = info.u_map[x];
        double w = 1.0;
        if (side == Side::u && (x == i || x == j)) w = x == i ? wi : wj;
        P(g, x) = w;
    }
    for (int x = 0; x < dv_old; ++x) {
        int g = du_new + info.v_map[x];
        double w = 1.0;
        if (side == Side::v && (x == i || x == j)) w = x == i ? wi : wj;
        P(g, du_old + x) = w;
    }

    SdpSolution out;
    out.Z = P * sol.Z * P.t();
    out.Q = P * sol.Q * P.t();

    out.lambda = arma::vec(2 + d_new, arma::fill::zeros);
    out.lambda(0) = sol.lambda(0);
    out.lambda(du_new + 1) = sol.lambda(du_old + 1);
    arma::vec yu_old = sol.lambda.subvec(1, du_old);
    arma::vec yv_old = sol.lambda.subvec(du_old + 2, du_old + dv_old + 1);
    arma::vec yu_new(du_new, arma::fill::zeros);
    arma::vec yv_new(dv_new, arma::fill::zeros);
    for (int x = 0; x < du_old; ++x) {
        double w = side == Side::u && (x == i || x == j) ? (x == i ? wi : wj)
                                                         : 1.0;
        yu_new(info.u_map[x]) += w * yu_old(x);
    }
    for (int x = 0; x < dv_old; ++x) {
        double w = side == Side::v && (x == i || x == j) ? (x == i ? wi : wj)
                                                         : 1.0;
        yv_new(info.v_map[x]) += w * yv_old(x);
    }
    out.lambda.subvec(1, du_new) = yu_new;
    out.lambda.subvec(du_new + 2, du_new + dv_new + 1) = yv_new;

    out.cl_mult = arma::vec(child.cl_u.size() + child.cl_v.size(),
                            arma::fill::zeros);
    for (std::size_t r = 0; r < info.cl_origin.size(); ++r) {
        out.cl_mult(r) = sol.cl_mult(info.cl_origin[r]);
    }
    out.cut_mult = arma::vec(child.cuts.size(), arma::fill::zeros);
    for (std::size_t c = 0; c < info.cut_origin.size(); ++c) {
        if (info.cut_origin[c] >= 0) {
            out.cut_mult(c) = sol.cut_mult(info.cut_origin[c]);
        }
    }
    out.sigma = sol.sigma;
    return out;
}

SdpSolution remap_warm_cl(const SdpSolution& sol, const NodeProblem& child,
                          Side side, int i, int j) {
    SdpSolution out = sol;
    if (i > j) std::swap(i, j);
    std::size_t pos;
    if (side == Side::u) {
        pos = std::lower_bound(child.cl_u.begin(), child.cl_u.end(),
                               std::make_pair(i, j)) -
              child.cl_u.begin();
    } else {
        pos = child.cl_u.size() +
              (std::lower_bound(child.cl_v.begin(), child.cl_v.end(),
                                std::make_pair(i, j)) -
               child.cl_v.begin());
    }
    arma::vec grown(sol.cl_mult.n_elem + 1, arma::fill::zeros);
    for (std::size_t r = 0, w = 0; w < grown.n_elem; ++w) {
        if (w == pos) continue;
        grown(w) = sol.cl_mult(r++);
    }
    out.cl_mult = grown;
    return out;
}

int numerical_rank(const arma::mat& Z) {
    arma::vec ev = sym_eig(Z).values;
    double top = std::max(0.0, ev.max());
    if (top <= 0.0) return 0;
    int count = 0;
    for (arma::uword i = 0; i < ev.n_elem; ++i) {
        if (ev(i) > 1e-3 * top) ++count;
    }
    return count;
}

}  // namespace

SolveResult solve(const arma::mat& A, int k, const SolverParams& params) {
    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    };
    auto out_of_time = [&]() {
        return params.time_limit > 0.0 && elapsed() > params.time_limit;
    };

    SolveResult res;
    NodeProblem root = build_root(A, k);

    std::priority_queue<Entry, std::vector<Entry>, EntryCmp> queue;
    queue.push(Entry{std::move(root), {}, false});
    int next_id = 1;
    double pruned_max = -std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();

    auto global_ub = [&](double node_ub) {
        double g = std::max(lb, pruned_max);
        g = std::max(g, node_ub);
        if (!queue.empty()) g = std::max(g, queue.top().node.parent_bound);
        return g;
    };

    while (!queue.empty()) {
        if (params.node_limit > 0 && res.nodes >= params.node_limit) {
            res.limit_hit = true;
            break;
        }
        if (out_of_time()) {
            res.limit_hit = true;
            break;
        }
        Entry entry = queue.top();
        queue.pop();
        if (std::isfinite(lb) &&
            rel_gap(entry.node.parent_bound, lb) < params.eps) {
            pruned_max = std::max(pruned_max, entry.node.parent_bound);
            continue;
        }
        ++res.nodes;
        NodeProblem node = std::move(entry.node);

        if (node.shrink.du() == k && node.shrink.dv() == k) {
            // Fully shrunk: each group is forced to be its own cluster, so
            // only the row-cluster/column-cluster pairing is free, and a
            // max-weight matching on the group densities closes the node at
            // its exact optimum.
            arma::vec eu = node.shrink.mult_u();
            arma::vec ev = node.shrink.mult_v();
            arma::mat M = node.Abar;
            for (int g = 0; g < k; ++g) {
                for (int h = 0; h < k; ++h) {
                    M(g, h) /= std::sqrt(eu(g) * ev(h));
                }
            }
            std::vector<int> match = assignment_max(M);
            Biclustering b;
            b.k = k;
            b.row_labels.assign(node.shrink.n, 0);
            b.col_labels.assign(node.shrink.m, 0);
            for (int g = 0; g < k; ++g) {
                for (int i : node.shrink.groups_u[g]) b.row_labels[i] = g;
                for (int j : node.shrink.groups_v[match[g]]) {
                    b.col_labels[j] = g;
                }
            }
            double value = objective(A, b);
            if (value > lb) {
                lb = value;
                res.best = b;
            }
            pruned_max = std::max(pruned_max, value);
            res.trace.push_back(TraceRow{node.id, 0, global_ub(value), lb, 0,
                                         static_cast<int>(node.cuts.size()),
                                         value});
            if (params.verbose) {
                std::printf("node %4d  d=(%d,%d)  matched exactly  %.6f\n",
                            node.id, k, k, value);
            }
            if (params.node_callback) params.node_callback(node, value);
            continue;
        }

        SdpSolution sol =
            solve_dnn(node, entry.has_warm ? &entry.warm : nullptr,
                      params.sdp_tol);
        SafeBound sb = safe_upper_bound(node, sol);
        double node_ub = std::min(sb.value, node.parent_bound);

        auto do_round = [&](int cp_round) {
            arma::mat Zfull = expand(sol.Z, node.shrink);
            Rounded rd = round_solution(
                A, k, Zfull, params.kmeans_restarts,
                mix(params.seed, static_cast<std::uint64_t>(node.id),
                    static_cast<std::uint64_t>(cp_round)));
            if (rd.lower_bound > lb) {
                lb = rd.lower_bound;
                res.best = rd.b;
            }
        };
        do_round(0);
        res.trace.push_back(TraceRow{node.id, 0, global_ub(node_ub), lb, 0,
                                     static_cast<int>(node.cuts.size()),
                                     sb.value});
        if (params.verbose) {
            std::printf(
                "node %4d  d=(%d,%d)  ub %.6f  lb %.6f  gap %.2e  it %d%s\n",
                node.id, node.shrink.du(), node.shrink.dv(), node_ub, lb,
                rel_gap(node_ub, lb), sol.iterations,
                sol.converged ? "" : "  [not converged]");
        }

        bool aborted = false;
        int cp_round = 0;
        while (cp_round < params.max_cp_rounds) {
            if (rel_gap(node_ub, lb) < params.eps) break;
            if (out_of_time()) {
                aborted = true;
                break;
            }
            if (numerical_rank(sol.Z) == k) break;
            int du = node.shrink.du(), dv = node.shrink.dv();
            arma::mat Zuu = sol.Z.submat(0, 0, du - 1, du - 1);
            arma::mat Zvv =
                sol.Z.submat(du, du, du + dv - 1, du + dv - 1);
            Rng sep_rng(mix(params.seed ^ 0xc2b2ae3d27d4eb4fULL,
                            static_cast<std::uint64_t>(node.id),
                            static_cast<std::uint64_t>(cp_round)));
            SeparateParams sp{params.max_sample, params.max_add,
                              params.viol_tol};
            std::vector<Cut> found = separate(Zuu, Zvv, node.cuts, sp, sep_rng);
            if (found.empty()) break;

            for (const Cut& c : found) node.cuts.add(c);
            SdpSolution warm = sol;
            warm.cut_mult.resize(node.cuts.size());  // new rows start at zero
            sol = solve_dnn(node, &warm, params.sdp_tol);
            sb = safe_upper_bound(node, sol);
            double prev_ub = node_ub;
            node_ub = std::min(node_ub, sb.value);
            ++cp_round;
            do_round(cp_round);

            Zuu = sol.Z.submat(0, 0, du - 1, du - 1);
            Zvv = sol.Z.submat(du, du, du + dv - 1, du + dv - 1);
            std::vector<std::size_t> kept;
            CutPool purged = purge(node.cuts, Zuu, Zvv, sol.cut_mult,
                                   params.slack_tol, &kept);
            arma::vec tkept(kept.size());
            for (std::size_t x = 0; x < kept.size(); ++x) {
                tkept(x) = sol.cut_mult(kept[x]);
            }
            node.cuts = purged;
            sol.cut_mult = tkept;

            res.trace.push_back(TraceRow{node.id, cp_round,
                                         global_ub(node_ub), lb,
                                         static_cast<int>(found.size()),
                                         static_cast<int>(node.cuts.size()),
                                         sb.value});
            if (params.verbose) {
                std::printf(
                    "node %4d  cp %2d  +%zu cuts (pool %zu)  ub %.6f  lb "
                    "%.6f\n",
                    node.id, cp_round, found.size(), node.cuts.size(), node_ub,
                    lb);
            }
            double rel_dec =
                (prev_ub - node_ub) / std::max(std::abs(prev_ub), 1e-9);
            if (rel_dec <= params.cp_rel_tol) break;
        }
        if (node.id == 0) res.root_cp_rounds = cp_round;
        if (params.node_callback) params.node_callback(node, node_ub);

        if (aborted) {
            // Keep the interrupted node's bound alive for an honest gap.
            node.parent_bound = node_ub;
            queue.push(Entry{std::move(node), std::move(sol), true});
            res.limit_hit = true;
            break;
        }
        if (rel_gap(node_ub, lb) < params.eps) {
            pruned_max = std::max(pruned_max, node_ub);
            continue;
        }

        std::optional<BranchPair> pair =
            select_pair(sol.Z, node.shrink, params.decided_tol, node.cl_u,
                        node.cl_v);
        if (!pair) pair = select_forced(sol.Z, node);
        if (!pair) {
            // Every remaining pair is cannot-linked; the certified bound
            // still backs the final certificate.
            pruned_max = std::max(pruned_max, node_ub);
            continue;
        }

        ShrinkChildInfo info;
        auto [ml, cl] = make_children(node, *pair, &info);
        ml.parent_bound = node_ub;
        cl.parent_bound = node_ub;
        ml.id = next_id++;
        cl.id = next_id++;
        if (node_feasible(ml)) {
            SdpSolution warm =
                remap_warm_ml(sol, node, ml, info, pair->side,
                              std::min(pair->i, pair->j),
                              std::max(pair->i, pair->j));
            queue.push(Entry{std::move(ml), std::move(warm), true});
        }
        if (node_feasible(cl)) {
            SdpSolution warm = remap_warm_cl(sol, cl, pair->side,
                                             pair->i, pair->j);
            queue.push(Entry{std::move(cl), std::move(warm), true});
        }
    }

    res.lower_bound = lb;
    double open = -std::numeric_limits<double>::infinity();
    while (!queue.empty()) {
        open = std::max(open, queue.top().node.parent_bound);
        queue.pop();
    }
    res.upper_bound = std::max({lb, pruned_max, open});
    if (!std::isfinite(res.upper_bound) && std::isfinite(lb)) {
        res.upper_bound = lb;
    }
    res.gap = std::isfinite(lb) ? rel_gap(res.upper_bound, lb)
                                : std::numeric_limits<double>::infinity();
    res.wall_seconds = elapsed();
    return res;
}

std::vector<ElbowRow> elbow_scan(const arma::mat& A, int k_min, int k_max,
                                 const SolverParams& params) {
    int kcap = static_cast<int>(std::min(A.n_rows, A.n_cols));
    if (k_min < 2 || k_max < k_min || k_max > kcap) {
        throw std::invalid_argument(
            "elbow_scan: need 2 <= k_min <= k_max <= min(n,m)");
    }
    std::vector<ElbowRow> rows;
    for (int k = k_min; k <= k_max; ++k) {
        NodeProblem root = build_root(A, k);
        SdpSolution sol = solve_dnn(root, nullptr, params.sdp_tol);
        SafeBound sb = safe_upper_bound(root, sol);
        Rounded rd = round_solution(A, k, sol.Z, params.kmeans_restarts,
                                    mix(params.seed, 7777, k));
        rows.push_back(ElbowRow{k, rd.lower_bound, sb.value});
    }
    return rows;
}

}  // namespace kddb
