#include "kddb/rounding.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kddb/rng.hpp"

namespace kddb {

namespace {

double dist2(const arma::mat& points, int p, const arma::mat& centers, int c) {
    arma::rowvec diff = points.row(p) - centers.row(c);
    return arma::dot(diff, diff);
}

}  // namespace

KmeansResult kmeans(const arma::mat& points, int k, int restarts,
                    std::uint64_t seed) {
    int N = static_cast<int>(points.n_rows);
    if (k < 1 || k > N) {
        throw std::invalid_argument("kmeans: k must be in [1, #points]");
    }
    KmeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < std::max(1, restarts); ++r) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(r));

        // k-means++ seeding.
        arma::mat centers(k, points.n_cols);
        centers.row(0) = points.row(rng.uniform_index(N));
        arma::vec d2(N);
        for (int p = 0; p < N; ++p) d2(p) = dist2(points, p, centers, 0);
        for (int c = 1; c < k; ++c) {
            double total = arma::accu(d2);
            int pick;
            if (total <= 0.0) {
                pick = static_cast<int>(rng.uniform_index(N));
            } else {
                double target = rng.uniform() * total;
                double cum = 0.0;
                pick = N - 1;
                for (int p = 0; p < N; ++p) {
                    cum += d2(p);
                    if (cum > target) {
                        pick = p;
                        break;
                    }
                }
            }
            centers.row(c) = points.row(pick);
            for (int p = 0; p < N; ++p) {
                d2(p) = std::min(d2(p), dist2(points, p, centers, c));
            }
        }

        std::vector<int> labels(N, 0);
        std::vector<int> counts(k, 0);
        for (int sweep = 0; sweep < 100; ++sweep) {
            bool changed = sweep == 0;
            for (int p = 0; p < N; ++p) {
                int arg = 0;
                double bestd = dist2(points, p, centers, 0);
                for (int c = 1; c < k; ++c) {
                    double dd = dist2(points, p, centers, c);
                    if (dd < bestd) {
                        bestd = dd;
                        arg = c;
                    }
                }
                if (arg != labels[p] || sweep == 0) {
                    labels[p] = arg;
                    changed = true;
                }
            }
            std::fill(counts.begin(), counts.end(), 0);
            for (int p = 0; p < N; ++p) ++counts[labels[p]];
            for (int c = 0; c < k; ++c) {
                if (counts[c] > 0) continue;
                int steal = -1;
                double far = -1.0;
                for (int p = 0; p < N; ++p) {
                    if (counts[labels[p]] < 2) continue;
                    double dd = dist2(points, p, centers, labels[p]);
                    if (dd > far) {
                        far = dd;
                        steal = p;
                    }
                }
                if (steal < 0) break;
                --counts[labels[steal]];
                labels[steal] = c;
                ++counts[c];
                changed = true;
            }
            if (!changed) break;
            centers.zeros();
            for (int p = 0; p < N; ++p) centers.row(labels[p]) += points.row(p);
            for (int c = 0; c < k; ++c) {
                if (counts[c] > 0) centers.row(c) /= counts[c];
            }
        }

        double inertia = 0.0;
        for (int p = 0; p < N; ++p) {
            inertia += dist2(points, p, centers, labels[p]);
        }
        if (inertia < best.inertia) {
            best.labels = labels;
            best.centers = centers;
            best.inertia = inertia;
        }
    }
    return best;
}

std::vector<int> assignment_max(const arma::mat& W) {
    if (!W.is_square() || W.n_rows == 0) {
        throw std::invalid_argument("assignment_max: square matrix required");
    }
    int n = static_cast<int>(W.n_rows);
    const double INF = std::numeric_limits<double>::infinity();
    // Potentials method on the negated scores (1-based arrays).
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, INF);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = 0;
            double delta = INF;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = -W(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> perm(n, -1);
    for (int j = 1; j <= n; ++j) perm[p[j] - 1] = j - 1;
    return perm;
}

Rounded round_solution(const arma::mat& A, int k, const arma::mat& Zfull,
                       int restarts, std::uint64_t seed) {
    int n = static_cast<int>(A.n_rows);
    int m = static_cast<int>(A.n_cols);
    if (static_cast<int>(Zfull.n_rows) != n + m || !Zfull.is_square()) {
        throw std::invalid_argument(
            "round_solution: Z must be square of size n+m");
    }
    arma::mat Zuu = Zfull.submat(0, 0, n - 1, n - 1);
    arma::mat Zvv = Zfull.submat(n, n, n + m - 1, n + m - 1);
    std::uint64_t su = Rng::splitmix64(seed);
    std::uint64_t sv = Rng::splitmix64(su);
    KmeansResult ku = kmeans(Zuu, k, restarts, su);
    KmeansResult kv = kmeans(Zvv, k, restarts, sv);

    std::vector<std::vector<int>> rows(k), cols(k);
    for (int i = 0; i < n; ++i) rows[ku.labels[i]].push_back(i);
    for (int j = 0; j < m; ++j) cols[kv.labels[j]].push_back(j);

    arma::mat What(k, k);
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            What(a, b) = density(A, rows[a], cols[b]);
        }
    }
    std::vector<int> perm = assignment_max(What);
    std::vector<int> inv(k, 0);
    for (int a = 0; a < k; ++a) inv[perm[a]] = a;

    Rounded out;
    out.b.k = k;
    out.b.row_labels = ku.labels;
    out.b.col_labels.resize(m);
    for (int j = 0; j < m; ++j) out.b.col_labels[j] = inv[kv.labels[j]];
    out.lower_bound = objective(A, out.b);
    return out;
}

}  // namespace kddb
