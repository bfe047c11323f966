#pragma once

#include <armadillo>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "kddb/instance.hpp"
#include "kddb/relaxation.hpp"

namespace kddb {

struct SolverParams {
    double eps = 1e-3;          // relative optimality gap to certify
    double sdp_tol = 1e-4;      // KKT tolerance of the node relaxation
    double cp_rel_tol = 1e-3;   // minimum relative bound drop to keep cutting
    int max_cp_rounds = 60;
    int max_sample = 100000;    // candidate cuts sampled per round
    int max_add = 10000;        // cuts added per round
    double viol_tol = 1e-4;
    double slack_tol = 1e-5;
    double decided_tol = 1e-4;
    int kmeans_restarts = 20;
    double time_limit = 0.0;    // seconds, 0 disables
    long node_limit = 0;        // 0 disables
    std::uint64_t seed = 1;
    bool verbose = false;
    // Test hook: called for every processed node with its final safe bound.
    std::function<void(const NodeProblem&, double)> node_callback;
};

struct TraceRow {
    int node_id = 0;
    int cp_round = 0;  // 0 is the plain relaxation, r > 0 after r cut rounds
    double ub = 0.0;   // global upper bound after this step
    double lb = 0.0;   // incumbent value after this step
    int cuts_added = 0;
    int pool_size = 0;
    double safe_ub_raw = 0.0;  // this round's safe bound before monotonizing
};

struct SolveResult {
    Biclustering best;
    double lower_bound = -std::numeric_limits<double>::infinity();
    double upper_bound = std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
    long nodes = 0;
    int root_cp_rounds = 0;
    double wall_seconds = 0.0;
    bool limit_hit = false;
    std::vector<TraceRow> trace;
};

// Exact branch-and-cut: best-first on the safe upper bound, cutting-plane
// rounds at every node, rounding after every relaxation solve, and
// shrink/cannot-link children on the most fractional pair. Terminates when
// the relative gap falls below eps or a limit is reached (limit_hit set, the
// reported bounds stay valid).
SolveResult solve(const arma::mat& A, int k, const SolverParams& params);

struct ElbowRow {
    int k = 0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
};

// Root relaxation, safe bound and rounding for each k in [k_min, k_max];
// no cutting planes and no branching.
std::vector<ElbowRow> elbow_scan(const arma::mat& A, int k_min, int k_max,
                                 const SolverParams& params);

}  // namespace kddb
