#pragma once

#include <armadillo>
#include <cstdint>
#include <vector>

#include "kddb/instance.hpp"

namespace kddb {

struct KmeansResult {
    std::vector<int> labels;
    arma::mat centers;  // k rows
    double inertia = 0.0;
};

// Lloyd's algorithm on the rows of points, k-means++ seeding, best of
// `restarts` runs; empty clusters are repaired by stealing the point farthest
// from its assigned center. Deterministic in (points, k, restarts, seed).
KmeansResult kmeans(const arma::mat& points, int k, int restarts,
                    std::uint64_t seed);

// Maximum-weight perfect matching on a square score matrix; returns the
// column assigned to each row.
std::vector<int> assignment_max(const arma::mat& W);

struct Rounded {
    Biclustering b;
    double lower_bound = 0.0;
};

// Biclustering extracted from a (full-space) relaxation solution: cluster the
// rows of Z_UU and of Z_VV separately, score every row-cluster/column-cluster
// pair by its density in A, and match them. The reported lower bound is the
// objective recomputed from A.
Rounded round_solution(const arma::mat& A, int k, const arma::mat& Zfull,
                       int restarts, std::uint64_t seed);

}  // namespace kddb
