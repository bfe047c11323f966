#pragma once

#include <armadillo>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace kddb {

// A biclustering of the complete bipartite graph K_{n,m}: every row and every
// column carries a cluster label in {0,...,k-1}, and every label owns at least
// one row and one column.
struct Biclustering {
    int k = 0;
    std::vector<int> row_labels;
    std::vector<int> col_labels;
};

struct PlantedSpec {
    int n = 0;
    int m = 0;
    int k = 0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

// density(U',V') = sum of A over U' x V' divided by sqrt(|U'| |V'|).
// Throws std::invalid_argument on an empty side or an out-of-range index.
double density(const arma::mat& A, const std::vector<int>& rows,
               const std::vector<int>& cols);

// Sum of the k biclique densities induced by the labels.
// Throws std::invalid_argument if the biclustering is invalid for A.
double objective(const arma::mat& A, const Biclustering& b);

// Structural checks; returns a human-readable description of every violation
// found (empty vector means valid).
std::vector<std::string> validate(const Biclustering& b, int n, int m, int k);

// Planted instance: k near-equal blocks, in-block entries uniform on [0,1),
// all entries then perturbed by Gaussian noise N(0.5, sigma^2). Pure function
// of its parameters. Returns the matrix and the planted ground truth.
std::pair<arma::mat, Biclustering> generate_planted(const PlantedSpec& spec);

// Text formats. Matrices: a header line "n m" followed by n lines of m
// space-separated reals. Solutions: "key value" lines (k, objective,
// row_labels, col_labels). Writers emit 17 significant digits so values
// round-trip exactly, and write to a temporary file renamed into place.
arma::mat load_matrix(const std::string& path);
void save_matrix(const std::string& path, const arma::mat& A);
Biclustering load_solution(const std::string& path);
void save_solution(const std::string& path, const Biclustering& b,
                   double objective_value);

}  // namespace kddb
