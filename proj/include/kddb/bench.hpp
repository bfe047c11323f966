#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kddb/driver.hpp"

namespace kddb {

// Default generator seed for the planted grid, recorded so repeated bench
// runs are reproducible; pass a different seed to draw other instances.
inline constexpr std::uint64_t kBenchDefaultSeed = 1704;

struct BenchRow {
    std::string name;
    int n = 0, m = 0, k = 0;
    double sigma = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    double gap = 0.0;
    long nodes = 0;
    int cp = 0;  // cutting-plane rounds at the root
    bool limit_hit = false;
    double seconds = 0.0;  // informational only, not part of the CSV
};

struct BenchResult {
    std::vector<BenchRow> rows;
    std::string csv;  // deterministic: excludes timings
};

// The planted-instance grid: all (n, m) with n >= m from {10, 15, 20, 25},
// k in {2, 3, 4}, sigma in {0.1, 0.3}; each instance's generator seed is
// derived from `seed` and its parameters. With `full`, a few large instances
// (600 to 1250 vertices) are appended; give those a time limit.
std::vector<PlantedSpec> bench_grid(std::uint64_t seed, bool full);

std::string bench_instance_name(const PlantedSpec& spec);

BenchResult run_bench(const SolverParams& base, std::uint64_t seed, bool full);

}  // namespace kddb
