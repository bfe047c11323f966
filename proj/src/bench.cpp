#include "kddb/bench.hpp"

#include <cstdio>
#include <sstream>

#include "kddb/rng.hpp"

namespace kddb {

namespace {

std::uint64_t instance_seed(std::uint64_t seed, int n, int m, int k,
                            double sigma) {
    std::uint64_t x = Rng::splitmix64(seed + 0x7f4a7c15ULL);
    x = Rng::splitmix64(x ^ static_cast<std::uint64_t>(n));
    x = Rng::splitmix64(x ^ static_cast<std::uint64_t>(m));
    x = Rng::splitmix64(x ^ static_cast<std::uint64_t>(k));
    x = Rng::splitmix64(x ^ static_cast<std::uint64_t>(sigma * 100.0 + 0.5));
    return x;
}

std::string format_sigma(double sigma) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", sigma);
    return buf;
}

}  // namespace

std::vector<PlantedSpec> bench_grid(std::uint64_t seed, bool full) {
    std::vector<PlantedSpec> grid;
    const int sizes[] = {10, 15, 20, 25};
    for (double sigma : {0.1, 0.3}) {
        for (int n : sizes) {
            for (int m : sizes) {
                if (m > n) continue;
                for (int k : {2, 3, 4}) {
                    grid.push_back(PlantedSpec{
                        n, m, k, sigma, instance_seed(seed, n, m, k, sigma)});
                }
            }
        }
    }
    if (full) {
        for (auto [n, m, k] : {std::tuple<int, int, int>{300, 300, 2},
                               {300, 300, 3},
                               {625, 625, 2}}) {
            grid.push_back(
                PlantedSpec{n, m, k, 0.1, instance_seed(seed, n, m, k, 0.1)});
        }
    }
    return grid;
}

std::string bench_instance_name(const PlantedSpec& spec) {
    return std::to_string(spec.n) + "_" + std::to_string(spec.m) + "_" +
           std::to_string(spec.k) + "_" + format_sigma(spec.sigma);
}

BenchResult run_bench(const SolverParams& base, std::uint64_t seed, bool full) {
    BenchResult out;
    std::ostringstream csv;
    csv << "# kddb bench csv v1\n";
    csv << "instance,n,m,k,sigma,lb,ub,gap,nodes,cp,status\n";
    for (const PlantedSpec& spec : bench_grid(seed, full)) {
        auto [A, truth] = generate_planted(spec);
        (void)truth;
        SolverParams params = base;
        params.seed = spec.seed;
        SolveResult r = solve(A, spec.k, params);

        BenchRow row;
        row.name = bench_instance_name(spec);
        row.n = spec.n;
        row.m = spec.m;
        row.k = spec.k;
        row.sigma = spec.sigma;
        row.lower_bound = r.lower_bound;
        row.upper_bound = r.upper_bound;
        row.gap = r.gap;
        row.nodes = r.nodes;
        row.cp = r.root_cp_rounds;
        row.limit_hit = r.limit_hit;
        row.seconds = r.wall_seconds;
        out.rows.push_back(row);

        char line[512];
        std::snprintf(line, sizeof(line),
                      "%s,%d,%d,%d,%s,%.17g,%.17g,%.17g,%ld,%d,%s\n",
                      row.name.c_str(), row.n, row.m, row.k,
                      format_sigma(row.sigma).c_str(), row.lower_bound,
                      row.upper_bound, row.gap, row.nodes, row.cp,
                      row.limit_hit ? "limit" : "optimal");
        csv << line;
    }
    out.csv = csv.str();
    return out;
}

}  // namespace kddb
