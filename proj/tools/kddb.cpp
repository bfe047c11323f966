#include <cstdio>
#include <exception>
#include <fstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kddb/bench.hpp"
#include "kddb/driver.hpp"
#include "kddb/instance.hpp"
#include "kddb/oracle.hpp"

namespace {

void write_text_file(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed on " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
    }
}

int cmd_generate(int n, int m, int k, double sigma, std::uint64_t seed,
                 const std::string& out_matrix,
                 const std::string& out_solution) {
    kddb::PlantedSpec spec{n, m, k, sigma, seed};
    auto [A, truth] = kddb::generate_planted(spec);
    kddb::save_matrix(out_matrix, A);
    if (!out_solution.empty()) {
        kddb::save_solution(out_solution, truth, kddb::objective(A, truth));
    }
    std::printf("generated %dx%d, k=%d, sigma=%g, seed=%llu -> %s\n", n, m, k,
                sigma, static_cast<unsigned long long>(seed),
                out_matrix.c_str());
    return 0;
}

int cmd_solve(const std::string& input, int k, const kddb::SolverParams& params,
              const std::string& format, const std::string& output) {
    arma::mat A = kddb::load_matrix(input);
    kddb::SolveResult r = kddb::solve(A, k, params);
    const char* status = r.limit_hit ? "limit" : "optimal";
    if (format == "human") {
        std::printf(
            "instance=%s n=%llu m=%llu k=%d lb=%.9f ub=%.9f gap=%.4f%% "
            "nodes=%ld cp=%d time=%.2fs status=%s\n",
            input.c_str(), static_cast<unsigned long long>(A.n_rows),
            static_cast<unsigned long long>(A.n_cols), k, r.lower_bound,
            r.upper_bound, 100.0 * r.gap, r.nodes, r.root_cp_rounds,
            r.wall_seconds, status);
    } else if (format == "csv") {
        std::printf("instance,n,m,k,lb,ub,gap,nodes,cp,time_s,status\n");
        std::printf("%s,%llu,%llu,%d,%.17g,%.17g,%.17g,%ld,%d,%.3f,%s\n",
                    input.c_str(), static_cast<unsigned long long>(A.n_rows),
                    static_cast<unsigned long long>(A.n_cols), k,
                    r.lower_bound, r.upper_bound, r.gap, r.nodes,
                    r.root_cp_rounds, r.wall_seconds, status);
    } else {
        nlohmann::json j;
        j["instance"] = input;
        j["n"] = A.n_rows;
        j["m"] = A.n_cols;
        j["k"] = k;
        j["lb"] = r.lower_bound;
        j["ub"] = r.upper_bound;
        j["gap"] = r.gap;
        j["nodes"] = r.nodes;
        j["cp"] = r.root_cp_rounds;
        j["time_s"] = r.wall_seconds;
        j["status"] = status;
        std::printf("%s\n", j.dump(2).c_str());
    }
    if (!output.empty()) {
        kddb::save_solution(output, r.best, r.lower_bound);
    }
    return r.limit_hit ? 2 : 0;
}

int cmd_elbow(const std::string& input, int k_min, int k_max,
              const kddb::SolverParams& params) {
    arma::mat A = kddb::load_matrix(input);
    if (k_max <= 0) {
        k_max = static_cast<int>(std::min(A.n_rows, A.n_cols));
    }
    auto rows = kddb::elbow_scan(A, k_min, k_max, params);
    std::printf("k,lb,ub\n");
    for (const auto& row : rows) {
        std::printf("%d,%.9f,%.9f\n", row.k, row.lower_bound, row.upper_bound);
    }
    return 0;
}

int cmd_verify(const std::string& matrix_path, const std::string& sol_path) {
    arma::mat A = kddb::load_matrix(matrix_path);
    kddb::Biclustering b = kddb::load_solution(sol_path);
    auto violations = kddb::validate(b, static_cast<int>(A.n_rows),
                                     static_cast<int>(A.n_cols), b.k);
    if (!violations.empty()) {
        for (const auto& v : violations) {
            std::fprintf(stderr, "invalid: %s\n", v.c_str());
        }
        return 1;
    }
    double obj = kddb::objective(A, b);
    std::printf("valid k=%d objective=%.9f\n", b.k, obj);
    return 0;
}

int cmd_bench(const std::string& out_csv, const kddb::SolverParams& base,
              std::uint64_t seed, bool full) {
    kddb::BenchResult r = kddb::run_bench(base, seed, full);
    if (!out_csv.empty()) {
        write_text_file(out_csv, r.csv);
    }
    for (const auto& row : r.rows) {
        std::printf("%-12s lb=%10.6f ub=%10.6f gap=%8.5f%% nodes=%3ld cp=%2d "
                    "%6.2fs %s\n",
                    row.name.c_str(), row.lower_bound, row.upper_bound,
                    100.0 * row.gap, row.nodes, row.cp, row.seconds,
                    row.limit_hit ? "limit" : "optimal");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact solver for k densest disjoint biclique biclustering"};
    app.require_subcommand(1);

    kddb::SolverParams params;

    auto* gen = app.add_subcommand("generate", "write a planted instance");
    int gn = 10, gm = 10, gk = 2;
    double gsigma = 0.1;
    std::uint64_t gseed = 1;
    std::string gmat, gsol;
    gen->add_option("--n", gn, "rows")->required();
    gen->add_option("--m", gm, "columns")->required();
    gen->add_option("--k", gk, "planted clusters")->required();
    gen->add_option("--sigma", gsigma, "noise level");
    gen->add_option("--seed", gseed, "generator seed");
    gen->add_option("--out-matrix", gmat, "matrix path")->required();
    gen->add_option("--out-solution", gsol, "ground-truth solution path");

    auto* slv = app.add_subcommand("solve", "solve an instance exactly");
    std::string sin, sformat = "human", sout;
    int sk = 2;
    slv->add_option("--input", sin, "matrix path")->required();
    slv->add_option("--k", sk, "number of bicliques")->required();
    slv->add_option("--eps", params.eps, "relative optimality gap");
    slv->add_option("--sdp-tol", params.sdp_tol, "relaxation KKT tolerance");
    slv->add_option("--cp-tol", params.cp_rel_tol,
                    "minimum relative bound drop per cut round");
    slv->add_option("--max-sample", params.max_sample,
                    "cut candidates sampled per round");
    slv->add_option("--max-add", params.max_add, "cuts added per round");
    slv->add_option("--time-limit", params.time_limit, "seconds, 0 = none");
    slv->add_option("--node-limit", params.node_limit, "0 = none");
    slv->add_option("--seed", params.seed, "random seed");
    slv->add_flag("--verbose", params.verbose, "per-node log");
    slv->add_option("--format", sformat, "human|csv|json")
        ->check(CLI::IsMember({"human", "csv", "json"}));
    slv->add_option("--output", sout, "write best solution here");

    auto* elb = app.add_subcommand("elbow", "root bounds for a range of k");
    std::string ein;
    int ekmin = 2, ekmax = 0;
    elb->add_option("--input", ein, "matrix path")->required();
    elb->add_option("--k-min", ekmin, "smallest k");
    elb->add_option("--k-max", ekmax, "largest k (default min(n,m))");
    elb->add_option("--sdp-tol", params.sdp_tol, "relaxation KKT tolerance");
    elb->add_option("--seed", params.seed, "random seed");

    auto* ver = app.add_subcommand("verify", "check a solution file");
    std::string vmat, vsol;
    ver->add_option("--matrix", vmat, "matrix path")->required();
    ver->add_option("--solution", vsol, "solution path")->required();

    auto* ben = app.add_subcommand("bench", "planted-instance grid");
    std::string bcsv;
    std::uint64_t bseed = kddb::kBenchDefaultSeed;
    bool bfull = false;
    ben->add_option("--out-csv", bcsv, "write the deterministic CSV here");
    ben->add_option("--time-limit", params.time_limit,
                    "per-instance seconds, 0 = none");
    ben->add_option("--seed", bseed, "grid seed");
    ben->add_flag("--full", bfull, "append large instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints usage or help text
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) {
            return cmd_generate(gn, gm, gk, gsigma, gseed, gmat, gsol);
        }
        if (slv->parsed()) {
            return cmd_solve(sin, sk, params, sformat, sout);
        }
        if (elb->parsed()) {
            return cmd_elbow(ein, ekmin, ekmax, params);
        }
        if (ver->parsed()) {
            return cmd_verify(vmat, vsol);
        }
        if (ben->parsed()) {
            return cmd_bench(bcsv, params, bseed, bfull);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
