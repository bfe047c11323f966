#include "kddb/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "kddb/rng.hpp"

namespace kddb {

double density(const arma::mat& A, const std::vector<int>& rows,
               const std::vector<int>& cols) {
    if (rows.empty() || cols.empty()) {
        throw std::invalid_argument("density: empty row or column set");
    }
    for (int i : rows) {
        if (i < 0 || i >= static_cast<int>(A.n_rows)) {
            throw std::invalid_argument("density: row index out of range");
        }
    }
    for (int j : cols) {
        if (j < 0 || j >= static_cast<int>(A.n_cols)) {
            throw std::invalid_argument("density: column index out of range");
        }
    }
    double s = 0.0;
    for (int i : rows) {
        for (int j : cols) {
            s += A(i, j);
        }
    }
    return s / std::sqrt(static_cast<double>(rows.size()) *
                         static_cast<double>(cols.size()));
}

std::vector<std::string> validate(const Biclustering& b, int n, int m, int k) {
    std::vector<std::string> out;
    if (b.k != k) {
        out.push_back("k mismatch: biclustering has " + std::to_string(b.k) +
                      ", expected " + std::to_string(k));
    }
    if (k < 2 || k > std::min(n, m)) {
        out.push_back("k out of range [2, min(n,m)]: " + std::to_string(k));
        return out;
    }
    if (static_cast<int>(b.row_labels.size()) != n) {
        out.push_back("row_labels has length " +
                      std::to_string(b.row_labels.size()) + ", expected " +
                      std::to_string(n));
    }
    if (static_cast<int>(b.col_labels.size()) != m) {
        out.push_back("col_labels has length " +
                      std::to_string(b.col_labels.size()) + ", expected " +
                      std::to_string(m));
    }
    if (!out.empty()) return out;
    std::vector<int> row_count(k, 0), col_count(k, 0);
    for (int i = 0; i < n; ++i) {
        int c = b.row_labels[i];
        if (c < 0 || c >= k) {
            out.push_back("row " + std::to_string(i) + " label " +
                          std::to_string(c) + " out of range");
        } else {
            ++row_count[c];
        }
    }
    for (int j = 0; j < m; ++j) {
        int c = b.col_labels[j];
        if (c < 0 || c >= k) {
            out.push_back("column " + std::to_string(j) + " label " +
                          std::to_string(c) + " out of range");
        } else {
            ++col_count[c];
        }
    }
    for (int c = 0; c < k; ++c) {
        if (row_count[c] == 0) {
            out.push_back("empty row cluster " + std::to_string(c));
        }
        if (col_count[c] == 0) {
            out.push_back("empty column cluster " + std::to_string(c));
        }
    }
    return out;
}

double objective(const arma::mat& A, const Biclustering& b) {
    int n = static_cast<int>(A.n_rows);
    int m = static_cast<int>(A.n_cols);
    auto violations = validate(b, n, m, b.k);
    if (!violations.empty()) {
        std::string msg = "objective: invalid biclustering:";
        for (const auto& v : violations) msg += " " + v + ";";
        throw std::invalid_argument(msg);
    }
    std::vector<double> block_sum(b.k, 0.0);
    std::vector<double> row_count(b.k, 0.0), col_count(b.k, 0.0);
    for (int i = 0; i < n; ++i) row_count[b.row_labels[i]] += 1.0;
    for (int j = 0; j < m; ++j) col_count[b.col_labels[j]] += 1.0;
    for (int i = 0; i < n; ++i) {
        int ci = b.row_labels[i];
        for (int j = 0; j < m; ++j) {
            if (b.col_labels[j] == ci) block_sum[ci] += A(i, j);
        }
    }
    double total = 0.0;
    for (int c = 0; c < b.k; ++c) {
        total += block_sum[c] / std::sqrt(row_count[c] * col_count[c]);
    }
    return total;
}

std::pair<arma::mat, Biclustering> generate_planted(const PlantedSpec& spec) {
    if (spec.n < 1 || spec.m < 1) {
        throw std::invalid_argument("generate_planted: n and m must be >= 1");
    }
    if (spec.k < 2 || spec.k > std::min(spec.n, spec.m)) {
        throw std::invalid_argument(
            "generate_planted: k out of range [2, min(n,m)]");
    }
    if (spec.sigma < 0.0) {
        throw std::invalid_argument("generate_planted: sigma must be >= 0");
    }
    auto make_labels = [&](int count, std::uint64_t stream_id) {
        std::vector<int> labels;
        labels.reserve(count);
        int q = count / spec.k, r = count % spec.k;
        for (int c = 0; c < spec.k; ++c) {
            int size = q + (c < r ? 1 : 0);
            labels.insert(labels.end(), size, c);
        }
        Rng rng = Rng::stream(spec.seed, stream_id);
        rng.shuffle(labels);
        return labels;
    };
    Biclustering truth;
    truth.k = spec.k;
    truth.row_labels = make_labels(spec.n, 0);
    truth.col_labels = make_labels(spec.m, 1);

    arma::mat A(spec.n, spec.m, arma::fill::zeros);
    Rng fill = Rng::stream(spec.seed, 2);
    for (int i = 0; i < spec.n; ++i) {
        for (int j = 0; j < spec.m; ++j) {
            if (truth.row_labels[i] == truth.col_labels[j]) {
                A(i, j) = fill.uniform();
            }
        }
    }
    Rng noise = Rng::stream(spec.seed, 3);
    for (int i = 0; i < spec.n; ++i) {
        for (int j = 0; j < spec.m; ++j) {
            A(i, j) += noise.normal(0.5, spec.sigma);
        }
    }
    return {std::move(A), std::move(truth)};
}

namespace {

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

double parse_real(const std::string& tok, const std::string& path, int line) {
    std::size_t pos = 0;
    double x;
    try {
        x = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line) +
                                 ": expected a number, got \"" + tok + "\"");
    }
    if (pos != tok.size()) {
        throw std::runtime_error(path + ":" + std::to_string(line) +
                                 ": trailing characters in \"" + tok + "\"");
    }
    return x;
}

long parse_int(const std::string& tok, const std::string& path, int line) {
    std::size_t pos = 0;
    long x;
    try {
        x = std::stol(tok, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line) +
                                 ": expected an integer, got \"" + tok + "\"");
    }
    if (pos != tok.size()) {
        throw std::runtime_error(path + ":" + std::to_string(line) +
                                 ": trailing characters in \"" + tok + "\"");
    }
    return x;
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

void commit_file(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp + " for writing");
        }
        out << content;
        if (!out) {
            throw std::runtime_error("write failed on " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
    }
}

}  // namespace

arma::mat load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::string line;
    int lineno = 0;
    do {
        if (!std::getline(in, line)) {
            throw std::runtime_error(path + ": missing header line");
        }
        ++lineno;
    } while (tokens_of(line).empty());
    auto header = tokens_of(line);
    if (header.size() != 2) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": header must be \"n m\"");
    }
    long n = parse_int(header[0], path, lineno);
    long m = parse_int(header[1], path, lineno);
    if (n < 1 || m < 1) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": dimensions must be positive");
    }
    arma::mat A(n, m);
    for (long i = 0; i < n; ++i) {
        if (!std::getline(in, line)) {
            throw std::runtime_error(path + ": unexpected end of file, " +
                                     std::to_string(i) + " of " +
                                     std::to_string(n) + " rows read");
        }
        ++lineno;
        auto toks = tokens_of(line);
        if (static_cast<long>(toks.size()) != m) {
            throw std::runtime_error(
                path + ":" + std::to_string(lineno) + ": expected " +
                std::to_string(m) + " entries, got " +
                std::to_string(toks.size()));
        }
        for (long j = 0; j < m; ++j) {
            A(i, j) = parse_real(toks[j], path, lineno);
        }
    }
    return A;
}

void save_matrix(const std::string& path, const arma::mat& A) {
    std::ostringstream out;
    out << A.n_rows << " " << A.n_cols << "\n";
    for (arma::uword i = 0; i < A.n_rows; ++i) {
        for (arma::uword j = 0; j < A.n_cols; ++j) {
            if (j) out << " ";
            out << format_real(A(i, j));
        }
        out << "\n";
    }
    commit_file(path, out.str());
}

Biclustering load_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    Biclustering b;
    bool have_k = false, have_rows = false, have_cols = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokens_of(line);
        if (toks.empty()) continue;
        const std::string& key = toks[0];
        if (key == "k") {
            if (toks.size() != 2) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": k takes one value");
            }
            b.k = static_cast<int>(parse_int(toks[1], path, lineno));
            have_k = true;
        } else if (key == "objective") {
            if (toks.size() != 2) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": objective takes one value");
            }
            parse_real(toks[1], path, lineno);
        } else if (key == "row_labels" || key == "col_labels") {
            std::vector<int> labels;
            labels.reserve(toks.size() - 1);
            for (std::size_t t = 1; t < toks.size(); ++t) {
                labels.push_back(
                    static_cast<int>(parse_int(toks[t], path, lineno)));
            }
            if (key == "row_labels") {
                b.row_labels = std::move(labels);
                have_rows = true;
            } else {
                b.col_labels = std::move(labels);
                have_cols = true;
            }
        } else {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": unknown key \"" + key + "\"");
        }
    }
    if (!have_k || !have_rows || !have_cols) {
        throw std::runtime_error(path +
                                 ": missing k, row_labels or col_labels");
    }
    return b;
}

void save_solution(const std::string& path, const Biclustering& b,
                   double objective_value) {
    std::ostringstream out;
    out << "k " << b.k << "\n";
    out << "objective " << format_real(objective_value) << "\n";
    out << "row_labels";
    for (int c : b.row_labels) out << " " << c;
    out << "\n";
    out << "col_labels";
    for (int c : b.col_labels) out << " " << c;
    out << "\n";
    commit_file(path, out.str());
}

}  // namespace kddb
