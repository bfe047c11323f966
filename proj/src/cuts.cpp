#include "kddb/cuts.hpp"

#include <algorithm>
#include <stdexcept>

namespace kddb {

double violation(const arma::mat& Zblock, const Cut& c) {
    if (c.kind == CutKind::pair) {
        return Zblock(c.i, c.j) - Zblock(c.i, c.i);
    }
    return Zblock(c.i, c.j) + Zblock(c.i, c.h) - Zblock(c.i, c.i) -
           Zblock(c.j, c.h);
}

namespace {

struct Found {
    Cut cut;
    double viol;
};

void sort_and_trim(std::vector<Found>& found, int max_add,
                   std::vector<Cut>& out) {
    std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
        if (a.viol != b.viol) return a.viol > b.viol;
        return a.cut.key() < b.cut.key();
    });
    if (static_cast<int>(found.size()) > max_add) found.resize(max_add);
    out.reserve(found.size());
    for (const auto& f : found) out.push_back(f.cut);
}

}  // namespace

std::vector<Cut> separate(const arma::mat& Zuu, const arma::mat& Zvv,
                          const CutPool& pool, const SeparateParams& params,
                          Rng& rng) {
    int du = static_cast<int>(Zuu.n_rows);
    int dv = static_cast<int>(Zvv.n_rows);
    std::set<std::uint64_t> seen;
    std::vector<Found> found;
    for (int s = 0; s < params.max_sample; ++s) {
        Side side =
            rng.uniform_index(du + dv) < static_cast<std::size_t>(du)
                ? Side::u
                : Side::v;
        const arma::mat& Z = side == Side::u ? Zuu : Zvv;
        int d = side == Side::u ? du : dv;
        if (d < 2) continue;
        Cut c;
        c.side = side;
        bool want_pair = d < 3 || rng.uniform() < 0.5;
        if (want_pair) {
            c.kind = CutKind::pair;
            c.i = static_cast<int>(rng.uniform_index(d));
            c.j = static_cast<int>(rng.uniform_index(d - 1));
            if (c.j >= c.i) ++c.j;
            c.h = -1;
        } else {
            c.kind = CutKind::triangle;
            c.i = static_cast<int>(rng.uniform_index(d));
            c.j = static_cast<int>(rng.uniform_index(d - 1));
            if (c.j >= c.i) ++c.j;
            c.h = static_cast<int>(rng.uniform_index(d - 2));
            if (c.h >= std::min(c.i, c.j)) ++c.h;
            if (c.h >= std::max(c.i, c.j)) ++c.h;
            if (c.j > c.h) std::swap(c.j, c.h);
        }
        double v = violation(Z, c);
        if (v <= params.viol_tol) continue;
        if (pool.contains(c)) continue;
        if (!seen.insert(c.key()).second) continue;
        found.push_back({c, v});
    }
    std::vector<Cut> out;
    sort_and_trim(found, params.max_add, out);
    return out;
}

std::vector<Cut> separate_exact(const arma::mat& Zuu, const arma::mat& Zvv,
                                const CutPool& pool, double viol_tol,
                                int max_add) {
    std::vector<Found> found;
    auto scan_side = [&](Side side, const arma::mat& Z) {
        int d = static_cast<int>(Z.n_rows);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                if (j == i) continue;
                Cut c{side, CutKind::pair, i, j, -1};
                double v = violation(Z, c);
                if (v > viol_tol && !pool.contains(c)) found.push_back({c, v});
            }
        }
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                if (j == i) continue;
                for (int h = j + 1; h < d; ++h) {
                    if (h == i) continue;
                    Cut c{side, CutKind::triangle, i, j, h};
                    double v = violation(Z, c);
                    if (v > viol_tol && !pool.contains(c)) {
                        found.push_back({c, v});
                    }
                }
            }
        }
    };
    scan_side(Side::u, Zuu);
    scan_side(Side::v, Zvv);
    std::vector<Cut> out;
    sort_and_trim(found, max_add, out);
    return out;
}

CutPool purge(const CutPool& pool, const arma::mat& Zuu, const arma::mat& Zvv,
              const arma::vec& t, double slack_tol,
              std::vector<std::size_t>* kept) {
    if (t.n_elem != pool.size()) {
        throw std::invalid_argument(
            "purge: multiplier vector does not match pool size");
    }
    CutPool out;
    if (kept) kept->clear();
    for (std::size_t idx = 0; idx < pool.size(); ++idx) {
        const Cut& c = pool.cuts()[idx];
        const arma::mat& Z = c.side == Side::u ? Zuu : Zvv;
        bool active = violation(Z, c) >= -slack_tol || t(idx) > 1e-8;
        if (!active) continue;
        out.add(c);
        if (kept) kept->push_back(idx);
    }
    return out;
}

}  // namespace kddb
