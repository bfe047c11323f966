#pragma once

#include <armadillo>
#include <cstdint>
#include <set>
#include <vector>

#include "kddb/rng.hpp"

namespace kddb {

enum class Side { u, v };

enum class CutKind { pair, triangle };

// Hypermetric inequalities on one side's Gram block, indexed in that block's
// local coordinates.
//   pair:     Z(i,j) <= Z(i,i)                      (anchor i, other j, i != j)
//   triangle: Z(i,j) + Z(i,h) <= Z(i,i) + Z(j,h)     (anchor i, leaves j < h)
struct Cut {
    Side side = Side::u;
    CutKind kind = CutKind::pair;
    int i = 0;
    int j = 0;
    int h = -1;

    std::uint64_t key() const {
        std::uint64_t s = side == Side::u ? 0 : 1;
        std::uint64_t k = kind == CutKind::pair ? 0 : 1;
        return (s << 62) | (k << 61) |
               (static_cast<std::uint64_t>(i) << 40) |
               (static_cast<std::uint64_t>(j) << 20) |
               static_cast<std::uint64_t>(h + 1);
    }
};

// Signed violation: positive means the inequality is violated at Z.
double violation(const arma::mat& Zblock, const Cut& c);

class CutPool {
public:
    bool add(const Cut& c) {
        if (!keys_.insert(c.key()).second) return false;
        cuts_.push_back(c);
        return true;
    }
    bool contains(const Cut& c) const { return keys_.count(c.key()) > 0; }
    const std::vector<Cut>& cuts() const { return cuts_; }
    std::size_t size() const { return cuts_.size(); }

private:
    std::vector<Cut> cuts_;
    std::set<std::uint64_t> keys_;
};

struct SeparateParams {
    int max_sample = 100000;
    int max_add = 10000;
    double viol_tol = 1e-4;
};

// Randomly sampled separation over both sides; returns up to max_add cuts
// not already in the pool, sorted by violation (descending, ties by key).
std::vector<Cut> separate(const arma::mat& Zuu, const arma::mat& Zvv,
                          const CutPool& pool, const SeparateParams& params,
                          Rng& rng);

// Exhaustive separation; intended for small blocks (tests and fallback).
std::vector<Cut> separate_exact(const arma::mat& Zuu, const arma::mat& Zvv,
                                const CutPool& pool, double viol_tol,
                                int max_add);

// Keeps a cut when it is tight or violated (violation >= -slack_tol) or its
// dual multiplier is active (> 1e-8). kept, if given, receives the surviving
// indices into the old pool.
CutPool purge(const CutPool& pool, const arma::mat& Zuu, const arma::mat& Zvv,
              const arma::vec& t, double slack_tol,
              std::vector<std::size_t>* kept = nullptr);

}  // namespace kddb
