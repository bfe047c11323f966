#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "kddb/cuts.hpp"
#include "kddb/instance.hpp"
#include "kddb/relaxation.hpp"
#include "kddb/rng.hpp"

using namespace kddb;

namespace {

Biclustering random_biclustering(int n, int m, int k, Rng& rng) {
    Biclustering b;
    b.k = k;
    b.row_labels.resize(n);
    b.col_labels.resize(m);
    for (int i = 0; i < n; ++i) {
        b.row_labels[i] = i < k ? i : int(rng.uniform_index(k));
    }
    for (int j = 0; j < m; ++j) {
        b.col_labels[j] = j < k ? j : int(rng.uniform_index(k));
    }
    rng.shuffle(b.row_labels);
    rng.shuffle(b.col_labels);
    return b;
}

}  // namespace

TEST_CASE("violation formulas") {
    arma::mat Z = {{0.5, 0.7, 0.1}, {0.7, 0.4, 0.2}, {0.1, 0.2, 0.9}};
    CHECK(violation(Z, {Side::u, CutKind::pair, 0, 1, -1}) ==
          doctest::Approx(0.2).epsilon(1e-12));
    CHECK(violation(Z, {Side::u, CutKind::pair, 1, 0, -1}) ==
          doctest::Approx(0.3).epsilon(1e-12));
    CHECK(violation(Z, {Side::u, CutKind::pair, 2, 0, -1}) ==
          doctest::Approx(-0.8).epsilon(1e-12));
    // Z(0,1) + Z(0,2) - Z(0,0) - Z(1,2) = 0.7 + 0.1 - 0.5 - 0.2
    CHECK(violation(Z, {Side::u, CutKind::triangle, 0, 1, 2}) ==
          doctest::Approx(0.1).epsilon(1e-12));
    CHECK(violation(Z, {Side::u, CutKind::triangle, 2, 0, 1}) ==
          doctest::Approx(-1.3).epsilon(1e-12));
}

TEST_CASE("keys are injective over distinct cuts") {
    std::vector<Cut> all;
    for (Side s : {Side::u, Side::v}) {
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                if (j == i) continue;
                all.push_back({s, CutKind::pair, i, j, -1});
                for (int h = j + 1; h < 4; ++h) {
                    if (h == i) continue;
                    all.push_back({s, CutKind::triangle, i, j, h});
                }
            }
        }
    }
    std::set<std::uint64_t> keys;
    for (const Cut& c : all) keys.insert(c.key());
    CHECK(keys.size() == all.size());
}

TEST_CASE("feasible Gram matrices violate no hypermetric inequality") {
    Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 3 + int(rng.uniform_index(5));
        int m = 3 + int(rng.uniform_index(5));
        int k = 2 + int(rng.uniform_index(std::min(n, m) - 1));
        arma::mat Z = feasible_gram(random_biclustering(n, m, k, rng));
        arma::mat Zuu = Z.submat(0, 0, n - 1, n - 1);
        arma::mat Zvv = Z.submat(n, n, n + m - 1, n + m - 1);
        CHECK(separate_exact(Zuu, Zvv, CutPool{}, 1e-12, 1000).empty());
    }
}

TEST_CASE("exact separation finds planted violations in order") {
    arma::mat Zuu = {{0.5, 0.9, 0.0}, {0.9, 0.5, 0.0}, {0.0, 0.0, 0.5}};
    arma::mat Zvv = {{0.4, 0.55}, {0.55, 0.4}};
    std::vector<Cut> found = separate_exact(Zuu, Zvv, CutPool{}, 1e-4, 100);
    REQUIRE(found.size() >= 4);
    for (std::size_t t = 1; t < found.size(); ++t) {
        const arma::mat& prev =
            found[t - 1].side == Side::u ? Zuu : Zvv;
        const arma::mat& cur = found[t].side == Side::u ? Zuu : Zvv;
        CHECK(violation(prev, found[t - 1]) >=
              violation(cur, found[t]) - 1e-12);
    }
    CHECK(violation(Zuu, found[0]) == doctest::Approx(0.4).epsilon(1e-12));

    // pooled cuts are not reported again
    CutPool pool;
    for (const Cut& c : found) pool.add(c);
    CHECK(separate_exact(Zuu, Zvv, pool, 1e-4, 100).empty());

    // max_add truncates from the top of the ranking
    std::vector<Cut> top = separate_exact(Zuu, Zvv, CutPool{}, 1e-4, 2);
    REQUIRE(top.size() == 2);
    CHECK(top[0].key() == found[0].key());
    CHECK(top[1].key() == found[1].key());
}

TEST_CASE("sampled separation is deterministic and agrees with exact") {
    Rng rng(77);
    int n = 8, m = 7;
    arma::mat Y(n + m, n + m);
    for (auto& x : Y) x = rng.uniform(0.0, 1.0);
    arma::mat Z = 0.5 * (Y + Y.t());
    arma::mat Zuu = Z.submat(0, 0, n - 1, n - 1);
    arma::mat Zvv = Z.submat(n, n, n + m - 1, n + m - 1);

    SeparateParams params;
    Rng r1(123), r2(123);
    std::vector<Cut> a = separate(Zuu, Zvv, CutPool{}, params, r1);
    std::vector<Cut> b = separate(Zuu, Zvv, CutPool{}, params, r2);
    REQUIRE(a.size() == b.size());
    for (std::size_t t = 0; t < a.size(); ++t) {
        CHECK(a[t].key() == b[t].key());
    }

    // every sampled cut is a genuine violation, and with a generous sampling
    // budget the top exact cut is found
    std::vector<Cut> exact = separate_exact(Zuu, Zvv, CutPool{}, 1e-4, 100000);
    CHECK(!a.empty());
    std::set<std::uint64_t> exact_keys;
    for (const Cut& c : exact) exact_keys.insert(c.key());
    for (const Cut& c : a) {
        const arma::mat& blk = c.side == Side::u ? Zuu : Zvv;
        CHECK(violation(blk, c) > params.viol_tol);
        CHECK(exact_keys.count(c.key()) == 1);
    }
    if (!exact.empty() && !a.empty()) {
        CHECK(a[0].key() == exact[0].key());
    }
}

TEST_CASE("purge keeps active rows and reports survivors") {
    arma::mat Zuu = {{0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}, {0.0, 0.0, 0.5}};
    arma::mat Zvv = {{0.5, 0.1}, {0.1, 0.5}};
    CutPool pool;
    pool.add({Side::u, CutKind::pair, 0, 1, -1});   // tight, viol 0
    pool.add({Side::u, CutKind::pair, 0, 2, -1});   // slack, viol -0.5
    pool.add({Side::u, CutKind::pair, 1, 2, -1});   // slack but active dual
    pool.add({Side::v, CutKind::pair, 0, 1, -1});   // slack, viol -0.4
    arma::vec t = {0.0, 0.0, 0.3, 0.0};

    std::vector<std::size_t> kept;
    CutPool out = purge(pool, Zuu, Zvv, t, 1e-5, &kept);
    CHECK(out.size() == 2);
    CHECK(kept == std::vector<std::size_t>{0, 2});
    CHECK(out.contains({Side::u, CutKind::pair, 0, 1, -1}));
    CHECK(out.contains({Side::u, CutKind::pair, 1, 2, -1}));

    arma::vec wrong = {0.0, 0.0};
    CHECK_THROWS_AS(purge(pool, Zuu, Zvv, wrong, 1e-5, nullptr),
                    std::invalid_argument);
}

TEST_CASE("noisy planted roots produce separable solutions") {
    PlantedSpec spec{8, 8, 3, 0.3, 1618};
    arma::mat A = generate_planted(spec).first;
    NodeProblem root = build_root(A, 3);
    SdpSolution sol = solve_dnn(root, nullptr, 1e-4);
    arma::mat Zuu = sol.Z.submat(0, 0, 7, 7);
    arma::mat Zvv = sol.Z.submat(8, 8, 15, 15);

    SeparateParams params;
    Rng rng(5);
    std::vector<Cut> found = separate(Zuu, Zvv, root.cuts, params, rng);
    CHECK(!found.empty());
}
