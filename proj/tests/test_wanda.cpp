#include "hodgecover/errors.hpp"
#include "hodgecover/wanda.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace hodgecover;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int r, int c) {
    std::normal_distribution<double> d;
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = d(rng);
    return m;
}

}  // namespace

TEST_CASE("keep counts") {
    CHECK(wanda_keep_count(10, 0.0) == 10);
    CHECK(wanda_keep_count(10, 0.5) == 5);
    CHECK(wanda_keep_count(10, 0.55) == 5);
    CHECK(wanda_keep_count(10, 0.575) == 5);
    CHECK(wanda_keep_count(4, 0.25) == 3);
    CHECK(wanda_keep_count(3, 0.9) == 1);
}

TEST_CASE("zero sparsity leaves the weights unchanged") {
    std::mt19937_64 rng(31);
    const auto w = random_matrix(rng, 5, 7);
    const auto x = random_matrix(rng, 20, 7);
    const auto r = wanda_prune(w, x, 0.0);
    CHECK(r.weights == w);
    CHECK(r.mask.row_sparsity == 0.0);
}

TEST_CASE("equal activation norms prune by weight magnitude") {
    Eigen::MatrixXd w(2, 4);
    w << 1, -4, 2, 3,  //
        -0.5, 0.1, 0.2, -9;
    const auto r = wanda_prune(w, Eigen::MatrixXd::Identity(4, 4), 0.5);
    Eigen::MatrixXd expected(2, 4);
    expected << 0, -4, 0, 3,  //
        -0.5, 0, 0, -9;
    CHECK(r.weights == expected);
    CHECK(r.mask.kept_in_row(0) == 2);
    CHECK(r.mask.row_sparsity == 0.5);
}

TEST_CASE("ties go to the lower column") {
    const Eigen::MatrixXd w = Eigen::MatrixXd::Ones(1, 4);
    const auto r = wanda_prune_with_norms(w, Eigen::VectorXd::Ones(4), 0.5);
    CHECK(r.mask.at(0, 0));
    CHECK(r.mask.at(0, 1));
    CHECK_FALSE(r.mask.at(0, 2));
    CHECK_FALSE(r.mask.at(0, 3));
}

TEST_CASE("kept set maximizes the row score over every subset") {
    std::mt19937_64 rng(32);
    for (int t = 0; t < 50; ++t) {
        const auto w = random_matrix(rng, 2, 4);
        const auto x = random_matrix(rng, 6, 4);
        for (double r2 : {0.25, 0.5, 0.75}) {
            const auto r = wanda_prune(w, x, r2);
            const int keep = wanda_keep_count(4, r2);
            for (int row = 0; row < 2; ++row) {
                auto score = [&](int c) { return std::abs(w(row, c)) * x.col(c).norm(); };
                double best = -1.0;
                std::vector<int> best_set;
                for (const auto& s : oracle::subsets(4, keep)) {
                    double v = 0.0;
                    for (int c : s) v += score(c);
                    if (v > best) {
                        best = v;
                        best_set = s;
                    }
                }
                for (int c = 0; c < 4; ++c) {
                    const bool kept = std::find(best_set.begin(), best_set.end(), c) != best_set.end();
                    CHECK(r.mask.at(row, c) == kept);
                    CHECK(r.weights(row, c) == (kept ? w(row, c) : 0.0));
                }
            }
        }
    }
}

TEST_CASE("pruning twice at the same rate changes nothing") {
    std::mt19937_64 rng(33);
    const auto w = random_matrix(rng, 6, 9);
    const auto x = random_matrix(rng, 12, 9);
    const auto once = wanda_prune(w, x, 0.4);
    const auto twice = wanda_prune(once.weights, x, 0.4);
    CHECK(once.weights == twice.weights);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(wanda_prune(Eigen::MatrixXd::Ones(2, 3), Eigen::MatrixXd::Ones(4, 2), 0.5), ShapeError);
    CHECK_THROWS_AS(wanda_prune(Eigen::MatrixXd::Ones(2, 3), Eigen::MatrixXd::Ones(4, 3), 1.0), DataError);
    CHECK_THROWS_AS(wanda_prune(Eigen::MatrixXd::Ones(2, 3), Eigen::MatrixXd::Ones(4, 3), -0.1), DataError);
}

TEST_CASE("residual sparsity") {
    CHECK(residual_sparsity(0.33, 0.20) == doctest::Approx(0.1625).epsilon(1e-12));
    CHECK(residual_sparsity(0.66, 0.20) == doctest::Approx(0.575).epsilon(1e-12));
    CHECK(residual_sparsity(0.10, 0.20) == 0.0);
    CHECK(residual_sparsity(0.20, 0.20) == 0.0);
    CHECK_THROWS_AS(residual_sparsity(0.5, 1.0), DataError);
}

TEST_CASE("mask hex round trip") {
    std::mt19937_64 rng(34);
    const auto r = wanda_prune(random_matrix(rng, 3, 5), random_matrix(rng, 4, 5), 0.4);
    const auto hex = r.mask.to_hex();
    CHECK(hex.size() == 4);
    const auto back = PruneMask::from_hex(3, 5, hex);
    CHECK(back.keep == r.mask.keep);
    CHECK_THROWS_AS(PruneMask::from_hex(3, 5, "fff"), DataError);
    CHECK_THROWS_AS(PruneMask::from_hex(3, 5, "ffff"), DataError);  // padding bit set
    CHECK_THROWS_AS(PruneMask::from_hex(1, 4, "G"), DataError);
}
