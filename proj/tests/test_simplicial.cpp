#include "hodgecover/errors.hpp"
#include "hodgecover/simplicial.hpp"
#include "hodgecover/verify.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace hodgecover;

namespace {

Complex2 make(int n, std::vector<Edge> e, std::vector<Triangle> t = {}) {
    Complex2 k;
    k.n = n;
    k.edges = std::move(e);
    k.triangles = std::move(t);
    return k;
}

int kernel_l1(const Complex2& k) {
    const Eigen::MatrixXd b1 = oracle::boundary1(k).cast<double>();
    const Eigen::MatrixXd b2 = oracle::boundary2(k).cast<double>();
    return oracle::kernel_dim(b1.transpose() * b1 + b2 * b2.transpose());
}

}  // namespace

TEST_CASE("single edge boundary is head minus tail") {
    const auto inc = build_incidence(make(2, {{0, 1}}));
    const Eigen::MatrixXi b1(inc.b1);
    CHECK(b1(0, 0) == -1);
    CHECK(b1(1, 0) == 1);
}

TEST_CASE("triangle boundary signs on jk, ik, ij") {
    const auto k = make(3, {{0, 1}, {0, 2}, {1, 2}}, {{0, 1, 2}});
    const Eigen::MatrixXi b2(build_incidence(k).b2);
    CHECK(b2(2, 0) == 1);   // (1,2)
    CHECK(b2(1, 0) == -1);  // (0,2)
    CHECK(b2(0, 0) == 1);   // (0,1)
}

TEST_CASE("incidence matches the dense transcription") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        const auto k = random_complex(rng, 3 + t % 12, 0.6, 0.5);
        const auto inc = build_incidence(k);
        CHECK(Eigen::MatrixXi(inc.b1) == oracle::boundary1(k));
        CHECK(Eigen::MatrixXi(inc.b2) == oracle::boundary2(k));
    }
}

TEST_CASE("column structure of the boundary operators") {
    std::mt19937_64 rng(4);
    const auto k = random_complex(rng, 12, 0.7, 0.6);
    const auto inc = build_incidence(k);
    const Eigen::MatrixXi b1(inc.b1);
    const Eigen::MatrixXi b2(inc.b2);
    for (Eigen::Index c = 0; c < b1.cols(); ++c) {
        CHECK(b1.col(c).sum() == 0);
        CHECK(b1.col(c).cwiseAbs().sum() == 2);
    }
    for (Eigen::Index c = 0; c < b2.cols(); ++c) {
        CHECK(b2.col(c).cwiseAbs().sum() == 3);
        CHECK(b2.col(c).sum() == 1);
    }
}

TEST_CASE("chain identity holds on random complexes") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 100; ++t) {
        const auto k = random_complex(rng, 3 + t % 18, 0.5, 0.5);
        const auto inc = build_incidence(k);
        CHECK((Eigen::MatrixXi(inc.b1) * Eigen::MatrixXi(inc.b2)).cwiseAbs().sum() == 0);
    }
}

TEST_CASE("missing face is reported with the triangle") {
    const auto k = make(3, {{0, 1}, {1, 2}}, {{0, 1, 2}});
    CHECK_THROWS_WITH_AS(build_incidence(k), doctest::Contains("[0, 1, 2]"), StructuralError);
}

TEST_CASE("ordering and range violations are structural errors") {
    CHECK_THROWS_AS(build_incidence(make(3, {{1, 2}, {0, 1}})), StructuralError);
    CHECK_THROWS_AS(build_incidence(make(3, {{0, 1}, {0, 1}})), StructuralError);
    CHECK_THROWS_AS(build_incidence(make(2, {{0, 2}})), StructuralError);
    CHECK_THROWS_AS(build_incidence(make(3, {{1, 0}})), StructuralError);
    CHECK_THROWS_AS(make(3, {{0, 1}, {0, 2}, {1, 2}}, {{0, 2, 1}}).validate(), StructuralError);
}

TEST_CASE("laplacians are symmetric PSD") {
    std::mt19937_64 rng(6);
    const auto k = random_complex(rng, 10, 0.6, 0.5);
    const auto l = laplacians(build_incidence(k));
    for (const Eigen::MatrixXd* m : {&l.l0, &l.l1, &l.l2}) {
        CHECK((*m - m->transpose()).cwiseAbs().maxCoeff() == 0.0);
        if (m->rows() == 0) continue;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*m);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
}

TEST_CASE("small kernel dimensions") {
    const auto k3 = Complex2::complete_graph(3);
    const auto filled = Complex2::with_complete_edges(3, {{0, 1, 2}});
    const auto k4 = Complex2::complete_graph(4);
    CHECK(harmonic_dimension_dense(build_incidence(filled)) == 0);
    CHECK(harmonic_dimension_dense(build_incidence(k3)) == 1);
    CHECK(harmonic_dimension_dense(build_incidence(k4)) == 3);
    CHECK(kernel_l1(k4) == 3);
    CHECK(betti1(k4, build_incidence(k4)) == 3);
}

TEST_CASE("complete 2-skeleton has no cycles") {
    const auto k = Complex2::complete_2_skeleton(5);
    CHECK(k.triangles.size() == 10);
    CHECK(betti1(k, build_incidence(k)) == 0);
}

TEST_CASE("euler-poincare count agrees with the kernel oracle") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 60; ++t) {
        const auto k = random_complex(rng, 3 + t % 15, 0.5, 0.4);
        const auto inc = build_incidence(k);
        const int expected = kernel_l1(k);
        CHECK(betti1(k, inc) == expected);
        CHECK(harmonic_dimension_dense(inc) == expected);
        CHECK(harmonic_dimension_split(inc) == expected);
    }
}

TEST_CASE("isolated vertices count as components") {
    const auto k = make(5, {{0, 1}, {0, 2}, {1, 2}});
    CHECK(count_components(k) == 3);
    CHECK(betti1(k, build_incidence(k)) == 1);
}

TEST_CASE("harmonic kernel vectors lie in ker d1 and ker d2^T") {
    std::mt19937_64 rng(8);
    const auto k = random_complex(rng, 9, 0.7, 0.3);
    const auto inc = build_incidence(k);
    const auto l = laplacians(inc);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l.l1);
    const Eigen::MatrixXd b1 = oracle::boundary1(k).cast<double>();
    const Eigen::MatrixXd b2 = oracle::boundary2(k).cast<double>();
    const double tol = rank_tolerance(l.l1.rows(), l.l1.cols(), es.eigenvalues().cwiseAbs().maxCoeff());
    int checked = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (es.eigenvalues()[i] > tol) continue;
        const Eigen::VectorXd h = es.eigenvectors().col(i);
        CHECK((b1 * h).norm() < 1e-8);
        CHECK((b2.transpose() * h).norm() < 1e-8);
        ++checked;
    }
    CHECK(checked == betti1(k, inc));
}

TEST_CASE("edge deletion changes beta1 depending on the edge's role") {
    // K4 with one filled triangle: 6 - 4 + 1 - 1 = 2 independent cycles.
    const auto base = Complex2::with_complete_edges(4, {{0, 1, 2}});
    CHECK(betti1(base, build_incidence(base)) == 2);

    // Deleting an edge of the filled triangle also removes the triangle: beta1 stays 2.
    const auto no01 = make(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK(betti1(no01, build_incidence(no01)) == 2);

    // Deleting a cycle edge away from the triangle drops beta1 to 1.
    const auto no03 = make(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}, {{0, 1, 2}});
    CHECK(betti1(no03, build_incidence(no03)) == 1);

    // Deleting a bridge splits a component and leaves beta1 unchanged.
    const auto tail = make(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}});
    const auto cut = make(5, {{0, 1}, {0, 2}, {1, 2}, {3, 4}});
    CHECK(betti1(tail, build_incidence(tail)) == 1);
    CHECK(betti1(cut, build_incidence(cut)) == 1);
    CHECK(count_components(cut) == count_components(tail) + 1);
}

TEST_CASE("large complex with full-rank triangles") {
    std::mt19937_64 rng(42);
    const int n = 256;
    std::vector<Triangle> tris;
    std::uniform_int_distribution<int> v(0, n - 1);
    while (tris.size() < 500) {
        Triangle t{v(rng), v(rng), v(rng)};
        std::sort(t.begin(), t.end());
        if (t[0] == t[1] || t[1] == t[2]) continue;
        if (std::find(tris.begin(), tris.end(), t) == tris.end()) tris.push_back(t);
    }
    const auto k = Complex2::with_complete_edges(n, tris);
    REQUIRE(k.edges.size() == 32640);
    REQUIRE(k.triangles.size() == 500);
    const auto inc = build_incidence(k);
    CHECK(betti1(k, inc) == 31885);
    CHECK(harmonic_dimension(inc) == 31885);
}

TEST_CASE("edge lookup") {
    const auto k = Complex2::complete_graph(5);
    CHECK(k.edge_index(3, 1) == k.edge_index(1, 3));
    CHECK(*k.edge_index(0, 1) == 0);
    CHECK(*k.edge_index(3, 4) == 9);
    CHECK_FALSE(k.edge_index(2, 2).has_value());
}
