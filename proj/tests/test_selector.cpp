#include "hodgecover/errors.hpp"
#include "hodgecover/selector.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace hodgecover;

namespace {

// Direct coverage objective: scans the universes instead of using incidence lists.
double phi_oracle(const CoverageInstance& inst, const std::vector<int>& s) {
    const std::set<int> in(s.begin(), s.end());
    double v = 0.0;
    for (int i : s) v += inst.saliency[i];
    if (!inst.critical_edges.empty()) {
        int c = 0;
        for (const auto& e : inst.critical_edges) c += (in.count(e[0]) || in.count(e[1])) ? 1 : 0;
        v += inst.lambda_e * c / static_cast<double>(inst.critical_edges.size());
    }
    if (!inst.critical_triangles.empty()) {
        int c = 0;
        for (const auto& t : inst.critical_triangles) c += (in.count(t[0]) || in.count(t[1]) || in.count(t[2])) ? 1 : 0;
        v += inst.lambda_t * c / static_cast<double>(inst.critical_triangles.size());
    }
    return v;
}

CoverageInstance random_instance(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Edge> edges;
    std::vector<Triangle> tris;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (unit(rng) < 0.3) edges.push_back({i, j});
            for (int l = j + 1; l < n; ++l)
                if (unit(rng) < 0.05) tris.push_back({i, j, l});
        }
    std::vector<double> sal(static_cast<std::size_t>(n));
    for (auto& s : sal) s = unit(rng);
    return make_coverage(n, edges, tris, sal, 2.0 * unit(rng), 2.0 * unit(rng));
}

BarrierTable table_from(const Eigen::MatrixXd& m) {
    BarrierTable t;
    t.n = static_cast<int>(m.rows());
    t.pairwise = m;
    t.routing_freq.assign(static_cast<std::size_t>(t.n), 1.0);
    return t;
}

}  // namespace

TEST_CASE("top percent counts") {
    CHECK(top_percent_count(100.0, 7) == 7);
    CHECK(top_percent_count(0.0, 7) == 0);
    CHECK(top_percent_count(20.0, 10) == 2);
    CHECK(top_percent_count(20.0, 11) == 3);
    CHECK(top_percent_count(20.0, 120) == 24);
    CHECK(top_percent_count(20.0, 0) == 0);
}

TEST_CASE("coverage objective agrees with the direct scan") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 50; ++t) {
        const auto inst = random_instance(rng, 9);
        CHECK(phi(inst, {}) == 0.0);
        std::vector<int> all(9);
        std::iota(all.begin(), all.end(), 0);
        double sal = 0.0;
        for (double s : inst.saliency) sal += s;
        const double full = sal + (inst.critical_edges.empty() ? 0.0 : inst.lambda_e) +
                            (inst.critical_triangles.empty() ? 0.0 : inst.lambda_t);
        CHECK(phi(inst, all) == doctest::Approx(full));
        for (const auto& s : oracle::subsets(9, 3)) CHECK(phi(inst, s) == doctest::Approx(phi_oracle(inst, s)));
    }
}

TEST_CASE("coverage objective is monotone and submodular") {
    std::mt19937_64 rng(22);
    std::uniform_int_distribution<int> pick(0, 9);
    std::bernoulli_distribution half(0.5);
    for (int t = 0; t < 10; ++t) {
        const auto inst = random_instance(rng, 10);
        int violations = 0;
        for (int sample = 0; sample < 1000; ++sample) {
            // S within B, i outside B.
            const int x = pick(rng);
            std::vector<int> a, b;
            for (int v = 0; v < 10; ++v) {
                if (v == x || !half(rng)) continue;
                b.push_back(v);
                if (half(rng)) a.push_back(v);
            }
            const double ga = marginal_gain(inst, a, x);
            const double gb = marginal_gain(inst, b, x);
            if (gb < -1e-12 || ga < gb - 1e-12 || phi(inst, b) < phi(inst, a) - 1e-12) ++violations;
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("without coverage terms greedy returns the top-k saliency") {
    const auto inst = make_coverage(6, {{0, 1}}, {{0, 1, 2}}, {0.1, 0.9, 0.4, 0.8, 0.0, 0.5}, 0.0, 0.0);
    CHECK(greedy_select(inst, 3) == std::vector<int>{1, 3, 5});
}

TEST_CASE("greedy ties go to the lowest index and respect the protected set") {
    const auto inst = make_coverage(5, {}, {}, std::vector<double>(5, 0.0));
    CHECK(greedy_select(inst, 2) == std::vector<int>{0, 1});
    CHECK(greedy_select(inst, 2, {4}) == std::vector<int>{0, 4});
}

TEST_CASE("greedy meets the approximation bound against exhaustive search") {
    std::mt19937_64 rng(23);
    const double bound = 1.0 - std::pow(0.75, 4);
    const auto all = oracle::subsets(10, 4);
    for (int t = 0; t < 60; ++t) {
        const auto inst = random_instance(rng, 10);
        double best = 0.0;
        for (const auto& s : all) best = std::max(best, phi_oracle(inst, s));
        CHECK(phi_oracle(inst, greedy_select(inst, 4)) >= bound * best - 1e-12);
    }
}

TEST_CASE("no fixed pair covers every perfect matching of K4") {
    const std::vector<std::vector<Edge>> matchings = {{{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}};
    for (const auto& s : oracle::subsets(4, 2)) {
        int worst = 2;
        for (const auto& m : matchings)
            worst = std::min(worst, covered_edge_count(make_coverage(4, m, {}, std::vector<double>(4, 0.0)), s));
        CHECK(worst == 1);
    }
    for (const auto& m : matchings) {
        const auto inst = make_coverage(4, m, {}, std::vector<double>(4, 0.0));
        CHECK(covered_edge_count(inst, greedy_select(inst, 2)) == 2);
    }
}

TEST_CASE("critical sets come from harmonic magnitude and triplet barrier") {
    const auto k = Complex2::complete_graph(4);
    HodgeDecomp d;
    d.harm.values = Eigen::VectorXd(6);
    d.harm.values << 0.1, -0.9, 0.3, 0.9, 0.0, -0.2;
    BarrierTable t = table_from(Eigen::MatrixXd::Ones(4, 4));
    t.triplet[{0, 1, 2}] = 0.3;
    t.triplet[{0, 1, 3}] = 0.7;
    t.triplet[{1, 2, 3}] = 0.7;
    const auto inst = build_coverage(k, d, t, {{0, 1, 2}, {0, 1, 3}, {1, 2, 3}}, std::vector<double>(4, 0.0), 40.0,
                                     40.0);
    // ceil(0.4 * 6) = 3 edges: |0.9| twice, then 0.3.
    CHECK(inst.critical_edges == std::vector<Edge>{{0, 2}, {0, 3}, {1, 2}});
    // ceil(0.4 * 3) = 2 triangles, tie broken lexicographically.
    CHECK(inst.critical_triangles == std::vector<Triangle>{{0, 1, 3}, {1, 2, 3}});
}

TEST_CASE("redirect without harmonic weight is the barrier argmin") {
    Eigen::MatrixXd b(4, 4);
    b << 0, 1, 2, 3,  //
        1, 0, 2, 1,   //
        2, 2, 0, 5,   //
        3, 1, 5, 0;
    const auto k = Complex2::complete_graph(4);
    HodgeDecomp d;
    d.harm.values = Eigen::VectorXd::Zero(6);
    const auto pi = hodge_redirect(b, k, d, 1.0, {0, 1});
    CHECK(pi.at(2) == 0);  // tie 2 vs 2 goes to the lower survivor
    CHECK(pi.at(3) == 1);
}

TEST_CASE("harmonic load steers the redirect") {
    Eigen::MatrixXd b = Eigen::MatrixXd::Ones(3, 3);
    b.diagonal().setZero();
    b(0, 2) = b(2, 0) = 0.9;
    const auto k = Complex2::complete_graph(3);
    HodgeDecomp d;
    d.harm.values = Eigen::Vector3d(0.0, 1.0, 0.0);  // load on edge (0,2)
    CHECK(hodge_redirect(b, k, d, 1.0, {0, 1}, 0.0).at(2) == 0);
    // 0.9 (1 + 3) > 1: the harmonic edge is avoided.
    CHECK(hodge_redirect(b, k, d, 1.0, {0, 1}, 3.0).at(2) == 1);
    CHECK_THROWS_AS(hodge_redirect(b, k, d, 1.0, {}), DataError);
}

TEST_CASE("greedy barrier merging recovers planted clusters") {
    // Two tight blocks {0,1,2} and {3,4,5}.
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(6, 6, 5.0);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (i / 3 == j / 3) m(i, j) = 0.1 * (1 + i + j);
    m.diagonal().setZero();
    const auto plan = union_find_plan(Ablation::greedy_barrier, table_from(m), 2);
    CHECK(plan.survivors == std::vector<int>{0, 3});
    CHECK(plan.groups == std::vector<std::vector<int>>{{0, 1, 2}, {3, 4, 5}});
    CHECK(plan.redirect.at(2) == 0);
    CHECK(plan.redirect.at(5) == 3);
    plan.validate();
}

TEST_CASE("triplet penalty reorders merges") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Ones(4, 4);
    m.diagonal().setZero();
    m(0, 1) = m(1, 0) = 0.5;
    m(2, 3) = m(3, 2) = 0.6;
    auto t = table_from(m);
    t.triplet[{0, 1, 2}] = 10.0;
    t.triplet[{1, 2, 3}] = 1.0;
    CHECK(triplet_penalty(t, 0, 1) == doctest::Approx(1.0));
    CHECK(triplet_penalty(t, 2, 3) == doctest::Approx(0.1));
    CHECK(triplet_penalty(t, 0, 3) == 0.0);
    CHECK(triplet_median(t) == doctest::Approx(5.5));
    // Plain order merges (0,1) first; with the penalty (2,3) costs 0.66 < 1.0.
    CHECK(union_find_plan(Ablation::greedy_barrier, t, 3).groups == std::vector<std::vector<int>>{{0, 1}, {2}, {3}});
    CHECK(union_find_plan(Ablation::triplet_penalty, t, 3).groups == std::vector<std::vector<int>>{{0}, {1}, {2, 3}});
}

TEST_CASE("hypergraph veto blocks expensive triples") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Ones(4, 4);
    m.diagonal().setZero();
    m(0, 1) = m(1, 0) = 0.1;
    m(1, 2) = m(2, 1) = 0.2;
    m(0, 3) = m(3, 0) = 0.3;
    auto t = table_from(m);
    t.triplet[{0, 1, 2}] = 9.0;  // vetoed
    t.triplet[{0, 1, 3}] = 1.0;
    t.triplet[{0, 2, 3}] = 1.0;
    t.triplet[{1, 2, 3}] = 1.0;
    const auto plan = union_find_plan(Ablation::triplet_hypergraph, t, 2);
    CHECK(plan.groups == std::vector<std::vector<int>>{{0, 1, 3}, {2}});
    CHECK(plan.params.count("relaxed") == 1);
    CHECK(plan.params.at("relaxed") == 0.0);
}

TEST_CASE("hypergraph falls back to unvetoed merging when stuck") {
    // No triplet barriers at all: every three-expert group is vetoed.
    Eigen::MatrixXd m = Eigen::MatrixXd::Ones(3, 3);
    m.diagonal().setZero();
    const auto plan = union_find_plan(Ablation::triplet_hypergraph, table_from(m), 1);
    CHECK(plan.groups == std::vector<std::vector<int>>{{0, 1, 2}});
    CHECK(plan.params.at("relaxed") == 1.0);
}

TEST_CASE("ablation names") {
    for (auto a : {Ablation::no_triangle, Ablation::greedy_barrier, Ablation::triplet_penalty,
                   Ablation::triplet_hypergraph})
        CHECK(parse_ablation(to_string(a)) == a);
    CHECK_THROWS_AS(parse_ablation("nope"), DataError);
    CHECK_THROWS_AS(union_find_plan(Ablation::no_triangle, table_from(Eigen::MatrixXd::Zero(3, 3)), 2), DataError);
}

TEST_CASE("uniform allocation examples") {
    const std::vector<int> sizes{8, 8, 8};
    auto b = allocate_uniform(0.5, sizes);
    CHECK(b.total_drop == 12);
    CHECK(b.drops == std::vector<int>{4, 4, 4});
    CHECK(b.survivors == std::vector<int>{4, 4, 4});
    b = allocate_uniform(10.0 / 24.0 + 1e-6, sizes);
    CHECK(b.drops == std::vector<int>{4, 3, 3});
    b = allocate_uniform(0.0, sizes);
    CHECK(b.survivors == sizes);
}

TEST_CASE("uniform allocation clamps small layers") {
    const auto b = allocate_uniform(0.6, {2, 10, 10});
    CHECK(b.total_drop == 13);
    CHECK(b.drops[0] == 1);
    CHECK(b.drops[1] + b.drops[2] == 12);
    CHECK_THROWS_AS(allocate_uniform(0.99, {2, 2}), DataError);
    CHECK_THROWS_AS(allocate_uniform(1.0, {8}), DataError);
    CHECK_THROWS_AS(allocate_uniform(-0.1, {8}), DataError);
}

TEST_CASE("weighted allocation") {
    const std::vector<int> sizes{8, 8, 8};
    const auto flat = allocate_weighted(0.5, sizes, {0.3, 0.3, 0.3});
    CHECK(flat.drops == allocate_uniform(0.5, sizes).drops);
    const auto skew = allocate_weighted(0.5, sizes, {0.0, 0.5, 0.5});
    CHECK(skew.drops == std::vector<int>{6, 3, 3});
    int total = 0;
    for (int d : skew.drops) total += d;
    CHECK(total == skew.total_drop);
    CHECK_THROWS_AS(allocate_weighted(0.5, sizes, {0.1}), ShapeError);
}
