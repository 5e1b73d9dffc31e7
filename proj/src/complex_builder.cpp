#include "hodgecover/complex_builder.hpp"

#include "hodgecover/detail/parallel.hpp"
#include "hodgecover/errors.hpp"

#include <algorithm>
#include <random>

namespace hodgecover {

double upper_median(const Eigen::MatrixXd& pairwise) {
    std::vector<double> values;
    for (Eigen::Index i = 0; i < pairwise.rows(); ++i)
        for (Eigen::Index j = i + 1; j < pairwise.cols(); ++j) values.push_back(pairwise(i, j));
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<Triangle> stage_a_candidates(const Eigen::MatrixXd& pairwise, int cap, std::uint64_t seed) {
    if (pairwise.rows() != pairwise.cols()) throw ShapeError("pairwise barrier matrix must be square");
    if (cap < 0) throw DataError("triangle cap must be non-negative");
    const int n = static_cast<int>(pairwise.rows());
    std::vector<Triangle> out;
    if (n < 3) return out;
    const double tau = upper_median(pairwise);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (pairwise(i, j) > tau) continue;
            for (int k = j + 1; k < n; ++k) {
                if (pairwise(i, k) <= tau && pairwise(j, k) <= tau) out.push_back({i, j, k});
            }
        }
    if (static_cast<int>(out.size()) > cap) {
        std::mt19937_64 rng(seed);
        std::shuffle(out.begin(), out.end(), rng);
        out.resize(static_cast<std::size_t>(cap));
        std::sort(out.begin(), out.end());
    }
    return out;
}

std::vector<Triangle> stage_a_candidates(const BarrierTable& barriers, int cap, std::uint64_t seed) {
    return stage_a_candidates(barriers.pairwise, cap, seed);
}

Complex2 threshold_complex(const BarrierTable& barriers, const std::vector<Triangle>& candidates, double tau) {
    Complex2 k;
    k.n = barriers.n;
    for (int i = 0; i < barriers.n; ++i)
        for (int j = i + 1; j < barriers.n; ++j)
            if (barriers.pairwise(i, j) <= tau) k.edges.push_back({i, j});
    for (const auto& t : candidates) {
        const auto b = barriers.triple(t);
        if (!b) throw DataError("candidate triangle has no triplet barrier");
        if (*b > tau) continue;
        if (barriers.pairwise(t[0], t[1]) <= tau && barriers.pairwise(t[0], t[2]) <= tau &&
            barriers.pairwise(t[1], t[2]) <= tau) {
            k.triangles.push_back(t);
        }
    }
    std::sort(k.triangles.begin(), k.triangles.end());
    k.triangles.erase(std::unique(k.triangles.begin(), k.triangles.end()), k.triangles.end());
    return k;
}

std::vector<double> filtration_grid(const Eigen::MatrixXd& pairwise, int points) {
    double top = 0.0;
    for (Eigen::Index i = 0; i < pairwise.rows(); ++i)
        for (Eigen::Index j = i + 1; j < pairwise.cols(); ++j) top = std::max(top, pairwise(i, j));
    const double hi = 1.1 * top;
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int g = 0; g < points; ++g) grid[g] = points == 1 ? hi : hi * g / (points - 1);
    if (points > 1) grid.back() = hi;
    return grid;
}

FiltrationResult stage_b_filtration(const BarrierTable& barriers, const std::vector<Triangle>& candidates,
                                    int threads) {
    for (const auto& t : candidates) {
        if (!barriers.triple(t)) throw DataError("candidate triangle has no triplet barrier");
    }
    const auto grid = filtration_grid(barriers.pairwise);
    FiltrationResult r;
    r.betti_curve.resize(grid.size());
    detail::parallel_for(grid.size(), threads, [&](std::size_t g) {
        const Complex2 k = threshold_complex(barriers, candidates, grid[g]);
        r.betti_curve[g] = BettiPoint{grid[g], betti1(k, build_incidence(k)), static_cast<int>(k.edges.size()),
                                      static_cast<int>(k.triangles.size())};
    });

    std::size_t best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g) {
        const auto& a = r.betti_curve[g];
        const auto& b = r.betti_curve[best];
        if (a.beta1 > b.beta1 || (a.beta1 == b.beta1 && a.edges >= b.edges)) best = g;
    }
    r.tau_star = grid[best];
    r.chosen_complex = threshold_complex(barriers, candidates, r.tau_star);
    const std::size_t complete = static_cast<std::size_t>(barriers.n) * (barriers.n - 1) / 2;
    r.complete_edges_at_star = r.chosen_complex.edges.size() == complete;
    return r;
}

}  // namespace hodgecover
