#pragma once

// Triangle candidates (Stage A) and the Betti-maximizing threshold sweep
// (Stage B) that define a layer's mergeability complex.

#include "hodgecover/moe.hpp"
#include "hodgecover/simplicial.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace hodgecover {

inline constexpr int kDefaultTriangleCap = 500;
inline constexpr std::uint64_t kDefaultCandidateSeed = 42;
inline constexpr int kFiltrationGridPoints = 80;

struct BettiPoint {
    double tau = 0.0;
    int beta1 = 0;
    int edges = 0;
    int triangles = 0;
};

struct FiltrationResult {
    double tau_star = 0.0;
    std::vector<BettiPoint> betti_curve;
    Complex2 chosen_complex;           // K at tau*
    bool complete_edges_at_star = true;  // false is logged as an anomaly, not an error
};

/// Median of the strictly-upper pairwise entries; mean of the two middle
/// values for an even count.
double upper_median(const Eigen::MatrixXd& pairwise);

/// Triples whose three pairwise barriers are all <= the upper median. More
/// than `cap` qualifying triples are subsampled uniformly with `seed`.
/// Output is sorted; n < 3 gives an empty list.
std::vector<Triangle> stage_a_candidates(const Eigen::MatrixXd& pairwise, int cap = kDefaultTriangleCap,
                                         std::uint64_t seed = kDefaultCandidateSeed);
std::vector<Triangle> stage_a_candidates(const BarrierTable& barriers, int cap = kDefaultTriangleCap,
                                         std::uint64_t seed = kDefaultCandidateSeed);

/// Thresholded complex: edges with b_e <= tau and candidates with
/// b_sigma <= tau whose three edges survive.
Complex2 threshold_complex(const BarrierTable& barriers, const std::vector<Triangle>& candidates, double tau);

/// The uniform grid over [0, 1.1 max b_e] used by Stage B.
std::vector<double> filtration_grid(const Eigen::MatrixXd& pairwise, int points = kFiltrationGridPoints);

/// Sweeps the grid and keeps the threshold with the largest beta1, then the
/// most edges, then the larger tau. Throws DataError when a candidate has no
/// triplet barrier.
FiltrationResult stage_b_filtration(const BarrierTable& barriers, const std::vector<Triangle>& candidates,
                                    int threads = 1);

}  // namespace hodgecover
