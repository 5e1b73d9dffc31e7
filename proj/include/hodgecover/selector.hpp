#pragma once

// Coverage objective over harmonic-critical edges and triplet-critical
// triangles, its greedy maximizer, the Hodge-weighted router redirect,
// union-find merge baselines and cross-layer budget allocators.

#include "hodgecover/hodge.hpp"
#include "hodgecover/moe.hpp"
#include "hodgecover/plan.hpp"

#include <map>
#include <string>
#include <vector>

namespace hodgecover {

struct CoverageDefaults {
    static constexpr double p = 20.0;
    static constexpr double q_t = 20.0;
    static constexpr double lambda_e = 1.0;
    static constexpr double lambda_t = 0.5;
    static constexpr double alpha = 3.0;
    static constexpr double alpha_t = 1.0;
};

/// An edge is covered by S when either endpoint is in S, a triangle when any
/// vertex is.
struct CoverageInstance {
    int n = 0;
    std::vector<Edge> critical_edges;          // E*
    std::vector<Triangle> critical_triangles;  // T*
    std::vector<double> saliency;              // size n
    double lambda_e = CoverageDefaults::lambda_e;
    double lambda_t = CoverageDefaults::lambda_t;

    /// Incidence lists into critical_edges / critical_triangles.
    std::vector<std::vector<int>> edges_of;
    std::vector<std::vector<int>> triangles_of;

    /// Fills edges_of / triangles_of and checks indices.
    void index();
};

CoverageInstance make_coverage(int n, std::vector<Edge> critical_edges, std::vector<Triangle> critical_triangles,
                               std::vector<double> saliency, double lambda_e = CoverageDefaults::lambda_e,
                               double lambda_t = CoverageDefaults::lambda_t);

/// ceil(p * count / 100), guarded against round-off pushing an exact product up.
int top_percent_count(double p, std::size_t count);

/// E*: top-p% complex edges by |harm_e|. T*: top-q_T% of `triangles` by raw
/// triplet barrier. Ties go to the lexicographically smaller simplex.
CoverageInstance build_coverage(const Complex2& k, const HodgeDecomp& decomp, const BarrierTable& barriers,
                                const std::vector<Triangle>& triangles, const std::vector<double>& saliency,
                                double p = CoverageDefaults::p, double q_t = CoverageDefaults::q_t,
                                double lambda_e = CoverageDefaults::lambda_e,
                                double lambda_t = CoverageDefaults::lambda_t);

/// Phi(S) = sum sal + lambda_e |C_E|/|E*| + lambda_t |C_T|/|T*|, each ratio 0
/// when its universe is empty. Indices in S must be distinct.
double phi(const CoverageInstance& inst, const std::vector<int>& s);

/// |C_E(S)| and |C_T(S)|.
int covered_edge_count(const CoverageInstance& inst, const std::vector<int>& s);
int covered_triangle_count(const CoverageInstance& inst, const std::vector<int>& s);

/// Phi(S + i) - Phi(S).
double marginal_gain(const CoverageInstance& inst, const std::vector<int>& s, int i);

/// Plain greedy from S = protected set; ties to the lowest index. Sorted output.
std::vector<int> greedy_select(const CoverageInstance& inst, int k, const std::vector<int>& protected_set = {});

/// pi(i) = argmin_{j in S} b_ij (1 + alpha |harm_ij| / max(|b|, 1e-12)),
/// ties to the lowest survivor. harm_ij is 0 for pairs outside the complex.
std::map<int, int> hodge_redirect(const Eigen::MatrixXd& pairwise, const Complex2& k, const HodgeDecomp& decomp,
                                  double b_norm, const std::vector<int>& survivors,
                                  double alpha = CoverageDefaults::alpha);

enum class Ablation { no_triangle, greedy_barrier, triplet_penalty, triplet_hypergraph };

/// Throws DataError for unknown names.
Ablation parse_ablation(const std::string& name);
std::string to_string(Ablation a);

/// Union-find merge baselines. Edges are processed by ascending cost (ties
/// lexicographic) until k components remain; each component becomes a merge
/// group represented by its lowest member.
///   greedy_barrier:     cost b_ij
///   triplet_penalty:    cost b_ij (1 + alpha_t pbar_ij), pbar_ij the mean barrier of
///                       triples containing {i,j} divided by the layer's max triplet barrier
///   triplet_hypergraph: cost b_ij, merges vetoed when a new internal triple has
///                       barrier above the median triplet barrier (or is unknown)
/// no_triangle is a coverage variant and is rejected here.
SurvivorPlan union_find_plan(Ablation variant, const BarrierTable& barriers, int k,
                             double alpha_t = CoverageDefaults::alpha_t, int layer = 0);

/// Mean of the known triplet barriers containing edge {i, j}, scaled by the
/// largest triplet barrier; 0 when no triple contains the edge.
double triplet_penalty(const BarrierTable& barriers, int i, int j);

/// Median triplet barrier (midpoint for even counts), 0 for an empty table.
double triplet_median(const BarrierTable& barriers);

struct LayerBudget {
    double rate = 0.0;
    int total_drop = 0;          // R
    std::vector<int> drops;      // d_l
    std::vector<int> survivors;  // k_l
};

/// R = floor(r sum n_l); d_l = floor(R/L) + [l < R mod L]; drops above n_l - 1
/// are moved to the lowest-index layers with room. Throws DataError for r
/// outside [0, 1), empty or non-positive sizes, or R > sum (n_l - 1).
LayerBudget allocate_uniform(double rate, const std::vector<int>& sizes);

/// Drops proportional to sigma_l = max(1 - rho_harm_l, 1e-12), floored, then
/// one extra drop per lowest-index layer until the sum is R, then the same clamp.
LayerBudget allocate_weighted(double rate, const std::vector<int>& sizes, const std::vector<double>& rho_harm);

}  // namespace hodgecover
