#pragma once

// One MoE layer end to end: barriers, triangle candidates, filtration,
// Hodge decomposition, saliency, and survivor plans for every method.

#include "hodgecover/complex_builder.hpp"
#include "hodgecover/diagnostics.hpp"
#include "hodgecover/hodge.hpp"
#include "hodgecover/moe.hpp"
#include "hodgecover/selector.hpp"
#include "hodgecover/wanda.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hodgecover {

struct SelectorParams {
    double p = CoverageDefaults::p;
    double q_t = CoverageDefaults::q_t;
    double lambda_e = CoverageDefaults::lambda_e;
    double lambda_t = CoverageDefaults::lambda_t;
    double alpha = CoverageDefaults::alpha;
    double alpha_t = CoverageDefaults::alpha_t;
    int triangle_cap = kDefaultTriangleCap;
    std::uint64_t candidate_seed = kDefaultCandidateSeed;
    int threads = 0;
};

struct LayerAnalysis {
    int layer = 0;
    BarrierTable barriers;            // pairwise plus every Stage-A candidate
    std::vector<Triangle> candidates;
    FiltrationResult filtration;
    Complex2 complex;                 // complete edges plus the triangles kept at tau*
    SignedIncidence incidence;
    EdgeSignal signal;                // pairwise barriers on complex edges
    HodgeDecomp decomp;
    SaliencyVector saliency;
};

LayerAnalysis analyze_layer(const MoeLayer& layer, const CalibCorpus& corpus, const SelectorParams& params,
                            int layer_index = 0);

LayerDiagnostics diagnose(const LayerAnalysis& a);

/// Methods: hodgecover, reap, random, no_triangle, greedy_barrier,
/// triplet_penalty, triplet_hypergraph. `seed` drives `random` only.
const std::vector<std::string>& known_methods();
bool is_known_method(const std::string& method);

SurvivorPlan plan_layer(const LayerAnalysis& a, const std::string& method, int k, const SelectorParams& params,
                        std::uint64_t seed = 0);

/// The coverage instance HodgeCover optimizes for this layer.
CoverageInstance coverage_for(const LayerAnalysis& a, const SelectorParams& params, bool with_triangles = true);

/// Column norms of the one-hot context activations: sqrt of each context's count.
Eigen::VectorXd activation_norms(const MoeLayer& layer, const CalibCorpus& corpus);

struct PrunedSurvivors {
    MoeLayer layer;                        // survivors pruned, everything else untouched
    std::map<int, PruneMask> masks;        // by survivor index
};

/// Row-wise pruning of every survivor's weight matrix at sparsity r2.
PrunedSurvivors prune_survivors(const MoeLayer& layer, const CalibCorpus& corpus, const SurvivorPlan& plan, double r2);

struct ModelCompression {
    std::vector<SurvivorPlan> plans;
    std::vector<double> layer_loss;
    double mean_loss = 0.0;
};

/// Plans every layer with `method` under `budget` and scores each on
/// `heldout`. r2 > 0 additionally prunes survivors (hybrid mode).
ModelCompression compress_model(const std::vector<MoeLayer>& layers, const std::vector<LayerAnalysis>& analyses,
                                const CalibCorpus& calib, const CalibCorpus& heldout, const std::string& method,
                                const LayerBudget& budget, const SelectorParams& params, std::uint64_t seed = 0,
                                double r2 = 0.0);

}  // namespace hodgecover
