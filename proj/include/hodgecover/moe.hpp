#pragma once

// Deterministic synthetic sparse-MoE layer and the KL machinery built on it:
// frequency-weighted merges, pairwise and triplet merge barriers, REAP-style
// saliency and the calibration KL compression loss.
//
// Expert i is a linear map from one-hot context features to vocabulary
// logits: its output at context x is softmax(W_i[:, x]). The router scores
// expert i at context x with router_logits(i, x), keeps the top-`fanout`
// experts (ties to the lower index) and renormalizes a softmax over them.

#include "hodgecover/plan.hpp"
#include "hodgecover/simplicial.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace hodgecover {

/// Probability floor applied to the second KL argument.
inline constexpr double kKlFloor = 1e-12;
/// Below this total routing frequency a merge falls back to the plain average.
inline constexpr double kFrequencyGuard = 1e-12;

struct MoeLayer {
    int n = 0;
    int vocab = 0;
    int ctx = 0;
    int fanout = 1;
    std::uint64_t seed = 0;
    std::vector<Eigen::MatrixXd> expert_weights;  // n matrices, vocab x ctx
    Eigen::MatrixXd router_logits;                // n x ctx

    // Generator ground truth; empty for layers that were not synthesized.
    std::vector<int> cluster_of;
    std::vector<Triangle> planted_triads;

    /// Throws DataError on inconsistent sizes, fanout outside [1, n] or
    /// non-finite logits.
    void validate() const;
};

struct SynthParams {
    int n = 16;
    int vocab = 32;
    int ctx = 256;
    int fanout = 2;
    int clusters = 4;
    std::uint64_t seed = 0;
    double centroid_scale = 1.5;     // per-entry std of cluster centroids
    double noise = 0.35;             // per-entry std of expert deviation from its centroid
    double router_cluster_scale = 0.0;  // weight of a routing profile shared within a cluster
    double router_noise = 2.0;       // std of per-context routing jitter
    double router_bias = 1.5;        // std of a per-expert popularity offset on every context
    double discordant_prob = 0.0;    // chance of planting one discordant triad
    double triad_radius = 0.6;       // per-entry RMS offset of triad members from the centroid
};

/// Planted-structure generator: experts are cluster centroids plus noise, so
/// intra-cluster merges are cheap. Optionally plants one triad of experts at
/// 120-degree offsets around a centroid (pairwise close, jointly spread).
MoeLayer synth_layer(const SynthParams& params);

/// L layers with per-layer seeds derived from params.seed.
std::vector<MoeLayer> synth_model(const SynthParams& params, int layers);

/// Seed of layer `layer` in a model seeded with `model_seed`.
std::uint64_t layer_seed(std::uint64_t model_seed, int layer);

struct CalibCorpus {
    std::vector<int> contexts;
    std::uint64_t seed = 42;
    int alphabet = 256;

    std::size_t size() const { return contexts.size(); }
    /// Token count per context symbol.
    std::vector<int> histogram() const;
};

/// i.i.d. uniform context symbols.
CalibCorpus make_corpus(int size = 2048, int alphabet = 256, std::uint64_t seed = 42);

struct BarrierTable {
    int n = 0;
    Eigen::MatrixXd pairwise;                // symmetric, zero diagonal
    std::map<Triangle, double> triplet;      // sorted triples
    std::vector<double> routing_freq;        // r_i, sums to fanout

    double pair(int i, int j) const { return pairwise(i, j); }
    std::optional<double> triple(Triangle t) const;
};

struct SaliencyVector {
    std::vector<double> values;  // min-max normalized to [0, 1]
};

/// Softmax columns of every expert, computed once per layer.
class ExpertTable {
public:
    explicit ExpertTable(const MoeLayer& layer);
    /// vocab x ctx, column x is expert i's distribution at context x.
    const Eigen::MatrixXd& probs(int i) const { return probs_[static_cast<std::size_t>(i)]; }

private:
    std::vector<Eigen::MatrixXd> probs_;
};

/// An expert of a (possibly compressed) layer: output is a convex combination
/// of original experts, router logit is the log-sum-exp of `router_members`.
struct VirtualExpert {
    std::vector<int> members;
    std::vector<double> weights;
    std::vector<int> router_members;
};

using ExpertConfig = std::vector<VirtualExpert>;

/// The unmodified layer as an ExpertConfig.
ExpertConfig identity_config(int n);

/// Layer output distribution at `context` for an arbitrary expert configuration.
Eigen::VectorXd config_output(const MoeLayer& layer, const ExpertTable& table, const ExpertConfig& config,
                              int context);

Eigen::VectorXd layer_output(const MoeLayer& layer, int context);

/// Experts routed at `context` (top-fanout, ties to the lower index) and
/// their renormalized gates.
struct Routing {
    std::vector<int> experts;
    std::vector<double> gates;
};
Routing route(const MoeLayer& layer, int context);

std::vector<double> routing_frequencies(const MoeLayer& layer, const CalibCorpus& corpus);

/// Merge weights for a group: r_g / sum r, or uniform when sum r < 1e-12.
std::vector<double> merge_weights(const std::vector<int>& group, const std::vector<double>& freqs);

/// Frequency-weighted merge of 2 or 3 experts. Throws DataError otherwise.
VirtualExpert merge_experts(const MoeLayer& layer, const std::vector<int>& group, const std::vector<double>& freqs);

/// Distribution of a virtual expert at a context.
Eigen::VectorXd expert_output(const ExpertTable& table, const VirtualExpert& e, int context);

/// D_KL(p || max(q, floor)).
double kl_divergence(const Eigen::Ref<const Eigen::VectorXd>& p, const Eigen::Ref<const Eigen::VectorXd>& q,
                     double floor = kKlFloor);

/// Layer with `group` replaced by its frequency-weighted merge (other experts untouched).
ExpertConfig merged_config(int n, const std::vector<int>& group, const std::vector<double>& freqs);

double pairwise_barrier(const MoeLayer& layer, const CalibCorpus& corpus, int i, int j);
double triplet_barrier(const MoeLayer& layer, const CalibCorpus& corpus, int i, int j, int k);

struct SweepOptions {
    int threads = 0;  // 0: hardware concurrency
};

/// All C(n,2) pairwise barriers, the candidate triplet barriers and the
/// routing frequencies. Bit-identical for any thread count.
BarrierTable barrier_sweep(const MoeLayer& layer, const CalibCorpus& corpus,
                           const std::vector<Triangle>& triangle_candidates, SweepOptions options = {});

/// Adds triplet barriers for `triples` to an existing table.
void add_triplet_barriers(BarrierTable& table, const MoeLayer& layer, const CalibCorpus& corpus,
                          const std::vector<Triangle>& triples, SweepOptions options = {});

/// Gate-weighted output norm (1/|D|) sum_{x routes i} gate_i(x) |f_i(x)|_2,
/// min-max normalized. All-equal raw scores normalize to all zeros.
SaliencyVector saliency(const MoeLayer& layer, const CalibCorpus& corpus);
std::vector<double> raw_saliency(const MoeLayer& layer, const CalibCorpus& corpus);

/// Compressed layer implied by a plan. Survivors keep their own output;
/// merge groups use frequency-weighted outputs; router logits of absorbed
/// experts are folded into their target by log-sum-exp.
ExpertConfig plan_config(const SurvivorPlan& plan, const std::vector<double>& calib_freq);

/// Mean KL between the original layer and the compressed layer on `corpus`.
double compression_loss(const MoeLayer& layer, const CalibCorpus& corpus, const SurvivorPlan& plan,
                        const std::vector<double>& calib_freq);

/// As above, but the compressed layer draws expert weights from `compressed_source`
/// (e.g. survivors after weight pruning) while the reference stays `layer`.
double compression_loss(const MoeLayer& layer, const MoeLayer& compressed_source, const CalibCorpus& corpus,
                        const SurvivorPlan& plan, const std::vector<double>& calib_freq);

}  // namespace hodgecover
