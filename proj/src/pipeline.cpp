#include "hodgecover/pipeline.hpp"

#include "hodgecover/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace hodgecover {

LayerAnalysis analyze_layer(const MoeLayer& layer, const CalibCorpus& corpus, const SelectorParams& params,
                            int layer_index) {
    LayerAnalysis a;
    a.layer = layer_index;
    const SweepOptions sweep{params.threads};
    a.barriers = barrier_sweep(layer, corpus, {}, sweep);
    a.candidates = stage_a_candidates(a.barriers, params.triangle_cap, params.candidate_seed);
    add_triplet_barriers(a.barriers, layer, corpus, a.candidates, sweep);
    a.filtration = stage_b_filtration(a.barriers, a.candidates, params.threads);

    a.complex = Complex2::with_complete_edges(layer.n, a.filtration.chosen_complex.triangles);
    a.incidence = build_incidence(a.complex);
    a.signal.values.resize(static_cast<Eigen::Index>(a.complex.edges.size()));
    for (std::size_t e = 0; e < a.complex.edges.size(); ++e) {
        a.signal.values[static_cast<Eigen::Index>(e)] = a.barriers.pair(a.complex.edges[e][0], a.complex.edges[e][1]);
    }
    a.decomp = decompose(a.complex, a.incidence, a.signal);
    a.saliency = saliency(layer, corpus);
    return a;
}

LayerDiagnostics diagnose(const LayerAnalysis& a) {
    LayerDiagnostics d;
    d.layer = a.layer;
    d.rho_harm = a.decomp.energy_harm;
    d.rho_grad = a.decomp.energy_grad;
    d.rho_curl = a.decomp.energy_curl;
    d.delta = a.candidates.empty() ? 0.0 : discordance(a.barriers, a.candidates);
    d.beta1 = betti1(a.complex, a.incidence);
    return d;
}

const std::vector<std::string>& known_methods() {
    static const std::vector<std::string> methods = {"hodgecover",     "reap",            "random",
                                                     "no_triangle",    "greedy_barrier",  "triplet_penalty",
                                                     "triplet_hypergraph"};
    return methods;
}

bool is_known_method(const std::string& method) {
    const auto& m = known_methods();
    return std::find(m.begin(), m.end(), method) != m.end();
}

CoverageInstance coverage_for(const LayerAnalysis& a, const SelectorParams& params, bool with_triangles) {
    return build_coverage(a.complex, a.decomp, a.barriers, a.candidates, a.saliency.values, params.p, params.q_t,
                          params.lambda_e, with_triangles ? params.lambda_t : 0.0);
}

SurvivorPlan plan_layer(const LayerAnalysis& a, const std::string& method, int k, const SelectorParams& params,
                        std::uint64_t seed) {
    const int n = a.barriers.n;
    if (k < 1 || k > n) throw DataError("k must lie in [1, n]");
    if (method == "greedy_barrier" || method == "triplet_penalty" || method == "triplet_hypergraph") {
        return union_find_plan(parse_ablation(method), a.barriers, k, params.alpha_t, a.layer);
    }

    SurvivorPlan plan;
    plan.layer = a.layer;
    plan.n = n;
    plan.k = k;
    plan.method = method;
    plan.alpha = params.alpha;
    CoverageInstance inst;
    if (method == "hodgecover") {
        inst = coverage_for(a, params, true);
        plan.survivors = greedy_select(inst, k);
    } else if (method == "no_triangle") {
        inst = coverage_for(a, params, false);
        plan.survivors = greedy_select(inst, k);
    } else if (method == "reap") {
        inst = make_coverage(n, {}, {}, a.saliency.values, 0.0, 0.0);
        plan.survivors = greedy_select(inst, k);
    } else if (method == "random") {
        inst = coverage_for(a, params, true);
        std::vector<int> all(static_cast<std::size_t>(n));
        std::iota(all.begin(), all.end(), 0);
        std::mt19937_64 rng(seed);
        std::shuffle(all.begin(), all.end(), rng);
        plan.survivors.assign(all.begin(), all.begin() + k);
        std::sort(plan.survivors.begin(), plan.survivors.end());
        plan.params["seed"] = static_cast<double>(seed);
    } else {
        throw DataError("unknown method '" + method + "'");
    }
    plan.phi = phi(inst, plan.survivors);
    plan.redirect = hodge_redirect(a.barriers.pairwise, a.complex, a.decomp, a.signal.values.norm(), plan.survivors,
                                   params.alpha);
    plan.params["p"] = params.p;
    plan.params["q_t"] = params.q_t;
    plan.params["lambda_e"] = params.lambda_e;
    plan.params["lambda_t"] = method == "no_triangle" ? 0.0 : params.lambda_t;
    plan.validate();
    return plan;
}

Eigen::VectorXd activation_norms(const MoeLayer& layer, const CalibCorpus& corpus) {
    if (corpus.alphabet != layer.ctx) throw DataError("corpus alphabet does not match the layer's context count");
    const auto hist = corpus.histogram();
    Eigen::VectorXd norms(layer.ctx);
    for (int x = 0; x < layer.ctx; ++x) norms[x] = std::sqrt(static_cast<double>(hist[x]));
    return norms;
}

PrunedSurvivors prune_survivors(const MoeLayer& layer, const CalibCorpus& corpus, const SurvivorPlan& plan, double r2) {
    plan.validate();
    if (plan.n != layer.n) throw DataError("plan does not match the layer's expert count");
    const Eigen::VectorXd norms = activation_norms(layer, corpus);
    PrunedSurvivors out{layer, {}};
    for (int s : plan.survivors) {
        auto pruned = wanda_prune_with_norms(layer.expert_weights[s], norms, r2);
        out.layer.expert_weights[s] = std::move(pruned.weights);
        out.masks.emplace(s, std::move(pruned.mask));
    }
    return out;
}

ModelCompression compress_model(const std::vector<MoeLayer>& layers, const std::vector<LayerAnalysis>& analyses,
                                const CalibCorpus& calib, const CalibCorpus& heldout, const std::string& method,
                                const LayerBudget& budget, const SelectorParams& params, std::uint64_t seed,
                                double r2) {
    if (layers.size() != analyses.size() || layers.size() != budget.survivors.size()) {
        throw DataError("layers, analyses and budget disagree on the layer count");
    }
    if (!is_known_method(method)) throw DataError("unknown method '" + method + "'");
    ModelCompression out;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        SurvivorPlan plan = plan_layer(analyses[l], method, budget.survivors[l], params,
                                       layer_seed(seed, static_cast<int>(l)));
        const auto& freqs = analyses[l].barriers.routing_freq;
        double loss;
        if (r2 > 0.0) {
            const auto pruned = prune_survivors(layers[l], calib, plan, r2);
            loss = compression_loss(layers[l], pruned.layer, heldout, plan, freqs);
        } else {
            loss = compression_loss(layers[l], heldout, plan, freqs);
        }
        out.layer_loss.push_back(loss);
        out.plans.push_back(std::move(plan));
    }
    double total = 0.0;
    for (double v : out.layer_loss) total += v;
    out.mean_loss = out.layer_loss.empty() ? 0.0 : total / static_cast<double>(out.layer_loss.size());
    return out;
}

}  // namespace hodgecover
