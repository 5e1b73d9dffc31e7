#include "hodgecover/moe.hpp"

#include "hodgecover/detail/parallel.hpp"
#include "hodgecover/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace hodgecover {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Eigen::MatrixXd gaussian_matrix(std::mt19937_64& rng, int rows, int cols, double scale) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    // Column-major fill order is part of the reproducibility contract.
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) m(r, c) = scale * normal(rng);
    return m;
}

double log_sum_exp(const Eigen::MatrixXd& logits, const std::vector<int>& members, int context) {
    double top = -std::numeric_limits<double>::infinity();
    for (int m : members) top = std::max(top, logits(m, context));
    double acc = 0.0;
    for (int m : members) acc += std::exp(logits(m, context) - top);
    return top + std::log(acc);
}

/// Top-`fanout` indices of `scores` (ties to the lower index) with softmax gates.
Routing top_k_gates(const std::vector<double>& scores, int fanout) {
    const int count = static_cast<int>(scores.size());
    const int kept = std::min(fanout, count);
    std::vector<int> order(static_cast<std::size_t>(count));
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + kept, order.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    Routing r;
    r.experts.assign(order.begin(), order.begin() + kept);
    const double top = scores[r.experts.front()];
    double z = 0.0;
    r.gates.resize(static_cast<std::size_t>(kept));
    for (int s = 0; s < kept; ++s) {
        r.gates[s] = std::exp(scores[r.experts[s]] - top);
        z += r.gates[s];
    }
    for (auto& g : r.gates) g /= z;
    return r;
}

Routing route_config(const MoeLayer& layer, const ExpertConfig& config, int context) {
    std::vector<double> scores(config.size());
    for (std::size_t e = 0; e < config.size(); ++e) {
        const auto& rm = config[e].router_members;
        scores[e] = rm.size() == 1 ? layer.router_logits(rm.front(), context)
                                   : log_sum_exp(layer.router_logits, rm, context);
    }
    return top_k_gates(scores, layer.fanout);
}

/// Reference outputs for every context present in the histogram.
Eigen::MatrixXd reference_outputs(const MoeLayer& layer, const ExpertTable& table, const std::vector<int>& hist) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(layer.vocab, layer.ctx);
    const ExpertConfig id = identity_config(layer.n);
    for (int x = 0; x < layer.ctx; ++x) {
        if (hist[x] > 0) out.col(x) = config_output(layer, table, id, x);
    }
    return out;
}

double mean_kl(const MoeLayer& layer, const ExpertTable& table, const Eigen::MatrixXd& reference,
               const ExpertConfig& config, const std::vector<int>& hist, std::size_t total) {
    double acc = 0.0;
    for (int x = 0; x < layer.ctx; ++x) {
        if (hist[x] == 0) continue;
        acc += hist[x] * kl_divergence(reference.col(x), config_output(layer, table, config, x));
    }
    return acc / static_cast<double>(total);
}

void check_corpus(const MoeLayer& layer, const CalibCorpus& corpus) {
    if (corpus.contexts.empty()) throw DataError("empty corpus");
    for (int x : corpus.contexts) {
        if (x < 0 || x >= layer.ctx) throw DataError("corpus symbol " + std::to_string(x) + " outside context alphabet");
    }
}

void check_expert(const MoeLayer& layer, int i) {
    if (i < 0 || i >= layer.n) throw DataError("expert index " + std::to_string(i) + " out of range");
}

}  // namespace

void MoeLayer::validate() const {
    if (n < 1 || vocab < 1 || ctx < 1) throw DataError("layer sizes must be positive");
    if (fanout < 1 || fanout > n) throw DataError("fanout must lie in [1, n]");
    if (static_cast<int>(expert_weights.size()) != n) throw DataError("expected one weight matrix per expert");
    for (const auto& w : expert_weights) {
        if (w.rows() != vocab || w.cols() != ctx) throw DataError("expert weight matrix must be vocab x ctx");
        if (!w.allFinite()) throw DataError("non-finite expert weight");
    }
    if (router_logits.rows() != n || router_logits.cols() != ctx) throw DataError("router logits must be n x ctx");
    if (!router_logits.allFinite()) throw DataError("non-finite router logit");
}

std::uint64_t layer_seed(std::uint64_t model_seed, int layer) {
    return splitmix64(splitmix64(model_seed) + static_cast<std::uint64_t>(layer));
}

MoeLayer synth_layer(const SynthParams& p) {
    if (p.n < 1 || p.vocab < 2 || p.ctx < 1) throw DataError("invalid layer sizes");
    if (p.clusters < 1 || p.clusters > p.n) throw DataError("clusters must lie in [1, n]");
    if (p.fanout < 1 || p.fanout > p.n) throw DataError("fanout must lie in [1, n]");
    if (p.noise < 0.0 || p.centroid_scale < 0.0) throw DataError("scales must be non-negative");

    std::mt19937_64 rng(p.seed);
    MoeLayer layer;
    layer.n = p.n;
    layer.vocab = p.vocab;
    layer.ctx = p.ctx;
    layer.fanout = p.fanout;
    layer.seed = p.seed;

    layer.cluster_of.resize(static_cast<std::size_t>(p.n));
    for (int i = 0; i < p.n; ++i) layer.cluster_of[i] = i % p.clusters;
    std::shuffle(layer.cluster_of.begin(), layer.cluster_of.end(), rng);

    std::vector<Eigen::MatrixXd> centroids;
    std::vector<Eigen::VectorXd> router_profile;
    for (int c = 0; c < p.clusters; ++c) {
        centroids.push_back(gaussian_matrix(rng, p.vocab, p.ctx, p.centroid_scale));
        router_profile.push_back(gaussian_matrix(rng, p.ctx, 1, 1.0).col(0));
    }

    layer.router_logits.resize(p.n, p.ctx);
    for (int i = 0; i < p.n; ++i) {
        const int c = layer.cluster_of[i];
        layer.expert_weights.push_back(centroids[c] + gaussian_matrix(rng, p.vocab, p.ctx, p.noise));
        const Eigen::VectorXd jitter = gaussian_matrix(rng, p.ctx, 1, p.router_noise).col(0);
        const double bias = p.router_bias * std::normal_distribution<double>(0.0, 1.0)(rng);
        layer.router_logits.row(i) = (p.router_cluster_scale * router_profile[c] + jitter).transpose();
        layer.router_logits.row(i).array() += bias;
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (p.discordant_prob > 0.0 && unit(rng) < p.discordant_prob) {
        std::vector<int> eligible;
        for (int c = 0; c < p.clusters; ++c) {
            if (std::count(layer.cluster_of.begin(), layer.cluster_of.end(), c) >= 3) eligible.push_back(c);
        }
        if (!eligible.empty()) {
            const int c = eligible[std::uniform_int_distribution<std::size_t>(0, eligible.size() - 1)(rng)];
            std::vector<int> members;
            for (int i = 0; i < p.n; ++i)
                if (layer.cluster_of[i] == c) members.push_back(i);
            std::shuffle(members.begin(), members.end(), rng);
            Triangle triad{members[0], members[1], members[2]};
            std::sort(triad.begin(), triad.end());

            // Two orthonormal directions with per-entry RMS 1.
            const double entries = static_cast<double>(p.vocab) * p.ctx;
            Eigen::MatrixXd u = gaussian_matrix(rng, p.vocab, p.ctx, 1.0);
            Eigen::MatrixXd v = gaussian_matrix(rng, p.vocab, p.ctx, 1.0);
            u *= std::sqrt(entries) / u.norm();
            v -= (u.cwiseProduct(v).sum() / u.squaredNorm()) * u;
            v *= std::sqrt(entries) / v.norm();
            for (int s = 0; s < 3; ++s) {
                const double angle = 2.0 * std::numbers::pi * s / 3.0;
                layer.expert_weights[triad[s]] =
                    centroids[c] + p.triad_radius * (std::cos(angle) * u + std::sin(angle) * v);
            }
            layer.planted_triads.push_back(triad);
        }
    }
    return layer;
}

std::vector<MoeLayer> synth_model(const SynthParams& params, int layers) {
    std::vector<MoeLayer> out;
    out.reserve(static_cast<std::size_t>(std::max(layers, 0)));
    for (int l = 0; l < layers; ++l) {
        SynthParams p = params;
        p.seed = layer_seed(params.seed, l);
        out.push_back(synth_layer(p));
    }
    return out;
}

std::vector<int> CalibCorpus::histogram() const {
    std::vector<int> hist(static_cast<std::size_t>(alphabet), 0);
    for (int x : contexts) ++hist[x];
    return hist;
}

CalibCorpus make_corpus(int size, int alphabet, std::uint64_t seed) {
    if (size < 1 || alphabet < 1) throw DataError("corpus size and alphabet must be positive");
    CalibCorpus c;
    c.seed = seed;
    c.alphabet = alphabet;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> symbol(0, alphabet - 1);
    c.contexts.resize(static_cast<std::size_t>(size));
    for (auto& x : c.contexts) x = symbol(rng);
    return c;
}

std::optional<double> BarrierTable::triple(Triangle t) const {
    std::sort(t.begin(), t.end());
    auto it = triplet.find(t);
    if (it == triplet.end()) return std::nullopt;
    return it->second;
}

ExpertTable::ExpertTable(const MoeLayer& layer) {
    probs_.reserve(static_cast<std::size_t>(layer.n));
    for (const auto& w : layer.expert_weights) {
        Eigen::MatrixXd p(w.rows(), w.cols());
        for (Eigen::Index x = 0; x < w.cols(); ++x) {
            const double top = w.col(x).maxCoeff();
            p.col(x) = (w.col(x).array() - top).exp().matrix();
            p.col(x) /= p.col(x).sum();
        }
        probs_.push_back(std::move(p));
    }
}

ExpertConfig identity_config(int n) {
    ExpertConfig c(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) c[i] = VirtualExpert{{i}, {1.0}, {i}};
    return c;
}

Eigen::VectorXd expert_output(const ExpertTable& table, const VirtualExpert& e, int context) {
    Eigen::VectorXd out = e.weights[0] * table.probs(e.members[0]).col(context);
    for (std::size_t m = 1; m < e.members.size(); ++m) out += e.weights[m] * table.probs(e.members[m]).col(context);
    return out;
}

Eigen::VectorXd config_output(const MoeLayer& layer, const ExpertTable& table, const ExpertConfig& config,
                              int context) {
    const Routing r = route_config(layer, config, context);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(layer.vocab);
    for (std::size_t s = 0; s < r.experts.size(); ++s) {
        out += r.gates[s] * expert_output(table, config[r.experts[s]], context);
    }
    return out;
}

Eigen::VectorXd layer_output(const MoeLayer& layer, int context) {
    if (context < 0 || context >= layer.ctx) throw DataError("context symbol out of range");
    const ExpertTable table(layer);
    return config_output(layer, table, identity_config(layer.n), context);
}

Routing route(const MoeLayer& layer, int context) {
    if (context < 0 || context >= layer.ctx) throw DataError("context symbol out of range");
    return route_config(layer, identity_config(layer.n), context);
}

std::vector<double> routing_frequencies(const MoeLayer& layer, const CalibCorpus& corpus) {
    check_corpus(layer, corpus);
    const auto hist = corpus.histogram();
    std::vector<double> counts(static_cast<std::size_t>(layer.n), 0.0);
    const ExpertConfig id = identity_config(layer.n);
    for (int x = 0; x < layer.ctx; ++x) {
        if (hist[x] == 0) continue;
        for (int e : route_config(layer, id, x).experts) counts[e] += hist[x];
    }
    for (auto& c : counts) c /= static_cast<double>(corpus.size());
    return counts;
}

std::vector<double> merge_weights(const std::vector<int>& group, const std::vector<double>& freqs) {
    double total = 0.0;
    for (int g : group) total += freqs[g];
    std::vector<double> w(group.size());
    if (total < kFrequencyGuard) {
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(group.size()));
    } else {
        for (std::size_t m = 0; m < group.size(); ++m) w[m] = freqs[group[m]] / total;
    }
    return w;
}

VirtualExpert merge_experts(const MoeLayer& layer, const std::vector<int>& group, const std::vector<double>& freqs) {
    if (group.size() != 2 && group.size() != 3) throw DataError("merge group must have 2 or 3 experts");
    if (static_cast<int>(freqs.size()) != layer.n) throw DataError("one routing frequency per expert expected");
    std::vector<int> sorted = group;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw DataError("merge group has duplicates");
    for (int g : sorted) check_expert(layer, g);
    return VirtualExpert{sorted, merge_weights(sorted, freqs), sorted};
}

double kl_divergence(const Eigen::Ref<const Eigen::VectorXd>& p, const Eigen::Ref<const Eigen::VectorXd>& q,
                     double floor) {
    double acc = 0.0;
    for (Eigen::Index v = 0; v < p.size(); ++v) {
        if (p[v] > 0.0) acc += p[v] * std::log(p[v] / std::max(q[v], floor));
    }
    return acc;
}

ExpertConfig merged_config(int n, const std::vector<int>& group, const std::vector<double>& freqs) {
    std::vector<int> sorted = group;
    std::sort(sorted.begin(), sorted.end());
    ExpertConfig c;
    c.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (i == sorted.front()) {
            c.push_back(VirtualExpert{sorted, merge_weights(sorted, freqs), sorted});
        } else if (!std::binary_search(sorted.begin(), sorted.end(), i)) {
            c.push_back(VirtualExpert{{i}, {1.0}, {i}});
        }
    }
    return c;
}

namespace {

struct BarrierContext {
    const MoeLayer& layer;
    ExpertTable table;
    std::vector<int> hist;
    std::size_t total;
    Eigen::MatrixXd reference;
    std::vector<double> freqs;

    BarrierContext(const MoeLayer& l, const CalibCorpus& corpus)
        : layer(l), table(l), hist(corpus.histogram()), total(corpus.size()) {
        reference = reference_outputs(layer, table, hist);
        freqs = routing_frequencies(layer, corpus);
    }

    double barrier(const std::vector<int>& group) const {
        return mean_kl(layer, table, reference, merged_config(layer.n, group, freqs), hist, total);
    }
};

}  // namespace

double pairwise_barrier(const MoeLayer& layer, const CalibCorpus& corpus, int i, int j) {
    check_expert(layer, i);
    check_expert(layer, j);
    if (i == j) throw DataError("pairwise barrier needs two distinct experts");
    check_corpus(layer, corpus);
    return BarrierContext(layer, corpus).barrier({i, j});
}

double triplet_barrier(const MoeLayer& layer, const CalibCorpus& corpus, int i, int j, int k) {
    for (int e : {i, j, k}) check_expert(layer, e);
    if (i == j || j == k || i == k) throw DataError("triplet barrier needs three distinct experts");
    check_corpus(layer, corpus);
    return BarrierContext(layer, corpus).barrier({i, j, k});
}

void add_triplet_barriers(BarrierTable& table, const MoeLayer& layer, const CalibCorpus& corpus,
                          const std::vector<Triangle>& triples, SweepOptions options) {
    check_corpus(layer, corpus);
    const BarrierContext ctx(layer, corpus);
    std::vector<double> values(triples.size());
    detail::parallel_for(triples.size(), options.threads, [&](std::size_t t) {
        Triangle tri = triples[t];
        std::sort(tri.begin(), tri.end());
        values[t] = ctx.barrier({tri[0], tri[1], tri[2]});
    });
    for (std::size_t t = 0; t < triples.size(); ++t) {
        Triangle tri = triples[t];
        std::sort(tri.begin(), tri.end());
        table.triplet[tri] = values[t];
    }
}

BarrierTable barrier_sweep(const MoeLayer& layer, const CalibCorpus& corpus,
                           const std::vector<Triangle>& triangle_candidates, SweepOptions options) {
    layer.validate();
    check_corpus(layer, corpus);
    const BarrierContext ctx(layer, corpus);

    std::vector<Edge> pairs;
    for (int i = 0; i < layer.n; ++i)
        for (int j = i + 1; j < layer.n; ++j) pairs.push_back({i, j});
    std::vector<double> values(pairs.size());
    detail::parallel_for(pairs.size(), options.threads,
                         [&](std::size_t e) { values[e] = ctx.barrier({pairs[e][0], pairs[e][1]}); });

    BarrierTable table;
    table.n = layer.n;
    table.routing_freq = ctx.freqs;
    table.pairwise = Eigen::MatrixXd::Zero(layer.n, layer.n);
    for (std::size_t e = 0; e < pairs.size(); ++e) {
        table.pairwise(pairs[e][0], pairs[e][1]) = values[e];
        table.pairwise(pairs[e][1], pairs[e][0]) = values[e];
    }
    add_triplet_barriers(table, layer, corpus, triangle_candidates, options);
    return table;
}

std::vector<double> raw_saliency(const MoeLayer& layer, const CalibCorpus& corpus) {
    check_corpus(layer, corpus);
    const ExpertTable table(layer);
    const auto hist = corpus.histogram();
    const ExpertConfig id = identity_config(layer.n);
    std::vector<double> raw(static_cast<std::size_t>(layer.n), 0.0);
    for (int x = 0; x < layer.ctx; ++x) {
        if (hist[x] == 0) continue;
        const Routing r = route_config(layer, id, x);
        for (std::size_t s = 0; s < r.experts.size(); ++s) {
            const int e = r.experts[s];
            raw[e] += hist[x] * r.gates[s] * table.probs(e).col(x).norm();
        }
    }
    for (auto& v : raw) v /= static_cast<double>(corpus.size());
    return raw;
}

SaliencyVector saliency(const MoeLayer& layer, const CalibCorpus& corpus) {
    const auto raw = raw_saliency(layer, corpus);
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    SaliencyVector s;
    s.values.assign(raw.size(), 0.0);
    const double span = *hi - *lo;
    if (span > 0.0) {
        for (std::size_t i = 0; i < raw.size(); ++i) s.values[i] = (raw[i] - *lo) / span;
    }
    return s;
}

ExpertConfig plan_config(const SurvivorPlan& plan, const std::vector<double>& calib_freq) {
    plan.validate();
    if (static_cast<int>(calib_freq.size()) != plan.n) throw DataError("one routing frequency per expert expected");
    ExpertConfig config;
    if (plan.is_merge_plan()) {
        for (const auto& group : plan.groups) {
            config.push_back(VirtualExpert{group, merge_weights(group, calib_freq), group});
        }
        return config;
    }
    for (int s : plan.survivors) {
        VirtualExpert e{{s}, {1.0}, {s}};
        for (const auto& [dropped, target] : plan.redirect) {
            if (target == s) e.router_members.push_back(dropped);
        }
        std::sort(e.router_members.begin(), e.router_members.end());
        config.push_back(std::move(e));
    }
    return config;
}

double compression_loss(const MoeLayer& layer, const MoeLayer& compressed_source, const CalibCorpus& corpus,
                        const SurvivorPlan& plan, const std::vector<double>& calib_freq) {
    layer.validate();
    compressed_source.validate();
    if (plan.n != layer.n || compressed_source.n != layer.n) throw DataError("plan does not match the layer's expert count");
    for (int s : plan.survivors) check_expert(layer, s);
    check_corpus(layer, corpus);
    const ExpertConfig config = plan_config(plan, calib_freq);

    const ExpertTable reference_table(layer);
    const ExpertTable source_table(compressed_source);
    const auto hist = corpus.histogram();
    const Eigen::MatrixXd reference = reference_outputs(layer, reference_table, hist);

    // Routing uses the (unchanged) router of the reference layer.
    MoeLayer routed = compressed_source;
    routed.router_logits = layer.router_logits;
    return mean_kl(routed, source_table, reference, config, hist, corpus.size());
}

double compression_loss(const MoeLayer& layer, const CalibCorpus& corpus, const SurvivorPlan& plan,
                        const std::vector<double>& calib_freq) {
    return compression_loss(layer, layer, corpus, plan, calib_freq);
}

}  // namespace hodgecover
