#include "hodgecover/selector.hpp"

#include "hodgecover/detail/union_find.hpp"
#include "hodgecover/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace hodgecover {

namespace {

std::vector<char> membership(int n, const std::vector<int>& s) {
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    for (int i : s) {
        if (i < 0 || i >= n) throw DataError("expert index " + std::to_string(i) + " out of range");
        if (in[i]) throw DataError("duplicate expert " + std::to_string(i) + " in set");
        in[i] = 1;
    }
    return in;
}

int count_covered_edges(const CoverageInstance& inst, const std::vector<char>& in) {
    int c = 0;
    for (const auto& [a, b] : inst.critical_edges) c += (in[a] || in[b]) ? 1 : 0;
    return c;
}

int count_covered_triangles(const CoverageInstance& inst, const std::vector<char>& in) {
    int c = 0;
    for (const auto& t : inst.critical_triangles) c += (in[t[0]] || in[t[1]] || in[t[2]]) ? 1 : 0;
    return c;
}

double edge_weight(const CoverageInstance& inst) {
    return inst.critical_edges.empty() ? 0.0 : inst.lambda_e / static_cast<double>(inst.critical_edges.size());
}

double triangle_weight(const CoverageInstance& inst) {
    return inst.critical_triangles.empty() ? 0.0
                                           : inst.lambda_t / static_cast<double>(inst.critical_triangles.size());
}

/// Indices of `count` largest scores; ties keep the earlier index.
std::vector<int> top_indices(const std::vector<double>& scores, int count) {
    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] > scores[b]; });
    order.resize(static_cast<std::size_t>(count));
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace

void CoverageInstance::index() {
    if (static_cast<int>(saliency.size()) != n) throw ShapeError("saliency must have one entry per expert");
    if (lambda_e < 0.0 || lambda_t < 0.0) throw DataError("coverage weights must be non-negative");
    edges_of.assign(static_cast<std::size_t>(n), {});
    triangles_of.assign(static_cast<std::size_t>(n), {});
    for (std::size_t e = 0; e < critical_edges.size(); ++e) {
        for (int v : critical_edges[e]) {
            if (v < 0 || v >= n) throw DataError("critical edge vertex out of range");
            edges_of[v].push_back(static_cast<int>(e));
        }
    }
    for (std::size_t t = 0; t < critical_triangles.size(); ++t) {
        for (int v : critical_triangles[t]) {
            if (v < 0 || v >= n) throw DataError("critical triangle vertex out of range");
            triangles_of[v].push_back(static_cast<int>(t));
        }
    }
}

CoverageInstance make_coverage(int n, std::vector<Edge> critical_edges, std::vector<Triangle> critical_triangles,
                               std::vector<double> saliency, double lambda_e, double lambda_t) {
    CoverageInstance inst;
    inst.n = n;
    inst.critical_edges = std::move(critical_edges);
    inst.critical_triangles = std::move(critical_triangles);
    inst.saliency = std::move(saliency);
    inst.lambda_e = lambda_e;
    inst.lambda_t = lambda_t;
    inst.index();
    return inst;
}

int top_percent_count(double p, std::size_t count) {
    if (!(p >= 0.0 && p <= 100.0)) throw DataError("percentage must lie in [0, 100]");
    if (count == 0) return 0;
    const double exact = p * static_cast<double>(count) / 100.0;
    return std::min(static_cast<int>(count), static_cast<int>(std::ceil(exact - 1e-9)));
}

CoverageInstance build_coverage(const Complex2& k, const HodgeDecomp& decomp, const BarrierTable& barriers,
                                const std::vector<Triangle>& triangles, const std::vector<double>& saliency,
                                double p, double q_t, double lambda_e, double lambda_t) {
    if (decomp.harm.values.size() != static_cast<Eigen::Index>(k.edges.size())) {
        throw ShapeError("decomposition does not match the complex");
    }
    std::vector<double> harm(k.edges.size());
    for (std::size_t e = 0; e < harm.size(); ++e) harm[e] = std::abs(decomp.harm.values[static_cast<Eigen::Index>(e)]);
    std::vector<Edge> ecrit;
    for (int e : top_indices(harm, top_percent_count(p, harm.size()))) ecrit.push_back(k.edges[e]);

    std::vector<Triangle> sorted = triangles;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<double> tb(sorted.size());
    for (std::size_t t = 0; t < sorted.size(); ++t) {
        const auto b = barriers.triple(sorted[t]);
        if (!b) throw DataError("triangle has no triplet barrier");
        tb[t] = *b;
    }
    std::vector<Triangle> tcrit;
    for (int t : top_indices(tb, top_percent_count(q_t, tb.size()))) tcrit.push_back(sorted[t]);

    return make_coverage(k.n, std::move(ecrit), std::move(tcrit), saliency, lambda_e, lambda_t);
}

int covered_edge_count(const CoverageInstance& inst, const std::vector<int>& s) {
    return count_covered_edges(inst, membership(inst.n, s));
}

int covered_triangle_count(const CoverageInstance& inst, const std::vector<int>& s) {
    return count_covered_triangles(inst, membership(inst.n, s));
}

double phi(const CoverageInstance& inst, const std::vector<int>& s) {
    const auto in = membership(inst.n, s);
    double sal = 0.0;
    for (int i : s) sal += inst.saliency[i];
    return sal + edge_weight(inst) * count_covered_edges(inst, in) +
           triangle_weight(inst) * count_covered_triangles(inst, in);
}

double marginal_gain(const CoverageInstance& inst, const std::vector<int>& s, int i) {
    auto with = s;
    if (std::find(s.begin(), s.end(), i) != s.end()) return 0.0;
    with.push_back(i);
    return phi(inst, with) - phi(inst, s);
}

std::vector<int> greedy_select(const CoverageInstance& inst, int k, const std::vector<int>& protected_set) {
    if (k < 0 || k > inst.n) throw DataError("k must lie in [0, n]");
    if (static_cast<int>(protected_set.size()) > k) throw DataError("protected set larger than k");
    auto in = membership(inst.n, protected_set);
    std::vector<char> edge_cov(inst.critical_edges.size(), 0);
    std::vector<char> tri_cov(inst.critical_triangles.size(), 0);
    auto take = [&](int i) {
        in[i] = 1;
        for (int e : inst.edges_of[i]) edge_cov[e] = 1;
        for (int t : inst.triangles_of[i]) tri_cov[t] = 1;
    };
    std::vector<int> s = protected_set;
    for (int i : s) take(i);

    const double we = edge_weight(inst);
    const double wt = triangle_weight(inst);
    while (static_cast<int>(s.size()) < k) {
        int best = -1;
        double best_gain = 0.0;
        for (int i = 0; i < inst.n; ++i) {
            if (in[i]) continue;
            int new_edges = 0;
            int new_tris = 0;
            for (int e : inst.edges_of[i]) new_edges += edge_cov[e] ? 0 : 1;
            for (int t : inst.triangles_of[i]) new_tris += tri_cov[t] ? 0 : 1;
            const double gain = inst.saliency[i] + we * new_edges + wt * new_tris;
            if (best < 0 || gain > best_gain) {
                best = i;
                best_gain = gain;
            }
        }
        take(best);
        s.push_back(best);
    }
    std::sort(s.begin(), s.end());
    return s;
}

std::map<int, int> hodge_redirect(const Eigen::MatrixXd& pairwise, const Complex2& k, const HodgeDecomp& decomp,
                                  double b_norm, const std::vector<int>& survivors, double alpha) {
    if (survivors.empty()) throw DataError("redirect needs at least one survivor");
    if (alpha < 0.0) throw DataError("alpha must be non-negative");
    const int n = static_cast<int>(pairwise.rows());
    const auto in = membership(n, survivors);
    std::vector<int> sorted = survivors;
    std::sort(sorted.begin(), sorted.end());
    const double scale = b_norm > 0.0 ? alpha / std::max(b_norm, 1e-12) : 0.0;

    std::map<int, int> pi;
    for (int i = 0; i < n; ++i) {
        if (in[i]) continue;
        int best = -1;
        double best_cost = 0.0;
        for (int j : sorted) {
            double harm = 0.0;
            if (auto e = k.edge_index(i, j); e && decomp.harm.values.size() > 0) {
                harm = std::abs(decomp.harm.values[static_cast<Eigen::Index>(*e)]);
            }
            const double cost = pairwise(i, j) * (1.0 + scale * harm);
            if (best < 0 || cost < best_cost) {
                best = j;
                best_cost = cost;
            }
        }
        pi[i] = best;
    }
    return pi;
}

Ablation parse_ablation(const std::string& name) {
    if (name == "no_triangle") return Ablation::no_triangle;
    if (name == "greedy_barrier") return Ablation::greedy_barrier;
    if (name == "triplet_penalty") return Ablation::triplet_penalty;
    if (name == "triplet_hypergraph") return Ablation::triplet_hypergraph;
    throw DataError("unknown ablation variant '" + name + "'");
}

std::string to_string(Ablation a) {
    switch (a) {
        case Ablation::no_triangle: return "no_triangle";
        case Ablation::greedy_barrier: return "greedy_barrier";
        case Ablation::triplet_penalty: return "triplet_penalty";
        case Ablation::triplet_hypergraph: return "triplet_hypergraph";
    }
    return "unknown";
}

double triplet_median(const BarrierTable& barriers) {
    std::vector<double> v;
    for (const auto& [t, b] : barriers.triplet) v.push_back(b);
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double triplet_penalty(const BarrierTable& barriers, int i, int j) {
    double top = 0.0;
    for (const auto& [t, b] : barriers.triplet) top = std::max(top, b);
    if (top <= 0.0) return 0.0;
    double sum = 0.0;
    int count = 0;
    for (const auto& [t, b] : barriers.triplet) {
        const bool has_i = t[0] == i || t[1] == i || t[2] == i;
        const bool has_j = t[0] == j || t[1] == j || t[2] == j;
        if (has_i && has_j) {
            sum += b;
            ++count;
        }
    }
    return count == 0 ? 0.0 : sum / count / top;
}

SurvivorPlan union_find_plan(Ablation variant, const BarrierTable& barriers, int k, double alpha_t, int layer) {
    if (variant == Ablation::no_triangle) throw DataError("no_triangle is a coverage variant, not a merge variant");
    const int n = barriers.n;
    if (k < 1 || k > n) throw DataError("k must lie in [1, n]");
    if (alpha_t < 0.0) throw DataError("alpha_t must be non-negative");

    std::vector<std::tuple<double, int, int>> order;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double cost = barriers.pairwise(i, j);
            if (variant == Ablation::triplet_penalty) cost *= 1.0 + alpha_t * triplet_penalty(barriers, i, j);
            order.emplace_back(cost, i, j);
        }
    std::sort(order.begin(), order.end());

    detail::UnionFind uf(n);
    const double tau_t = triplet_median(barriers);
    auto members = [&](int root) {
        std::vector<int> out;
        for (int v = 0; v < n; ++v)
            if (uf.find(v) == root) out.push_back(v);
        return out;
    };
    auto vetoed = [&](int a, int b) {
        const auto ma = members(uf.find(a));
        const auto mb = members(uf.find(b));
        if (ma.size() + mb.size() < 3) return false;
        auto bad = [&](int x, int y, int z) {
            const auto t = barriers.triple({x, y, z});
            return !t || *t > tau_t;
        };
        for (std::size_t p = 0; p < ma.size(); ++p)
            for (int y : mb) {
                for (std::size_t q = p + 1; q < ma.size(); ++q)
                    if (bad(ma[p], ma[q], y)) return true;
            }
        for (std::size_t p = 0; p < mb.size(); ++p)
            for (int x : ma) {
                for (std::size_t q = p + 1; q < mb.size(); ++q)
                    if (bad(mb[p], mb[q], x)) return true;
            }
        return false;
    };

    bool relaxed = false;
    for (int pass = 0; pass < 2 && uf.components() > k; ++pass) {
        const bool use_veto = variant == Ablation::triplet_hypergraph && pass == 0;
        if (pass == 1) {
            if (variant != Ablation::triplet_hypergraph) break;
            relaxed = true;
        }
        for (const auto& [cost, i, j] : order) {
            if (uf.components() <= k) break;
            if (uf.find(i) == uf.find(j)) continue;
            if (use_veto && vetoed(i, j)) continue;
            uf.unite(i, j);
        }
    }

    SurvivorPlan plan;
    plan.layer = layer;
    plan.n = n;
    plan.k = k;
    plan.method = to_string(variant);
    std::map<int, std::vector<int>> by_root;
    for (int v = 0; v < n; ++v) by_root[uf.find(v)].push_back(v);
    for (auto& [root, group] : by_root) plan.groups.push_back(group);
    std::sort(plan.groups.begin(), plan.groups.end());
    for (const auto& g : plan.groups) {
        plan.survivors.push_back(g.front());
        for (std::size_t m = 1; m < g.size(); ++m) plan.redirect[g[m]] = g.front();
    }
    plan.params["alpha_t"] = alpha_t;
    if (variant == Ablation::triplet_hypergraph) {
        plan.params["tau_t"] = tau_t;
        plan.params["relaxed"] = relaxed ? 1.0 : 0.0;
    }
    plan.validate();
    return plan;
}

namespace {

void check_sizes(double rate, const std::vector<int>& sizes) {
    if (!(rate >= 0.0 && rate < 1.0)) throw DataError("rate must lie in [0, 1)");
    if (sizes.empty()) throw DataError("no layers to allocate over");
    for (int n : sizes)
        if (n < 1) throw DataError("layer sizes must be positive");
}

LayerBudget finish(double rate, int total, std::vector<int> drops, const std::vector<int>& sizes) {
    int capacity = 0;
    for (int n : sizes) capacity += n - 1;
    if (total > capacity) {
        throw DataError("drop budget " + std::to_string(total) + " exceeds the " + std::to_string(capacity) +
                        " experts that can be removed while keeping one per layer");
    }
    int excess = 0;
    for (std::size_t l = 0; l < drops.size(); ++l) {
        if (drops[l] > sizes[l] - 1) {
            excess += drops[l] - (sizes[l] - 1);
            drops[l] = sizes[l] - 1;
        }
    }
    while (excess > 0) {
        for (std::size_t l = 0; l < drops.size() && excess > 0; ++l) {
            if (drops[l] < sizes[l] - 1) {
                ++drops[l];
                --excess;
            }
        }
    }
    LayerBudget b;
    b.rate = rate;
    b.total_drop = total;
    b.drops = drops;
    for (std::size_t l = 0; l < drops.size(); ++l) b.survivors.push_back(sizes[l] - drops[l]);
    return b;
}

int budget(double rate, const std::vector<int>& sizes) {
    long long total = 0;
    for (int n : sizes) total += n;
    return static_cast<int>(std::floor(rate * static_cast<double>(total)));
}

}  // namespace

LayerBudget allocate_uniform(double rate, const std::vector<int>& sizes) {
    check_sizes(rate, sizes);
    const int r = budget(rate, sizes);
    const int layers = static_cast<int>(sizes.size());
    std::vector<int> drops(sizes.size());
    for (int l = 0; l < layers; ++l) drops[l] = r / layers + (l < r % layers ? 1 : 0);
    return finish(rate, r, std::move(drops), sizes);
}

LayerBudget allocate_weighted(double rate, const std::vector<int>& sizes, const std::vector<double>& rho_harm) {
    check_sizes(rate, sizes);
    if (rho_harm.size() != sizes.size()) throw ShapeError("one harmonic fraction per layer expected");
    const int r = budget(rate, sizes);
    std::vector<double> sigma(sizes.size());
    double total = 0.0;
    for (std::size_t l = 0; l < sizes.size(); ++l) {
        if (!std::isfinite(rho_harm[l])) throw DataError("non-finite harmonic fraction");
        sigma[l] = std::max(1.0 - rho_harm[l], 1e-12);
        total += sigma[l];
    }
    std::vector<int> drops(sizes.size());
    int assigned = 0;
    for (std::size_t l = 0; l < sizes.size(); ++l) {
        drops[l] = static_cast<int>(std::floor(r * sigma[l] / total + 1e-9));
        assigned += drops[l];
    }
    while (assigned > r) {
        // Round-off can only overshoot by the 1e-9 guard; take back from the last layers.
        for (std::size_t l = sizes.size(); l-- > 0 && assigned > r;) {
            if (drops[l] > 0) {
                --drops[l];
                --assigned;
            }
        }
    }
    for (std::size_t l = 0; assigned < r; l = (l + 1) % sizes.size()) {
        ++drops[l];
        ++assigned;
    }
    return finish(rate, r, std::move(drops), sizes);
}

}  // namespace hodgecover
