#include "hodgecover/verify.hpp"

#include "hodgecover/detail/parallel.hpp"
#include "hodgecover/diagnostics.hpp"
#include "hodgecover/errors.hpp"
#include "hodgecover/hodge.hpp"
#include "hodgecover/moe.hpp"
#include "hodgecover/pipeline.hpp"
#include "hodgecover/selector.hpp"
#include "hodgecover/wanda.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace hodgecover {

namespace {

using Clock = std::chrono::steady_clock;

template <class Fn>
CheckResult timed(int id, std::string name, double budget, Fn&& body) {
    CheckResult r;
    r.id = id;
    r.name = std::move(name);
    r.budget_seconds = budget;
    const auto start = Clock::now();
    try {
        std::ostringstream detail;
        const bool ok = body(detail);
        r.detail = detail.str();
        r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        r.pass = ok;
        if (ok && budget > 0.0 && r.seconds > budget) {
            r.pass = false;
            r.detail += "; exceeded time budget";
        }
    } catch (const std::exception& e) {
        r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    return r;
}

Eigen::VectorXd normal_vector(std::mt19937_64& rng, Eigen::Index size) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd v(size);
    for (Eigen::Index i = 0; i < size; ++i) v[i] = normal(rng);
    return v;
}

std::vector<Complex2> random_complexes(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> size(3, 20);
    std::uniform_real_distribution<double> prob(0.2, 0.9);
    std::vector<Complex2> out;
    for (int c = 0; c < count; ++c) {
        const double ep = prob(rng);
        const double tp = prob(rng);
        out.push_back(random_complex(rng, size(rng), ep, tp));
    }
    return out;
}

/// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(k));
    std::iota(cur.begin(), cur.end(), 0);
    if (k > n) return out;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

SynthParams planted_params(std::uint64_t seed) {
    SynthParams p;
    p.n = 16;
    p.clusters = 4;
    p.seed = seed;
    p.discordant_prob = 0.3;
    return p;
}

}  // namespace

Complex2 random_complex(std::mt19937_64& rng, int n, double edge_prob, double tri_prob) {
    std::bernoulli_distribution keep_edge(edge_prob);
    std::bernoulli_distribution keep_tri(tri_prob);
    Complex2 k;
    k.n = n;
    std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            // The first triangle is always present so every complex exercises d2.
            const bool forced = i < 3 && j < 3 && n >= 3;
            if (forced || keep_edge(rng)) {
                k.edges.push_back({i, j});
                adj[i][j] = adj[j][i] = 1;
            }
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (!adj[i][j]) continue;
            for (int l = j + 1; l < n; ++l) {
                if (!adj[i][l] || !adj[j][l]) continue;
                const bool forced = i == 0 && j == 1 && l == 2;
                if (forced || keep_tri(rng)) k.triangles.push_back({i, j, l});
            }
        }
    return k;
}

CheckResult check_chain_identity(const IncidenceBuilder& builder) {
    return timed(1, "chain identity d1 d2 = 0", 1.0, [&](std::ostream& os) {
        int bad = 0;
        std::size_t triangles = 0;
        for (const auto& k : random_complexes(101, 100)) {
            const SignedIncidence inc = builder(k);
            triangles += k.triangles.size();
            const IntSparse product = inc.b1 * inc.b2;
            bool zero = product.rows() == k.n && product.cols() == static_cast<Eigen::Index>(k.triangles.size());
            for (Eigen::Index c = 0; c < product.outerSize() && zero; ++c)
                for (IntSparse::InnerIterator it(product, c); it; ++it)
                    if (it.value() != 0) zero = false;
            if (!zero) ++bad;
        }
        os << "100 complexes, " << triangles << " triangles, " << bad << " with nonzero d1 d2";
        return bad == 0;
    });
}

CheckResult check_hodge_orthogonality() {
    return timed(2, "hodge orthogonality and reconstruction", 10.0, [](std::ostream& os) {
        std::mt19937_64 rng(202);
        double worst_inner = 0.0;
        double worst_recon = 0.0;
        int bad = 0;
        for (const auto& k : random_complexes(202, 100)) {
            const auto inc = build_incidence(k);
            const EdgeSignal b{normal_vector(rng, static_cast<Eigen::Index>(k.edges.size()))};
            const auto d = decompose(k, inc, b);
            const double e = b.values.squaredNorm();
            const double inner = std::max({std::abs(d.grad.values.dot(d.curl.values)),
                                           std::abs(d.grad.values.dot(d.harm.values)),
                                           std::abs(d.curl.values.dot(d.harm.values))}) / e;
            const double recon = (b.values - d.grad.values - d.curl.values - d.harm.values).norm() / std::sqrt(e);
            worst_inner = std::max(worst_inner, inner);
            worst_recon = std::max(worst_recon, recon);
            if (!(inner < 1e-8 && recon < 1e-8)) ++bad;
        }
        os << "worst inner/|b|^2 " << worst_inner << ", worst reconstruction " << worst_recon << ", failures " << bad;
        return bad == 0;
    });
}

CheckResult check_betti_agreement(bool include_large_pin) {
    return timed(3, "betti agreement", 120.0, [&](std::ostream& os) {
        std::vector<Complex2> cases = random_complexes(303, 100);
        cases.push_back(Complex2::complete_2_skeleton(6));
        cases.push_back(Complex2::complete_graph(7));
        cases.push_back(Complex2::with_complete_edges(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}));
        int mismatches = 0;
        for (const auto& k : cases) {
            const auto inc = build_incidence(k);
            if (betti1(k, inc) != harmonic_dimension_dense(inc)) ++mismatches;
        }
        os << cases.size() << " complexes, " << mismatches << " Euler-Poincare/eigen mismatches";
        bool ok = mismatches == 0;
        if (include_large_pin) {
            const int n = 256;
            std::mt19937_64 rng(42);
            std::vector<Triangle> all;
            all.reserve(static_cast<std::size_t>(n) * (n - 1) * (n - 2) / 6);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    for (int l = j + 1; l < n; ++l) all.push_back({i, j, l});
            std::shuffle(all.begin(), all.end(), rng);
            all.resize(500);
            const Complex2 k = Complex2::with_complete_edges(n, std::move(all));
            const auto inc = build_incidence(k);
            const int ep = betti1(k, inc);
            const int eig = harmonic_dimension(inc);
            os << "; n=256 |E|=" << k.edges.size() << " |T|=" << k.triangles.size() << ": Euler-Poincare " << ep
               << ", eigen " << eig << ", expected 31885";
            ok = ok && ep == 31885 && eig == 31885;
        }
        return ok;
    });
}

CheckResult check_residual_minimality() {
    return timed(4, "residual minimality", 10.0, [](std::ostream& os) {
        std::mt19937_64 rng(404);
        std::uniform_int_distribution<int> size(4, 14);
        double worst = 0.0;
        int bad = 0;
        for (int t = 0; t < 50; ++t) {
            const int n = size(rng);
            const Complex2 k = random_complex(rng, n, 0.6, 0.3);
            const auto inc = build_incidence(k);
            const EdgeSignal b{normal_vector(rng, static_cast<Eigen::Index>(k.edges.size()))};
            const auto d = decompose(k, inc, b);
            const auto rep = residual_certificate(k, inc, b, d);
            const double scale = std::max(rep.harm_energy, rep.residual_lsq);
            const double floor = 1e-12 * b.values.squaredNorm();
            const double rel = scale > floor ? std::abs(rep.residual_lsq - rep.harm_energy) / scale : 0.0;
            worst = std::max(worst, rel);
            if (rel > 1e-7) ++bad;
        }
        os << "50 instances, worst relative gap " << worst;
        return bad == 0;
    });
}

CheckResult check_greedy_guarantee() {
    return timed(5, "greedy approximation guarantee", 30.0, [](std::ostream& os) {
        const int n = 10;
        const int k = 4;
        const double bound = 1.0 - std::pow(1.0 - 1.0 / k, k);
        const auto all = subsets(n, k);
        std::mt19937_64 rng(505);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::bernoulli_distribution coin(0.25);
        int violations = 0;
        double worst = 1.0;
        for (int t = 0; t < 200; ++t) {
            std::vector<Edge> edges;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (coin(rng)) edges.push_back({i, j});
            std::vector<Triangle> tris;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    for (int l = j + 1; l < n; ++l)
                        if (unit(rng) < 0.05) tris.push_back({i, j, l});
            std::vector<double> sal(static_cast<std::size_t>(n));
            for (auto& s : sal) s = unit(rng) * unit(rng);
            const auto inst = make_coverage(n, edges, tris, sal, 2.0 * unit(rng), 2.0 * unit(rng));
            double best = 0.0;
            for (const auto& s : all) best = std::max(best, phi(inst, s));
            const double greedy = phi(inst, greedy_select(inst, k));
            const double ratio = best > 0.0 ? greedy / best : 1.0;
            worst = std::min(worst, ratio);
            if (greedy < bound * best) ++violations;
        }
        os << "200 instances, worst greedy/optimum " << worst << " vs bound " << bound << ", violations "
           << violations;
        return violations == 0;
    });
}

CheckResult check_k4_inexpressibility() {
    return timed(6, "K4 inexpressibility", 1.0, [](std::ostream& os) {
        const std::vector<std::vector<Edge>> matchings = {{{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}};
        // Coverage as the integer pair (covered, |E*|); every |E*| here is 2.
        int static_worst_min = 2;
        int static_worst_max = 0;
        for (const auto& s : subsets(4, 2)) {
            int worst = 2;
            for (const auto& m : matchings) {
                const auto inst = make_coverage(4, m, {}, std::vector<double>(4, 0.0), 1.0, 0.0);
                worst = std::min(worst, covered_edge_count(inst, s));
            }
            static_worst_min = std::min(static_worst_min, worst);
            static_worst_max = std::max(static_worst_max, worst);
        }
        bool greedy_full = true;
        for (const auto& m : matchings) {
            const auto inst = make_coverage(4, m, {}, std::vector<double>(4, 0.0), 1.0, 0.0);
            greedy_full = greedy_full && covered_edge_count(inst, greedy_select(inst, 2)) == 2;
        }
        os << "every fixed top-2 set has worst-case coverage " << static_worst_min << "/2";
        if (static_worst_max != static_worst_min) os << " to " << static_worst_max << "/2";
        os << "; greedy covers " << (greedy_full ? "2/2" : "less than 2/2") << " on all three matchings";
        return static_worst_min == 1 && static_worst_max == 1 && greedy_full;
    });
}

CheckResult check_merge_guard() {
    return timed(7, "zero-frequency merge guard", 5.0, [](std::ostream& os) {
        SynthParams p;
        p.n = 6;
        p.vocab = 16;
        p.ctx = 64;
        p.clusters = 3;
        p.seed = 707;
        MoeLayer layer = synth_layer(p);
        layer.router_logits.row(4).setConstant(-50.0);
        layer.router_logits.row(5).setConstant(-60.0);
        const CalibCorpus corpus = make_corpus(512, layer.ctx, 42);
        std::vector<Triangle> triples;
        for (const auto& s : subsets(layer.n, 3)) triples.push_back({s[0], s[1], s[2]});
        const BarrierTable t = barrier_sweep(layer, corpus, triples);

        bool finite = t.pairwise.allFinite() && (t.pairwise.array() >= -1e-12).all();
        for (const auto& [tri, b] : t.triplet) finite = finite && std::isfinite(b) && b >= -1e-12;
        for (double r : t.routing_freq) finite = finite && std::isfinite(r);
        const bool unrouted = t.routing_freq[4] == 0.0 && t.routing_freq[5] == 0.0;

        const auto w = merge_weights({4, 5}, t.routing_freq);
        const ExpertTable table(layer);
        const VirtualExpert merged = merge_experts(layer, {4, 5}, t.routing_freq);
        bool exact_average = w == std::vector<double>{0.5, 0.5};
        for (int x = 0; x < layer.ctx && exact_average; ++x) {
            const Eigen::VectorXd expected = 0.5 * table.probs(4).col(x) + 0.5 * table.probs(5).col(x);
            exact_average = expected == expert_output(table, merged, x);
        }
        os << "finite table " << (finite ? "yes" : "no") << ", unrouted experts " << (unrouted ? "yes" : "no")
           << ", zero-frequency pair weights " << w[0] << "/" << w[1]
           << (exact_average ? " (exact average)" : " (not the unweighted average)");
        return finite && unrouted && exact_average;
    });
}

CheckResult check_residual_sparsity() {
    return timed(8, "residual sparsity protocol", 0.0, [](std::ostream& os) {
        const double a = residual_sparsity(0.33, 0.20);
        const double b = residual_sparsity(0.66, 0.20);
        os << std::setprecision(17) << "r2(0.33) = " << a << ", r2(0.66) = " << b;
        return std::abs(a - 0.1625) <= 1e-12 && std::abs(b - 0.575) <= 1e-12;
    });
}

CheckResult check_wanda() {
    return timed(9, "wanda keep counts and exhaustive oracle", 1.0, [](std::ostream& os) {
        // r2 as exact fractions so the expected count is integer arithmetic.
        struct Rate {
            double r2;
            int keep_num;
            int den;
        };
        const std::vector<Rate> rates = {{0.0, 1, 1}, {0.1625, 67, 80}, {0.575, 17, 40}, {0.9, 1, 10}};
        std::mt19937_64 rng(909);
        int bad_counts = 0;
        int cases = 0;
        for (int b = 4; b <= 64; ++b) {
            const Eigen::MatrixXd w = Eigen::MatrixXd::NullaryExpr(3, b, [&] { return normal_vector(rng, 1)[0]; });
            const Eigen::MatrixXd x = Eigen::MatrixXd::NullaryExpr(8, b, [&] { return normal_vector(rng, 1)[0]; });
            for (const auto& r : rates) {
                const int expected = (r.keep_num * b + r.den - 1) / r.den;
                const auto res = wanda_prune(w, x, r.r2);
                for (int row = 0; row < 3; ++row)
                    if (res.mask.kept_in_row(row) != expected) ++bad_counts;
                ++cases;
            }
        }

        Eigen::MatrixXd w(2, 4);
        w << 0.9, -0.2, 0.5, -1.1, 0.3, 0.8, -0.7, 0.05;
        Eigen::MatrixXd x(3, 4);
        x << 1.0, 0.5, 2.0, 0.1, -1.0, 0.5, 0.0, 0.2, 0.5, 1.5, 1.0, 0.3;
        const auto res = wanda_prune(w, x, 0.5);
        bool oracle_match = true;
        for (int row = 0; row < 2; ++row) {
            double best = -1.0;
            std::vector<int> best_set;
            for (const auto& s : subsets(4, 2)) {
                double score = 0.0;
                for (int c : s) score += std::abs(w(row, c)) * x.col(c).norm();
                if (score > best) {
                    best = score;
                    best_set = s;
                }
            }
            for (int c = 0; c < 4; ++c) {
                const bool kept = std::find(best_set.begin(), best_set.end(), c) != best_set.end();
                oracle_match = oracle_match && res.mask.at(row, c) == kept &&
                               res.weights(row, c) == (kept ? w(row, c) : 0.0);
            }
        }
        os << cases << " (b, r2) cases with " << bad_counts << " wrong row counts; 2x4 instance "
           << (oracle_match ? "matches" : "differs from") << " the exhaustive keep-set oracle";
        return bad_counts == 0 && oracle_match;
    });
}

CheckResult check_allocators() {
    return timed(10, "allocator conservation", 5.0, [](std::ostream& os) {
        std::mt19937_64 rng(1010);
        std::uniform_int_distribution<int> layers(1, 12);
        std::uniform_int_distribution<int> size(1, 64);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        int feasible = 0;
        int infeasible = 0;
        int failures = 0;
        auto conserved = [](const LayerBudget& b, const std::vector<int>& sizes) {
            int sum = 0;
            for (std::size_t l = 0; l < sizes.size(); ++l) {
                if (b.survivors[l] < 1 || b.survivors[l] > sizes[l]) return false;
                sum += sizes[l] - b.survivors[l];
            }
            return sum == b.total_drop;
        };
        for (int t = 0; t < 1000; ++t) {
            std::vector<int> sizes(static_cast<std::size_t>(layers(rng)));
            for (auto& s : sizes) s = size(rng);
            const double rate = unit(rng) * 0.999;
            std::vector<double> rho(sizes.size());
            for (auto& r : rho) r = unit(rng);
            const std::vector<double> flat(sizes.size(), unit(rng));
            int total = 0;
            int capacity = 0;
            for (int s : sizes) {
                total += s;
                capacity += s - 1;
            }
            const int budget = static_cast<int>(std::floor(rate * total));
            if (budget > capacity) {
                ++infeasible;
                int threw = 0;
                try {
                    allocate_uniform(rate, sizes);
                } catch (const DataError&) {
                    ++threw;
                }
                try {
                    allocate_weighted(rate, sizes, rho);
                } catch (const DataError&) {
                    ++threw;
                }
                if (threw != 2) ++failures;
                continue;
            }
            ++feasible;
            const auto u = allocate_uniform(rate, sizes);
            const auto w = allocate_weighted(rate, sizes, rho);
            const auto e = allocate_weighted(rate, sizes, flat);
            if (u.total_drop != budget || !conserved(u, sizes) || !conserved(w, sizes) || e.survivors != u.survivors) {
                ++failures;
            }
        }
        os << feasible << " feasible configurations conserved, " << infeasible
           << " infeasible (drop budget above sum n-1) rejected, failures " << failures;
        return failures == 0;
    });
}

CheckResult check_planted_benefit(int seeds, int threads) {
    return timed(11, "planted end-to-end benefit", 300.0, [&](std::ostream& os) {
        struct Trial {
            double hodgecover = 0.0;
            double random = 0.0;
            double greedy_barrier = 0.0;
            bool discordant = false;
        };
        std::vector<Trial> trials(static_cast<std::size_t>(seeds));
        const CalibCorpus calib = make_corpus(2048, 256, 42);
        const CalibCorpus heldout = make_corpus(2048, 256, 43);
        detail::parallel_for(trials.size(), threads, [&](std::size_t s) {
            const auto layers = synth_model(planted_params(s), 4);
            SelectorParams params;
            params.threads = 1;
            std::vector<LayerAnalysis> analyses;
            std::vector<int> sizes;
            for (std::size_t l = 0; l < layers.size(); ++l) {
                analyses.push_back(analyze_layer(layers[l], calib, params, static_cast<int>(l)));
                sizes.push_back(layers[l].n);
                trials[s].discordant = trials[s].discordant || !layers[l].planted_triads.empty();
            }
            const auto budget = allocate_uniform(0.66, sizes);
            trials[s].hodgecover =
                compress_model(layers, analyses, calib, heldout, "hodgecover", budget, params).mean_loss;
            trials[s].random = compress_model(layers, analyses, calib, heldout, "random", budget, params, s).mean_loss;
            trials[s].greedy_barrier =
                compress_model(layers, analyses, calib, heldout, "greedy_barrier", budget, params).mean_loss;
        });
        int wins = 0;
        int discordant = 0;
        double hc_disc = 0.0;
        double gb_disc = 0.0;
        for (const auto& t : trials) {
            wins += t.hodgecover <= t.random ? 1 : 0;
            if (t.discordant) {
                ++discordant;
                hc_disc += t.hodgecover;
                gb_disc += t.greedy_barrier;
            }
        }
        if (discordant > 0) {
            hc_disc /= discordant;
            gb_disc /= discordant;
        }
        const bool beats_random = wins * 10 >= seeds * 9;
        const bool beats_merge = hc_disc <= gb_disc;
        os << std::setprecision(4) << "hodgecover <= random in " << wins << "/" << seeds
           << " seeds (need 90%); discordant seeds " << discordant << ": mean loss hodgecover " << hc_disc
           << " vs greedy_barrier " << gb_disc;
        return beats_random && beats_merge;
    });
}

CheckResult check_diagnostics_closure(int threads) {
    return timed(12, "diagnostics closure and retained-mass monotonicity", 30.0, [&](std::ostream& os) {
        const int models = 10;
        const CalibCorpus calib = make_corpus(2048, 256, 42);
        std::vector<std::vector<LayerAnalysis>> analyses(static_cast<std::size_t>(models));
        detail::parallel_for(analyses.size(), threads, [&](std::size_t m) {
            const auto layers = synth_model(planted_params(1000 + m), 4);
            SelectorParams params;
            params.threads = 1;
            for (std::size_t l = 0; l < layers.size(); ++l) {
                analyses[m].push_back(analyze_layer(layers[l], calib, params, static_cast<int>(l)));
            }
        });
        double worst = 0.0;
        int layers_checked = 0;
        for (const auto& model : analyses)
            for (const auto& a : model) {
                const auto d = diagnose(a);
                worst = std::max(worst, std::abs(d.rho_grad + d.rho_curl + d.rho_harm - 1.0));
                ++layers_checked;
            }

        std::mt19937_64 rng(1212);
        std::uniform_int_distribution<std::size_t> pick_model(0, analyses.size() - 1);
        std::uniform_int_distribution<std::size_t> pick_layer(0, 3);
        int violations = 0;
        for (int t = 0; t < 100; ++t) {
            const auto& a = analyses[pick_model(rng)][pick_layer(rng)];
            const int n = a.barriers.n;
            std::vector<int> order(static_cast<std::size_t>(n));
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng);
            const int small = std::uniform_int_distribution<int>(0, n)(rng);
            const int large = std::uniform_int_distribution<int>(small, n)(rng);
            const std::vector<int> s(order.begin(), order.begin() + small);
            const std::vector<int> big(order.begin(), order.begin() + large);
            const auto r1 = retained_mass(a.complex, a.decomp, a.barriers, a.candidates, s);
            const auto r2 = retained_mass(a.complex, a.decomp, a.barriers, a.candidates, big);
            if (r1.harm > r2.harm || r1.grad > r2.grad || r1.curl > r2.curl || r1.triplet > r2.triplet) ++violations;
        }
        os << layers_checked << " layers, worst |sum rho - 1| " << worst << "; 100 nested pairs, " << violations
           << " monotonicity violations";
        return worst <= 1e-8 && violations == 0;
    });
}

std::vector<CheckResult> run_acceptance(const VerifyOptions& options) {
    std::vector<CheckResult> out;
    out.push_back(check_chain_identity(options.builder));
    out.push_back(check_hodge_orthogonality());
    out.push_back(check_betti_agreement(options.include_large_pin));
    out.push_back(check_residual_minimality());
    out.push_back(check_greedy_guarantee());
    out.push_back(check_k4_inexpressibility());
    out.push_back(check_merge_guard());
    out.push_back(check_residual_sparsity());
    out.push_back(check_wanda());
    out.push_back(check_allocators());
    out.push_back(check_planted_benefit(options.planted_seeds, options.threads));
    out.push_back(check_diagnostics_closure(options.threads));
    return out;
}

std::string format_result(const CheckResult& r) {
    std::ostringstream os;
    os << (r.pass ? "[PASS] " : "[FAIL] ") << std::setw(2) << r.id << ' ' << r.name << " (" << std::fixed
       << std::setprecision(2) << r.seconds << "s): " << r.detail;
    return os.str();
}

}  // namespace hodgecover
