#include "cli.hpp"

#include "hodgecover/errors.hpp"
#include "hodgecover/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace hodgecover::cli {

namespace {

template <class T>
void take(const json& j, const char* key, T& field) {
    if (!j.contains(key)) return;
    try {
        field = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw DataError(std::string("config key '") + key + "': " + e.what());
    }
}

std::string layer_name(int l, const char* suffix = ".json") {
    char buf[32];
    std::snprintf(buf, sizeof buf, "layer_%02d%s", l, suffix);
    return buf;
}

std::string fixed(double v, int digits = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

fs::path ensure_dir(const fs::path& p) {
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw DataError("cannot create directory " + p.string() + ": " + ec.message());
    return p;
}

void update_manifest(const RunConfig& config, const std::string& command, const std::vector<std::string>& files) {
    const fs::path path = fs::path(config.out) / "manifest.json";
    json manifest = fs::exists(path) ? read_json_file(path) : json::object();
    const json cfg = config.to_json();
    manifest["tool"] = kToolName;
    manifest["version"] = kToolVersion;
    manifest["config"] = cfg;
    manifest["config_hash"] = config_hash(cfg);
    manifest["artifacts"][command] = files;
    write_json_file(path, manifest);
}

std::vector<MoeLayer> load_models(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw DataError("model directory " + dir.string() + " does not exist");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.rfind("layer_", 0) == 0 && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no layer_*.json files in " + dir.string());
    std::vector<MoeLayer> layers;
    for (const auto& f : files) {
        try {
            layers.push_back(layer_from_json(read_json_file(f)));
        } catch (const DataError& e) {
            throw DataError(f.string() + ": " + e.what());
        }
    }
    for (const auto& l : layers) {
        if (l.ctx != layers.front().ctx) throw DataError("layers disagree on the context alphabet");
    }
    return layers;
}

struct Workspace {
    std::vector<MoeLayer> layers;
    CalibCorpus calib;
    std::vector<LayerAnalysis> analyses;
};

Workspace prepare(const RunConfig& config, const std::string& model_dir) {
    Workspace w;
    w.layers = load_models(model_dir.empty() ? fs::path(config.out) / "model" : fs::path(model_dir));
    w.calib = make_corpus(config.corpus_size, w.layers.front().ctx, config.corpus_seed);
    for (std::size_t l = 0; l < w.layers.size(); ++l) {
        w.analyses.push_back(analyze_layer(w.layers[l], w.calib, config.selector, static_cast<int>(l)));
    }
    return w;
}

LayerBudget make_budget(const RunConfig& config, const Workspace& w, double rate) {
    std::vector<int> sizes;
    for (const auto& l : w.layers) sizes.push_back(l.n);
    if (config.allocator == "weighted") {
        std::vector<double> rho;
        for (const auto& a : w.analyses) rho.push_back(a.decomp.energy_harm);
        return allocate_weighted(rate, sizes, rho);
    }
    return allocate_uniform(rate, sizes);
}

int cmd_synth(const RunConfig& config, std::ostream& out) {
    const fs::path dir = ensure_dir(fs::path(config.out) / "model");
    const auto layers = synth_model(config.model, config.layers);
    std::vector<std::string> files;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const fs::path f = dir / layer_name(static_cast<int>(l));
        write_json_file(f, to_json(layers[l]));
        files.push_back(f.lexically_relative(config.out).string());
    }
    update_manifest(config, "synth", files);
    out << "wrote " << layers.size() << " layers to " << dir.string() << "\n";
    return kOk;
}

int cmd_barriers(const RunConfig& config, const std::string& model_dir, std::ostream& out) {
    const Workspace w = prepare(config, model_dir);
    const fs::path dir = ensure_dir(fs::path(config.out) / "barriers");
    std::vector<std::string> files;
    for (const auto& a : w.analyses) {
        json j = to_json(a.barriers);
        j["candidates"] = a.candidates;
        const fs::path jf = dir / layer_name(a.layer);
        const fs::path cf = dir / layer_name(a.layer, "_pairwise.csv");
        write_json_file(jf, j);
        std::ostringstream csv;
        write_pairwise_csv(csv, a.barriers.pairwise);
        write_text_file(cf, csv.str());
        files.push_back(jf.lexically_relative(config.out).string());
        files.push_back(cf.lexically_relative(config.out).string());
        out << "layer " << a.layer << ": " << a.barriers.n * (a.barriers.n - 1) / 2 << " pairs, "
            << a.candidates.size() << " candidate triples\n";
    }
    update_manifest(config, "barriers", files);
    return kOk;
}

int cmd_diagnose(const RunConfig& config, const std::string& model_dir, std::ostream& out) {
    const Workspace w = prepare(config, model_dir);
    const fs::path root(config.out);
    const fs::path betti_dir = ensure_dir(root / "betti");
    std::vector<LayerDiagnostics> rows;
    json layers = json::array();
    std::vector<std::string> files;
    for (const auto& a : w.analyses) {
        const auto d = diagnose(a);
        rows.push_back(d);
        json entry = to_json(d);
        entry["tau_star"] = a.filtration.tau_star;
        entry["complete_edges_at_tau_star"] = a.filtration.complete_edges_at_star;
        entry["candidates"] = a.candidates.size();
        entry["triangles"] = a.complex.triangles.size();
        layers.push_back(entry);
        std::ostringstream csv;
        write_betti_curve_csv(csv, a.filtration.betti_curve);
        const fs::path f = betti_dir / layer_name(a.layer, ".csv");
        write_text_file(f, csv.str());
        files.push_back(f.lexically_relative(root).string());
        if (!a.filtration.complete_edges_at_star) {
            out << "note: layer " << a.layer << " threshold " << fixed(a.filtration.tau_star)
                << " keeps " << a.filtration.chosen_complex.edges.size() << " of "
                << a.barriers.n * (a.barriers.n - 1) / 2 << " edges (anomaly, not an error)\n";
        }
    }
    std::ostringstream csv;
    write_diagnostics_csv(csv, rows);
    write_text_file(root / "diagnostics.csv", csv.str());
    write_json_file(root / "diagnostics.json", json{{"layers", layers}});
    files.insert(files.begin(), {"diagnostics.csv", "diagnostics.json"});
    update_manifest(config, "diagnose", files);
    for (const auto& d : rows) {
        out << "layer " << d.layer << ": rho_harm " << fixed(d.rho_harm, 4) << " rho_grad " << fixed(d.rho_grad, 4)
            << " rho_curl " << fixed(d.rho_curl, 4) << " delta " << fixed(d.delta, 4) << " beta1 " << d.beta1 << "\n";
    }
    return kOk;
}

int cmd_compress(const RunConfig& config, const std::string& model_dir, bool hybrid, std::ostream& out) {
    const Workspace w = prepare(config, model_dir);
    const CalibCorpus heldout = make_corpus(config.corpus_size, w.layers.front().ctx, config.heldout_seed());
    const double stage1 = hybrid ? config.r1 : config.rate;
    const double r2 = hybrid ? residual_sparsity(config.r_total, config.r1) : 0.0;
    const LayerBudget budget = make_budget(config, w, stage1);
    const auto result = compress_model(w.layers, w.analyses, w.calib, heldout, config.method, budget, config.selector,
                                       config.model.seed, r2);

    const fs::path root(config.out);
    const std::string tag = config.method + (hybrid ? "_hybrid" : "");
    const fs::path plan_dir = ensure_dir(root / "plans" / tag);
    std::vector<std::string> files;
    json phis = json::array();
    for (const auto& plan : result.plans) {
        const fs::path f = plan_dir / layer_name(plan.layer);
        write_json_file(f, to_json(plan));
        files.push_back(f.lexically_relative(root).string());
        phis.push_back(plan.phi);
    }
    if (hybrid) {
        const fs::path mask_dir = ensure_dir(root / "masks" / tag);
        for (std::size_t l = 0; l < w.layers.size(); ++l) {
            const auto pruned = prune_survivors(w.layers[l], w.calib, result.plans[l], r2);
            json masks = json::object();
            for (const auto& [s, m] : pruned.masks) masks[std::to_string(s)] = to_json(m);
            const fs::path f = mask_dir / layer_name(static_cast<int>(l));
            write_json_file(f, json{{"layer", l}, {"r2", r2}, {"masks", masks}});
            files.push_back(f.lexically_relative(root).string());
        }
    }
    json summary{{"method", config.method},
                 {"hybrid", hybrid},
                 {"rate", stage1},
                 {"allocator", config.allocator},
                 {"budget", to_json(budget)},
                 {"phi", phis},
                 {"layer_loss", result.layer_loss},
                 {"mean_loss", result.mean_loss},
                 {"heldout_seed", config.heldout_seed()}};
    if (hybrid) {
        summary["r1"] = config.r1;
        summary["r_total"] = config.r_total;
        summary["r2"] = r2;
    }
    const std::string summary_name = "compress_" + tag + ".json";
    write_json_file(root / summary_name, summary);
    files.insert(files.begin(), summary_name);
    update_manifest(config, "compress_" + tag, files);
    out << tag << " at rate " << fixed(stage1, 4) << (hybrid ? " + r2 " + fixed(r2, 4) : "") << ": held-out KL "
        << fixed(result.mean_loss) << " (mean over " << result.layer_loss.size() << " layers)\n";
    return kOk;
}

int cmd_ablate(const RunConfig& config, const std::string& model_dir, std::vector<double> rates, std::ostream& out) {
    const Workspace w = prepare(config, model_dir);
    const CalibCorpus heldout = make_corpus(config.corpus_size, w.layers.front().ctx, config.heldout_seed());
    if (rates.empty()) rates.push_back(config.rate);
    json cells = json::array();
    std::ostringstream csv;
    csv << "rate,method,mean_loss,ret_harm,ret_grad,ret_curl,ret_triplet,dev_harm,dev_grad,dev_curl,dev_triplet\n";
    csv << std::setprecision(17);
    for (double rate : rates) {
        const LayerBudget budget = make_budget(config, w, rate);
        std::map<std::string, RetainedMass> retained;
        std::map<std::string, double> loss;
        for (const auto& method : known_methods()) {
            const auto result = compress_model(w.layers, w.analyses, w.calib, heldout, method, budget,
                                               config.selector, config.model.seed);
            std::vector<RetainedMass> per_layer;
            for (std::size_t l = 0; l < w.layers.size(); ++l) {
                const auto& a = w.analyses[l];
                per_layer.push_back(retained_mass(a.complex, a.decomp, a.barriers, a.candidates,
                                                  result.plans[l].survivors));
            }
            retained[method] = macro_average(per_layer);
            loss[method] = result.mean_loss;
        }
        const RetainedMass reference = retained.at("hodgecover");
        for (const auto& method : known_methods()) {
            const auto& r = retained.at(method);
            const auto d = deviation(r, reference);
            cells.push_back(json{{"rate", rate},
                                 {"method", method},
                                 {"mean_loss", loss.at(method)},
                                 {"retained", to_json(r)},
                                 {"deviation", to_json(d)}});
            csv << rate << ',' << method << ',' << loss.at(method) << ',' << r.harm << ',' << r.grad << ',' << r.curl
                << ',' << r.triplet << ',' << d.harm << ',' << d.grad << ',' << d.curl << ',' << d.triplet << '\n';
            out << "rate " << fixed(rate, 2) << " " << std::left << std::setw(19) << method << std::right
                << " loss " << fixed(loss.at(method)) << " retained harm " << fixed(r.harm, 3) << "\n";
        }
    }
    const fs::path root = ensure_dir(config.out);
    write_json_file(root / "ablation.json", json{{"cells", cells}});
    write_text_file(root / "ablation.csv", csv.str());
    update_manifest(config, "ablate", {"ablation.json", "ablation.csv"});
    return kOk;
}

int cmd_verify(bool quick, int threads, const std::string& json_path, std::ostream& out) {
    VerifyOptions options;
    options.threads = threads;
    if (quick) {
        options.include_large_pin = false;
        options.planted_seeds = 10;
    }
    const auto results = run_acceptance(options);
    int passed = 0;
    json report = json::array();
    for (const auto& r : results) {
        out << format_result(r) << "\n";
        passed += r.pass ? 1 : 0;
        report.push_back(json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    out << passed << "/" << results.size() << " checks passed\n";
    if (!json_path.empty()) write_json_file(json_path, json{{"checks", report}, {"quick", quick}});
    return passed == static_cast<int>(results.size()) ? kOk : kData;
}

int cmd_report(const RunConfig& config, std::ostream& out) {
    const fs::path root(config.out);
    if (!fs::is_directory(root)) throw DataError("run directory " + root.string() + " does not exist");
    std::ostringstream md;
    md << "# Run report\n\n";
    const fs::path manifest = root / "manifest.json";
    if (fs::exists(manifest)) {
        const json m = read_json_file(manifest);
        md << "tool " << m.value("tool", "?") << " " << m.value("version", "?") << ", config hash "
           << m.value("config_hash", "?") << "\n\n";
    }
    if (fs::exists(root / "diagnostics.json")) {
        md << "## Diagnostics\n\n| layer | rho_harm | rho_grad | rho_curl | delta | beta1 |\n|---|---|---|---|---|---|\n";
        const json diag = read_json_file(root / "diagnostics.json");
        for (const auto& l : diag.at("layers")) {
            md << "| " << l.at("layer").get<int>() << " | " << fixed(l.at("rho_harm").get<double>(), 4) << " | "
               << fixed(l.at("rho_grad").get<double>(), 4) << " | " << fixed(l.at("rho_curl").get<double>(), 4)
               << " | " << fixed(l.at("delta").get<double>(), 4) << " | " << l.at("beta1").get<int>() << " |\n";
        }
        md << "\n";
    }
    std::vector<fs::path> summaries;
    for (const auto& e : fs::directory_iterator(root)) {
        const auto name = e.path().filename().string();
        if (name.rfind("compress_", 0) == 0 && e.path().extension() == ".json") summaries.push_back(e.path());
    }
    std::sort(summaries.begin(), summaries.end());
    if (!summaries.empty()) {
        md << "## Compression\n\n| run | rate | held-out KL |\n|---|---|---|\n";
        for (const auto& f : summaries) {
            const json s = read_json_file(f);
            md << "| " << f.stem().string().substr(9) << " | " << fixed(s.at("rate").get<double>(), 4) << " | "
               << fixed(s.at("mean_loss").get<double>()) << " |\n";
        }
        md << "\n";
    }
    if (fs::exists(root / "ablation.json")) {
        md << "## Ablation\n\n| rate | method | held-out KL | harm retained | deviation |\n|---|---|---|---|---|\n";
        const json ablation = read_json_file(root / "ablation.json");
        for (const auto& c : ablation.at("cells")) {
            md << "| " << fixed(c.at("rate").get<double>(), 2) << " | " << c.at("method").get<std::string>() << " | "
               << fixed(c.at("mean_loss").get<double>()) << " | "
               << fixed(c.at("retained").at("harm").get<double>(), 4) << " | "
               << fixed(c.at("deviation").at("harm").get<double>(), 4) << " |\n";
        }
        md << "\n";
    }
    write_text_file(root / "report.md", md.str());
    out << md.str();
    return kOk;
}

}  // namespace

json RunConfig::to_json() const {
    return json{{"model",
                 {{"n", model.n},
                  {"vocab", model.vocab},
                  {"ctx", model.ctx},
                  {"fanout", model.fanout},
                  {"clusters", model.clusters},
                  {"layers", layers},
                  {"seed", model.seed},
                  {"centroid_scale", model.centroid_scale},
                  {"noise", model.noise},
                  {"router_cluster_scale", model.router_cluster_scale},
                  {"router_noise", model.router_noise},
                  {"router_bias", model.router_bias},
                  {"discordant_prob", model.discordant_prob},
                  {"triad_radius", model.triad_radius}}},
                {"corpus", {{"size", corpus_size}, {"seed", corpus_seed}}},
                {"selector",
                 {{"method", method},
                  {"rate", rate},
                  {"allocator", allocator},
                  {"p", selector.p},
                  {"q_t", selector.q_t},
                  {"lambda_e", selector.lambda_e},
                  {"lambda_t", selector.lambda_t},
                  {"alpha", selector.alpha},
                  {"alpha_t", selector.alpha_t},
                  {"triangle_cap", selector.triangle_cap},
                  {"candidate_seed", selector.candidate_seed}}},
                {"wanda", {{"r1", r1}, {"r_total", r_total}}},
                {"out", out}};
}

void RunConfig::merge(const json& j) {
    if (!j.is_object()) throw DataError("config must be a JSON object");
    if (j.contains("model")) {
        const auto& m = j.at("model");
        take(m, "n", model.n);
        take(m, "vocab", model.vocab);
        take(m, "ctx", model.ctx);
        take(m, "fanout", model.fanout);
        take(m, "clusters", model.clusters);
        take(m, "layers", layers);
        take(m, "seed", model.seed);
        take(m, "centroid_scale", model.centroid_scale);
        take(m, "noise", model.noise);
        take(m, "router_cluster_scale", model.router_cluster_scale);
        take(m, "router_noise", model.router_noise);
        take(m, "router_bias", model.router_bias);
        take(m, "discordant_prob", model.discordant_prob);
        take(m, "triad_radius", model.triad_radius);
    }
    if (j.contains("corpus")) {
        take(j.at("corpus"), "size", corpus_size);
        take(j.at("corpus"), "seed", corpus_seed);
    }
    if (j.contains("selector")) {
        const auto& s = j.at("selector");
        take(s, "method", method);
        take(s, "rate", rate);
        take(s, "allocator", allocator);
        take(s, "p", selector.p);
        take(s, "q_t", selector.q_t);
        take(s, "lambda_e", selector.lambda_e);
        take(s, "lambda_t", selector.lambda_t);
        take(s, "alpha", selector.alpha);
        take(s, "alpha_t", selector.alpha_t);
        take(s, "triangle_cap", selector.triangle_cap);
        take(s, "candidate_seed", selector.candidate_seed);
    }
    if (j.contains("wanda")) {
        take(j.at("wanda"), "r1", r1);
        take(j.at("wanda"), "r_total", r_total);
    }
    take(j, "out", out);
}

void RunConfig::check() const {
    if (!is_known_method(method)) throw DataError("unknown method '" + method + "'");
    if (!(rate >= 0.0 && rate < 1.0)) throw DataError("rate must lie in [0, 1)");
    if (allocator != "uniform" && allocator != "weighted") throw DataError("allocator must be uniform or weighted");
    if (layers < 1) throw DataError("need at least one layer");
    if (corpus_size < 1) throw DataError("corpus size must be positive");
    if (!(r1 >= 0.0 && r1 < 1.0) || !(r_total >= 0.0 && r_total < 1.0)) throw DataError("wanda rates must lie in [0, 1)");
    if (selector.p < 0 || selector.p > 100 || selector.q_t < 0 || selector.q_t > 100) {
        throw DataError("p and q_t are percentages");
    }
    if (selector.lambda_e < 0 || selector.lambda_t < 0 || selector.alpha < 0 || selector.alpha_t < 0) {
        throw DataError("selector weights must be non-negative");
    }
    if (selector.triangle_cap < 0) throw DataError("triangle cap must be non-negative");
    if (out.empty()) throw DataError("output directory must be set");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hodge-guided expert selection and merge-barrier diagnostics for synthetic MoE layers", kToolName};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

    std::string config_path;
    std::string model_dir;
    int threads = 0;
    app.add_option("--config", config_path, "JSON run config; missing keys fall back to defaults");
    app.add_option("--models", model_dir, "directory of layer_*.json files (default <out>/model)");
    app.add_option("--threads", threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);

    // Overrides applied after the config file.
    std::vector<std::function<void(RunConfig&)>> overrides;
    auto override_opt = [&](const std::string& name, auto& field, auto setter, const std::string& help) {
        auto* opt = app.add_option(name, field, help);
        overrides.push_back([opt, setter, &field](RunConfig& c) {
            if (opt->count() > 0) setter(c, field);
        });
        return opt;
    };
    std::string out_dir;
    std::uint64_t seed = 0;
    int layers = 0;
    int n = 0;
    int clusters = 0;
    std::string method;
    double rate = 0.0;
    std::string allocator;
    double p = 0.0;
    double q_t = 0.0;
    double lambda_e = 0.0;
    double lambda_t = 0.0;
    double alpha = 0.0;
    double r1 = 0.0;
    double r_total = 0.0;
    int corpus_size = 0;
    std::uint64_t corpus_seed = 0;
    double discordant = 0.0;
    override_opt("--out", out_dir, [](RunConfig& c, auto v) { c.out = v; }, "run directory");
    override_opt("--seed", seed, [](RunConfig& c, auto v) { c.model.seed = v; }, "model seed");
    override_opt("--layers", layers, [](RunConfig& c, auto v) { c.layers = v; }, "number of MoE layers");
    override_opt("--n", n, [](RunConfig& c, auto v) { c.model.n = v; }, "experts per layer");
    override_opt("--clusters", clusters, [](RunConfig& c, auto v) { c.model.clusters = v; }, "planted clusters");
    override_opt("--discordant-prob", discordant, [](RunConfig& c, auto v) { c.model.discordant_prob = v; },
                 "chance of planting a discordant triad per layer");
    override_opt("--method", method, [](RunConfig& c, auto v) { c.method = v; }, "selector")
        ->check(CLI::IsMember(known_methods()));
    override_opt("--rate", rate, [](RunConfig& c, auto v) { c.rate = v; }, "expert drop rate in [0, 1)")
        ->check(CLI::Range(0.0, 0.999999999));
    override_opt("--allocator", allocator, [](RunConfig& c, auto v) { c.allocator = v; }, "uniform or weighted")
        ->check(CLI::IsMember({"uniform", "weighted"}));
    override_opt("--p", p, [](RunConfig& c, auto v) { c.selector.p = v; }, "critical edge percentage")
        ->check(CLI::Range(0.0, 100.0));
    override_opt("--q-t", q_t, [](RunConfig& c, auto v) { c.selector.q_t = v; }, "critical triangle percentage")
        ->check(CLI::Range(0.0, 100.0));
    override_opt("--lambda-e", lambda_e, [](RunConfig& c, auto v) { c.selector.lambda_e = v; }, "edge coverage weight")
        ->check(CLI::NonNegativeNumber);
    override_opt("--lambda-t", lambda_t, [](RunConfig& c, auto v) { c.selector.lambda_t = v; },
                 "triangle coverage weight")
        ->check(CLI::NonNegativeNumber);
    override_opt("--alpha", alpha, [](RunConfig& c, auto v) { c.selector.alpha = v; }, "redirect harmonic weight")
        ->check(CLI::NonNegativeNumber);
    override_opt("--r1", r1, [](RunConfig& c, auto v) { c.r1 = v; }, "hybrid stage-1 expert drop rate")
        ->check(CLI::Range(0.0, 0.999999999));
    override_opt("--r-total", r_total, [](RunConfig& c, auto v) { c.r_total = v; }, "hybrid total sparsity")
        ->check(CLI::Range(0.0, 0.999999999));
    override_opt("--corpus-size", corpus_size, [](RunConfig& c, auto v) { c.corpus_size = v; },
                 "calibration tokens")
        ->check(CLI::PositiveNumber);
    override_opt("--corpus-seed", corpus_seed, [](RunConfig& c, auto v) { c.corpus_seed = v; },
                 "calibration seed (held-out uses seed + 1)");

    auto* synth = app.add_subcommand("synth", "generate a planted-structure model");
    auto* barriers = app.add_subcommand("barriers", "sweep pairwise and candidate triplet barriers");
    auto* diagnose_cmd = app.add_subcommand("diagnose", "per-layer energy fractions, discordance and Betti curves");
    auto* compress = app.add_subcommand("compress", "select survivors and score held-out KL");
    bool hybrid = false;
    compress->add_flag("--hybrid", hybrid, "drop experts at r1, then prune survivors to reach r_total");
    auto* ablate = app.add_subcommand("ablate", "every selector at one or more rates");
    std::vector<double> rates;
    ablate->add_option("--rates", rates, "drop rates (default: the configured rate)")
        ->check(CLI::Range(0.0, 0.999999999));
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
    bool quick = false;
    std::string verify_json;
    verify_cmd->add_flag("--quick", quick, "skip the n=256 Betti pin and use 10 planted seeds");
    verify_cmd->add_option("--json", verify_json, "also write results to this file");
    auto* report = app.add_subcommand("report", "summarize a run directory as markdown");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o;
        std::ostringstream e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? kOk : kUsage;
    }

    try {
        RunConfig config;
        if (!config_path.empty()) config.merge(read_json_file(config_path));
        for (const auto& apply : overrides) apply(config);
        config.selector.threads = threads;
        config.check();

        if (*synth) return cmd_synth(config, out);
        if (*barriers) return cmd_barriers(config, model_dir, out);
        if (*diagnose_cmd) return cmd_diagnose(config, model_dir, out);
        if (*compress) return cmd_compress(config, model_dir, hybrid, out);
        if (*ablate) return cmd_ablate(config, model_dir, rates, out);
        if (*verify_cmd) return cmd_verify(quick, threads, verify_json, out);
        if (*report) return cmd_report(config, out);
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << "\n";
        return kData;
    } catch (const ShapeError& e) {
        err << "error: " << e.what() << "\n";
        return kData;
    } catch (const UndefinedError& e) {
        err << "error: " << e.what() << "\n";
        return kData;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kData;
    }
    return kUsage;
}

}  // namespace hodgecover::cli
