#include "hodgecover/io.hpp"

#include "hodgecover/errors.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hodgecover {

namespace {

json matrix_rows(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_rows(const json& j, Eigen::Index rows, Eigen::Index cols, const char* what) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
        throw DataError(std::string(what) + ": expected " + std::to_string(rows) + " rows");
    }
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw DataError(std::string(what) + ": expected " + std::to_string(cols) + " columns");
        }
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

json vector_json(const Eigen::VectorXd& v) {
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

template <class Fn>
auto guarded(const char* what, Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed ") + what + ": " + e.what());
    }
}

}  // namespace

json to_json(const Complex2& k) {
    return json{{"n", k.n}, {"edges", k.edges}, {"triangles", k.triangles}};
}

Complex2 complex_from_json(const json& j) {
    return guarded("complex", [&] {
        Complex2 k;
        k.n = j.at("n").get<int>();
        k.edges = j.at("edges").get<std::vector<Edge>>();
        k.triangles = j.at("triangles").get<std::vector<Triangle>>();
        k.validate();
        return k;
    });
}

json to_json(const HodgeDecomp& d) {
    return json{{"grad", vector_json(d.grad.values)},
                {"curl", vector_json(d.curl.values)},
                {"harm", vector_json(d.harm.values)},
                {"energy", {{"grad", d.energy_grad}, {"curl", d.energy_curl}, {"harm", d.energy_harm}}}};
}

json to_json(const SurvivorPlan& p) {
    json redirect = json::object();
    for (const auto& [from, to] : p.redirect) redirect[std::to_string(from)] = to;
    json j{{"layer", p.layer}, {"n", p.n},         {"k", p.k},         {"survivors", p.survivors},
           {"redirect", redirect}, {"method", p.method}, {"phi", p.phi}, {"alpha", p.alpha},
           {"params", p.params}};
    if (p.is_merge_plan()) j["groups"] = p.groups;
    return j;
}

SurvivorPlan plan_from_json(const json& j) {
    return guarded("plan", [&] {
        SurvivorPlan p;
        p.layer = j.at("layer").get<int>();
        p.n = j.at("n").get<int>();
        p.k = j.at("k").get<int>();
        p.survivors = j.at("survivors").get<std::vector<int>>();
        for (const auto& [from, to] : j.at("redirect").items()) p.redirect[std::stoi(from)] = to.get<int>();
        if (j.contains("groups")) p.groups = j.at("groups").get<std::vector<std::vector<int>>>();
        p.method = j.at("method").get<std::string>();
        p.phi = j.value("phi", 0.0);
        p.alpha = j.value("alpha", 0.0);
        if (j.contains("params")) p.params = j.at("params").get<std::map<std::string, double>>();
        p.validate();
        return p;
    });
}

json to_json(const MoeLayer& layer) {
    json experts = json::array();
    for (const auto& w : layer.expert_weights) experts.push_back(matrix_rows(w));
    json j{{"n", layer.n},
           {"vocab", layer.vocab},
           {"ctx", layer.ctx},
           {"fanout", layer.fanout},
           {"seed", layer.seed},
           {"expert_weights", std::move(experts)},
           {"router_logits", matrix_rows(layer.router_logits)}};
    if (!layer.cluster_of.empty()) j["cluster_of"] = layer.cluster_of;
    if (!layer.planted_triads.empty()) j["planted_triads"] = layer.planted_triads;
    return j;
}

MoeLayer layer_from_json(const json& j) {
    return guarded("model layer", [&] {
        MoeLayer layer;
        layer.n = j.at("n").get<int>();
        layer.vocab = j.at("vocab").get<int>();
        layer.ctx = j.at("ctx").get<int>();
        layer.fanout = j.at("fanout").get<int>();
        layer.seed = j.at("seed").get<std::uint64_t>();
        if (layer.n < 1 || layer.vocab < 1 || layer.ctx < 1) throw DataError("layer sizes must be positive");
        const auto& experts = j.at("expert_weights");
        if (!experts.is_array() || static_cast<int>(experts.size()) != layer.n) {
            throw DataError("expected " + std::to_string(layer.n) + " expert weight matrices");
        }
        for (const auto& e : experts) layer.expert_weights.push_back(matrix_from_rows(e, layer.vocab, layer.ctx, "expert weights"));
        layer.router_logits = matrix_from_rows(j.at("router_logits"), layer.n, layer.ctx, "router logits");
        if (j.contains("cluster_of")) layer.cluster_of = j.at("cluster_of").get<std::vector<int>>();
        if (j.contains("planted_triads")) layer.planted_triads = j.at("planted_triads").get<std::vector<Triangle>>();
        layer.validate();
        return layer;
    });
}

json to_json(const BarrierTable& t) {
    json triplets = json::array();
    for (const auto& [tri, b] : t.triplet) triplets.push_back(json{{"triangle", tri}, {"barrier", b}});
    return json{{"n", t.n},
                {"pairwise", matrix_rows(t.pairwise)},
                {"triplet", std::move(triplets)},
                {"routing_freq", t.routing_freq}};
}

BarrierTable barriers_from_json(const json& j) {
    return guarded("barrier table", [&] {
        BarrierTable t;
        t.n = j.at("n").get<int>();
        t.pairwise = matrix_from_rows(j.at("pairwise"), t.n, t.n, "pairwise barriers");
        for (const auto& e : j.at("triplet")) {
            Triangle tri = e.at("triangle").get<Triangle>();
            std::sort(tri.begin(), tri.end());
            t.triplet[tri] = e.at("barrier").get<double>();
        }
        t.routing_freq = j.at("routing_freq").get<std::vector<double>>();
        return t;
    });
}

void write_pairwise_csv(std::ostream& os, const Eigen::MatrixXd& pairwise) {
    os << std::setprecision(17);
    for (Eigen::Index r = 0; r < pairwise.rows(); ++r) {
        for (Eigen::Index c = 0; c < pairwise.cols(); ++c) os << (c ? "," : "") << pairwise(r, c);
        os << '\n';
    }
}

json to_json(const PruneMask& m) {
    return json{{"rows", m.rows}, {"cols", m.cols}, {"row_sparsity", m.row_sparsity}, {"bits", m.to_hex()}};
}

PruneMask mask_from_json(const json& j) {
    return guarded("prune mask", [&] {
        return PruneMask::from_hex(j.at("rows").get<int>(), j.at("cols").get<int>(), j.at("bits").get<std::string>());
    });
}

json to_json(const LayerBudget& b) {
    return json{{"rate", b.rate}, {"total_drop", b.total_drop}, {"drops", b.drops}, {"survivors", b.survivors}};
}

json to_json(const FiltrationResult& f) {
    json curve = json::array();
    for (const auto& p : f.betti_curve) {
        curve.push_back(json{{"tau", p.tau}, {"beta1", p.beta1}, {"edges", p.edges}, {"triangles", p.triangles}});
    }
    return json{{"tau_star", f.tau_star},
                {"betti_curve", std::move(curve)},
                {"chosen_complex", to_json(f.chosen_complex)},
                {"complete_edges_at_star", f.complete_edges_at_star}};
}

void write_betti_curve_csv(std::ostream& os, const std::vector<BettiPoint>& curve) {
    os << "tau,beta1,edges,triangles\n" << std::setprecision(17);
    for (const auto& p : curve) os << p.tau << ',' << p.beta1 << ',' << p.edges << ',' << p.triangles << '\n';
}

json to_json(const LayerDiagnostics& d) {
    return json{{"layer", d.layer}, {"rho_harm", d.rho_harm}, {"rho_grad", d.rho_grad},
                {"rho_curl", d.rho_curl}, {"delta", d.delta},       {"beta1", d.beta1}};
}

json to_json(const RetainedMass& r) {
    return json{{"harm", r.harm}, {"grad", r.grad}, {"curl", r.curl}, {"triplet", r.triplet}};
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash(const json& j) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
    return buf;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError("cannot parse " + path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
    if (!out) throw DataError("write failed for " + path.string());
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace hodgecover
