#include "hodgecover/diagnostics.hpp"

#include "hodgecover/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

namespace hodgecover {

double discordance(const BarrierTable& barriers, const std::vector<Triangle>& candidates, double margin) {
    if (candidates.empty()) throw UndefinedError("discordance is undefined for an empty candidate set");
    int hits = 0;
    for (const auto& t : candidates) {
        const auto b = barriers.triple(t);
        if (!b) throw DataError("candidate triangle has no triplet barrier");
        const double worst = std::max({barriers.pair(t[0], t[1]), barriers.pair(t[0], t[2]), barriers.pair(t[1], t[2])});
        if (*b > margin * worst) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(candidates.size());
}

namespace {

double fraction(double kept, double total, bool nonempty) {
    if (total > 0.0) return kept / total;
    return nonempty ? 1.0 : 0.0;
}

}  // namespace

RetainedMass retained_mass(const Complex2& k, const HodgeDecomp& decomp, const BarrierTable& barriers,
                           const std::vector<Triangle>& triangles, const std::vector<int>& s) {
    const auto ne = static_cast<Eigen::Index>(k.edges.size());
    if (decomp.harm.values.size() != ne || decomp.grad.values.size() != ne || decomp.curl.values.size() != ne) {
        throw ShapeError("decomposition does not match the complex");
    }
    std::vector<char> in(static_cast<std::size_t>(k.n), 0);
    for (int i : s) {
        if (i < 0 || i >= k.n) throw DataError("survivor index out of range");
        in[i] = 1;
    }
    double tot[3] = {0, 0, 0};
    double kept[3] = {0, 0, 0};
    for (Eigen::Index e = 0; e < ne; ++e) {
        const auto& [a, b] = k.edges[static_cast<std::size_t>(e)];
        const double v[3] = {std::abs(decomp.harm.values[e]), std::abs(decomp.grad.values[e]),
                             std::abs(decomp.curl.values[e])};
        for (int c = 0; c < 3; ++c) {
            tot[c] += v[c];
            if (in[a] || in[b]) kept[c] += v[c];
        }
    }
    double tri_tot = 0.0;
    double tri_kept = 0.0;
    for (const auto& t : triangles) {
        const auto b = barriers.triple(t);
        if (!b) throw DataError("triangle has no triplet barrier");
        const double v = std::abs(*b);
        tri_tot += v;
        if (in[t[0]] || in[t[1]] || in[t[2]]) tri_kept += v;
    }
    const bool nonempty = !s.empty();
    return RetainedMass{fraction(kept[0], tot[0], nonempty), fraction(kept[1], tot[1], nonempty),
                        fraction(kept[2], tot[2], nonempty), fraction(tri_kept, tri_tot, nonempty)};
}

RetainedMass macro_average(const std::vector<RetainedMass>& per_layer) {
    RetainedMass avg;
    if (per_layer.empty()) return avg;
    for (const auto& r : per_layer) {
        avg.harm += r.harm;
        avg.grad += r.grad;
        avg.curl += r.curl;
        avg.triplet += r.triplet;
    }
    const double l = static_cast<double>(per_layer.size());
    avg.harm /= l;
    avg.grad /= l;
    avg.curl /= l;
    avg.triplet /= l;
    return avg;
}

RetainedMass deviation(const RetainedMass& other, const RetainedMass& reference) {
    return RetainedMass{other.harm - reference.harm, other.grad - reference.grad, other.curl - reference.curl,
                        other.triplet - reference.triplet};
}

void write_diagnostics_csv(std::ostream& os, const std::vector<LayerDiagnostics>& rows) {
    os << "layer,rho_harm,rho_grad,rho_curl,delta,beta1\n";
    os << std::setprecision(17);
    for (const auto& r : rows) {
        os << r.layer << ',' << r.rho_harm << ',' << r.rho_grad << ',' << r.rho_curl << ',' << r.delta << ','
           << r.beta1 << '\n';
    }
}

}  // namespace hodgecover
