#pragma once

// Per-layer topological diagnostics and retained-mass mechanism metrics.

#include "hodgecover/hodge.hpp"
#include "hodgecover/moe.hpp"

#include <ostream>
#include <vector>

namespace hodgecover {

inline constexpr double kDiscordanceMargin = 1.2;

struct LayerDiagnostics {
    int layer = 0;
    double rho_harm = 0.0;
    double rho_grad = 0.0;
    double rho_curl = 0.0;
    double delta = 0.0;
    int beta1 = 0;
};

/// Share of `candidates` whose triplet barrier exceeds margin x their largest
/// pairwise barrier. Throws UndefinedError for an empty candidate set.
double discordance(const BarrierTable& barriers, const std::vector<Triangle>& candidates,
                   double margin = kDiscordanceMargin);

struct RetainedMass {
    double harm = 0.0;
    double grad = 0.0;
    double curl = 0.0;
    double triplet = 0.0;
};

/// l1 mass of each Hodge component on edges with an endpoint in S, over the
/// total; the triplet term does the same for triplet barriers on `triangles`.
/// A component with zero total mass counts as fully retained by any nonempty S.
RetainedMass retained_mass(const Complex2& k, const HodgeDecomp& decomp, const BarrierTable& barriers,
                           const std::vector<Triangle>& triangles, const std::vector<int>& s);

RetainedMass macro_average(const std::vector<RetainedMass>& per_layer);

/// Componentwise `other - reference`.
RetainedMass deviation(const RetainedMass& other, const RetainedMass& reference);

/// layer,rho_harm,rho_grad,rho_curl,delta,beta1
void write_diagnostics_csv(std::ostream& os, const std::vector<LayerDiagnostics>& rows);

}  // namespace hodgecover
