#pragma once

// The acceptance suite: structural, oracle and planted-instance checks, each
// reported as a single pass/fail line.

#include "hodgecover/simplicial.hpp"

#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace hodgecover {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double budget_seconds = 0.0;  // stated time limit, 0 when none
};

using IncidenceBuilder = std::function<SignedIncidence(const Complex2&)>;

/// Random complex on `n` vertices: each edge kept with probability
/// `edge_prob`, each 3-clique of the kept edges kept with `tri_prob`.
Complex2 random_complex(std::mt19937_64& rng, int n, double edge_prob, double tri_prob);

CheckResult check_chain_identity(const IncidenceBuilder& builder = build_incidence);
CheckResult check_hodge_orthogonality();
CheckResult check_betti_agreement(bool include_large_pin = true);
CheckResult check_residual_minimality();
CheckResult check_greedy_guarantee();
CheckResult check_k4_inexpressibility();
CheckResult check_merge_guard();
CheckResult check_residual_sparsity();
CheckResult check_wanda();
CheckResult check_allocators();
CheckResult check_planted_benefit(int seeds = 50, int threads = 0);
CheckResult check_diagnostics_closure(int threads = 0);

struct VerifyOptions {
    bool include_large_pin = true;
    int planted_seeds = 50;
    int threads = 0;
    IncidenceBuilder builder = build_incidence;
};

/// Runs all twelve checks in order.
std::vector<CheckResult> run_acceptance(const VerifyOptions& options = {});

/// "[PASS] 3 betti agreement (1.2s): detail"
std::string format_result(const CheckResult& r);

}  // namespace hodgecover
