#pragma once

// Row-wise |weight| x activation-norm pruning for surviving experts, and the
// residual-sparsity rule for a two-stage budget.

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace hodgecover {

struct PruneMask {
    int rows = 0;
    int cols = 0;
    std::vector<bool> keep;  // row-major
    double row_sparsity = 0.0;

    bool at(int r, int c) const { return keep[static_cast<std::size_t>(r) * cols + c]; }
    int kept_in_row(int r) const;

    /// Compact form: {"rows", "cols", "bits"} with bits as row-major hex.
    std::string to_hex() const;
    static PruneMask from_hex(int rows, int cols, const std::string& hex);
};

struct PruneResult {
    Eigen::MatrixXd weights;
    PruneMask mask;
};

/// ceil((1 - r2) * b), guarded against round-off.
int wanda_keep_count(int b, double r2);

/// Keeps the top wanda_keep_count(b, r2) entries of every row by
/// |W_ij| * |X_col j|_2 (ties to the lower column) and zeroes the rest.
/// W is a x b, X is N x b. Throws ShapeError on mismatch, DataError for r2
/// outside [0, 1).
PruneResult wanda_prune(const Eigen::MatrixXd& w, const Eigen::MatrixXd& x, double r2);

/// Same, given the activation column norms directly.
PruneResult wanda_prune_with_norms(const Eigen::MatrixXd& w, const Eigen::VectorXd& col_norms, double r2);

/// max(0, (r_total - r1) / (1 - r1)). Throws DataError for r1 >= 1.
double residual_sparsity(double r_total, double r1 = 0.20);

}  // namespace hodgecover
