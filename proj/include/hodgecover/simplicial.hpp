#pragma once

// Oriented simplicial 2-complexes, signed boundary operators, combinatorial
// Laplacians and first-Betti-number accounting.
//
// Orientation convention: vertices are ordered by their integer index, an
// edge [i, j] has i < j and a triangle [i, j, k] has i < j < k. Boundaries:
//   d1 [i, j]    = [j] - [i]
//   d2 [i, j, k] = [j, k] - [i, k] + [i, j]

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace hodgecover {

using Edge = std::array<int, 2>;
using Triangle = std::array<int, 3>;

/// Sparse integer incidence storage. Entries are in {-1, 0, +1}.
using IntSparse = Eigen::SparseMatrix<int, Eigen::ColMajor>;

struct Complex2 {
    int n = 0;
    std::vector<Edge> edges;          // strictly lexicographically increasing
    std::vector<Triangle> triangles;  // strictly lexicographically increasing

    std::size_t num_edges() const { return edges.size(); }
    std::size_t num_triangles() const { return triangles.size(); }

    /// Index of edge {i, j} (either order) in `edges`, if present. O(log |E|).
    std::optional<std::size_t> edge_index(int i, int j) const;

    /// Throws StructuralError when ordering, duplicate or range invariants fail.
    /// Missing triangle faces are reported by build_incidence instead.
    void validate() const;

    /// All C(n,2) edges, no triangles.
    static Complex2 complete_graph(int n);

    /// All C(n,2) edges and the given triangles (sorted, deduplicated).
    static Complex2 with_complete_edges(int n, std::vector<Triangle> triangles);

    /// Complete 2-skeleton: every edge and every triangle on n vertices.
    static Complex2 complete_2_skeleton(int n);

    friend bool operator==(const Complex2&, const Complex2&) = default;
};

/// Real cochain on edges, aligned with Complex2::edges.
struct EdgeSignal {
    Eigen::VectorXd values;
};

/// Real cochain on triangles, aligned with Complex2::triangles.
struct TriangleSignal {
    Eigen::VectorXd values;
};

struct SignedIncidence {
    IntSparse b1;  // n x |E|
    IntSparse b2;  // |E| x |T|

    Eigen::SparseMatrix<double> b1_real() const { return b1.cast<double>(); }
    Eigen::SparseMatrix<double> b2_real() const { return b2.cast<double>(); }
};

/// Builds d1 and d2. Throws StructuralError naming the first triangle whose
/// edges are not all present in the complex.
SignedIncidence build_incidence(const Complex2& k);

struct Laplacians {
    Eigen::MatrixXd l0;  // b1 b1^T
    Eigen::MatrixXd l1;  // b1^T b1 + b2 b2^T
    Eigen::MatrixXd l2;  // b2^T b2
};

/// Dense Laplacians. L1 is |E| x |E|, so this is meant for small complexes;
/// use harmonic_dimension() for kernel counts on large ones.
Laplacians laplacians(const SignedIncidence& inc);

/// Relative cutoff used for every numerical rank and pseudoinverse in the
/// library: max(rows, cols) * machine epsilon * largest singular value.
double rank_tolerance(Eigen::Index rows, Eigen::Index cols, double sigma_max);

/// Numerical rank by singular values. Tall matrices are first reduced with a
/// Householder QR so only a cols x cols SVD is needed.
Eigen::Index numerical_rank(const Eigen::MatrixXd& a);

/// Connected components of the 1-skeleton (isolated vertices count).
int count_components(const Complex2& k);

/// Euler-Poincare count |E| - n + components - rank(d2).
int betti1(const Complex2& k, const SignedIncidence& inc);

/// dim ker(L1) from eigenvalues. Small complexes diagonalize L1 directly;
/// larger ones use the nonzero spectra of L0 and L2, which together are the
/// nonzero spectrum of L1 because the down and up parts act on orthogonal
/// subspaces.
int harmonic_dimension(const SignedIncidence& inc);

/// dim ker(L1) by diagonalizing the dense L1.
int harmonic_dimension_dense(const SignedIncidence& inc);

/// |E| - rank(L0) - rank(L2), ranks by eigenvalue count.
int harmonic_dimension_split(const SignedIncidence& inc);

/// Threshold (in |E|) above which harmonic_dimension switches to the split route.
inline constexpr std::size_t kDenseL1EdgeLimit = 3000;

}  // namespace hodgecover
