#include "hodgecover/simplicial.hpp"

#include "hodgecover/detail/union_find.hpp"
#include "hodgecover/errors.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <string>

namespace hodgecover {

namespace {

std::string to_string(const Triangle& t) {
    std::ostringstream os;
    os << '[' << t[0] << ", " << t[1] << ", " << t[2] << ']';
    return os.str();
}

int count_above(const Eigen::VectorXd& eigenvalues, Eigen::Index dim) {
    if (eigenvalues.size() == 0) return 0;
    const double top = eigenvalues.cwiseAbs().maxCoeff();
    const double tol = rank_tolerance(dim, dim, top);
    int count = 0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (eigenvalues[i] > tol) ++count;
    }
    return count;
}

int symmetric_rank(const Eigen::MatrixXd& m) {
    if (m.rows() == 0) return 0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return count_above(es.eigenvalues(), m.rows());
}

}  // namespace

std::optional<std::size_t> Complex2::edge_index(int i, int j) const {
    if (i > j) std::swap(i, j);
    const Edge key{i, j};
    auto it = std::lower_bound(edges.begin(), edges.end(), key);
    if (it == edges.end() || *it != key) return std::nullopt;
    return static_cast<std::size_t>(it - edges.begin());
}

void Complex2::validate() const {
    if (n < 0) throw StructuralError("negative vertex count");
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& [i, j] = edges[e];
        if (i < 0 || j >= n || i >= j) {
            throw StructuralError("edge " + std::to_string(e) + " is not an ordered pair in [0, n)");
        }
        if (e > 0 && !(edges[e - 1] < edges[e])) {
            throw StructuralError("edges are not strictly lexicographically increasing at index " +
                                  std::to_string(e));
        }
    }
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tri = triangles[t];
        if (tri[0] < 0 || tri[2] >= n || tri[0] >= tri[1] || tri[1] >= tri[2]) {
            throw StructuralError("triangle " + to_string(tri) + " is not an ordered triple in [0, n)");
        }
        if (t > 0 && !(triangles[t - 1] < triangles[t])) {
            throw StructuralError("triangles are not strictly lexicographically increasing at " +
                                  to_string(tri));
        }
    }
}

Complex2 Complex2::complete_graph(int n) {
    Complex2 k;
    k.n = n;
    k.edges.reserve(static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) k.edges.push_back({i, j});
    }
    return k;
}

Complex2 Complex2::with_complete_edges(int n, std::vector<Triangle> triangles) {
    Complex2 k = complete_graph(n);
    std::sort(triangles.begin(), triangles.end());
    triangles.erase(std::unique(triangles.begin(), triangles.end()), triangles.end());
    k.triangles = std::move(triangles);
    return k;
}

Complex2 Complex2::complete_2_skeleton(int n) {
    std::vector<Triangle> all;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int l = j + 1; l < n; ++l) all.push_back({i, j, l});
    return with_complete_edges(n, std::move(all));
}

SignedIncidence build_incidence(const Complex2& k) {
    k.validate();
    const auto ne = static_cast<Eigen::Index>(k.edges.size());
    const auto nt = static_cast<Eigen::Index>(k.triangles.size());

    SignedIncidence inc;
    inc.b1.resize(k.n, ne);
    inc.b1.reserve(Eigen::VectorXi::Constant(ne, 2));
    for (Eigen::Index e = 0; e < ne; ++e) {
        const auto& [i, j] = k.edges[static_cast<std::size_t>(e)];
        inc.b1.insert(i, e) = -1;
        inc.b1.insert(j, e) = +1;
    }
    inc.b1.makeCompressed();

    inc.b2.resize(ne, nt);
    inc.b2.reserve(Eigen::VectorXi::Constant(nt, 3));
    for (Eigen::Index t = 0; t < nt; ++t) {
        const auto& tri = k.triangles[static_cast<std::size_t>(t)];
        const auto jk = k.edge_index(tri[1], tri[2]);
        const auto ik = k.edge_index(tri[0], tri[2]);
        const auto ij = k.edge_index(tri[0], tri[1]);
        if (!jk || !ik || !ij) {
            throw StructuralError("triangle " + to_string(tri) + " has a boundary edge missing from the complex");
        }
        inc.b2.insert(static_cast<Eigen::Index>(*jk), t) = +1;
        inc.b2.insert(static_cast<Eigen::Index>(*ik), t) = -1;
        inc.b2.insert(static_cast<Eigen::Index>(*ij), t) = +1;
    }
    inc.b2.makeCompressed();
    return inc;
}

Laplacians laplacians(const SignedIncidence& inc) {
    const Eigen::SparseMatrix<double> b1 = inc.b1_real();
    const Eigen::SparseMatrix<double> b2 = inc.b2_real();
    Laplacians out;
    out.l0 = Eigen::MatrixXd(b1 * b1.transpose());
    out.l2 = Eigen::MatrixXd(b2.transpose() * b2);
    out.l1 = Eigen::MatrixXd(b1.transpose() * b1) + Eigen::MatrixXd(b2 * b2.transpose());
    return out;
}

double rank_tolerance(Eigen::Index rows, Eigen::Index cols, double sigma_max) {
    return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() * sigma_max;
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& a) {
    if (a.size() == 0) return 0;
    Eigen::VectorXd sv;
    if (a.rows() > 2 * a.cols()) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
        const Eigen::MatrixXd r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
        sv = Eigen::BDCSVD<Eigen::MatrixXd>(r).singularValues();
    } else {
        sv = Eigen::BDCSVD<Eigen::MatrixXd>(a).singularValues();
    }
    if (sv.size() == 0) return 0;
    const double tol = rank_tolerance(a.rows(), a.cols(), sv.maxCoeff());
    return (sv.array() > tol).count();
}

int count_components(const Complex2& k) {
    detail::UnionFind uf(k.n);
    for (const auto& [i, j] : k.edges) uf.unite(i, j);
    return uf.components();
}

int betti1(const Complex2& k, const SignedIncidence& inc) {
    const auto ne = static_cast<int>(k.edges.size());
    int rank2 = 0;
    if (inc.b2.cols() > 0) {
        rank2 = static_cast<int>(numerical_rank(Eigen::MatrixXd(inc.b2_real())));
    }
    return ne - k.n + count_components(k) - rank2;
}

int harmonic_dimension_dense(const SignedIncidence& inc) {
    const auto ne = inc.b1.cols();
    if (ne == 0) return 0;
    const Laplacians l = laplacians(inc);
    return static_cast<int>(ne) - symmetric_rank(l.l1);
}

int harmonic_dimension_split(const SignedIncidence& inc) {
    const auto ne = inc.b1.cols();
    const Eigen::SparseMatrix<double> b1 = inc.b1_real();
    const Eigen::SparseMatrix<double> b2 = inc.b2_real();
    const Eigen::MatrixXd l0 = Eigen::MatrixXd(b1 * b1.transpose());
    const Eigen::MatrixXd l2 = Eigen::MatrixXd(b2.transpose() * b2);
    return static_cast<int>(ne) - symmetric_rank(l0) - symmetric_rank(l2);
}

int harmonic_dimension(const SignedIncidence& inc) {
    if (static_cast<std::size_t>(inc.b1.cols()) <= kDenseL1EdgeLimit) return harmonic_dimension_dense(inc);
    return harmonic_dimension_split(inc);
}

}  // namespace hodgecover
