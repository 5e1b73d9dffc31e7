#include "hodgecover/hodge.hpp"

#include "hodgecover/errors.hpp"

#include <string>

namespace hodgecover {

Eigen::VectorXd symmetric_pinv_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs) {
    if (a.rows() == 0) return Eigen::VectorXd::Zero(0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const Eigen::VectorXd& lambda = es.eigenvalues();
    const double tol = rank_tolerance(a.rows(), a.cols(), lambda.cwiseAbs().maxCoeff());
    Eigen::VectorXd coeff = es.eigenvectors().transpose() * rhs;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        coeff[i] = lambda[i] > tol ? coeff[i] / lambda[i] : 0.0;
    }
    return es.eigenvectors() * coeff;
}

HodgeDecomp decompose(const Complex2& k, const SignedIncidence& inc, const EdgeSignal& b) {
    const auto ne = static_cast<Eigen::Index>(k.edges.size());
    if (b.values.size() != ne || inc.b1.cols() != ne || inc.b2.rows() != ne ||
        inc.b2.cols() != static_cast<Eigen::Index>(k.triangles.size())) {
        throw ShapeError("edge signal of length " + std::to_string(b.values.size()) +
                         " does not match a complex with " + std::to_string(ne) + " edges");
    }
    const Eigen::SparseMatrix<double> b1 = inc.b1_real();
    const Eigen::SparseMatrix<double> b2 = inc.b2_real();

    HodgeDecomp d;
    const Eigen::MatrixXd l0 = Eigen::MatrixXd(b1 * b1.transpose());
    const Eigen::VectorXd alpha = symmetric_pinv_solve(l0, b1 * b.values);
    d.grad.values = b1.transpose() * alpha;

    const Eigen::VectorXd rest = b.values - d.grad.values;
    if (b2.cols() > 0) {
        const Eigen::MatrixXd l2 = Eigen::MatrixXd(b2.transpose() * b2);
        const Eigen::VectorXd beta = symmetric_pinv_solve(l2, b2.transpose() * rest);
        d.curl.values = b2 * beta;
    } else {
        d.curl.values = Eigen::VectorXd::Zero(ne);
    }
    d.harm.values = rest - d.curl.values;

    const double total = b.values.squaredNorm();
    if (total > 0.0) {
        d.energy_grad = d.grad.values.squaredNorm() / total;
        d.energy_curl = d.curl.values.squaredNorm() / total;
        d.energy_harm = d.harm.values.squaredNorm() / total;
    }
    return d;
}

double harmonic_fraction(const EdgeSignal& b, const HodgeDecomp& d) {
    const double total = b.values.squaredNorm();
    if (!(total > 0.0)) throw UndefinedError("harmonic fraction is undefined for a zero edge signal");
    return d.harm.values.squaredNorm() / total;
}

ResidualReport residual_certificate(const Complex2& k, const SignedIncidence& inc, const EdgeSignal& b,
                                    const HodgeDecomp& d) {
    const auto ne = static_cast<Eigen::Index>(k.edges.size());
    if (b.values.size() != ne) throw ShapeError("edge signal does not match complex");
    const Eigen::Index nv = inc.b1.rows();
    const Eigen::Index nt = inc.b2.cols();

    Eigen::MatrixXd stacked(ne, nv + nt);
    stacked.leftCols(nv) = Eigen::MatrixXd(inc.b1_real().transpose());
    if (nt > 0) stacked.rightCols(nt) = Eigen::MatrixXd(inc.b2_real());

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    cod.setThreshold(rank_tolerance(stacked.rows(), stacked.cols(), 1.0));
    cod.compute(stacked);
    const Eigen::VectorXd x = cod.solve(b.values);
    const Eigen::VectorXd r = b.values - stacked * x;

    ResidualReport out;
    out.residual_lsq = r.squaredNorm();
    out.harm_energy = d.harm.values.squaredNorm();
    return out;
}

}  // namespace hodgecover
