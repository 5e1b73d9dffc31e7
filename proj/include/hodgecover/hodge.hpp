#pragma once

// Orthogonal Hodge decomposition of edge signals:
//   b = grad + curl + harm,  grad in im(d1^T), curl in im(d2), harm in ker(L1).

#include "hodgecover/simplicial.hpp"

namespace hodgecover {

struct HodgeDecomp {
    EdgeSignal grad;
    EdgeSignal curl;
    EdgeSignal harm;
    double energy_grad = 0.0;  // squared-norm fractions of the input; all 0 for b = 0
    double energy_curl = 0.0;
    double energy_harm = 0.0;
};

/// Two sequential least-squares projections:
///   alpha = argmin |d1^T alpha - b|        (via L0^+),  grad = d1^T alpha
///   beta  = argmin |d2 beta - (b - grad)|  (via L2^+),  curl = d2 beta
///   harm  = b - grad - curl
/// Throws ShapeError when b does not match the complex.
HodgeDecomp decompose(const Complex2& k, const SignedIncidence& inc, const EdgeSignal& b);

/// |harm|^2 / |b|^2. Throws UndefinedError for b = 0.
double harmonic_fraction(const EdgeSignal& b, const HodgeDecomp& d);

struct ResidualReport {
    double residual_lsq = 0.0;  // min over (phi, psi) of |b - d1^T phi - d2 psi|^2
    double harm_energy = 0.0;   // |harm|^2
};

/// Solves the joint least-squares problem over vertex and triangle potentials
/// directly on the stacked operator [d1^T | d2] and reports it next to the
/// harmonic energy of `d`.
ResidualReport residual_certificate(const Complex2& k, const SignedIncidence& inc, const EdgeSignal& b,
                                    const HodgeDecomp& d);

/// x = A^+ rhs for symmetric PSD A, using the library-wide rank tolerance.
Eigen::VectorXd symmetric_pinv_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs);

}  // namespace hodgecover
