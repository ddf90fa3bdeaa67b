#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace gridgram {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

struct SchurForm {
    Matrix q;  ///< orthogonal
    Matrix t;  ///< quasi-upper-triangular, 1x1 and 2x2 diagonal blocks
};

struct SpectralSummary {
    std::vector<Complex> eigenvalues;
    double spectral_abscissa = 0.0;
};

/// Real Schur form A = Q T Q^T.
SchurForm schur_decompose(const Matrix& a);

SpectralSummary spectral_summary(const Matrix& a);

/// Largest real part over the eigenvalues of `a`.
double spectral_abscissa(const Matrix& a);

inline bool is_hurwitz(const Matrix& a) { return spectral_abscissa(a) < 0.0; }

/// Solves A X + X A^T + Q = 0 by Bartels-Stewart on the real Schur form of A.
/// A must be Hurwitz (strict). The result is symmetrized before returning.
Matrix solve_lyapunov(const Matrix& a, const Matrix& q);

/// exp(A t), Pade(13) scaling and squaring. exp(A 0) is the identity exactly.
Matrix matrix_exponential(const Matrix& a, double t);

struct SpdFactorization {
    Matrix inverse;
    double logdet = 0.0;
};

/// Inverse and log-determinant of a symmetric positive definite matrix via
/// Cholesky. Throws NotPositiveDefinite when the factorization fails.
SpdFactorization spd_inverse_and_logdet(const Matrix& w);

inline Matrix symmetrize(const Matrix& x) { return 0.5 * (x + x.transpose()); }

bool all_finite(const Matrix& a);

}  // namespace gridgram
