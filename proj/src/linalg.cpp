#include "gridgram/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "gridgram/errors.hpp"

namespace gridgram {

namespace {

void require_square(const Matrix& a, const char* what) {
    if (a.rows() < 1 || a.rows() != a.cols()) {
        throw ArgumentError(std::string(what) + ": expected a non-empty square matrix, got " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    if (!all_finite(a)) {
        throw ArgumentError(std::string(what) + ": matrix has non-finite entries");
    }
}

// Diagonal block boundaries of a quasi-upper-triangular matrix: start index
// and size (1 or 2) of each block.
struct Block {
    Eigen::Index start;
    Eigen::Index size;
};

std::vector<Block> diagonal_blocks(const Matrix& t) {
    std::vector<Block> blocks;
    const Eigen::Index n = t.rows();
    for (Eigen::Index k = 0; k < n;) {
        if (k + 1 < n && t(k + 1, k) != 0.0) {
            blocks.push_back({k, 2});
            k += 2;
        } else {
            blocks.push_back({k, 1});
            k += 1;
        }
    }
    return blocks;
}

// Solves S Y + Y R^T = C for blocks of order at most two via the 4x4
// Kronecker system (I (x) S + R (x) I) vec(Y) = vec(C).
Matrix solve_small_sylvester(const Matrix& s, const Matrix& r, const Matrix& c) {
    const Eigen::Index p = s.rows();
    const Eigen::Index q = r.rows();
    Matrix k = Matrix::Zero(p * q, p * q);
    for (Eigen::Index col = 0; col < q; ++col) {
        k.block(col * p, col * p, p, p) += s;
        for (Eigen::Index other = 0; other < q; ++other) {
            k.block(col * p, other * p, p, p) += r(col, other) * Matrix::Identity(p, p);
        }
    }
    const Vector rhs = Eigen::Map<const Vector>(c.data(), p * q);
    Eigen::FullPivLU<Matrix> lu(k);
    if (!lu.isInvertible()) {
        throw NumericalFailure("Lyapunov solve: singular diagonal block system");
    }
    const Vector y = lu.solve(rhs);
    return Eigen::Map<const Matrix>(y.data(), p, q);
}

}  // namespace

bool all_finite(const Matrix& a) { return a.allFinite(); }

SchurForm schur_decompose(const Matrix& a) {
    require_square(a, "schur_decompose");
    Eigen::RealSchur<Matrix> schur(a);
    if (schur.info() != Eigen::Success) {
        throw NumericalFailure("schur_decompose: QR iteration did not converge");
    }
    return {schur.matrixU(), schur.matrixT()};
}

SpectralSummary spectral_summary(const Matrix& a) {
    require_square(a, "spectral_summary");
    Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("eigenvalue iteration did not converge");
    }
    SpectralSummary out;
    const auto& values = solver.eigenvalues();
    out.eigenvalues.assign(values.data(), values.data() + values.size());
    out.spectral_abscissa = -std::numeric_limits<double>::infinity();
    for (const auto& z : out.eigenvalues) {
        out.spectral_abscissa = std::max(out.spectral_abscissa, z.real());
    }
    return out;
}

double spectral_abscissa(const Matrix& a) { return spectral_summary(a).spectral_abscissa; }

Matrix solve_lyapunov(const Matrix& a, const Matrix& q) {
    require_square(a, "solve_lyapunov");
    if (q.rows() != a.rows() || q.cols() != a.cols()) {
        throw ArgumentError("solve_lyapunov: Q dimensions do not match A");
    }
    if (!all_finite(q)) {
        throw ArgumentError("solve_lyapunov: Q has non-finite entries");
    }
    const SchurForm schur = schur_decompose(a);
    double abscissa = -std::numeric_limits<double>::infinity();
    const auto blocks = diagonal_blocks(schur.t);
    for (const auto& b : blocks) {
        const double re = b.size == 1 ? schur.t(b.start, b.start)
                                      : 0.5 * (schur.t(b.start, b.start) +
                                               schur.t(b.start + 1, b.start + 1));
        abscissa = std::max(abscissa, re);
    }
    if (!(abscissa < 0.0)) {
        throw StabilityViolation("solve_lyapunov: A is not Hurwitz (spectral abscissa " +
                                 std::to_string(abscissa) + ")");
    }

    // T Y + Y T^T = -Q~ with Q~ = Q^T Q Q, solved block column by block
    // column from the bottom-right corner.
    const Matrix& t = schur.t;
    const Matrix c = -(schur.q.transpose() * q * schur.q);
    Matrix y = Matrix::Zero(a.rows(), a.cols());
    for (auto k = blocks.rbegin(); k != blocks.rend(); ++k) {
        for (auto i = blocks.rbegin(); i != blocks.rend(); ++i) {
            Matrix rhs = c.block(i->start, k->start, i->size, k->size);
            const Eigen::Index tail_i = i->start + i->size;
            const Eigen::Index tail_k = k->start + k->size;
            const Eigen::Index n = a.rows();
            if (tail_i < n) {
                rhs -= t.block(i->start, tail_i, i->size, n - tail_i) *
                       y.block(tail_i, k->start, n - tail_i, k->size);
            }
            if (tail_k < n) {
                rhs -= y.block(i->start, tail_k, i->size, n - tail_k) *
                       t.block(k->start, tail_k, k->size, n - tail_k).transpose();
            }
            y.block(i->start, k->start, i->size, k->size) = solve_small_sylvester(
                t.block(i->start, i->start, i->size, i->size),
                t.block(k->start, k->start, k->size, k->size), rhs);
        }
    }
    return symmetrize(schur.q * y * schur.q.transpose());
}

Matrix matrix_exponential(const Matrix& a, double t) {
    require_square(a, "matrix_exponential");
    if (!std::isfinite(t)) {
        throw ArgumentError("matrix_exponential: non-finite time");
    }
    if (t == 0.0) {
        return Matrix::Identity(a.rows(), a.cols());
    }
    const Matrix scaled = a * t;
    Matrix out = scaled.exp();
    if (!all_finite(out)) {
        throw NumericalFailure("matrix_exponential: result overflowed");
    }
    return out;
}

SpdFactorization spd_inverse_and_logdet(const Matrix& w) {
    require_square(w, "spd_inverse_and_logdet");
    Eigen::LLT<Matrix> llt(symmetrize(w));
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite(
            "Cholesky factorization failed: matrix is not positive definite "
            "(uncontrollable pair or numerically singular Gramian)");
    }
    const Matrix lower = llt.matrixL();
    double logdet = 0.0;
    for (Eigen::Index k = 0; k < lower.rows(); ++k) {
        const double d = lower(k, k);
        if (!(d > 0.0)) {
            throw NotPositiveDefinite("Cholesky factor has a non-positive pivot");
        }
        logdet += std::log(d);
    }
    SpdFactorization out;
    out.logdet = 2.0 * logdet;
    out.inverse = symmetrize(llt.solve(Matrix::Identity(w.rows(), w.cols())));
    return out;
}

}  // namespace gridgram
