#pragma once

#include <compare>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gridgram/linalg.hpp"

namespace gridgram {

/// Unordered generator pair, stored canonically with i > j. Indices are
/// 1-based to match the usual (i, j) labelling of lines between generators.
struct EdgeId {
    int i = 2;
    int j = 1;

    /// Canonicalizes an unordered pair; throws ArgumentError when a == b or an
    /// index is below 1.
    static EdgeId make(int a, int b);

    std::size_t row() const { return static_cast<std::size_t>(i - 1); }
    std::size_t col() const { return static_cast<std::size_t>(j - 1); }

    std::string label() const;

    friend bool operator==(const EdgeId&, const EdgeId&) = default;
};

/// Lexicographic on (j, i); used as the deterministic tie-break everywhere.
bool edge_less(const EdgeId& a, const EdgeId& b);

/// Kron-reduced admittance data at an operating point.
struct ReducedAdmittanceData {
    Eigen::MatrixXcd y;  ///< N x N, symmetric
    Vector e;            ///< q-axis voltage magnitudes
    Vector theta_eq;     ///< equilibrium rotor angles [rad]

    std::size_t size() const { return static_cast<std::size_t>(e.size()); }
};

/// Swing-equation network: inertias, dampings and the susceptance Laplacian.
/// Instances always satisfy the Laplacian and positivity invariants.
class GeneratorNetwork {
public:
    /// Validates and builds. Throws ValidationError naming the offending entry.
    static GeneratorNetwork create(Vector inertia, Vector damping, Matrix laplacian);

    std::size_t size() const { return static_cast<std::size_t>(inertia_.size()); }
    const Vector& inertia() const { return inertia_; }
    const Vector& damping() const { return damping_; }
    const Matrix& laplacian() const { return laplacian_; }

    /// Adjacency weight g_ji = -l_ji of an edge.
    double weight(const EdgeId& edge) const;

    /// Same M and D with a different Laplacian (validated).
    GeneratorNetwork with_laplacian(Matrix laplacian) const;

private:
    GeneratorNetwork(Vector inertia, Vector damping, Matrix laplacian)
        : inertia_(std::move(inertia)), damping_(std::move(damping)),
          laplacian_(std::move(laplacian)) {}

    Vector inertia_;
    Vector damping_;
    Matrix laplacian_;
};

/// Checks the Laplacian invariants (symmetry, zero row sums, non-positive
/// off-diagonals, PSD). Throws ValidationError with the entry path prefixed by
/// `field`.
void validate_laplacian(const Matrix& l, const std::string& field = "L");

/// Symmetrizes and rebalances the diagonal so each row sums to exactly zero.
/// Returns the largest absolute change applied to any off-diagonal entry.
double canonicalize_laplacian(Matrix& l);

/// Off-diagonal Laplacian entry from admittance data, with the sign-corrected
/// phase shift phi_ji = -sign(j - i) atan(Re y_ji / Im y_ji). Indices 0-based.
double laplacian_entry(const ReducedAdmittanceData& data, std::size_t j, std::size_t i);

/// Builds the susceptance Laplacian from admittance data. Throws
/// ModelInconsistency when the result is asymmetric or has a positive
/// off-diagonal entry.
Matrix laplacian_from_admittance(const ReducedAdmittanceData& data);

struct Projection {
    Matrix u;  ///< N x (N-1), orthonormal basis of the complement of 1_N
    Matrix t;  ///< 2N x (2N-1), blockdiag(U, I_N)
};

/// Deterministic projection: U is columns 2..N of the Householder reflector
/// that maps 1_N / sqrt(N) onto e_1.
Projection build_projection(std::size_t n);

/// Full swing-dynamics pair (angles then frequencies), n = 2N.
struct FullSystem {
    Matrix a;
    Matrix b;
};

FullSystem build_full_system(const GeneratorNetwork& net);

/// Full system for arbitrary M, D, L; no invariant checks.
FullSystem build_full_system(const Vector& inertia, const Vector& damping, const Matrix& laplacian);

/// State-space pair after eliminating the average (uniform angle) mode.
struct ReducedSystem {
    Matrix a;  ///< (2N-1) x (2N-1)
    Matrix b;  ///< (2N-1) x N
    Projection projection;

    Eigen::Index order() const { return a.rows(); }
};

/// A = T^T Abar(L) T and B = T^T Bbar, without checking stability.
ReducedSystem reduce(const GeneratorNetwork& net, const Projection& projection);

/// Reduction for a candidate Laplacian that has not been validated (used when
/// probing modified networks, which may be infeasible).
ReducedSystem reduce(const Vector& inertia, const Vector& damping, const Matrix& laplacian,
                     const Projection& projection);

/// Same as `reduce`, additionally requiring A to be Hurwitz (throws
/// StabilityViolation otherwise).
ReducedSystem build_reduced_system(const GeneratorNetwork& net);

/// V_ji = E_jj - E_ji - E_ij + E_ii for an N-node graph.
Matrix edge_laplacian(const EdgeId& edge, std::size_t n);

/// Admittance y_hat_ji that realizes the modified Laplacian entry
/// l_ji - gamma_k, for a chosen phase design parameter rho = tan|phi_hat_ji|.
///
/// Throws DegenerateEquilibrium when |cos(theta_j - theta_i + sign(j - i)
/// atan(rho))| <= 1e-9, or when the cosine has the opposite sign of
/// gamma_k - l_ji: no admittance magnitude can then reproduce the target entry.
std::complex<double> recover_modified_admittance(const ReducedAdmittanceData& data,
                                                 const EdgeId& edge, double gamma_k, double rho);

}  // namespace gridgram
