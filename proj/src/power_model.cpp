#include "gridgram/power_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "gridgram/errors.hpp"

namespace gridgram {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kRowSumTol = 1e-10;
constexpr double kOffDiagonalTol = 1e-12;
constexpr double kPsdTol = 1e-10;

std::string entry_path(const std::string& field, Eigen::Index r, Eigen::Index c) {
    std::ostringstream os;
    os << field << '[' << r << "][" << c << ']';
    return os.str();
}

std::string number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double sign(double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); }

void validate_positive(const Vector& v, std::size_t n, const std::string& field) {
    if (static_cast<std::size_t>(v.size()) != n) {
        throw ValidationError(field, "expected " + std::to_string(n) + " entries, got " +
                                         std::to_string(v.size()));
    }
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (!std::isfinite(v(k)) || !(v(k) > 0.0)) {
            throw ValidationError(field + "[" + std::to_string(k) + "]",
                                  "must be a positive finite number, got " + number(v(k)));
        }
    }
}

}  // namespace

EdgeId EdgeId::make(int a, int b) {
    if (a < 1 || b < 1 || a == b) {
        throw ArgumentError("invalid edge (" + std::to_string(a) + "," + std::to_string(b) +
                            "): indices must be distinct and >= 1");
    }
    return EdgeId{std::max(a, b), std::min(a, b)};
}

std::string EdgeId::label() const {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

bool edge_less(const EdgeId& a, const EdgeId& b) {
    return a.j != b.j ? a.j < b.j : a.i < b.i;
}

void validate_laplacian(const Matrix& l, const std::string& field) {
    if (l.rows() < 2 || l.rows() != l.cols()) {
        throw ValidationError(field, "expected a square matrix with at least 2 rows");
    }
    for (Eigen::Index r = 0; r < l.rows(); ++r) {
        for (Eigen::Index c = 0; c < l.cols(); ++c) {
            if (!std::isfinite(l(r, c))) {
                throw ValidationError(entry_path(field, r, c), "entry is not finite");
            }
        }
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(l), Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    for (Eigen::Index r = 0; r < l.rows(); ++r) {
        double row_sum = 0.0;
        for (Eigen::Index c = 0; c < l.cols(); ++c) {
            row_sum += l(r, c);
            if (c == r) {
                continue;
            }
            if (std::abs(l(r, c) - l(c, r)) > kSymmetryTol * scale) {
                throw ValidationError(entry_path(field, r, c),
                                      "Laplacian is not symmetric (" + number(l(r, c)) +
                                          " vs " + number(l(c, r)) + ")");
            }
            if (l(r, c) > kOffDiagonalTol) {
                throw ValidationError(entry_path(field, r, c),
                                      "off-diagonal entry must be non-positive, got " +
                                          number(l(r, c)));
            }
        }
        if (std::abs(row_sum) > kRowSumTol) {
            throw ValidationError(field + "[" + std::to_string(r) + "]",
                                  "row sum must be zero, got " + number(row_sum));
        }
    }
    if (eig.eigenvalues().minCoeff() < -kPsdTol) {
        throw ValidationError(field, "Laplacian is not positive semidefinite");
    }
}

double canonicalize_laplacian(Matrix& l) {
    double largest = 0.0;
    for (Eigen::Index r = 0; r < l.rows(); ++r) {
        for (Eigen::Index c = r + 1; c < l.cols(); ++c) {
            const double avg = 0.5 * (l(r, c) + l(c, r));
            largest = std::max(largest, std::abs(l(r, c) - avg));
            l(r, c) = avg;
            l(c, r) = avg;
        }
    }
    for (Eigen::Index r = 0; r < l.rows(); ++r) {
        double off = 0.0;
        for (Eigen::Index c = 0; c < l.cols(); ++c) {
            if (c != r) {
                off += l(r, c);
            }
        }
        l(r, r) = -off;
    }
    return largest;
}

GeneratorNetwork GeneratorNetwork::create(Vector inertia, Vector damping, Matrix laplacian) {
    const auto n = static_cast<std::size_t>(laplacian.rows());
    validate_laplacian(laplacian);
    validate_positive(inertia, n, "M");
    validate_positive(damping, n, "D");
    return GeneratorNetwork(std::move(inertia), std::move(damping), std::move(laplacian));
}

double GeneratorNetwork::weight(const EdgeId& edge) const {
    if (static_cast<std::size_t>(edge.i) > size()) {
        throw ArgumentError("edge " + edge.label() + " exceeds network size " +
                            std::to_string(size()));
    }
    return -laplacian_(edge.row(), edge.col());
}

GeneratorNetwork GeneratorNetwork::with_laplacian(Matrix laplacian) const {
    return create(inertia_, damping_, std::move(laplacian));
}

double laplacian_entry(const ReducedAdmittanceData& data, std::size_t j, std::size_t i) {
    const auto y = data.y(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
    if (std::abs(y) == 0.0) {
        return 0.0;
    }
    const double phi = -sign(static_cast<double>(j) - static_cast<double>(i)) *
                       std::atan(y.real() / y.imag());
    const auto jj = static_cast<Eigen::Index>(j);
    const auto ii = static_cast<Eigen::Index>(i);
    return -std::abs(y) * data.e(jj) * data.e(ii) *
           std::cos(data.theta_eq(jj) - data.theta_eq(ii) - phi);
}

Matrix laplacian_from_admittance(const ReducedAdmittanceData& data) {
    const auto n = static_cast<Eigen::Index>(data.size());
    if (n < 2 || data.y.rows() != n || data.y.cols() != n || data.theta_eq.size() != n) {
        throw ValidationError("admittance", "inconsistent dimensions");
    }
    for (Eigen::Index r = 0; r < n; ++r) {
        if (!(data.e(r) > 0.0) || !std::isfinite(data.e(r))) {
            throw ValidationError("admittance.E[" + std::to_string(r) + "]",
                                  "voltage must be positive");
        }
        for (Eigen::Index c = r + 1; c < n; ++c) {
            if (std::abs(data.y(r, c) - data.y(c, r)) > kSymmetryTol) {
                throw ValidationError(entry_path("admittance.Y", r, c),
                                      "admittance matrix is not symmetric");
            }
        }
    }
    Matrix l = Matrix::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            if (r != c) {
                l(r, c) = laplacian_entry(data, static_cast<std::size_t>(r),
                                          static_cast<std::size_t>(c));
            }
        }
    }
    const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = r + 1; c < n; ++c) {
            if (std::abs(l(r, c) - l(c, r)) > kSymmetryTol * scale) {
                throw ModelInconsistency("Laplacian entry " + entry_path("L", r, c) +
                                         " is asymmetric; check the equilibrium data");
            }
            if (l(r, c) > kOffDiagonalTol) {
                throw ModelInconsistency("Laplacian entry " + entry_path("L", r, c) + " = " +
                                         number(l(r, c)) +
                                         " is positive; check the equilibrium data");
            }
        }
    }
    canonicalize_laplacian(l);
    return l;
}

Projection build_projection(std::size_t n) {
    if (n < 2) {
        throw ArgumentError("build_projection: need at least 2 generators");
    }
    const auto size = static_cast<Eigen::Index>(n);
    Vector w = Vector::Constant(size, 1.0 / std::sqrt(static_cast<double>(n)));
    w(0) -= 1.0;
    const Matrix reflector =
        Matrix::Identity(size, size) - (2.0 / w.squaredNorm()) * (w * w.transpose());
    Projection p;
    p.u = reflector.rightCols(size - 1);
    p.t = Matrix::Zero(2 * size, 2 * size - 1);
    p.t.topLeftCorner(size, size - 1) = p.u;
    p.t.bottomRightCorner(size, size) = Matrix::Identity(size, size);
    return p;
}

FullSystem build_full_system(const Vector& inertia, const Vector& damping,
                             const Matrix& laplacian) {
    const auto n = inertia.size();
    const Vector inv_m = inertia.cwiseInverse();
    FullSystem sys;
    sys.a = Matrix::Zero(2 * n, 2 * n);
    sys.a.topRightCorner(n, n) = Matrix::Identity(n, n);
    sys.a.bottomLeftCorner(n, n) = -(inv_m.asDiagonal() * laplacian);
    sys.a.bottomRightCorner(n, n) = -inv_m.cwiseProduct(damping).asDiagonal().toDenseMatrix();
    sys.b = Matrix::Zero(2 * n, n);
    sys.b.bottomRows(n) = inv_m.asDiagonal().toDenseMatrix();
    return sys;
}

FullSystem build_full_system(const GeneratorNetwork& net) {
    return build_full_system(net.inertia(), net.damping(), net.laplacian());
}

ReducedSystem reduce(const GeneratorNetwork& net, const Projection& projection) {
    return reduce(net.inertia(), net.damping(), net.laplacian(), projection);
}

ReducedSystem reduce(const Vector& inertia, const Vector& damping, const Matrix& laplacian,
                     const Projection& projection) {
    const FullSystem full = build_full_system(inertia, damping, laplacian);
    ReducedSystem sys;
    sys.a = projection.t.transpose() * full.a * projection.t;
    sys.b = projection.t.transpose() * full.b;
    sys.projection = projection;
    return sys;
}

ReducedSystem build_reduced_system(const GeneratorNetwork& net) {
    ReducedSystem sys = reduce(net, build_projection(net.size()));
    const double abscissa = spectral_abscissa(sys.a);
    if (!(abscissa < 0.0)) {
        throw StabilityViolation("reduced state matrix is not Hurwitz (spectral abscissa " +
                                 number(abscissa) + ")");
    }
    return sys;
}

Matrix edge_laplacian(const EdgeId& edge, std::size_t n) {
    if (static_cast<std::size_t>(edge.i) > n) {
        throw ArgumentError("edge " + edge.label() + " exceeds network size " +
                            std::to_string(n));
    }
    const auto size = static_cast<Eigen::Index>(n);
    Matrix v = Matrix::Zero(size, size);
    const auto a = static_cast<Eigen::Index>(edge.row());
    const auto b = static_cast<Eigen::Index>(edge.col());
    v(a, a) = 1.0;
    v(b, b) = 1.0;
    v(a, b) = -1.0;
    v(b, a) = -1.0;
    return v;
}

std::complex<double> recover_modified_admittance(const ReducedAdmittanceData& data,
                                                 const EdgeId& edge, double gamma_k, double rho) {
    if (static_cast<std::size_t>(edge.i) > data.size()) {
        throw ArgumentError("edge " + edge.label() + " exceeds network size");
    }
    if (!(rho >= 0.0) || !std::isfinite(rho)) {
        throw ArgumentError("rho must be a finite non-negative number");
    }
    // The formula is written for the ordered pair (j, i) of the entry l_ji.
    const std::size_t j = edge.col();
    const std::size_t i = edge.row();
    const auto jj = static_cast<Eigen::Index>(j);
    const auto ii = static_cast<Eigen::Index>(i);
    const double l_ji = laplacian_entry(data, j, i);
    const double target = gamma_k - l_ji;
    const double cosine =
        std::cos(data.theta_eq(jj) - data.theta_eq(ii) +
                 sign(static_cast<double>(j) - static_cast<double>(i)) * std::atan(rho));
    if (std::abs(cosine) <= 1e-9) {
        throw DegenerateEquilibrium("admittance recovery for edge " + edge.label() +
                                    ": cosine denominator vanishes");
    }
    if (target != 0.0 && (target > 0.0) != (cosine > 0.0)) {
        throw DegenerateEquilibrium("admittance recovery for edge " + edge.label() +
                                    ": no admittance with rho = " + number(rho) +
                                    " realizes the requested susceptance");
    }
    const double denom = data.e(jj) * data.e(ii) * cosine;
    const double root = std::sqrt(rho * rho + 1.0);
    return {rho / root * target / denom, 1.0 / root * target / denom};
}

}  // namespace gridgram
