#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridgram/linalg.hpp"
#include "gridgram/power_model.hpp"

namespace gridgram {

/// Gramian performance metrics; all three are maximized.
enum class MetricKind { Trace, LogDet, NegTraceInv };

inline constexpr std::array<MetricKind, 3> kAllMetrics = {MetricKind::Trace, MetricKind::LogDet,
                                                          MetricKind::NegTraceInv};

/// "trace", "logdet", "neg-trace-inv".
std::string_view metric_name(MetricKind kind);
std::optional<MetricKind> parse_metric(std::string_view name);

struct GramianResult {
    Matrix w;
    std::optional<double> horizon;  ///< nullopt for the infinite horizon
    bool positive_definite = false;
    double trace = 0.0;
    std::optional<double> logdet;         ///< set iff positive_definite
    std::optional<double> neg_trace_inv;  ///< set iff positive_definite

    /// Throws NotPositiveDefinite for LogDet/NegTraceInv on a singular W.
    double metric(MetricKind kind) const;
};

/// W solving A W + W A^T + B B^T = 0.
GramianResult gramian_infinite(const ReducedSystem& sys);

/// Finite-horizon Gramian, from A W + W A^T + B B^T - e^{A tf} B B^T e^{A^T tf} = 0.
GramianResult gramian_finite(const ReducedSystem& sys, double tf);

/// -1 / alpha(A).
double default_horizon(const ReducedSystem& sys);

/// tr(W), log det(W) or -tr(W^-1).
double metric_value(const Matrix& w, MetricKind kind);

/// x0^T W(tf)^-1 x0; `tf` = nullopt selects the infinite horizon.
double minimum_energy_cost(const ReducedSystem& sys, const Vector& x0, std::optional<double> tf);

/// Same, reusing a precomputed Gramian inverse.
double minimum_energy_cost(const Matrix& w_inverse, const Vector& x0);

/// Steering input u(t) = -B^T e^{A^T (tf - t)} W(tf)^-1 e^{A tf} x0.
class MinimumEnergyInput {
public:
    MinimumEnergyInput(const ReducedSystem& sys, const Vector& x0, double tf);

    Vector operator()(double t) const;
    double horizon() const { return tf_; }

private:
    Matrix a_;
    Matrix b_;
    double tf_;
    Vector costate_;  ///< W(tf)^-1 e^{A tf} x0
};

Vector minimum_energy_input(const ReducedSystem& sys, const Vector& x0, double tf, double t);

struct DampedPole {
    Complex pole;
    double zeta = 0.0;  ///< percent
};

/// Damping ratio in percent, 100 * (-Re p) / |p|.
double damping_ratio(Complex pole);

/// Damping ratio of every nonzero eigenvalue of `a`, sorted by |Im p|
/// ascending, then by |Re p| ascending.
std::vector<DampedPole> damping_report(const Matrix& a);

/// The slow mode: the oscillatory pole (Im p > 0) with the smallest |Re p|, or
/// the real pole with smallest |Re p| when no oscillatory pole exists.
std::optional<DampedPole> slow_mode(const std::vector<DampedPole>& report);

}  // namespace gridgram
