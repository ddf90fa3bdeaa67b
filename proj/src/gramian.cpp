#include "gridgram/gramian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gridgram/errors.hpp"

namespace gridgram {

namespace {

GramianResult finish(Matrix w, std::optional<double> horizon) {
    GramianResult out;
    out.w = std::move(w);
    out.horizon = horizon;
    out.trace = out.w.trace();
    try {
        const SpdFactorization f = spd_inverse_and_logdet(out.w);
        out.positive_definite = true;
        out.logdet = f.logdet;
        out.neg_trace_inv = -f.inverse.trace();
    } catch (const NotPositiveDefinite&) {
        out.positive_definite = false;
    }
    return out;
}

}  // namespace

std::string_view metric_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::Trace:
            return "trace";
        case MetricKind::LogDet:
            return "logdet";
        case MetricKind::NegTraceInv:
            return "neg-trace-inv";
    }
    return "unknown";
}

std::optional<MetricKind> parse_metric(std::string_view name) {
    for (const MetricKind kind : kAllMetrics) {
        if (metric_name(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

double GramianResult::metric(MetricKind kind) const {
    switch (kind) {
        case MetricKind::Trace:
            return trace;
        case MetricKind::LogDet:
            if (!logdet) {
                throw NotPositiveDefinite("Gramian is not positive definite; log det undefined");
            }
            return *logdet;
        case MetricKind::NegTraceInv:
            if (!neg_trace_inv) {
                throw NotPositiveDefinite("Gramian is not positive definite; inverse undefined");
            }
            return *neg_trace_inv;
    }
    throw ArgumentError("unknown metric");
}

GramianResult gramian_infinite(const ReducedSystem& sys) {
    return finish(solve_lyapunov(sys.a, sys.b * sys.b.transpose()), std::nullopt);
}

GramianResult gramian_finite(const ReducedSystem& sys, double tf) {
    if (!(tf > 0.0) || !std::isfinite(tf)) {
        throw ArgumentError("gramian_finite: horizon must be positive and finite");
    }
    const Matrix bbt = sys.b * sys.b.transpose();
    const Matrix phi = matrix_exponential(sys.a, tf);
    return finish(solve_lyapunov(sys.a, bbt - phi * bbt * phi.transpose()), tf);
}

double default_horizon(const ReducedSystem& sys) {
    const double abscissa = spectral_abscissa(sys.a);
    if (!(abscissa < 0.0)) {
        throw StabilityViolation("default horizon needs a Hurwitz state matrix");
    }
    return -1.0 / abscissa;
}

double metric_value(const Matrix& w, MetricKind kind) {
    switch (kind) {
        case MetricKind::Trace:
            return w.trace();
        case MetricKind::LogDet:
            return spd_inverse_and_logdet(w).logdet;
        case MetricKind::NegTraceInv:
            return -spd_inverse_and_logdet(w).inverse.trace();
    }
    throw ArgumentError("unknown metric");
}

double minimum_energy_cost(const Matrix& w_inverse, const Vector& x0) {
    if (x0.size() != w_inverse.rows()) {
        throw ArgumentError("minimum_energy_cost: state dimension mismatch");
    }
    return x0.dot(w_inverse * x0);
}

double minimum_energy_cost(const ReducedSystem& sys, const Vector& x0, std::optional<double> tf) {
    const GramianResult g = tf ? gramian_finite(sys, *tf) : gramian_infinite(sys);
    return minimum_energy_cost(spd_inverse_and_logdet(g.w).inverse, x0);
}

MinimumEnergyInput::MinimumEnergyInput(const ReducedSystem& sys, const Vector& x0, double tf)
    : a_(sys.a), b_(sys.b), tf_(tf) {
    if (x0.size() != sys.a.rows()) {
        throw ArgumentError("minimum_energy_input: state dimension mismatch");
    }
    const GramianResult g = gramian_finite(sys, tf);
    costate_ = spd_inverse_and_logdet(g.w).inverse * (matrix_exponential(a_, tf) * x0);
}

Vector MinimumEnergyInput::operator()(double t) const {
    if (!(t >= 0.0 && t <= tf_)) {
        throw ArgumentError("minimum_energy_input: t must lie in [0, tf]");
    }
    return -(b_.transpose() * (matrix_exponential(a_.transpose(), tf_ - t) * costate_));
}

Vector minimum_energy_input(const ReducedSystem& sys, const Vector& x0, double tf, double t) {
    return MinimumEnergyInput(sys, x0, tf)(t);
}

double damping_ratio(Complex pole) {
    return 100.0 * (-pole.real()) / std::hypot(pole.real(), pole.imag());
}

std::vector<DampedPole> damping_report(const Matrix& a) {
    std::vector<DampedPole> out;
    for (const Complex& p : spectral_summary(a).eigenvalues) {
        if (p == Complex(0.0, 0.0)) {
            continue;
        }
        out.push_back({p, damping_ratio(p)});
    }
    std::stable_sort(out.begin(), out.end(), [](const DampedPole& x, const DampedPole& y) {
        const double ix = std::abs(x.pole.imag());
        const double iy = std::abs(y.pole.imag());
        if (ix != iy) {
            return ix < iy;
        }
        const double rx = std::abs(x.pole.real());
        const double ry = std::abs(y.pole.real());
        if (rx != ry) {
            return rx < ry;
        }
        return x.pole.imag() > y.pole.imag();
    });
    return out;
}

std::optional<DampedPole> slow_mode(const std::vector<DampedPole>& report) {
    std::optional<DampedPole> oscillatory;
    std::optional<DampedPole> real;
    for (const DampedPole& p : report) {
        auto& slot = p.pole.imag() > 0.0 ? oscillatory : real;
        if (p.pole.imag() < 0.0) {
            continue;
        }
        if (!slot || std::abs(p.pole.real()) < std::abs(slot->pole.real())) {
            slot = p;
        }
    }
    return oscillatory ? oscillatory : real;
}

}  // namespace gridgram
