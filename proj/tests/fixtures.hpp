#pragma once

#include "gridgram/power_model.hpp"

namespace fixture {

using gridgram::Complex;
using gridgram::Matrix;
using gridgram::Vector;

/// Kron-reduced IEEE 9-bus generator network.
inline gridgram::GeneratorNetwork ieee9() {
    Vector m(3);
    Vector d(3);
    Matrix l(3, 3);
    m << 0.1254, 0.0340, 0.0160;
    d << 0.0125, 0.0068, 0.0048;
    l << 2.1276, -0.9498, -1.1778, -0.9498, 2.6715, -1.7217, -1.1778, -1.7217, 2.8995;
    return gridgram::GeneratorNetwork::create(m, d, l);
}

/// Two-generator admittance data with a small transfer conductance.
inline gridgram::ReducedAdmittanceData toy_admittance() {
    gridgram::ReducedAdmittanceData data;
    data.y = Eigen::MatrixXcd(2, 2);
    data.y << Complex(0.3, -4.0), Complex(0.2, 5.0), Complex(0.2, 5.0), Complex(0.25, -4.5);
    data.e = Vector(2);
    data.e << 1.05, 1.02;
    data.theta_eq = Vector(2);
    data.theta_eq << 0.12, 0.0;
    return data;
}

}  // namespace fixture
