#include "gridgram/network_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gridgram/errors.hpp"

namespace gridgram {

namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ValidationError(path + key, "required field is missing");
    }
    return *it;
}

double read_number(const json& v, const std::string& path) {
    if (!v.is_number()) {
        throw ValidationError(path, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ValidationError(path, "number is not finite");
    }
    return x;
}

Vector read_vector(const json& v, std::size_t n, const std::string& path) {
    if (!v.is_array()) {
        throw ValidationError(path, "expected an array of numbers");
    }
    if (v.size() != n) {
        throw ValidationError(path, "expected " + std::to_string(n) + " entries, got " +
                                        std::to_string(v.size()));
    }
    Vector out(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        out(static_cast<Eigen::Index>(k)) =
            read_number(v[k], path + "[" + std::to_string(k) + "]");
    }
    return out;
}

Matrix read_matrix(const json& v, std::size_t n, const std::string& path) {
    if (!v.is_array() || v.size() != n) {
        throw ValidationError(path, "expected an array of " + std::to_string(n) + " rows");
    }
    Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        out.row(static_cast<Eigen::Index>(r)) =
            read_vector(v[r], n, path + "[" + std::to_string(r) + "]").transpose();
    }
    return out;
}

std::string number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

json to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        out.push_back(v(k));
    }
    return out;
}

LoadedNetwork parse_network(const json& doc) {
    if (!doc.is_object()) {
        throw ValidationError("", "network file must contain a JSON object");
    }
    std::string name = "network";
    if (const auto it = doc.find("name"); it != doc.end()) {
        if (!it->is_string()) {
            throw ValidationError("name", "expected a string");
        }
        name = it->get<std::string>();
    }
    const json& n_field = require(doc, "N", "");
    if (!n_field.is_number_integer() || n_field.get<long long>() < 2) {
        throw ValidationError("N", "expected an integer >= 2");
    }
    const auto n = static_cast<std::size_t>(n_field.get<long long>());
    Vector inertia = read_vector(require(doc, "M", ""), n, "M");
    Vector damping = read_vector(require(doc, "D", ""), n, "D");

    const bool has_l = doc.contains("L");
    const bool has_y = doc.contains("admittance");
    if (has_l == has_y) {
        throw ValidationError("", "exactly one of \"L\" or \"admittance\" must be given");
    }

    std::vector<std::string> warnings;
    std::optional<ReducedAdmittanceData> admittance;
    Matrix l;
    if (has_l) {
        l = read_matrix(doc["L"], n, "L");
        for (Eigen::Index r = 0; r < l.rows(); ++r) {
            for (Eigen::Index c = 0; c < l.cols(); ++c) {
                if (r != c && l(r, c) > 1e-12) {
                    throw ValidationError("L[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                                          "off-diagonal entry must be non-positive, got " +
                                              number(l(r, c)));
                }
            }
        }
        const Vector diag_before = l.diagonal();
        const double sym_change = canonicalize_laplacian(l);
        const double diag_change = (l.diagonal() - diag_before).cwiseAbs().maxCoeff();
        if (sym_change > kCanonicalizationWarnThreshold) {
            warnings.push_back("L was re-symmetrized (largest change " + number(sym_change) + ")");
        }
        if (diag_change > kCanonicalizationWarnThreshold) {
            warnings.push_back("L diagonal was rebalanced to zero row sums (largest change " +
                               number(diag_change) + ")");
        }
    } else {
        const json& y = doc["admittance"];
        if (!y.is_object()) {
            throw ValidationError("admittance", "expected an object");
        }
        ReducedAdmittanceData data;
        const Matrix re = read_matrix(require(y, "Y_real", "admittance."), n, "admittance.Y_real");
        const Matrix im = read_matrix(require(y, "Y_imag", "admittance."), n, "admittance.Y_imag");
        data.y = re.cast<std::complex<double>>() +
                 std::complex<double>(0.0, 1.0) * im.cast<std::complex<double>>();
        data.e = read_vector(require(y, "E", "admittance."), n, "admittance.E");
        data.theta_eq = read_vector(require(y, "theta_eq", "admittance."), n, "admittance.theta_eq");
        l = laplacian_from_admittance(data);
        admittance = std::move(data);
    }
    return {std::move(name), GeneratorNetwork::create(std::move(inertia), std::move(damping), std::move(l)),
            std::move(admittance), std::move(warnings)};
}

LoadedNetwork ingest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError(path.string(), "cannot open network file");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string(), std::string("malformed JSON: ") + e.what());
    }
    return parse_network(doc);
}

json serialize_network(const LoadedNetwork& network) {
    json doc;
    doc["name"] = network.name;
    doc["N"] = network.net.size();
    doc["M"] = to_json(network.net.inertia());
    doc["D"] = to_json(network.net.damping());
    if (network.admittance) {
        const ReducedAdmittanceData& y = *network.admittance;
        doc["admittance"] = {{"Y_real", to_json(Matrix(y.y.real()))},
                             {"Y_imag", to_json(Matrix(y.y.imag()))},
                             {"E", to_json(y.e)},
                             {"theta_eq", to_json(y.theta_eq)}};
    } else {
        doc["L"] = to_json(network.net.laplacian());
    }
    return doc;
}

}  // namespace gridgram
