#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridgram/power_model.hpp"

namespace gridgram {

/// A network as read from a network file.
///
/// File schema (JSON):
///
///     {
///       "name": "ieee9",
///       "N": 3,
///       "M": [..N positive..],
///       "D": [..N positive..],
///       "L": [[..N..], ...]                       // either this ...
///       "admittance": {                           // ... or this
///         "Y_real": [[..]], "Y_imag": [[..]],
///         "E": [..], "theta_eq": [..]
///       }
///     }
struct LoadedNetwork {
    std::string name;
    GeneratorNetwork net;
    std::optional<ReducedAdmittanceData> admittance;
    std::vector<std::string> warnings;
};

/// Largest canonicalization change that is applied silently.
inline constexpr double kCanonicalizationWarnThreshold = 1e-6;

/// Parses and validates. The Laplacian is symmetrized and its diagonal
/// rebalanced before the invariant checks; adjustments above 1e-6 are
/// reported in `warnings`. Throws ValidationError naming the field path.
LoadedNetwork parse_network(const nlohmann::json& doc);

LoadedNetwork ingest(const std::filesystem::path& path);

nlohmann::json serialize_network(const LoadedNetwork& network);

nlohmann::json to_json(const Matrix& m);
nlohmann::json to_json(const Vector& v);

}  // namespace gridgram
