#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridgram/centrality.hpp"
#include "gridgram/gramian.hpp"
#include "gridgram/network_io.hpp"
#include "gridgram/optimizer.hpp"

namespace gridgram {

std::string library_version();

enum class CandidateMode { AllPairs, Laplacian, Explicit };
enum class OutputFormat { Csv, Json };

struct RunConfig {
    MetricKind metric = MetricKind::LogDet;
    std::size_t s = 1;
    double beta = 1.0;
    CandidateMode candidate = CandidateMode::Laplacian;
    std::vector<EdgeId> explicit_edges;
    std::uint64_t seed = 0;
    Parameterization parameterization = Parameterization::Sine;
    std::size_t restarts = 8;
    std::optional<double> tf;  ///< nullopt = auto, -1 / alpha(A(L))
    std::size_t samples = 10000;
    bool use_modified = false;  ///< energy/damping on the ECM-modified network
    std::vector<double> rho;    ///< admittance design parameters, one per modified edge
    std::vector<double> betas;  ///< budget sweep grid
    double combination_cap = kDefaultCombinationCap;
};

nlohmann::json to_json(const RunConfig& config);

CandidateEdgeSet resolve_candidate(const RunConfig& config, const GeneratorNetwork& net);
OptimizerOptions optimizer_options(const RunConfig& config);

/// Parses "(2,1),(3,1)" or "2-1,3-1" style edge lists.
std::vector<EdgeId> parse_edge_list(const std::string& text);

struct AnalyzeOutput {
    EdgeCentralityReport ecm;
    NnecReport nnec;
};

AnalyzeOutput run_analyze(const GeneratorNetwork& net, const RunConfig& config);

struct RecoveredAdmittance {
    EdgeId edge;
    double rho = 0.0;
    std::complex<double> y;
};

struct ModifyOutput {
    EcmModification modification;
    std::vector<DampedPole> damping_before;
    std::vector<DampedPole> damping_after;
    std::vector<RecoveredAdmittance> admittances;
    std::vector<std::string> warnings;
};

/// ECM pipeline on the loaded network. When `config.rho` is non-empty the
/// network must carry admittance data and one rho per modified edge.
ModifyOutput run_modify(const LoadedNetwork& network, const RunConfig& config);

struct OracleOutput {
    EdgeCentralityReport ecm;
    std::vector<EdgeId> ecm_set;
    OracleSummary summary;
};

OracleOutput run_oracle(const GeneratorNetwork& net, const RunConfig& config);

struct EnergyOutput {
    double tf = 0.0;
    bool modified = false;
    std::vector<double> samples;
    double mean = 0.0;
    double standard_error = 0.0;
    double trace_inv_finite = 0.0;
    double trace_inv_infinite = 0.0;
};

/// Samples J_u = x0^T W(tf)^-1 x0 with x0 ~ N(0, I) (seeded) and reports the
/// analytic traces tr(W(tf)^-1) and tr(W(inf)^-1).
EnergyOutput run_energy(const GeneratorNetwork& net, const RunConfig& config);

struct DampingOutput {
    std::vector<DampedPole> before;
    std::optional<std::vector<DampedPole>> after;
    std::optional<DampedPole> slow_before;
    std::optional<DampedPole> slow_after;
};

DampingOutput run_damping(const GeneratorNetwork& net, const std::optional<Matrix>& modified_l);

struct SweepOutput {
    std::vector<EdgeId> edge_set;
    std::vector<BudgetPoint> points;
};

SweepOutput run_sweep(const GeneratorNetwork& net, const RunConfig& config);

/// A rendered output file.
struct Artifact {
    std::string filename;
    std::string content;
};

std::vector<Artifact> render(const AnalyzeOutput& out, const RunConfig& config, OutputFormat f);
std::vector<Artifact> render(const ModifyOutput& out, const RunConfig& config, OutputFormat f);
std::vector<Artifact> render(const OracleOutput& out, const RunConfig& config, OutputFormat f);
std::vector<Artifact> render(const EnergyOutput& out, const RunConfig& config, OutputFormat f);
std::vector<Artifact> render(const DampingOutput& out, const RunConfig& config, OutputFormat f);
std::vector<Artifact> render(const SweepOutput& out, const RunConfig& config, OutputFormat f);

}  // namespace gridgram
