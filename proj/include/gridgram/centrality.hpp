#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gridgram/gramian.hpp"
#include "gridgram/power_model.hpp"

namespace gridgram {

enum class EdgeSetProvenance { AllPairs, LaplacianSupport, Explicit };

/// Edges eligible for modification, distinct and canonical.
struct CandidateEdgeSet {
    std::vector<EdgeId> edges;
    EdgeSetProvenance provenance = EdgeSetProvenance::Explicit;

    std::size_t size() const { return edges.size(); }

    /// Every pair i > j of an N-node graph.
    static CandidateEdgeSet all_pairs(std::size_t n);
    /// Pairs with g_ji > 1e-12.
    static CandidateEdgeSet laplacian_support(const GeneratorNetwork& net);
    /// Validated user list (distinct, within range, non-empty).
    static CandidateEdgeSet explicit_edges(std::vector<EdgeId> edges, std::size_t n);
};

/// Support threshold on g_ji for membership in the Laplacian edge set.
inline constexpr double kSupportThreshold = 1e-12;

/// F_ji = dA/dg_ji = T^T [[0, 0], [-M^-1 V_ji, 0]] T.
Matrix edge_direction_matrix(const ReducedSystem& sys, const GeneratorNetwork& net,
                             const EdgeId& edge);

/// Infinite-horizon Gramian with the inverse powers needed for the gradients.
struct GradientContext {
    Matrix w;
    Matrix w_inv;
    Matrix w_inv2;

    static GradientContext from(const ReducedSystem& sys);
};

/// Partial derivative of the metric with respect to g_ji: solves
/// A X + X A^T + F W + W F^T = 0 and returns tr(X), tr(W^-1 X) or tr(W^-2 X).
double ecm_entry(const ReducedSystem& sys, const GeneratorNetwork& net,
                 const GradientContext& ctx, const EdgeId& edge, MetricKind metric);

/// Convenience overload that solves for W itself.
double ecm_entry(const ReducedSystem& sys, const GeneratorNetwork& net, const EdgeId& edge,
                 MetricKind metric);

struct RankedEdge {
    EdgeId edge;
    double score = 0.0;  ///< signed centrality value
    double impact = 0.0; ///< ranking key
};

struct EdgeCentralityReport {
    MetricKind metric = MetricKind::Trace;
    Matrix upsilon;  ///< N x N, mirrored, zero outside the candidate set
    Matrix impact;   ///< |upsilon|
    std::vector<RankedEdge> ranking;
    std::vector<double> tau;  ///< non-increasing impacts
};

/// Orders edges by impact descending; ties broken by edge_less.
std::vector<RankedEdge> rank_edges(std::vector<RankedEdge> edges);

EdgeCentralityReport build_ecm(const ReducedSystem& sys, const GeneratorNetwork& net,
                               const CandidateEdgeSet& candidate, MetricKind metric);

/// First s edges of the ranking. Throws ArgumentError unless 1 <= s <= size.
std::vector<EdgeId> select_edge_set(std::span<const RankedEdge> ranking, std::size_t s);
std::vector<EdgeId> select_edge_set(const EdgeCentralityReport& report, std::size_t s);

struct NnecReport {
    Matrix lambda;  ///< N x N, mirrored
    std::vector<RankedEdge> ranking;
};

/// Nearest-neighbor edge centrality on the Laplacian support:
/// lambda_ji = (rho_j + rho_i - 2 g_ji) / (|rho_j - rho_i| + 1) * g_ji, with
/// rho_k the node strength.
NnecReport nnec_report(const GeneratorNetwork& net);

}  // namespace gridgram
