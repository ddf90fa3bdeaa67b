#include "gridgram/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gridgram/errors.hpp"
#include "gridgram/parallel.hpp"

namespace gridgram {

namespace {

void check_edge(const EdgeId& e, std::size_t n) {
    if (e.j < 1 || e.i <= e.j || static_cast<std::size_t>(e.i) > n) {
        throw ArgumentError("edge " + e.label() + " is not a valid pair for N = " +
                            std::to_string(n));
    }
}

void mirror(Matrix& m, const EdgeId& e, double value) {
    const auto r = static_cast<Eigen::Index>(e.row());
    const auto c = static_cast<Eigen::Index>(e.col());
    m(r, c) = value;
    m(c, r) = value;
}

}  // namespace

CandidateEdgeSet CandidateEdgeSet::all_pairs(std::size_t n) {
    CandidateEdgeSet out;
    out.provenance = EdgeSetProvenance::AllPairs;
    for (int j = 1; j <= static_cast<int>(n); ++j) {
        for (int i = j + 1; i <= static_cast<int>(n); ++i) {
            out.edges.push_back({i, j});
        }
    }
    return out;
}

CandidateEdgeSet CandidateEdgeSet::laplacian_support(const GeneratorNetwork& net) {
    CandidateEdgeSet out = all_pairs(net.size());
    out.provenance = EdgeSetProvenance::LaplacianSupport;
    std::erase_if(out.edges,
                  [&](const EdgeId& e) { return !(net.weight(e) > kSupportThreshold); });
    return out;
}

CandidateEdgeSet CandidateEdgeSet::explicit_edges(std::vector<EdgeId> edges, std::size_t n) {
    if (edges.empty()) {
        throw ArgumentError("candidate edge set is empty");
    }
    std::set<std::pair<int, int>> seen;
    for (const EdgeId& e : edges) {
        check_edge(e, n);
        if (!seen.insert({e.j, e.i}).second) {
            throw ArgumentError("candidate edge " + e.label() + " listed twice");
        }
    }
    return {std::move(edges), EdgeSetProvenance::Explicit};
}

Matrix edge_direction_matrix(const ReducedSystem& sys, const GeneratorNetwork& net,
                             const EdgeId& edge) {
    const std::size_t n = net.size();
    check_edge(edge, n);
    const auto size = static_cast<Eigen::Index>(n);
    Matrix full = Matrix::Zero(2 * size, 2 * size);
    full.bottomLeftCorner(size, size) =
        -(net.inertia().cwiseInverse().asDiagonal() * edge_laplacian(edge, n));
    const Matrix& t = sys.projection.t;
    return t.transpose() * full * t;
}

GradientContext GradientContext::from(const ReducedSystem& sys) {
    GradientContext ctx;
    ctx.w = gramian_infinite(sys).w;
    ctx.w_inv = spd_inverse_and_logdet(ctx.w).inverse;
    ctx.w_inv2 = ctx.w_inv * ctx.w_inv;
    return ctx;
}

double ecm_entry(const ReducedSystem& sys, const GeneratorNetwork& net,
                 const GradientContext& ctx, const EdgeId& edge, MetricKind metric) {
    const Matrix f = edge_direction_matrix(sys, net, edge);
    const Matrix fw = f * ctx.w;
    const Matrix x = solve_lyapunov(sys.a, fw + fw.transpose());
    switch (metric) {
        case MetricKind::Trace:
            return x.trace();
        case MetricKind::LogDet:
            return (ctx.w_inv * x).trace();
        case MetricKind::NegTraceInv:
            return (ctx.w_inv2 * x).trace();
    }
    throw ArgumentError("unknown metric");
}

double ecm_entry(const ReducedSystem& sys, const GeneratorNetwork& net, const EdgeId& edge,
                 MetricKind metric) {
    return ecm_entry(sys, net, GradientContext::from(sys), edge, metric);
}

std::vector<RankedEdge> rank_edges(std::vector<RankedEdge> edges) {
    std::sort(edges.begin(), edges.end(), [](const RankedEdge& a, const RankedEdge& b) {
        if (a.impact != b.impact) {
            return a.impact > b.impact;
        }
        return edge_less(a.edge, b.edge);
    });
    return edges;
}

EdgeCentralityReport build_ecm(const ReducedSystem& sys, const GeneratorNetwork& net,
                               const CandidateEdgeSet& candidate, MetricKind metric) {
    const std::size_t n = net.size();
    for (const EdgeId& e : candidate.edges) {
        check_edge(e, n);
    }
    const GradientContext ctx = GradientContext::from(sys);
    std::vector<double> values(candidate.size());
    parallel_for(candidate.size(), [&](std::size_t k) {
        values[k] = ecm_entry(sys, net, ctx, candidate.edges[k], metric);
    });

    EdgeCentralityReport report;
    report.metric = metric;
    const auto size = static_cast<Eigen::Index>(n);
    report.upsilon = Matrix::Zero(size, size);
    std::vector<RankedEdge> ranked;
    ranked.reserve(candidate.size());
    for (std::size_t k = 0; k < candidate.size(); ++k) {
        mirror(report.upsilon, candidate.edges[k], values[k]);
        ranked.push_back({candidate.edges[k], values[k], std::abs(values[k])});
    }
    report.impact = report.upsilon.cwiseAbs();
    report.ranking = rank_edges(std::move(ranked));
    for (const RankedEdge& r : report.ranking) {
        report.tau.push_back(r.impact);
    }
    return report;
}

std::vector<EdgeId> select_edge_set(std::span<const RankedEdge> ranking, std::size_t s) {
    if (s < 1 || s > ranking.size()) {
        throw ArgumentError("s = " + std::to_string(s) + " is outside [1, " +
                            std::to_string(ranking.size()) + "]");
    }
    std::vector<EdgeId> out;
    out.reserve(s);
    for (std::size_t k = 0; k < s; ++k) {
        out.push_back(ranking[k].edge);
    }
    return out;
}

std::vector<EdgeId> select_edge_set(const EdgeCentralityReport& report, std::size_t s) {
    return select_edge_set(std::span<const RankedEdge>(report.ranking), s);
}

NnecReport nnec_report(const GeneratorNetwork& net) {
    const std::size_t n = net.size();
    const auto size = static_cast<Eigen::Index>(n);
    Matrix g = -net.laplacian();
    g.diagonal().setZero();
    const Vector strength = g.rowwise().sum();

    NnecReport report;
    report.lambda = Matrix::Zero(size, size);
    std::vector<RankedEdge> ranked;
    for (const EdgeId& e : CandidateEdgeSet::laplacian_support(net).edges) {
        const auto a = static_cast<Eigen::Index>(e.col());
        const auto b = static_cast<Eigen::Index>(e.row());
        const double w = g(a, b);
        const double value = (strength(a) + strength(b) - 2.0 * w) /
                             (std::abs(strength(a) - strength(b)) + 1.0) * w;
        mirror(report.lambda, e, value);
        ranked.push_back({e, value, value});
    }
    report.ranking = rank_edges(std::move(ranked));
    return report;
}

}  // namespace gridgram
