#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gridgram/centrality.hpp"
#include "gridgram/gramian.hpp"
#include "gridgram/nelder_mead.hpp"
#include "gridgram/power_model.hpp"

namespace gridgram {

enum class Parameterization { Sine, Sigmoid };

std::string_view parameterization_name(Parameterization p);
std::optional<Parameterization> parse_parameterization(std::string_view name);

/// Budgeted edge modification: maximize h(W(A(L + Delta(gamma)))) subject to
/// A Hurwitz, |gamma| <= beta and gamma_k >= -g_k on the chosen edge set.
struct ModificationProblem {
    GeneratorNetwork net;
    std::vector<EdgeId> edge_set;
    double beta = 1.0;
    MetricKind metric = MetricKind::LogDet;
    double xi = 1e10;  ///< penalty returned for infeasible points
    Parameterization parameterization = Parameterization::Sine;
    double chi = 1.0;  ///< logistic slope for the sigmoid parameterization

    /// Throws ArgumentError on an empty/duplicate/out-of-range edge set,
    /// negative beta or xi < 1e6.
    void validate() const;
};

/// Delta(gamma) = sum_k gamma_k V_k, N x N.
Matrix delta_matrix(std::span<const EdgeId> edge_set, const Vector& gamma, std::size_t n);

/// Incidence matrix C (N x s): +1 at row j, -1 at row i of each edge
/// column; Delta(gamma) = C diag(gamma) C^T.
Matrix incidence_matrix(std::span<const EdgeId> edge_set, std::size_t n);

/// gamma = beta * s(kappa) * nu / |nu| with eta = (nu; kappa) and
/// s(kappa) = sin(pi kappa / 2) or 1 / (1 + exp(-chi kappa)). Throws
/// ArgumentError on a zero direction nu.
Vector parameterize(const Vector& eta, double beta,
                    Parameterization p = Parameterization::Sine, double chi = 1.0);

/// Precomputed evaluation of the penalized objective for one problem.
class ModificationObjective {
public:
    explicit ModificationObjective(const ModificationProblem& problem);

    /// h at gamma when feasible (Hurwitz and lower bounds hold), -xi otherwise.
    /// Never throws.
    double at_gamma(const Vector& gamma) const;

    /// Same as at_gamma(parameterize(eta)); a zero direction is infeasible.
    double operator()(const Vector& eta) const;

    const ModificationProblem& problem() const { return problem_; }
    const Vector& lower_bounds() const { return lower_; }

private:
    ModificationProblem problem_;
    Projection projection_;
    Vector lower_;  ///< -g_k per edge
};

double penalized_objective(const ModificationProblem& problem, const Vector& eta);

/// J = 100 (after - before) / |before|. Throws ArgumentError if |before| < 1e-300.
double improvement_J(double before, double after);

struct OptimizerOptions {
    /// Multi-start count: the uniform direction, +/- the gradient direction,
    /// then seeded random unit directions.
    std::size_t restarts = 8;
    std::uint64_t seed = 0;
    double kappa0 = 0.5;
    NelderMeadOptions nelder_mead;
    /// Extra start reproducing this feasible gamma exactly (budget sweeps).
    std::optional<Vector> warm_start;
};

struct ModificationResult {
    std::vector<EdgeId> edge_set;
    Vector gamma;
    Matrix delta;
    Matrix laplacian_modified;
    double metric_before = 0.0;
    double metric_after = 0.0;
    double improvement = 0.0;  ///< J in percent
    bool feasible = false;
    std::size_t iterations = 0;
    bool hit_iteration_cap = false;
    std::size_t starts_tried = 0;
};

/// Maximizes the penalized objective from several starts and keeps the best
/// feasible point; falls back to gamma = 0 so J is never negative. Throws
/// StabilityViolation when the unmodified network is not Hurwitz.
ModificationResult optimize_modification(const ModificationProblem& problem,
                                         const OptimizerOptions& options = {});

/// Checks the budget, lower-bound and stability constraints on a result.
bool satisfies_constraints(const ModificationProblem& problem, const ModificationResult& result);

/// Full pipeline: ECM ranking, top-s selection, then optimization.
struct EcmModification {
    EdgeCentralityReport report;
    ModificationResult result;
};

EcmModification ecm_based_modification(const GeneratorNetwork& net,
                                       const CandidateEdgeSet& candidate, std::size_t s,
                                       double beta, MetricKind metric,
                                       const OptimizerOptions& options = {},
                                       Parameterization p = Parameterization::Sine);

struct CombinationOutcome {
    std::vector<EdgeId> edges;
    double improvement = 0.0;
    ModificationResult result;
};

struct OracleSummary {
    std::vector<CombinationOutcome> per_combination;
    std::size_t wcs = 0;  ///< index into per_combination
    std::size_t bcs = 0;
    std::optional<std::size_t> candidate;
    double j_v = 0.0;
    double j_c = 0.0;

    const CombinationOutcome& worst() const { return per_combination[wcs]; }
    const CombinationOutcome& best() const { return per_combination[bcs]; }
};

/// Binomial coefficient as a double (exact below 2^53).
double binomial(std::size_t n, std::size_t k);

inline constexpr double kDefaultCombinationCap = 1e5;

/// Solves the modification problem for every s-subset of `candidate` with
/// identical settings. When `evaluated` is given, J_V and J_C are computed for
/// the subset equal to it (as a set). Throws CombinatorialRefusal when the
/// subset count exceeds `cap`.
OracleSummary brute_force_oracle(const ModificationProblem& base,
                                 const CandidateEdgeSet& candidate, std::size_t s,
                                 const std::optional<std::vector<EdgeId>>& evaluated,
                                 const OptimizerOptions& options = {},
                                 double cap = kDefaultCombinationCap);

/// J_V = 100 (J - J_wcs) / (J_bcs - J_wcs), defined as 100 when J_bcs == J_wcs.
double value_near_optimality(double j, double j_wcs, double j_bcs);

/// J_C = 100 * #{J_i <= J} / #combinations.
double cardinality_near_optimality(double j, std::span<const double> all);

/// Uniform s-subset without replacement, returned in candidate order.
std::vector<EdgeId> random_edge_set(const CandidateEdgeSet& candidate, std::size_t s,
                                    std::uint64_t seed);

struct BudgetPoint {
    double beta = 0.0;
    ModificationResult result;
};

/// Solves the problem for each budget in ascending order, warm-starting each
/// run from the previous optimum so J(beta) cannot decrease.
std::vector<BudgetPoint> budget_sweep(const ModificationProblem& problem,
                                      std::vector<double> betas,
                                      const OptimizerOptions& options = {});

}  // namespace gridgram
