#include "gridgram/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "gridgram/errors.hpp"
#include "gridgram/parallel.hpp"

namespace gridgram {

namespace {

constexpr double kFeasibilitySlack = 1e-9;

// Start direction k of the multi-start schedule.
Vector start_direction(std::size_t k, const Vector& gradient, std::uint64_t seed) {
    const Eigen::Index s = gradient.size();
    if (k == 0) {
        return Vector::Constant(s, 1.0 / std::sqrt(static_cast<double>(s)));
    }
    const double gnorm = gradient.norm();
    if ((k == 1 || k == 2) && gnorm > 0.0 && std::isfinite(gnorm)) {
        return (k == 1 ? 1.0 : -1.0) * gradient / gnorm;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    Vector v(s);
    do {
        for (Eigen::Index c = 0; c < s; ++c) {
            v(c) = normal(rng);
        }
    } while (v.norm() == 0.0);
    return v / v.norm();
}

// eta reproducing a given gamma, when the parameterization can represent it.
std::optional<Vector> eta_for_gamma(const Vector& gamma, double beta, Parameterization p,
                                    double chi) {
    const double r = gamma.norm();
    const Eigen::Index s = gamma.size();
    Vector eta(s + 1);
    if (r == 0.0) {
        if (p == Parameterization::Sigmoid) {
            return std::nullopt;
        }
        eta.head(s).setConstant(1.0 / std::sqrt(static_cast<double>(s)));
        eta(s) = 0.0;
        return eta;
    }
    const double ratio = r / beta;
    if (!(ratio <= 1.0)) {
        return std::nullopt;
    }
    eta.head(s) = gamma / r;
    if (p == Parameterization::Sine) {
        eta(s) = 2.0 / std::numbers::pi * std::asin(ratio);
    } else {
        if (ratio >= 1.0) {
            return std::nullopt;
        }
        eta(s) = -std::log(1.0 / ratio - 1.0) / chi;
    }
    return eta;
}

}  // namespace

std::string_view parameterization_name(Parameterization p) {
    return p == Parameterization::Sine ? "sin" : "sigmoid";
}

std::optional<Parameterization> parse_parameterization(std::string_view name) {
    if (name == "sin") {
        return Parameterization::Sine;
    }
    if (name == "sigmoid") {
        return Parameterization::Sigmoid;
    }
    return std::nullopt;
}

void ModificationProblem::validate() const {
    if (edge_set.empty()) {
        throw ArgumentError("edge modification set is empty");
    }
    std::set<std::pair<int, int>> seen;
    for (const EdgeId& e : edge_set) {
        if (e.j < 1 || e.i <= e.j || static_cast<std::size_t>(e.i) > net.size()) {
            throw ArgumentError("edge " + e.label() + " is not valid for N = " +
                                std::to_string(net.size()));
        }
        if (!seen.insert({e.j, e.i}).second) {
            throw ArgumentError("edge " + e.label() + " listed twice");
        }
    }
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw ArgumentError("budget beta must be finite and non-negative");
    }
    if (!(xi >= 1e6)) {
        throw ArgumentError("penalty xi must be at least 1e6");
    }
    if (parameterization == Parameterization::Sigmoid && !(chi > 0.0)) {
        throw ArgumentError("sigmoid slope chi must be positive");
    }
}

Matrix delta_matrix(std::span<const EdgeId> edge_set, const Vector& gamma, std::size_t n) {
    if (static_cast<std::size_t>(gamma.size()) != edge_set.size()) {
        throw ArgumentError("delta_matrix: gamma length does not match the edge set");
    }
    const auto size = static_cast<Eigen::Index>(n);
    Matrix delta = Matrix::Zero(size, size);
    for (std::size_t k = 0; k < edge_set.size(); ++k) {
        delta += gamma(static_cast<Eigen::Index>(k)) * edge_laplacian(edge_set[k], n);
    }
    return delta;
}

Matrix incidence_matrix(std::span<const EdgeId> edge_set, std::size_t n) {
    Matrix c = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(edge_set.size()));
    for (std::size_t k = 0; k < edge_set.size(); ++k) {
        const EdgeId& e = edge_set[k];
        if (static_cast<std::size_t>(e.i) > n) {
            throw ArgumentError("edge " + e.label() + " exceeds network size");
        }
        c(static_cast<Eigen::Index>(e.col()), static_cast<Eigen::Index>(k)) = 1.0;
        c(static_cast<Eigen::Index>(e.row()), static_cast<Eigen::Index>(k)) = -1.0;
    }
    return c;
}

Vector parameterize(const Vector& eta, double beta, Parameterization p, double chi) {
    if (eta.size() < 2) {
        throw ArgumentError("parameterize: eta needs at least two entries");
    }
    const Eigen::Index s = eta.size() - 1;
    const Vector nu = eta.head(s);
    const double norm = nu.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw ArgumentError("parameterize: degenerate direction (nu = 0)");
    }
    const double kappa = eta(s);
    const double scale = p == Parameterization::Sine
                             ? std::sin(std::numbers::pi * kappa / 2.0)
                             : 1.0 / (1.0 + std::exp(-chi * kappa));
    return beta * scale * nu / norm;
}

ModificationObjective::ModificationObjective(const ModificationProblem& problem)
    : problem_(problem), projection_(build_projection(problem.net.size())) {
    problem_.validate();
    lower_.resize(static_cast<Eigen::Index>(problem_.edge_set.size()));
    for (std::size_t k = 0; k < problem_.edge_set.size(); ++k) {
        lower_(static_cast<Eigen::Index>(k)) = -problem_.net.weight(problem_.edge_set[k]);
    }
}

double ModificationObjective::at_gamma(const Vector& gamma) const {
    const double penalty = -problem_.xi;
    if (gamma.size() != lower_.size() || !gamma.allFinite()) {
        return penalty;
    }
    for (Eigen::Index k = 0; k < gamma.size(); ++k) {
        if (gamma(k) < lower_(k)) {
            return penalty;
        }
    }
    try {
        const Matrix l = problem_.net.laplacian() +
                         delta_matrix(problem_.edge_set, gamma, problem_.net.size());
        const ReducedSystem sys =
            reduce(problem_.net.inertia(), problem_.net.damping(), l, projection_);
        if (!(spectral_abscissa(sys.a) < 0.0)) {
            return penalty;
        }
        const double h = gramian_infinite(sys).metric(problem_.metric);
        return std::isfinite(h) ? h : penalty;
    } catch (const Error&) {
        return penalty;
    }
}

double ModificationObjective::operator()(const Vector& eta) const {
    Vector gamma;
    try {
        gamma = parameterize(eta, problem_.beta, problem_.parameterization, problem_.chi);
    } catch (const Error&) {
        return -problem_.xi;
    }
    return at_gamma(gamma);
}

double penalized_objective(const ModificationProblem& problem, const Vector& eta) {
    return ModificationObjective(problem)(eta);
}

double improvement_J(double before, double after) {
    if (!(std::abs(before) >= 1e-300)) {
        throw ArgumentError("improvement_J: baseline metric is numerically zero");
    }
    return 100.0 * (after - before) / std::abs(before);
}

bool satisfies_constraints(const ModificationProblem& problem, const ModificationResult& result) {
    if (result.gamma.size() != static_cast<Eigen::Index>(problem.edge_set.size())) {
        return false;
    }
    if (result.gamma.norm() > problem.beta + kFeasibilitySlack) {
        return false;
    }
    for (std::size_t k = 0; k < problem.edge_set.size(); ++k) {
        if (result.gamma(static_cast<Eigen::Index>(k)) + problem.net.weight(problem.edge_set[k]) <
            -kFeasibilitySlack) {
            return false;
        }
    }
    try {
        const ReducedSystem sys = reduce(problem.net.inertia(), problem.net.damping(),
                                         result.laplacian_modified,
                                         build_projection(problem.net.size()));
        return spectral_abscissa(sys.a) < 0.0;
    } catch (const Error&) {
        return false;
    }
}

ModificationResult optimize_modification(const ModificationProblem& problem,
                                         const OptimizerOptions& options) {
    problem.validate();
    const GeneratorNetwork& net = problem.net;
    const ReducedSystem base = build_reduced_system(net);
    const ModificationObjective objective(problem);
    const auto s = static_cast<Eigen::Index>(problem.edge_set.size());

    ModificationResult out;
    out.edge_set = problem.edge_set;
    out.metric_before = gramian_infinite(base).metric(problem.metric);

    // Candidates: gamma = 0 is always feasible and anchors J >= 0.
    Vector best_gamma = Vector::Zero(s);
    double best_value = out.metric_before;

    auto consider = [&](const Vector& gamma, double value, const NelderMeadResult* run) {
        if (value > best_value) {
            best_value = value;
            best_gamma = gamma;
            if (run != nullptr) {
                out.iterations = run->iterations;
                out.hit_iteration_cap = run->hit_iteration_cap;
            }
        }
    };

    if (problem.beta > 0.0) {
        std::vector<Vector> starts;
        if (options.warm_start) {
            const Vector& warm = *options.warm_start;
            if (warm.size() == s) {
                consider(warm, objective.at_gamma(warm), nullptr);
                if (auto eta = eta_for_gamma(warm, problem.beta, problem.parameterization,
                                             problem.chi)) {
                    starts.push_back(*eta);
                }
            }
        }
        Vector gradient = Vector::Zero(s);
        try {
            const GradientContext ctx = GradientContext::from(base);
            for (Eigen::Index k = 0; k < s; ++k) {
                gradient(k) = ecm_entry(base, net, ctx, problem.edge_set[static_cast<std::size_t>(k)],
                                        problem.metric);
            }
        } catch (const Error&) {
            gradient.setZero();
        }
        for (std::size_t k = 0; k < options.restarts; ++k) {
            Vector eta(s + 1);
            eta.head(s) = start_direction(k, gradient, options.seed);
            eta(s) = options.kappa0;
            starts.push_back(std::move(eta));
        }
        for (const Vector& eta0 : starts) {
            const NelderMeadResult run = nelder_mead_maximize(
                [&](const Vector& eta) { return objective(eta); }, eta0, options.nelder_mead);
            ++out.starts_tried;
            if (run.value <= -problem.xi) {
                continue;
            }
            const Vector gamma =
                parameterize(run.x, problem.beta, problem.parameterization, problem.chi);
            consider(gamma, objective.at_gamma(gamma), &run);
        }
    }

    out.gamma = best_gamma;
    out.delta = delta_matrix(problem.edge_set, out.gamma, net.size());
    out.laplacian_modified = net.laplacian() + out.delta;
    out.metric_after = best_value;
    out.improvement = improvement_J(out.metric_before, out.metric_after);
    out.feasible = satisfies_constraints(problem, out);
    return out;
}

EcmModification ecm_based_modification(const GeneratorNetwork& net,
                                       const CandidateEdgeSet& candidate, std::size_t s,
                                       double beta, MetricKind metric,
                                       const OptimizerOptions& options, Parameterization p) {
    const ReducedSystem sys = build_reduced_system(net);
    EcmModification out;
    out.report = build_ecm(sys, net, candidate, metric);
    ModificationProblem problem{net, select_edge_set(out.report, s), beta, metric};
    problem.parameterization = p;
    out.result = optimize_modification(problem, options);
    return out;
}

double binomial(std::size_t n, std::size_t k) {
    if (k > n) {
        return 0.0;
    }
    k = std::min(k, n - k);
    double out = 1.0;
    for (std::size_t r = 1; r <= k; ++r) {
        out = out * static_cast<double>(n - k + r) / static_cast<double>(r);
    }
    return std::round(out);
}

double value_near_optimality(double j, double j_wcs, double j_bcs) {
    if (j_bcs == j_wcs) {
        return 100.0;
    }
    return 100.0 * ((j - j_wcs) / (j_bcs - j_wcs));
}

double cardinality_near_optimality(double j, std::span<const double> all) {
    if (all.empty()) {
        throw ArgumentError("cardinality_near_optimality: no combinations");
    }
    const auto count = std::count_if(all.begin(), all.end(), [&](double v) { return v <= j; });
    return 100.0 * static_cast<double>(count) / static_cast<double>(all.size());
}

OracleSummary brute_force_oracle(const ModificationProblem& base,
                                 const CandidateEdgeSet& candidate, std::size_t s,
                                 const std::optional<std::vector<EdgeId>>& evaluated,
                                 const OptimizerOptions& options, double cap) {
    const std::size_t m = candidate.size();
    if (s < 1 || s > m) {
        throw ArgumentError("s = " + std::to_string(s) + " is outside [1, " + std::to_string(m) +
                            "]");
    }
    const double combinations = binomial(m, s);
    if (combinations > cap) {
        throw CombinatorialRefusal(combinations, cap);
    }

    // Lexicographic enumeration of index subsets.
    std::vector<std::vector<EdgeId>> subsets;
    std::vector<std::size_t> idx(s);
    for (std::size_t k = 0; k < s; ++k) {
        idx[k] = k;
    }
    while (true) {
        std::vector<EdgeId> edges;
        edges.reserve(s);
        for (std::size_t k : idx) {
            edges.push_back(candidate.edges[k]);
        }
        subsets.push_back(std::move(edges));
        std::size_t pos = s;
        while (pos > 0 && idx[pos - 1] == m - s + pos - 1) {
            --pos;
        }
        if (pos == 0) {
            break;
        }
        ++idx[pos - 1];
        for (std::size_t k = pos; k < s; ++k) {
            idx[k] = idx[k - 1] + 1;
        }
    }

    OracleSummary out;
    out.per_combination.resize(subsets.size());
    parallel_for(subsets.size(), [&](std::size_t k) {
        ModificationProblem problem = base;
        problem.edge_set = subsets[k];
        CombinationOutcome& slot = out.per_combination[k];
        slot.edges = subsets[k];
        slot.result = optimize_modification(problem, options);
        slot.improvement = slot.result.improvement;
    });

    std::vector<double> values;
    values.reserve(out.per_combination.size());
    for (std::size_t k = 0; k < out.per_combination.size(); ++k) {
        const double j = out.per_combination[k].improvement;
        values.push_back(j);
        if (j < out.per_combination[out.wcs].improvement) {
            out.wcs = k;
        }
        if (j > out.per_combination[out.bcs].improvement) {
            out.bcs = k;
        }
    }

    if (evaluated) {
        auto key = [](std::vector<EdgeId> edges) {
            std::sort(edges.begin(), edges.end(), edge_less);
            return edges;
        };
        const auto wanted = key(*evaluated);
        for (std::size_t k = 0; k < out.per_combination.size(); ++k) {
            if (key(out.per_combination[k].edges) == wanted) {
                out.candidate = k;
                break;
            }
        }
        if (!out.candidate) {
            throw ArgumentError("evaluated edge set is not an s-subset of the candidate set");
        }
        const double j = out.per_combination[*out.candidate].improvement;
        out.j_v = value_near_optimality(j, out.worst().improvement, out.best().improvement);
        out.j_c = cardinality_near_optimality(j, values);
    }
    return out;
}

std::vector<EdgeId> random_edge_set(const CandidateEdgeSet& candidate, std::size_t s,
                                    std::uint64_t seed) {
    const std::size_t m = candidate.size();
    if (s < 1 || s > m) {
        throw ArgumentError("s = " + std::to_string(s) + " is outside [1, " + std::to_string(m) +
                            "]");
    }
    std::mt19937_64 rng(seed);
    // Unbiased bounded draw by rejection, independent of the standard
    // library's distribution implementation.
    auto draw = [&](std::uint64_t bound) {
        const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
        std::uint64_t x;
        do {
            x = rng();
        } while (x >= limit);
        return x % bound;
    };
    std::vector<std::size_t> idx(m);
    for (std::size_t k = 0; k < m; ++k) {
        idx[k] = k;
    }
    for (std::size_t k = 0; k < s; ++k) {
        const auto pick = k + static_cast<std::size_t>(draw(m - k));
        std::swap(idx[k], idx[pick]);
    }
    idx.resize(s);
    std::sort(idx.begin(), idx.end());
    std::vector<EdgeId> out;
    for (std::size_t k : idx) {
        out.push_back(candidate.edges[k]);
    }
    return out;
}

std::vector<BudgetPoint> budget_sweep(const ModificationProblem& problem,
                                      std::vector<double> betas,
                                      const OptimizerOptions& options) {
    std::sort(betas.begin(), betas.end());
    std::vector<BudgetPoint> out;
    OptimizerOptions opts = options;
    for (const double beta : betas) {
        ModificationProblem p = problem;
        p.beta = beta;
        ModificationResult r = optimize_modification(p, opts);
        opts.warm_start = r.gamma;
        out.push_back({beta, std::move(r)});
    }
    return out;
}

}  // namespace gridgram
