#include "gridgram/workflows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <regex>
#include <sstream>

#include "gridgram/errors.hpp"

namespace gridgram {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string candidate_name(CandidateMode mode) {
    switch (mode) {
        case CandidateMode::AllPairs:
            return "all-pairs";
        case CandidateMode::Laplacian:
            return "laplacian";
        case CandidateMode::Explicit:
            return "explicit";
    }
    return "unknown";
}

json edge_json(const EdgeId& e) { return json::array({e.i, e.j}); }

json edges_json(const std::vector<EdgeId>& edges) {
    json out = json::array();
    for (const EdgeId& e : edges) {
        out.push_back(edge_json(e));
    }
    return out;
}

std::string edges_label(const std::vector<EdgeId>& edges) {
    std::string out;
    for (const EdgeId& e : edges) {
        out += (out.empty() ? "" : " ") + e.label();
    }
    return out;
}

json poles_json(const std::vector<DampedPole>& poles) {
    json out = json::array();
    for (const DampedPole& p : poles) {
        out.push_back({{"re", p.pole.real()}, {"im", p.pole.imag()}, {"zeta", p.zeta}});
    }
    return out;
}

json ranking_json(const std::vector<RankedEdge>& ranking, const char* value_key) {
    json out = json::array();
    for (std::size_t k = 0; k < ranking.size(); ++k) {
        out.push_back({{"rank", k + 1},
                       {"edge", edge_json(ranking[k].edge)},
                       {value_key, ranking[k].score},
                       {"impact", ranking[k].impact}});
    }
    return out;
}

json result_json(const ModificationResult& r) {
    json out;
    out["edge_set"] = edges_json(r.edge_set);
    out["gamma"] = to_json(r.gamma);
    out["delta"] = to_json(r.delta);
    out["L_modified"] = to_json(r.laplacian_modified);
    out["metric_before"] = r.metric_before;
    out["metric_after"] = r.metric_after;
    out["J_percent"] = r.improvement;
    out["feasible"] = r.feasible;
    out["iterations"] = r.iterations;
    out["hit_iteration_cap"] = r.hit_iteration_cap;
    return out;
}

// Leading comment line for CSV/data files so each file carries its context.
std::string csv_header(const RunConfig& config) {
    return "# gridgram " + library_version() + " config=" + to_json(config).dump() + "\n";
}

json report_base(const RunConfig& config, const char* command) {
    json doc;
    doc["command"] = command;
    doc["version"] = library_version();
    doc["config"] = to_json(config);
    return doc;
}

std::vector<Artifact> json_artifact(const char* name, const json& doc) {
    return {{name, doc.dump(2) + "\n"}};
}

}  // namespace

std::string library_version() {
#ifdef GRIDGRAM_VERSION
    return GRIDGRAM_VERSION;
#else
    return "unknown";
#endif
}

json to_json(const RunConfig& c) {
    json out;
    out["metric"] = std::string(metric_name(c.metric));
    out["s"] = c.s;
    out["beta"] = c.beta;
    out["candidate"] = candidate_name(c.candidate);
    if (c.candidate == CandidateMode::Explicit) {
        out["explicit_edges"] = edges_json(c.explicit_edges);
    }
    out["seed"] = c.seed;
    out["parameterization"] = std::string(parameterization_name(c.parameterization));
    out["restarts"] = c.restarts;
    out["tf"] = c.tf ? json(*c.tf) : json("auto");
    out["samples"] = c.samples;
    out["use_modified"] = c.use_modified;
    out["rho"] = c.rho;
    out["betas"] = c.betas;
    out["combination_cap"] = c.combination_cap;
    return out;
}

CandidateEdgeSet resolve_candidate(const RunConfig& config, const GeneratorNetwork& net) {
    switch (config.candidate) {
        case CandidateMode::AllPairs:
            return CandidateEdgeSet::all_pairs(net.size());
        case CandidateMode::Laplacian:
            return CandidateEdgeSet::laplacian_support(net);
        case CandidateMode::Explicit:
            return CandidateEdgeSet::explicit_edges(config.explicit_edges, net.size());
    }
    throw ArgumentError("unknown candidate mode");
}

OptimizerOptions optimizer_options(const RunConfig& config) {
    OptimizerOptions o;
    o.restarts = config.restarts;
    o.seed = config.seed;
    return o;
}

std::vector<EdgeId> parse_edge_list(const std::string& text) {
    static const std::regex pair(R"(\(?\s*(\d+)\s*[,\-:]\s*(\d+)\s*\)?)");
    std::vector<EdgeId> out;
    auto begin = std::sregex_iterator(text.begin(), text.end(), pair);
    std::size_t consumed = 0;
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        const std::string gap = text.substr(consumed, static_cast<std::size_t>(it->position()) - consumed);
        if (gap.find_first_not_of(" ,;") != std::string::npos) {
            throw ArgumentError("cannot parse edge list '" + text + "'");
        }
        out.push_back(EdgeId::make(std::stoi((*it)[1]), std::stoi((*it)[2])));
        consumed = static_cast<std::size_t>(it->position() + it->length());
    }
    if (text.substr(consumed).find_first_not_of(" ,;") != std::string::npos || out.empty()) {
        throw ArgumentError("cannot parse edge list '" + text + "'");
    }
    return out;
}

AnalyzeOutput run_analyze(const GeneratorNetwork& net, const RunConfig& config) {
    const ReducedSystem sys = build_reduced_system(net);
    return {build_ecm(sys, net, resolve_candidate(config, net), config.metric), nnec_report(net)};
}

ModifyOutput run_modify(const LoadedNetwork& network, const RunConfig& config) {
    const GeneratorNetwork& net = network.net;
    const CandidateEdgeSet candidate = resolve_candidate(config, net);
    ModifyOutput out;
    out.modification = ecm_based_modification(net, candidate, config.s, config.beta, config.metric,
                                               optimizer_options(config), config.parameterization);
    const ModificationResult& r = out.modification.result;

    double min_weight = std::numeric_limits<double>::infinity();
    for (const EdgeId& e : candidate.edges) {
        min_weight = std::min(min_weight, net.weight(e));
    }
    if (config.beta <= min_weight) {
        out.warnings.push_back("beta = " + fmt(config.beta) + " <= min g_ji = " + fmt(min_weight) +
                               " on the candidate set: the edge non-negativity constraint is "
                               "redundant");
    }

    out.damping_before = damping_report(build_reduced_system(net).a);
    const ReducedSystem modified = reduce(net.inertia(), net.damping(), r.laplacian_modified,
                                          build_projection(net.size()));
    out.damping_after = damping_report(modified.a);

    if (!config.rho.empty()) {
        if (!network.admittance) {
            throw ArgumentError("--rho needs a network file given in admittance form");
        }
        if (config.rho.size() != r.edge_set.size()) {
            throw ArgumentError("expected one rho value per modified edge (" +
                                std::to_string(r.edge_set.size()) + ")");
        }
        for (std::size_t k = 0; k < r.edge_set.size(); ++k) {
            out.admittances.push_back(
                {r.edge_set[k], config.rho[k],
                 recover_modified_admittance(*network.admittance, r.edge_set[k],
                                             r.gamma(static_cast<Eigen::Index>(k)), config.rho[k])});
        }
    }
    return out;
}

OracleOutput run_oracle(const GeneratorNetwork& net, const RunConfig& config) {
    const CandidateEdgeSet candidate = resolve_candidate(config, net);
    const ReducedSystem sys = build_reduced_system(net);
    OracleOutput out;
    out.ecm = build_ecm(sys, net, candidate, config.metric);
    out.ecm_set = select_edge_set(out.ecm, config.s);
    ModificationProblem base{net, out.ecm_set, config.beta, config.metric};
    base.parameterization = config.parameterization;
    out.summary = brute_force_oracle(base, candidate, config.s, out.ecm_set,
                                     optimizer_options(config), config.combination_cap);
    return out;
}

EnergyOutput run_energy(const GeneratorNetwork& net, const RunConfig& config) {
    const ReducedSystem original = build_reduced_system(net);
    EnergyOutput out;
    out.tf = config.tf ? *config.tf : default_horizon(original);
    ReducedSystem sys = original;
    if (config.use_modified) {
        const auto mod = ecm_based_modification(net, resolve_candidate(config, net), config.s,
                                                config.beta, config.metric,
                                                optimizer_options(config), config.parameterization);
        sys = build_reduced_system(net.with_laplacian(mod.result.laplacian_modified));
        out.modified = true;
    }
    const Matrix w_inv_finite = spd_inverse_and_logdet(gramian_finite(sys, out.tf).w).inverse;
    out.trace_inv_finite = w_inv_finite.trace();
    out.trace_inv_infinite = spd_inverse_and_logdet(gramian_infinite(sys).w).inverse.trace();

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal;
    out.samples.reserve(config.samples);
    Vector x0(sys.order());
    for (std::size_t k = 0; k < config.samples; ++k) {
        for (Eigen::Index c = 0; c < x0.size(); ++c) {
            x0(c) = normal(rng);
        }
        out.samples.push_back(minimum_energy_cost(w_inv_finite, x0));
    }
    if (!out.samples.empty()) {
        double sum = 0.0;
        for (double v : out.samples) {
            sum += v;
        }
        out.mean = sum / static_cast<double>(out.samples.size());
        if (out.samples.size() > 1) {
            double ss = 0.0;
            for (double v : out.samples) {
                ss += (v - out.mean) * (v - out.mean);
            }
            const double var = ss / static_cast<double>(out.samples.size() - 1);
            out.standard_error = std::sqrt(var / static_cast<double>(out.samples.size()));
        }
    }
    return out;
}

DampingOutput run_damping(const GeneratorNetwork& net, const std::optional<Matrix>& modified_l) {
    DampingOutput out;
    out.before = damping_report(build_reduced_system(net).a);
    out.slow_before = slow_mode(out.before);
    if (modified_l) {
        const ReducedSystem sys = reduce(net.inertia(), net.damping(), *modified_l,
                                         build_projection(net.size()));
        out.after = damping_report(sys.a);
        out.slow_after = slow_mode(*out.after);
    }
    return out;
}

SweepOutput run_sweep(const GeneratorNetwork& net, const RunConfig& config) {
    std::vector<double> betas = config.betas;
    if (betas.empty()) {
        for (int k = 1; k <= 10; ++k) {
            betas.push_back(config.beta * k / 10.0);
        }
    }
    const ReducedSystem sys = build_reduced_system(net);
    const auto report = build_ecm(sys, net, resolve_candidate(config, net), config.metric);
    SweepOutput out;
    out.edge_set = select_edge_set(report, config.s);
    ModificationProblem problem{net, out.edge_set, config.beta, config.metric};
    problem.parameterization = config.parameterization;
    out.points = budget_sweep(problem, betas, optimizer_options(config));
    return out;
}

std::vector<Artifact> render(const AnalyzeOutput& out, const RunConfig& config, OutputFormat f) {
    if (f == OutputFormat::Json) {
        json doc = report_base(config, "analyze");
        doc["ecm"] = {{"metric", std::string(metric_name(out.ecm.metric))},
                      {"upsilon", to_json(out.ecm.upsilon)},
                      {"ranking", ranking_json(out.ecm.ranking, "upsilon")},
                      {"tau", out.ecm.tau}};
        doc["nnec"] = {{"lambda", to_json(out.nnec.lambda)},
                       {"ranking", ranking_json(out.nnec.ranking, "lambda")}};
        return json_artifact("analyze.json", doc);
    }
    std::ostringstream ecm;
    ecm << csv_header(config) << "rank,i,j,upsilon,impact\n";
    for (std::size_t k = 0; k < out.ecm.ranking.size(); ++k) {
        const RankedEdge& r = out.ecm.ranking[k];
        ecm << k + 1 << ',' << r.edge.i << ',' << r.edge.j << ',' << fmt(r.score) << ','
            << fmt(r.impact) << '\n';
    }
    std::ostringstream nnec;
    nnec << csv_header(config) << "rank,i,j,lambda\n";
    for (std::size_t k = 0; k < out.nnec.ranking.size(); ++k) {
        const RankedEdge& r = out.nnec.ranking[k];
        nnec << k + 1 << ',' << r.edge.i << ',' << r.edge.j << ',' << fmt(r.score) << '\n';
    }
    return {{"ecm.csv", ecm.str()}, {"nnec.csv", nnec.str()}};
}

std::vector<Artifact> render(const ModifyOutput& out, const RunConfig& config, OutputFormat f) {
    const ModificationResult& r = out.modification.result;
    json doc = report_base(config, "modify");
    doc["ecm_ranking"] = ranking_json(out.modification.report.ranking, "upsilon");
    doc["result"] = result_json(r);
    doc["damping_before"] = poles_json(out.damping_before);
    doc["damping_after"] = poles_json(out.damping_after);
    const auto slow_before = slow_mode(out.damping_before);
    const auto slow_after = slow_mode(out.damping_after);
    if (slow_before && slow_after) {
        doc["slow_mode_zeta_delta"] = slow_after->zeta - slow_before->zeta;
    }
    json admittances = json::array();
    for (const RecoveredAdmittance& a : out.admittances) {
        admittances.push_back(
            {{"edge", edge_json(a.edge)}, {"rho", a.rho}, {"re", a.y.real()}, {"im", a.y.imag()}});
    }
    doc["recovered_admittance"] = admittances;
    doc["warnings"] = out.warnings;
    if (f == OutputFormat::Json) {
        return json_artifact("modify.json", doc);
    }
    std::ostringstream gamma;
    gamma << csv_header(config) << "i,j,gamma\n";
    for (std::size_t k = 0; k < r.edge_set.size(); ++k) {
        gamma << r.edge_set[k].i << ',' << r.edge_set[k].j << ','
              << fmt(r.gamma(static_cast<Eigen::Index>(k))) << '\n';
    }
    std::ostringstream summary;
    summary << csv_header(config) << "key,value\n"
            << "metric_before," << fmt(r.metric_before) << '\n'
            << "metric_after," << fmt(r.metric_after) << '\n'
            << "J_percent," << fmt(r.improvement) << '\n'
            << "feasible," << (r.feasible ? 1 : 0) << '\n';
    return {{"modify.json", doc.dump(2) + "\n"},
            {"gamma.csv", gamma.str()},
            {"modify_summary.csv", summary.str()}};
}

std::vector<Artifact> render(const OracleOutput& out, const RunConfig& config, OutputFormat f) {
    const OracleSummary& s = out.summary;
    if (f == OutputFormat::Json) {
        json doc = report_base(config, "oracle");
        json rows = json::array();
        for (const CombinationOutcome& c : s.per_combination) {
            rows.push_back({{"edges", edges_json(c.edges)},
                            {"J_percent", c.improvement},
                            {"gamma", to_json(c.result.gamma)}});
        }
        doc["combinations"] = rows;
        doc["ecm_set"] = edges_json(out.ecm_set);
        doc["wcs"] = {{"edges", edges_json(s.worst().edges)}, {"J_percent", s.worst().improvement}};
        doc["bcs"] = {{"edges", edges_json(s.best().edges)}, {"J_percent", s.best().improvement}};
        if (s.candidate) {
            doc["ecm_J_percent"] = s.per_combination[*s.candidate].improvement;
        }
        doc["J_V"] = s.j_v;
        doc["J_C"] = s.j_c;
        return json_artifact("oracle.json", doc);
    }
    std::ostringstream combos;
    combos << csv_header(config) << "edges,J_percent\n";
    for (const CombinationOutcome& c : s.per_combination) {
        combos << '"' << edges_label(c.edges) << "\"," << fmt(c.improvement) << '\n';
    }
    std::ostringstream summary;
    summary << csv_header(config) << "key,edges,value\n"
            << "WCS,\"" << edges_label(s.worst().edges) << "\"," << fmt(s.worst().improvement) << '\n'
            << "BCS,\"" << edges_label(s.best().edges) << "\"," << fmt(s.best().improvement) << '\n';
    if (s.candidate) {
        summary << "ECM,\"" << edges_label(out.ecm_set) << "\","
                << fmt(s.per_combination[*s.candidate].improvement) << '\n';
    }
    summary << "J_V,," << fmt(s.j_v) << '\n' << "J_C,," << fmt(s.j_c) << '\n';
    return {{"oracle_combinations.csv", combos.str()}, {"oracle_summary.csv", summary.str()}};
}

std::vector<Artifact> render(const EnergyOutput& out, const RunConfig& config, OutputFormat f) {
    if (f == OutputFormat::Json) {
        json doc = report_base(config, "energy");
        doc["tf"] = out.tf;
        doc["modified"] = out.modified;
        doc["sample_count"] = out.samples.size();
        doc["sample_mean"] = out.mean;
        doc["standard_error"] = out.standard_error;
        doc["trace_inv_W_tf"] = out.trace_inv_finite;
        doc["trace_inv_W_inf"] = out.trace_inv_infinite;
        doc["samples"] = out.samples;
        return json_artifact("energy.json", doc);
    }
    std::ostringstream summary;
    summary << csv_header(config) << "key,value\n"
            << "tf," << fmt(out.tf) << '\n'
            << "samples," << out.samples.size() << '\n'
            << "sample_mean," << fmt(out.mean) << '\n'
            << "standard_error," << fmt(out.standard_error) << '\n'
            << "trace_inv_W_tf," << fmt(out.trace_inv_finite) << '\n'
            << "trace_inv_W_inf," << fmt(out.trace_inv_infinite) << '\n';
    std::vector<Artifact> files{{"energy_summary.csv", summary.str()}};
    if (!out.samples.empty()) {
        std::ostringstream csv;
        std::ostringstream dat;
        csv << csv_header(config) << "sample,J_u,trace_inv_W_tf,trace_inv_W_inf\n";
        dat << csv_header(config) << "# sample J_u\n";
        for (std::size_t k = 0; k < out.samples.size(); ++k) {
            csv << k + 1 << ',' << fmt(out.samples[k]) << ',' << fmt(out.trace_inv_finite) << ','
                << fmt(out.trace_inv_infinite) << '\n';
            dat << k + 1 << ' ' << fmt(out.samples[k]) << '\n';
        }
        files.push_back({"energy_samples.csv", csv.str()});
        files.push_back({"energy_samples.dat", dat.str()});
    }
    return files;
}

std::vector<Artifact> render(const DampingOutput& out, const RunConfig& config, OutputFormat f) {
    if (f == OutputFormat::Json) {
        json doc = report_base(config, "damping");
        doc["original"] = poles_json(out.before);
        if (out.after) {
            doc["modified"] = poles_json(*out.after);
        }
        if (out.slow_before) {
            doc["slow_mode_original"] = poles_json({*out.slow_before})[0];
        }
        if (out.slow_after) {
            doc["slow_mode_modified"] = poles_json({*out.slow_after})[0];
        }
        if (out.slow_before && out.slow_after) {
            doc["slow_mode_zeta_delta"] = out.slow_after->zeta - out.slow_before->zeta;
        }
        return json_artifact("damping.json", doc);
    }
    std::ostringstream csv;
    csv << csv_header(config) << "system,pole_re,pole_im,zeta_percent,slow_mode\n";
    auto rows = [&](const char* label, const std::vector<DampedPole>& poles,
                    const std::optional<DampedPole>& slow) {
        for (const DampedPole& p : poles) {
            const bool is_slow = slow && slow->pole == p.pole;
            csv << label << ',' << fmt(p.pole.real()) << ',' << fmt(p.pole.imag()) << ','
                << fmt(p.zeta) << ',' << (is_slow ? 1 : 0) << '\n';
        }
    };
    rows("original", out.before, out.slow_before);
    if (out.after) {
        rows("modified", *out.after, out.slow_after);
    }
    std::vector<Artifact> files{{"damping.csv", csv.str()}};
    if (out.slow_before && out.slow_after) {
        std::ostringstream delta;
        const double d = out.slow_after->zeta - out.slow_before->zeta;
        delta << csv_header(config) << "key,value\n"
              << "slow_zeta_original," << fmt(out.slow_before->zeta) << '\n'
              << "slow_zeta_modified," << fmt(out.slow_after->zeta) << '\n'
              << "slow_zeta_delta," << (d >= 0 ? "+" : "") << fmt(d) << '\n';
        files.push_back({"damping_slow_mode.csv", delta.str()});
    }
    return files;
}

std::vector<Artifact> render(const SweepOutput& out, const RunConfig& config, OutputFormat f) {
    if (f == OutputFormat::Json) {
        json doc = report_base(config, "sweep");
        doc["edge_set"] = edges_json(out.edge_set);
        json points = json::array();
        for (const BudgetPoint& p : out.points) {
            points.push_back({{"beta", p.beta},
                              {"J_percent", p.result.improvement},
                              {"gamma", to_json(p.result.gamma)}});
        }
        doc["points"] = points;
        return json_artifact("sweep.json", doc);
    }
    std::ostringstream dat;
    dat << csv_header(config) << "# beta J_percent\n";
    for (const BudgetPoint& p : out.points) {
        dat << fmt(p.beta) << ' ' << fmt(p.result.improvement) << '\n';
    }
    return {{"sweep.dat", dat.str()}};
}

}  // namespace gridgram
