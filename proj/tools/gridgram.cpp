// gridgram: Gramian-based edge centrality and budgeted edge modification
// for multimachine power networks.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridgram/errors.hpp"
#include "gridgram/network_io.hpp"
#include "gridgram/workflows.hpp"

namespace fs = std::filesystem;
using namespace gridgram;

namespace {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kValidation = 3,
    kNumerical = 4,
    kRefused = 5,
};

struct Options {
    std::string network;
    std::string metric = "logdet";
    std::size_t s = 1;
    double beta = 1.0;
    std::string candidate = "laplacian";
    std::uint64_t seed = 0;
    std::size_t restarts = 8;
    std::string param = "sin";
    std::string tf = "auto";
    std::size_t samples = 10000;
    bool modify = false;
    std::vector<double> rho;
    std::vector<double> betas;
    double cap = kDefaultCombinationCap;
    std::string out;
    std::string format = "csv";
};

RunConfig to_config(const Options& o) {
    RunConfig c;
    const auto metric = parse_metric(o.metric);
    if (!metric) {
        throw ArgumentError("unknown metric '" + o.metric + "' (trace, logdet, neg-trace-inv)");
    }
    c.metric = *metric;
    c.s = o.s;
    c.beta = o.beta;
    if (o.candidate == "all-pairs") {
        c.candidate = CandidateMode::AllPairs;
    } else if (o.candidate == "laplacian") {
        c.candidate = CandidateMode::Laplacian;
    } else {
        c.candidate = CandidateMode::Explicit;
        c.explicit_edges = parse_edge_list(o.candidate);
    }
    c.seed = o.seed;
    const auto param = parse_parameterization(o.param);
    if (!param) {
        throw ArgumentError("unknown parameterization '" + o.param + "' (sin, sigmoid)");
    }
    c.parameterization = *param;
    c.restarts = o.restarts;
    if (o.tf != "auto") {
        std::size_t used = 0;
        double tf = 0.0;
        try {
            tf = std::stod(o.tf, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != o.tf.size() || !(tf > 0.0)) {
            throw ArgumentError("--tf must be 'auto' or a positive number");
        }
        c.tf = tf;
    }
    c.samples = o.samples;
    c.use_modified = o.modify;
    c.rho = o.rho;
    c.betas = o.betas;
    c.combination_cap = o.cap;
    return c;
}

OutputFormat to_format(const std::string& name) {
    return name == "json" ? OutputFormat::Json : OutputFormat::Csv;
}

void emit(const std::vector<Artifact>& files, const std::string& out_dir) {
    if (out_dir.empty()) {
        for (const Artifact& a : files) {
            std::cout << "== " << a.filename << " ==\n" << a.content;
        }
        return;
    }
    fs::create_directories(out_dir);
    for (const Artifact& a : files) {
        const fs::path path = fs::path(out_dir) / a.filename;
        std::ofstream file(path);
        file << a.content;
        if (!file) {
            throw std::runtime_error("cannot write " + path.string());
        }
        std::cerr << "wrote " << path.string() << '\n';
    }
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) {
        std::cerr << "warning: " << w << '\n';
    }
}

int run(const std::string& command, const Options& o) {
    const RunConfig config = to_config(o);
    const OutputFormat format = to_format(o.format);
    const LoadedNetwork network = ingest(o.network);
    print_warnings(network.warnings);
    const GeneratorNetwork& net = network.net;

    if (command == "analyze") {
        emit(render(run_analyze(net, config), config, format), o.out);
    } else if (command == "modify") {
        const ModifyOutput out = run_modify(network, config);
        print_warnings(out.warnings);
        emit(render(out, config, format), o.out);
    } else if (command == "oracle") {
        emit(render(run_oracle(net, config), config, format), o.out);
    } else if (command == "energy") {
        emit(render(run_energy(net, config), config, format), o.out);
    } else if (command == "damping") {
        std::optional<Matrix> modified;
        if (config.use_modified) {
            const ModifyOutput out = run_modify(network, config);
            print_warnings(out.warnings);
            modified = out.modification.result.laplacian_modified;
        }
        emit(render(run_damping(net, modified), config, format), o.out);
    } else if (command == "sweep") {
        emit(render(run_sweep(net, config), config, format), o.out);
    } else if (command == "report") {
        nlohmann::json doc = serialize_network(network);
        emit({{"network.json", doc.dump(2) + "\n"}}, o.out);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gramian-based edge centrality and edge modification for power networks"};
    app.set_version_flag("--version", library_version());
    app.require_subcommand(1);

    Options o;
    struct Spec {
        const char* name;
        const char* help;
    };
    const Spec specs[] = {
        {"analyze", "ECM and NNEC edge rankings"},
        {"modify", "ECM-based budgeted edge modification"},
        {"oracle", "brute-force search over all s-subsets of the candidate set"},
        {"energy", "sampled minimum control energy and Gramian traces"},
        {"damping", "pole and damping-ratio table"},
        {"sweep", "improvement over a grid of budgets"},
        {"report", "echo the canonicalized network file"},
    };
    for (const Spec& spec : specs) {
        CLI::App* sub = app.add_subcommand(spec.name, spec.help);
        sub->add_option("network", o.network, "network file (JSON)")->required();
        sub->add_option("--metric", o.metric, "trace | logdet | neg-trace-inv")
            ->capture_default_str();
        sub->add_option("--s", o.s, "number of edges to modify")->capture_default_str()
            ->check(CLI::PositiveNumber);
        sub->add_option("--beta", o.beta, "Euclidean budget on gamma")->capture_default_str()
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--candidate", o.candidate,
                        "laplacian | all-pairs | explicit list such as \"(2,1),(3,1)\"")
            ->capture_default_str();
        sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
        sub->add_option("--restarts", o.restarts, "optimizer multi-start count")
            ->capture_default_str()->check(CLI::PositiveNumber);
        sub->add_option("--param", o.param, "sin | sigmoid")->capture_default_str();
        sub->add_option("--tf", o.tf, "finite horizon, or auto for -1/alpha")
            ->capture_default_str();
        sub->add_option("--samples", o.samples, "energy samples")->capture_default_str();
        sub->add_flag("--modify", o.modify, "energy/damping on the ECM-modified network");
        sub->add_option("--rho", o.rho, "admittance design parameter per modified edge")
            ->delimiter(',');
        sub->add_option("--betas", o.betas, "budget grid for sweep")->delimiter(',');
        sub->add_option("--cap", o.cap, "oracle combination cap")->capture_default_str();
        sub->add_option("--out", o.out, "output directory (default: stdout)");
        sub->add_option("--format", o.format, "csv | json")
            ->capture_default_str()
            ->check(CLI::IsMember({"csv", "json"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, o);
    } catch (const CombinatorialRefusal& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return kRefused;
    } catch (const ArgumentError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const ModelInconsistency& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }
}
