#include <doctest.h>

#include "gridgram/errors.hpp"
#include "gridgram/workflows.hpp"
#include "fixtures.hpp"

using namespace gridgram;

namespace {

LoadedNetwork loaded_ieee9() { return LoadedNetwork{"ieee9", fixture::ieee9(), std::nullopt, {}}; }

}  // namespace

TEST_CASE("edge list parsing") {
    const auto edges = parse_edge_list("(2,1),(3,1)");
    REQUIRE(edges.size() == 2);
    CHECK(edges[1] == EdgeId::make(3, 1));
    CHECK(parse_edge_list("1-2, 3-2") == std::vector<EdgeId>{EdgeId::make(2, 1), EdgeId::make(3, 2)});
    CHECK_THROWS_AS(parse_edge_list("(2,1),x"), ArgumentError);
    CHECK_THROWS_AS(parse_edge_list(""), ArgumentError);
}

TEST_CASE("modify with zero budget") {
    RunConfig c;
    c.beta = 0.0;
    const ModifyOutput out = run_modify(loaded_ieee9(), c);
    CHECK(out.modification.result.improvement == 0.0);
    CHECK(out.warnings.size() == 1);
}

TEST_CASE("modify rejects an oversized edge set") {
    RunConfig c;
    c.s = 4;
    CHECK_THROWS_AS(run_modify(loaded_ieee9(), c), ArgumentError);
}

TEST_CASE("rho needs admittance data") {
    RunConfig c;
    c.rho = {0.1};
    CHECK_THROWS_AS(run_modify(loaded_ieee9(), c), ArgumentError);
}

TEST_CASE("energy without samples reports the traces only") {
    RunConfig c;
    c.samples = 0;
    const EnergyOutput out = run_energy(fixture::ieee9(), c);
    CHECK(out.samples.empty());
    CHECK(out.trace_inv_infinite <= out.trace_inv_finite);
    const auto files = render(out, c, OutputFormat::Csv);
    CHECK(files.size() == 1);
}

TEST_CASE("reports embed the configuration and version") {
    RunConfig c;
    c.metric = MetricKind::Trace;
    const auto files = render(run_analyze(fixture::ieee9(), c), c, OutputFormat::Json);
    REQUIRE(files.size() == 1);
    const auto doc = nlohmann::json::parse(files.front().content);
    CHECK(doc["version"] == library_version());
    CHECK(doc["config"]["metric"] == "trace");
    CHECK(doc["ecm"]["ranking"][0]["edge"] == nlohmann::json::array({3, 1}));

    const auto csv = render(run_analyze(fixture::ieee9(), c), c, OutputFormat::Csv);
    for (const Artifact& a : csv) {
        CHECK(a.content.rfind("# gridgram " + library_version(), 0) == 0);
    }
}

TEST_CASE("damping of the modified network does not lose the slow mode") {
    RunConfig c;
    const ModifyOutput mod = run_modify(loaded_ieee9(), c);
    const DampingOutput d = run_damping(fixture::ieee9(), mod.modification.result.laplacian_modified);
    REQUIRE(d.after.has_value());
    CHECK(d.slow_before.has_value());
    CHECK(d.slow_after.has_value());
}
