#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "gpe/experiment.hpp"
#include "gpe/stopping.hpp"
#include "gpe/generators.hpp"

using namespace gpe;
using nlohmann::json;

namespace {

ExperimentConfig small_edges_config() {
    ExperimentConfig config;
    config.graph = {{"family", "barbell"}, {"params", {{"clique_size", 4}, {"path_length", 4}}}, {"seed", 0}};
    config.operation = "estimate-edges";
    config.params = {{"start", 0}, {"t", 32}, {"k", 8}, {"target_value", 16.0}};
    config.seed = 1234;
    config.reps = 5;
    return config;
}

}  // namespace

TEST_CASE("graph resolution from file and family") {
    const json family_source = {{"family", "cycle"}, {"params", {{"n", 6}}}, {"seed", 0}};
    CHECK(resolve_graph(family_source).vertex_count() == 6);

    const std::string path = "/tmp/gpe_test_graph.txt";
    {
        std::ofstream out(path);
        out << gen_cycle(5).serialize();
    }
    CHECK(resolve_graph({{"file", path}}).vertex_count() == 5);
}

TEST_CASE("experiment records carry versioning, hashes and per-rep records") {
    const json record = run_experiment(small_edges_config());
    CHECK(record.at("artifact_version") == kArtifactVersion);
    CHECK(record.at("schema_version") == kSchemaVersion);
    CHECK(record.at("rng") == "xoshiro256**");
    CHECK(record.at("config_hash").get<std::string>().size() == 16);
    CHECK(record.at("replications").size() == 5);
    CHECK(record.at("summary").at("replications") == 5);
    CHECK(record.at("summary").contains("success_fraction"));
    CHECK(record.contains("metadata"));

    // Step accounting: the summary totals the per-rep counters.
    std::uint64_t steps = 0;
    for (const auto& rep : record.at("replications")) steps += rep.at("steps").get<std::uint64_t>();
    CHECK(record.at("summary").at("total_steps") == steps);
}

TEST_CASE("identical configs produce identical statistics blocks") {
    const json a = run_experiment(small_edges_config());
    const json b = run_experiment(small_edges_config());
    CHECK(a.at("replications") == b.at("replications"));
    CHECK(a.at("summary") == b.at("summary"));
    CHECK(a.at("config_hash") == b.at("config_hash"));
    // Different seed, different statistics.
    ExperimentConfig other = small_edges_config();
    other.seed = 9;
    CHECK(run_experiment(other).at("summary") != b.at("summary"));
}

TEST_CASE("reproduce verifies a record and pinpoints tampering") {
    const json record = run_experiment(small_edges_config());
    CHECK(reproduce(record).match);

    SUBCASE("tampered seed is caught via the config hash") {
        json tampered = record;
        tampered["config"]["seed"] = 4321;
        const ReproduceOutcome outcome = reproduce(tampered);
        CHECK(!outcome.match);
        CHECK(outcome.divergence == "/config_hash");
    }

    SUBCASE("tampered statistic is caught field-by-field") {
        json tampered = record;
        tampered["replications"][2]["value"] = 123.456;
        const ReproduceOutcome outcome = reproduce(tampered);
        CHECK(!outcome.match);
        CHECK(outcome.divergence.find("/replications/2") == 0);
    }

    SUBCASE("version mismatch refuses to run") {
        json wrong = record;
        wrong["artifact_version"] = "0.0.1";
        CHECK_THROWS_WITH_AS(reproduce(wrong),
                             doctest::Contains("artifact_version"), std::runtime_error);
    }
}

TEST_CASE("intersect records include the running mean") {
    ExperimentConfig config;
    config.graph = {{"family", "complete"}, {"params", {{"n", 3}}}, {"seed", 0}};
    config.operation = "intersect";
    config.params = {{"start", 0}, {"t", 4}, {"weighted", true}};
    config.seed = 7;
    config.reps = 10;
    const json record = run_experiment(config);

    double running = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        const auto& rep = record.at("replications")[i];
        running += rep.at("weighted_count").get<double>();
        CHECK(rep.at("running_mean").get<double>() ==
              doctest::Approx(running / static_cast<double>(i + 1)).epsilon(1e-12));
    }
    CHECK(reproduce(record).match);
}

TEST_CASE("self-stopping operations run through the experiment harness") {
    ExperimentConfig config;
    config.graph = {{"family", "complete"}, {"params", {{"n", 8}}}, {"seed", 0}};
    config.operation = "selfstop-edges";
    config.params = {{"start", 0}, {"tau", 2}, {"eps", 0.2}, {"k", 16}};
    config.seed = 5;
    config.reps = 2;
    const json record = run_experiment(config);
    for (const auto& rep : record.at("replications")) {
        CHECK(rep.contains("value"));
        CHECK(rep.at("log").at("rounds").size() >= 1);
        CHECK(rep.at("log").at("total_steps") == rep.at("steps"));
    }
    CHECK(reproduce(record).match);
}

TEST_CASE("pipeline hands the edge search's overestimate to the mixing search") {
    // The edge search stops near 18m by construction, so the plain
    // composition drives the mixing threshold below the stationary plateau;
    // the run must end in the explicit round-budget error, not hang.
    ExperimentConfig config;
    config.graph = {{"family", "complete"}, {"params", {{"n", 8}}}, {"seed", 0}};
    config.operation = "pipeline-edges-then-mixing";
    config.params = {{"start", 0},     {"tau", 2}, {"eps", 0.2},       {"k", 16},
                     {"delta", 0.5},   {"c", 4.0}, {"max_rounds", 8}};
    config.seed = 5;
    CHECK_THROWS_AS(run_experiment(config), RoundBudgetExceeded);
}

TEST_CASE("oracle operation emits spectral data and bound checks") {
    ExperimentConfig config;
    config.graph = {{"family", "complete"}, {"params", {{"n", 3}}}, {"seed", 0}};
    config.operation = "oracle";
    config.params = {{"start", 0}, {"t", 2}, {"bounds", true}};
    const json record = run_experiment(config);
    const auto& rep = record.at("replications")[0];
    CHECK(rep.at("spectral").at("t_rel") == 2);
    CHECK(rep.at("expectations")[0].at("expected_weighted_intersections").get<double>() ==
          doctest::Approx(1.1875));
    CHECK(rep.at("bounds").at("all_pass") == true);
}

TEST_CASE("burn-in 'auto' resolves through the oracle") {
    ExperimentConfig config;
    config.graph = {{"family", "cycle"}, {"params", {{"n", 16}}}, {"seed", 0}};
    config.operation = "estimate-edges";
    config.params = {{"start", 0}, {"t", 16}, {"k", 8}, {"burn_in", "auto"}};
    config.seed = 3;
    const json record = run_experiment(config);
    CHECK(record.at("replications")[0].at("diagnostics").at("burn_in") == 54);  // t_unif(C16)
}

TEST_CASE("csv rendering has a header, one row per rep and a summary row") {
    const std::string csv = render_csv(run_experiment(small_edges_config()));
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line.find("value") != std::string::npos);
    int rows = 0;
    bool summary_seen = false;
    while (std::getline(lines, line)) {
        if (line.rfind("# summary", 0) == 0)
            summary_seen = true;
        else
            ++rows;
    }
    CHECK(rows == 5);
    CHECK(summary_seen);
}

TEST_CASE("unknown operations are rejected") {
    ExperimentConfig config;
    config.graph = {{"family", "cycle"}, {"params", {{"n", 4}}}, {"seed", 0}};
    config.operation = "no-such-op";
    CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
}
