#include "gpe/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <sstream>

#include "gpe/estimators.hpp"
#include "gpe/generators.hpp"
#include "gpe/intersections.hpp"
#include "gpe/oracle.hpp"
#include "gpe/rng.hpp"
#include "gpe/stopping.hpp"
#include "gpe/walk.hpp"

namespace gpe {

using nlohmann::json;

namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json log_to_json(const StoppingLog& log) {
    json rounds = json::array();
    for (const auto& round : log.rounds)
        rounds.push_back({{"q", round.q},
                          {"t", round.t},
                          {"k", round.k},
                          {"repetitions", round.repetitions},
                          {"successes", round.successes},
                          {"stopped", round.stopped}});
    return {{"rounds", rounds},
            {"final_value", log.final_value},
            {"total_steps", log.total_steps},
            {"seed", log.seed}};
}

json estimate_to_json(const EstimateResult& result) {
    return {{"value", result.value},
            {"t", result.t},
            {"k", result.K},
            {"seed", result.seed},
            {"diagnostics",
             {{"mean_statistic", result.diagnostics.mean_statistic},
              {"sample_variance", result.diagnostics.sample_variance},
              {"burn_in", result.diagnostics.burn_in},
              {"steps_per_walk", result.diagnostics.steps_per_walk},
              {"total_steps", result.diagnostics.total_steps}}}};
}

SelfStopOptions stop_options(const json& params) {
    SelfStopOptions options;
    if (params.contains("max_rounds")) options.max_rounds = params.at("max_rounds").get<std::uint32_t>();
    return options;
}

std::uint64_t resolve_burn_in(const json& params, const Graph& g) {
    const auto& b = params.at("burn_in");
    if (b.is_string() && b.get<std::string>() == "auto") {
        if (g.vertex_count() > oracle_cap())
            throw std::runtime_error(
                "burn-in 'auto' needs the dense oracle; graph exceeds the cap, supply --burn-in");
        return spectral_summary(g).t_unif;
    }
    return b.get<std::uint64_t>();
}

// One replication of an operation; returns the record and exposes the scalar
// value (when the op has one) plus the steps consumed.
json run_replication(const std::string& op, const json& params, const Graph& g, std::uint64_t rep,
                     std::uint64_t rep_seed, double& value, std::uint64_t& steps) {
    const auto start = [&] { return params.value("start", 0u); };

    if (op == "estimate-vertices") {
        const EstimateResult r = estimate_vertices_regular(g, start(), params.at("t").get<std::uint64_t>(),
                                                           params.value("k", 400ull), rep_seed);
        value = r.value;
        steps = r.diagnostics.total_steps;
        return estimate_to_json(r);
    }
    if (op == "estimate-edges") {
        const std::uint64_t t = params.at("t").get<std::uint64_t>();
        const std::uint64_t k = params.value("k", 400ull);
        EstimateResult r = params.contains("burn_in")
                               ? estimate_edges_burnin(g, start(), t, k, resolve_burn_in(params, g), rep_seed)
                               : estimate_edges(g, start(), t, k, rep_seed);
        value = r.value;
        steps = r.diagnostics.total_steps;
        return estimate_to_json(r);
    }
    if (op == "estimate-vertices-general") {
        const EstimateResult r = estimate_vertices_general(
            g, start(), params.at("m_hat").get<double>(), resolve_burn_in(params, g),
            params.at("t").get<std::uint64_t>(), rep_seed);
        value = r.value;
        steps = r.diagnostics.total_steps;
        return estimate_to_json(r);
    }
    if (op == "intersect") {
        const std::uint64_t t = params.at("t").get<std::uint64_t>();
        const std::uint64_t burn = params.contains("burn_in") ? resolve_burn_in(params, g) : 0;
        const bool weighted = params.value("weighted", false) || burn > 0;
        const WalkTrace x = simulate_lazy_walk(g, start(), burn + t, derive_stream(rep_seed, 0));
        const WalkTrace y = simulate_lazy_walk(g, start(), burn + t, derive_stream(rep_seed, 1));
        steps = 2 * (burn + t);
        const WindowSpec w{burn, burn + t};
        json rec{{"pair", rep}, {"seed", rep_seed}};
        if (weighted) {
            value = count_weighted_intersections(x, y, w, g);
            rec["weighted_count"] = value;
        } else {
            const std::uint64_t c = count_intersections(x, y, w);
            value = static_cast<double>(c);
            rec["count"] = c;
        }
        return rec;
    }
    if (op == "selfstop-edges") {
        const SelfStopResult r =
            selfstop_edges(g, start(), params.at("tau").get<std::uint64_t>(), params.at("eps").get<double>(),
                           params.value("k", 32ull), rep_seed, stop_options(params));
        value = static_cast<double>(r.value);
        steps = r.log.total_steps;
        return {{"value", r.value}, {"log", log_to_json(r.log)}};
    }
    if (op == "selfstop-mixing") {
        const SelfStopResult r =
            selfstop_mixing(g, start(), params.at("m").get<std::uint64_t>(), params.at("delta").get<double>(),
                            params.at("eps").get<double>(), params.value("c", 4.0), rep_seed,
                            stop_options(params));
        value = static_cast<double>(r.value);
        steps = r.log.total_steps;
        return {{"value", r.value}, {"log", log_to_json(r.log)}};
    }
    if (op == "pipeline-edges-then-mixing") {
        const SelfStopResult edges =
            selfstop_edges(g, start(), params.at("tau").get<std::uint64_t>(), params.at("eps").get<double>(),
                           params.value("k", 32ull), derive_stream(rep_seed, 0), stop_options(params));
        const SelfStopResult mixing =
            selfstop_mixing(g, start(), edges.value, params.at("delta").get<double>(),
                            params.at("eps").get<double>(), params.value("c", 4.0), derive_stream(rep_seed, 1),
                            stop_options(params));
        value = static_cast<double>(mixing.value);
        steps = edges.log.total_steps + mixing.log.total_steps;
        return {{"m_hat", edges.value},
                {"t_hat", mixing.value},
                {"edges_log", log_to_json(edges.log)},
                {"mixing_log", log_to_json(mixing.log)}};
    }
    throw std::invalid_argument("unknown operation '" + op + "'");
}

json oracle_record(const json& params, const Graph& g) {
    const std::uint32_t x = params.value("start", 0u);
    const SpectralSummary spectral = spectral_summary(g);

    json rec;
    rec["spectral"] = {{"t_rel", spectral.t_rel},
                       {"t_unif", spectral.t_unif},
                       {"lambda2", spectral.eigenvalues[1]},
                       {"eigenvalues", spectral.eigenvalues},
                       {"pi", spectral.pi}};

    auto expectations_at = [&](std::uint64_t t) {
        return json{{"t", t},
                    {"expected_weighted_intersections", expected_weighted_intersections(g, x, t)},
                    {"expected_burnin_intersections", expected_J(g, x, t, spectral.t_unif)},
                    {"expected_window_intersections", expected_L(g, x, t)},
                    {"l2_distance_sq", l2_distance_sq(g, x, t)}};
    };

    if (params.value("sweep", false)) {
        json sweep = json::array();
        for (std::uint64_t t = 1; t <= 128; t *= 2) sweep.push_back(expectations_at(t));
        rec["expectations"] = sweep;
    } else if (params.contains("t")) {
        rec["expectations"] = json::array({expectations_at(params.at("t").get<std::uint64_t>())});
    }

    if (params.contains("delta")) {
        const double delta = params.at("delta").get<double>();
        rec["mixing_time_from"] = {{"delta", delta}, {"t_x", mixing_time_from(g, x, delta)}};
    }

    if (params.value("bounds", true)) {
        const BoundReport report = verify_bounds(g);
        json checks = json::array();
        for (const auto& check : report.checks)
            checks.push_back({{"name", check.name},
                              {"pass", check.pass},
                              {"worst_slack", check.worst_slack},
                              {"detail", check.detail}});
        json fitted = json::array();
        for (const auto& fit : report.fitted) fitted.push_back({{"name", fit.name}, {"value", fit.value}});
        rec["bounds"] = {{"all_pass", report.all_pass}, {"checks", checks}, {"fitted", fitted}};
    }
    return rec;
}

}  // namespace

json config_to_json(const ExperimentConfig& config) {
    return {{"graph", config.graph},
            {"operation", config.operation},
            {"params", config.params},
            {"seed", config.seed},
            {"reps", config.reps}};
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig config;
    config.graph = j.at("graph");
    config.operation = j.at("operation").get<std::string>();
    config.params = j.value("params", json::object());
    config.seed = j.value("seed", 0ull);
    config.reps = j.value("reps", 1ull);
    return config;
}

std::string config_hash(const ExperimentConfig& config) {
    const std::string canon = config_to_json(config).dump();
    return hex64(fnv1a64({canon.data(), canon.size()}));
}

Graph resolve_graph(const json& graph_source) {
    if (graph_source.contains("file")) return load_graph_file(graph_source.at("file").get<std::string>());
    GenSpec spec;
    spec.family = graph_source.at("family").get<std::string>();
    spec.seed = graph_source.value("seed", 0ull);
    if (graph_source.contains("params"))
        for (const auto& [key, val] : graph_source.at("params").items())
            spec.params[key] = val.get<std::uint64_t>();
    return generate(spec);
}

nlohmann::json run_experiment(const ExperimentConfig& config) {
    const auto wall_start = std::chrono::steady_clock::now();
    const Graph g = resolve_graph(config.graph);

    json record;
    record["artifact_version"] = kArtifactVersion;
    record["schema_version"] = kSchemaVersion;
    record["rng"] = kRngName;
    record["config"] = config_to_json(config);
    record["config_hash"] = config_hash(config);
    record["graph_fingerprint"] = hex64(g.fingerprint());

    json summary;
    if (config.operation == "oracle") {
        record["replications"] = json::array({oracle_record(config.params, g)});
        summary["replications"] = 1;
    } else {
        json reps = json::array();
        double sum = 0.0, sumsq = 0.0;
        std::uint64_t total_steps = 0, hits = 0;
        const bool has_target = config.params.contains("target_value");
        const double target = has_target ? config.params.at("target_value").get<double>() : 0.0;
        const double tol = config.params.value("target_rel_tol", 0.5);

        for (std::uint64_t rep = 0; rep < config.reps; ++rep) {
            double value = 0.0;
            std::uint64_t steps = 0;
            json rec = run_replication(config.operation, config.params, g, rep,
                                       derive_stream(config.seed, rep), value, steps);
            rec["rep"] = rep;
            rec["steps"] = steps;
            reps.push_back(std::move(rec));
            sum += value;
            sumsq += value * value;
            total_steps += steps;
            if (has_target && std::abs(value / target - 1.0) <= tol) ++hits;
        }
        if (config.operation == "intersect") {
            double running = 0.0;
            for (std::size_t i = 0; i < reps.size(); ++i) {
                auto& rec = reps[i];
                running += rec.contains("count") ? rec.at("count").get<double>()
                                                 : rec.at("weighted_count").get<double>();
                rec["running_mean"] = running / static_cast<double>(i + 1);
            }
        }
        record["replications"] = std::move(reps);

        const auto n = static_cast<double>(config.reps);
        summary["replications"] = config.reps;
        summary["mean"] = sum / n;
        summary["sample_std"] =
            config.reps > 1 ? std::sqrt(std::max(0.0, (sumsq - sum * sum / n) / (n - 1.0))) : 0.0;
        summary["total_steps"] = total_steps;
        if (has_target) {
            summary["target_value"] = target;
            summary["target_rel_tol"] = tol;
            summary["success_fraction"] = static_cast<double>(hits) / n;
        }
    }
    record["summary"] = std::move(summary);

    const auto wall_end = std::chrono::steady_clock::now();
    record["metadata"] = {
        {"wall_ms", std::chrono::duration_cast<std::chrono::milliseconds>(wall_end - wall_start).count()},
        {"timestamp_unix",
         std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
             .count()}};
    return record;
}

namespace {

// First divergent path between two json values, depth-first.
bool first_divergence(const json& a, const json& b, const std::string& path, std::string& out) {
    if (a.type() != b.type()) {
        out = path + " (type)";
        return true;
    }
    if (a.is_object()) {
        for (const auto& [key, val] : a.items()) {
            if (!b.contains(key)) {
                out = path + "/" + key + " (missing)";
                return true;
            }
            if (first_divergence(val, b.at(key), path + "/" + key, out)) return true;
        }
        for (const auto& [key, val] : b.items())
            if (!a.contains(key)) {
                out = path + "/" + key + " (extra)";
                return true;
            }
        return false;
    }
    if (a.is_array()) {
        if (a.size() != b.size()) {
            out = path + " (length)";
            return true;
        }
        for (std::size_t i = 0; i < a.size(); ++i)
            if (first_divergence(a[i], b[i], path + "/" + std::to_string(i), out)) return true;
        return false;
    }
    if (a != b) {
        out = path;
        return true;
    }
    return false;
}

}  // namespace

ReproduceOutcome reproduce(const json& record) {
    const std::string version = record.value("artifact_version", "<absent>");
    if (version != kArtifactVersion)
        throw std::runtime_error("record artifact_version '" + version + "' does not match this build ('" +
                                 std::string(kArtifactVersion) + "')");
    if (record.value("schema_version", -1) != kSchemaVersion)
        throw std::runtime_error("record schema_version does not match this build");

    const ExperimentConfig config = config_from_json(record.at("config"));
    if (config_hash(config) != record.value("config_hash", ""))
        return {false, "/config_hash"};

    const json rerun = run_experiment(config);

    std::string where;
    if (first_divergence(record.at("replications"), rerun.at("replications"), "/replications", where))
        return {false, where};
    if (first_divergence(record.at("summary"), rerun.at("summary"), "/summary", where))
        return {false, where};
    if (record.value("graph_fingerprint", "") != rerun.value("graph_fingerprint", ""))
        return {false, "/graph_fingerprint"};
    return {true, ""};
}

std::string render_csv(const json& record) {
    const auto& reps = record.at("replications");
    std::ostringstream out;
    out.precision(17);

    // Union of scalar fields across replications, in first-seen order.
    std::vector<std::string> columns;
    for (const auto& rec : reps)
        for (const auto& [key, val] : rec.items())
            if (!val.is_structured() && std::find(columns.begin(), columns.end(), key) == columns.end())
                columns.push_back(key);

    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& rec : reps) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out << ",";
            if (rec.contains(columns[i])) out << rec.at(columns[i]).dump();
        }
        out << "\n";
    }

    out << "# summary";
    for (const auto& [key, val] : record.at("summary").items()) out << " " << key << "=" << val.dump();
    out << "\n";
    return out.str();
}

}  // namespace gpe
