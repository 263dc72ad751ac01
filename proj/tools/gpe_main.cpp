#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gpe/estimators.hpp"
#include "gpe/experiment.hpp"
#include "gpe/generators.hpp"
#include "gpe/graph.hpp"
#include "gpe/intersections.hpp"
#include "gpe/oracle.hpp"
#include "gpe/walk.hpp"

namespace {

using nlohmann::json;

struct GraphOptions {
    std::string file;
    std::string family;
    std::string params;
    std::uint64_t seed = 0;

    json to_source() const {
        if (!file.empty()) return {{"file", file}};
        if (family.empty()) throw CLI::ValidationError("--graph or --family is required");
        json source{{"family", family}, {"seed", seed}};
        json p = json::object();
        std::stringstream ss(params);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("--params expects name=value pairs, got '" + item + "'");
            p[item.substr(0, eq)] = std::stoull(item.substr(eq + 1));
        }
        source["params"] = p;
        return source;
    }
};

void add_graph_options(CLI::App* cmd, GraphOptions& opts) {
    cmd->add_option("--graph", opts.file, "edge-list graph file");
    cmd->add_option("--family", opts.family,
                    "generator family (cycle, complete, barbell, random_regular_3, "
                    "subdivided_expander, clique_expander, clique_with_paths)");
    cmd->add_option("--params", opts.params, "generator parameters, e.g. k=8,ell=5");
    cmd->add_option("--graph-seed", opts.seed, "generator seed");
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << text;
}

void emit_record(const json& record, const std::string& format, const std::string& out_path) {
    if (format == "csv")
        write_output(out_path, gpe::render_csv(record));
    else
        write_output(out_path, record.dump(2) + "\n");
}

// Parses --burn-in values: integer or "auto" (resolve t_unif via the oracle).
json burn_in_value(const std::string& raw) {
    if (raw == "auto") return "auto";
    return std::stoull(raw);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "gpe: estimate graph parameters (edges, vertices, mixing time) from lazy "
        "random walk intersections, with an exact spectral oracle for desk-scale "
        "verification"};
    app.require_subcommand(1);

    std::string out_path;
    app.add_option("--out", out_path, "output file (default stdout)")->capture_default_str();

    // generate
    {
        auto* cmd = app.add_subcommand("generate", "construct a graph and write its edge list");
        auto opts = std::make_shared<GraphOptions>();
        add_graph_options(cmd, *opts);
        cmd->callback([&, opts] {
            const gpe::Graph g = gpe::resolve_graph(opts->to_source());
            write_output(out_path, g.serialize());
        });
    }

    // walk
    {
        auto* cmd = app.add_subcommand("walk", "simulate one lazy random walk, print visited ids");
        auto opts = std::make_shared<GraphOptions>();
        add_graph_options(cmd, *opts);
        auto start = std::make_shared<std::uint32_t>(0);
        auto steps = std::make_shared<std::uint64_t>(1);
        auto seed = std::make_shared<std::uint64_t>(0);
        cmd->add_option("--start", *start, "start vertex")->required();
        cmd->add_option("--steps", *steps, "trace length t")->required();
        cmd->add_option("--seed", *seed, "walk seed");
        cmd->callback([&, opts, start, steps, seed] {
            const gpe::Graph g = gpe::resolve_graph(opts->to_source());
            const gpe::WalkTrace trace = gpe::simulate_lazy_walk(g, *start, *steps, *seed);
            std::string text;
            for (std::size_t i = 0; i < trace.steps.size(); ++i)
                text += (i ? " " : "") + std::to_string(trace.steps[i]);
            write_output(out_path, text + "\n");
        });
    }

    // profile
    {
        auto* cmd = app.add_subcommand("profile",
                                       "first-occurrence ranks and degrees of walk traces, as CSV");
        auto opts = std::make_shared<GraphOptions>();
        add_graph_options(cmd, *opts);
        auto start = std::make_shared<std::uint32_t>(0);
        auto steps = std::make_shared<std::uint64_t>(1);
        auto seed = std::make_shared<std::uint64_t>(0);
        auto walks = std::make_shared<std::uint64_t>(1);
        cmd->add_option("--start", *start, "start vertex")->required();
        cmd->add_option("--steps", *steps, "trace length t per walk")->required();
        cmd->add_option("--seed", *seed, "master seed");
        cmd->add_option("--walks", *walks, "number of concatenated walks");
        cmd->callback([&, opts, start, steps, seed, walks] {
            const gpe::Graph g = gpe::resolve_graph(opts->to_source());
            std::vector<gpe::WalkTrace> traces;
            for (std::uint64_t w = 0; w < *walks; ++w)
                traces.push_back(gpe::simulate_lazy_walk(g, *start, *steps, gpe::derive_stream(*seed, w)));
            const gpe::Profile profile = gpe::compute_profile(traces, g);
            std::string text = "rank,degree\n";
            for (std::size_t i = 0; i < profile.ranks.size(); ++i)
                text += std::to_string(profile.ranks[i]) + "," + std::to_string(profile.degree_seq[i]) + "\n";
            write_output(out_path, text);
        });
    }

    // Experiment-style subcommands share the run_experiment plumbing.
    struct ExperimentCmd {
        GraphOptions graph;
        std::uint64_t seed = 0;
        std::uint64_t reps = 1;
        std::uint32_t max_rounds = 60;
        std::string format = "json";
        json params = json::object();
    };

    auto add_experiment_cmd = [&](const std::string& name, const std::string& desc) {
        auto* cmd = app.add_subcommand(name, desc);
        auto state = std::make_shared<ExperimentCmd>();
        add_graph_options(cmd, state->graph);
        cmd->add_option("--seed", state->seed, "master seed");
        cmd->add_option("--reps", state->reps, "replication count");
        if (name.rfind("selfstop", 0) == 0 || name.rfind("pipeline", 0) == 0)
            cmd->add_option("--max-rounds", state->max_rounds,
                            "doubling-round budget before giving up");
        cmd->add_option("--format", state->format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        cmd->callback([&, name, state] {
            gpe::ExperimentConfig config;
            config.graph = state->graph.to_source();
            config.operation = name;
            config.params = state->params;
            config.seed = state->seed;
            config.reps = state->reps;
            emit_record(gpe::run_experiment(config), state->format, out_path);
        });
        return std::pair{cmd, state};
    };

    {
        auto [cmd, state] = add_experiment_cmd("intersect", "count intersections of walk pairs");
        auto start = std::make_shared<std::uint32_t>(0);
        auto t = std::make_shared<std::uint64_t>(0);
        auto pairs = std::make_shared<std::uint64_t>(1);
        auto weighted = std::make_shared<bool>(false);
        auto burn = std::make_shared<std::string>();
        cmd->add_option("--start", *start, "start vertex")->required();
        cmd->add_option("--t", *t, "window length")->required();
        cmd->add_option("--pairs", *pairs, "number of walk pairs");
        cmd->add_flag("--weighted", *weighted, "weight matches by 1/deg");
        cmd->add_option("--burn-in", *burn, "window offset, integer or 'auto'");
        cmd->parse_complete_callback([state, start, t, pairs, weighted, burn] {
            state->params = {{"start", *start}, {"t", *t}, {"weighted", *weighted}};
            if (!burn->empty()) state->params["burn_in"] = burn_in_value(*burn);
            state->reps = *pairs;
        });
    }

    {
        auto [cmd, state] = add_experiment_cmd("estimate-edges", "edge-count estimator from weighted intersections");
        auto start = std::make_shared<std::uint32_t>(0);
        auto t = std::make_shared<std::uint64_t>(0);
        auto k = std::make_shared<std::uint64_t>(400);
        auto burn = std::make_shared<std::string>();
        auto target = std::make_shared<double>(0);
        cmd->add_option("--start", *start, "start vertex")->required();
        cmd->add_option("--t", *t, "walk-pair window length")->required();
        cmd->add_option("--k", *k, "walk pairs per estimate");
        cmd->add_option("--burn-in", *burn, "count from this offset; integer or 'auto'");
        auto* topt = cmd->add_option("--target", *target, "true value, enables success_fraction");
        cmd->parse_complete_callback([state, start, t, k, burn, target, topt] {
            state->params = {{"start", *start}, {"t", *t}, {"k", *k}};
            if (!burn->empty()) state->params["burn_in"] = burn_in_value(*burn);
            if (topt->count()) state->params["target_value"] = *target;
        });
    }

    {
        auto [cmd, state] =
            add_experiment_cmd("estimate-vertices", "vertex-count estimator for regular graphs");
        auto start = std::make_shared<std::uint32_t>(0);
        auto t = std::make_shared<std::uint64_t>(0);
        auto k = std::make_shared<std::uint64_t>(400);
        auto target = std::make_shared<double>(0);
        cmd->add_option("--start", *start, "start vertex")->required();
        cmd->add_option("--t", *t, "walk-pair window length")->required();
        cmd->add_option("--k", *k, "walk pairs per estimate");
        auto* topt = cmd->add_option("--target", *target, "true value, enables success_fraction");
        cmd->parse_complete_callback([state, start, t, k, target, topt] {
            state->params = {{"start", *start}, {"t", *t}, {"k", *k}};
            if (topt->count()) state->params["target_value"] = *target;
        });
    }

    {
        auto [cmd, state] = add_experiment_cmd("estimate-vertices-general",
                                               "vertex count from an edge estimate and the mean inverse degree");
        auto start = std::make_shared<std::uint32_t>(0);
        auto t = std::make_shared<std::uint64_t>(0);
        auto m_hat = std::make_shared<double>(0);
        auto burn = std::make_shared<std::string>("auto");
        auto target = std::make_shared<double>(0);
        cmd->add_option("--start", *start, "start vertex")->required();
        cmd->add_option("--t", *t, "averaging window length")->required();
        cmd->add_option("--m-hat", *m_hat, "edge-count estimate")->required();
        cmd->add_option("--burn-in", *burn, "walk prefix dropped before averaging; integer or 'auto'");
        auto* topt = cmd->add_option("--target", *target, "true value, enables success_fraction");
        cmd->parse_complete_callback([state, start, t, m_hat, burn, target, topt] {
            state->params = {{"start", *start}, {"t", *t}, {"m_hat", *m_hat}, {"burn_in", burn_in_value(*burn)}};
            if (topt->count()) state->params["target_value"] = *target;
        });
    }

    {
        auto [cmd, state] = add_experiment_cmd("selfstop-edges", "self-stopping doubling search for the edge count");
        auto start = std::make_shared<std::uint32_t>(0);
        auto tau = std::make_shared<std::uint64_t>(0);
        auto eps = std::make_shared<double>(0.2);
        auto k = std::make_shared<std::uint64_t>(32);
        cmd->add_option("--start", *start, "start vertex")->required();
        cmd->add_option("--tau", *tau, "upper bound on the relaxation time")->required();
        cmd->add_option("--eps", *eps, "error probability budget");
        cmd->add_option("--k", *k, "walk pairs per experiment");
        cmd->parse_complete_callback([state, start, tau, eps, k] {
            state->params = {{"start", *start}, {"tau", *tau}, {"eps", *eps}, {"k", *k},
                             {"max_rounds", state->max_rounds}};
        });
    }

    {
        auto [cmd, state] = add_experiment_cmd("selfstop-mixing", "self-stopping doubling search for the l2 mixing time");
        auto start = std::make_shared<std::uint32_t>(0);
        auto m = std::make_shared<std::uint64_t>(0);
        auto delta = std::make_shared<double>(0.5);
        auto eps = std::make_shared<double>(0.2);
        auto c = std::make_shared<double>(4.0);
        cmd->add_option("--start", *start, "start vertex")->required();
        cmd->add_option("--m", *m, "edge count (exact or estimated)")->required();
        cmd->add_option("--delta", *delta, "l2 distance threshold");
        cmd->add_option("--eps", *eps, "error probability budget");
        cmd->add_option("--c", *c, "walker-count constant");
        cmd->parse_complete_callback([state, start, m, delta, eps, c] {
            state->params = {{"start", *start}, {"m", *m},     {"delta", *delta},
                             {"eps", *eps},     {"c", *c},     {"max_rounds", state->max_rounds}};
        });
    }

    {
        auto [cmd, state] = add_experiment_cmd(
            "pipeline-edges-then-mixing",
            "run the edge search, then feed its estimate to the mixing-time search");
        auto start = std::make_shared<std::uint32_t>(0);
        auto tau = std::make_shared<std::uint64_t>(0);
        auto eps = std::make_shared<double>(0.2);
        auto k = std::make_shared<std::uint64_t>(32);
        auto delta = std::make_shared<double>(0.5);
        auto c = std::make_shared<double>(4.0);
        cmd->add_option("--start", *start, "start vertex")->required();
        cmd->add_option("--tau", *tau, "upper bound on the relaxation time")->required();
        cmd->add_option("--eps", *eps, "error probability budget");
        cmd->add_option("--k", *k, "walk pairs per edge experiment");
        cmd->add_option("--delta", *delta, "l2 distance threshold");
        cmd->add_option("--c", *c, "walker-count constant");
        cmd->parse_complete_callback([state, start, tau, eps, k, delta, c] {
            state->params = {{"start", *start}, {"tau", *tau},     {"eps", *eps},
                             {"k", *k},         {"delta", *delta}, {"c", *c},
                             {"max_rounds", state->max_rounds}};
        });
    }

    {
        auto [cmd, state] = add_experiment_cmd("oracle", "exact spectral summary, expectations and bound checks");
        auto start = std::make_shared<std::uint32_t>(0);
        auto t = std::make_shared<std::uint64_t>(0);
        auto sweep = std::make_shared<bool>(false);
        auto delta = std::make_shared<double>(0);
        auto no_bounds = std::make_shared<bool>(false);
        cmd->add_option("--start", *start, "reference vertex for expectations");
        auto* topt = cmd->add_option("--t", *t, "evaluate expectations at this t");
        cmd->add_flag("--sweep", *sweep, "evaluate expectations over t = 1,2,4,...,128");
        auto* dopt = cmd->add_option("--delta", *delta, "also report t_x(delta)");
        cmd->add_flag("--no-bounds", *no_bounds, "skip the inequality sweep");
        cmd->parse_complete_callback([state, start, t, sweep, delta, no_bounds, topt, dopt] {
            state->params = {{"start", *start}, {"sweep", *sweep}, {"bounds", !*no_bounds}};
            if (topt->count()) state->params["t"] = *t;
            if (dopt->count()) state->params["delta"] = *delta;
        });
    }

    // run: execute a config file directly
    {
        auto* cmd = app.add_subcommand("run", "run an experiment config file (JSON)");
        auto config_path = std::make_shared<std::string>();
        auto format = std::make_shared<std::string>("json");
        cmd->add_option("--config", *config_path, "experiment config JSON")->required();
        cmd->add_option("--format", *format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        cmd->callback([&, config_path, format] {
            std::ifstream in(*config_path);
            if (!in) throw std::runtime_error("cannot open config '" + *config_path + "'");
            json config_json = json::parse(in);
            emit_record(gpe::run_experiment(gpe::config_from_json(config_json)), *format, out_path);
        });
    }

    // reproduce
    {
        auto* cmd = app.add_subcommand("reproduce", "re-run a record and verify bit-identical statistics");
        auto record_path = std::make_shared<std::string>();
        cmd->add_option("--record", *record_path, "experiment output record (JSON)")->required();
        cmd->callback([&, record_path] {
            std::ifstream in(*record_path);
            if (!in) throw std::runtime_error("cannot open record '" + *record_path + "'");
            const json record = json::parse(in);
            const gpe::ReproduceOutcome outcome = gpe::reproduce(record);
            if (outcome.match) {
                write_output(out_path, "reproduce: match\n");
            } else {
                write_output(out_path, "reproduce: MISMATCH at " + outcome.divergence + "\n");
                std::exit(1);
            }
        });
    }

    // Let --out (declared on the root) appear after a subcommand name.
    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "gpe: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
