#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "gpe/graph.hpp"

namespace gpe {

inline constexpr const char* kArtifactVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

// A fully serializable experiment description: graph source, operation,
// parameters, master seed and replication count. The config plus the artifact
// version pins the output bytes (timestamps live in a separate metadata
// block).
struct ExperimentConfig {
    nlohmann::json graph = nlohmann::json::object();   // {"file": path} or {"family":..., "params":{...}, "seed":...}
    std::string operation;                             // subcommand name
    nlohmann::json params = nlohmann::json::object();  // operation parameters
    std::uint64_t seed = 0;
    std::uint64_t reps = 1;
};

nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);
std::string config_hash(const ExperimentConfig& config);

// Loads the graph a config refers to (edge-list file or generator family).
Graph resolve_graph(const nlohmann::json& graph_source);

// Runs the named operation with `reps` replications on derived seeds and
// returns the full output record: config, per-replication records, summary
// statistics (mean, sample std, success fraction against a configured target
// interval, step totals) and a metadata block.
nlohmann::json run_experiment(const ExperimentConfig& config);

struct ReproduceOutcome {
    bool match = false;
    std::string divergence;  // first divergent field, empty on match
};

// Re-runs a record's config and compares replications and summary bit-exactly.
// Throws on artifact/schema version mismatch.
ReproduceOutcome reproduce(const nlohmann::json& record);

// CSV view of a record: one row per replication plus a summary row.
std::string render_csv(const nlohmann::json& record);

}  // namespace gpe
