#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gpe {

// Validation failure when constructing or loading a graph. `kind()` makes the
// distinct failure modes testable without string matching.
class GraphError : public std::runtime_error {
public:
    enum class Kind {
        Parse,
        VertexOutOfRange,
        SelfLoop,
        DuplicateEdge,
        EdgeCountMismatch,
        Disconnected,
        DegreeZero,
    };

    GraphError(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Immutable connected simple undirected graph in CSR form, vertex ids dense
// 0-based. Safe to share across concurrent walkers.
class Graph {
public:
    using Edge = std::pair<std::uint32_t, std::uint32_t>;

    // Validates symmetry, simplicity, connectivity and positive degrees.
    Graph(std::uint32_t vertex_count, const std::vector<Edge>& edges);

    std::uint32_t vertex_count() const { return n_; }
    std::uint64_t edge_count() const { return m_; }

    std::uint32_t degree(std::uint32_t u) const { return offsets_[u + 1] - offsets_[u]; }

    // Neighbors sorted ascending.
    std::span<const std::uint32_t> neighbors(std::uint32_t u) const {
        return {neighbors_.data() + offsets_[u], neighbors_.data() + offsets_[u + 1]};
    }

    std::uint32_t min_degree() const { return min_degree_; }
    bool is_regular() const { return regular_; }

    // Hash of the canonical serialization; used to match traces to graphs.
    std::uint64_t fingerprint() const { return fingerprint_; }

    // Canonical edge-list text: "n m" then one "u v" line per edge with
    // u < v, edges sorted. Round-trips bit-exactly through load().
    std::string serialize() const;

    std::vector<Edge> edges() const;

private:
    std::uint32_t n_ = 0;
    std::uint64_t m_ = 0;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> neighbors_;
    std::uint32_t min_degree_ = 0;
    bool regular_ = false;
    std::uint64_t fingerprint_ = 0;
};

// Parses the edge-list format: first line "n m", then m lines "u v".
// Throws GraphError with a distinct kind per failure mode.
Graph load_graph(std::istream& in);
Graph load_graph_file(const std::string& path);

// pi(u) = deg(u) / 2m.
struct StationaryMeasure {
    std::vector<double> weights;
};

StationaryMeasure stationary_measure(const Graph& g);

std::uint32_t min_degree(const Graph& g);

std::uint64_t fnv1a64(std::span<const char> bytes);

}  // namespace gpe
