#include "gpe/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

namespace gpe {

namespace {

[[noreturn]] void fail(GraphError::Kind kind, const std::string& msg) {
    throw GraphError(kind, msg);
}

}  // namespace

std::uint64_t fnv1a64(std::span<const char> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

Graph::Graph(std::uint32_t vertex_count, const std::vector<Edge>& edges) : n_(vertex_count) {
    if (n_ < 2) fail(GraphError::Kind::Parse, "graph needs at least 2 vertices, got " + std::to_string(n_));

    std::vector<std::uint32_t> deg(n_, 0);
    for (const auto& [u, v] : edges) {
        if (u >= n_ || v >= n_)
            fail(GraphError::Kind::VertexOutOfRange,
                 "edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range for n=" + std::to_string(n_));
        if (u == v) fail(GraphError::Kind::SelfLoop, "self-loop at vertex " + std::to_string(u));
        ++deg[u];
        ++deg[v];
    }

    offsets_.assign(n_ + 1, 0);
    for (std::uint32_t u = 0; u < n_; ++u) offsets_[u + 1] = offsets_[u] + deg[u];
    neighbors_.resize(offsets_[n_]);

    std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
        neighbors_[cursor[u]++] = v;
        neighbors_[cursor[v]++] = u;
    }
    for (std::uint32_t u = 0; u < n_; ++u) {
        auto row = neighbors_.begin() + offsets_[u];
        auto end = neighbors_.begin() + offsets_[u + 1];
        std::sort(row, end);
        if (std::adjacent_find(row, end) != end) {
            auto dup = *std::adjacent_find(row, end);
            fail(GraphError::Kind::DuplicateEdge,
                 "duplicate edge (" + std::to_string(u) + "," + std::to_string(dup) + ")");
        }
    }

    m_ = edges.size();

    min_degree_ = n_ ? *std::min_element(deg.begin(), deg.end()) : 0;
    if (min_degree_ == 0) {
        std::uint32_t isolated =
            static_cast<std::uint32_t>(std::find(deg.begin(), deg.end(), 0u) - deg.begin());
        fail(GraphError::Kind::DegreeZero, "vertex " + std::to_string(isolated) + " has degree 0");
    }
    regular_ = *std::max_element(deg.begin(), deg.end()) == min_degree_;

    // BFS from vertex 0.
    std::vector<char> seen(n_, 0);
    std::vector<std::uint32_t> queue{0};
    seen[0] = 1;
    std::uint32_t reached = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        for (std::uint32_t v : neighbors(queue[head])) {
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                queue.push_back(v);
            }
        }
    }
    if (reached != n_)
        fail(GraphError::Kind::Disconnected,
             "graph is disconnected: reached " + std::to_string(reached) + " of " + std::to_string(n_) + " vertices");

    const std::string canon = serialize();
    fingerprint_ = fnv1a64({canon.data(), canon.size()});
}

std::string Graph::serialize() const {
    std::string out = std::to_string(n_) + " " + std::to_string(m_) + "\n";
    for (std::uint32_t u = 0; u < n_; ++u)
        for (std::uint32_t v : neighbors(u))
            if (u < v) out += std::to_string(u) + " " + std::to_string(v) + "\n";
    return out;
}

std::vector<Graph::Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(m_);
    for (std::uint32_t u = 0; u < n_; ++u)
        for (std::uint32_t v : neighbors(u))
            if (u < v) out.emplace_back(u, v);
    return out;
}

Graph load_graph(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;

    auto next_line = [&](std::string& out) {
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            out = line;
            return true;
        }
        return false;
    };

    std::string header;
    if (!next_line(header)) fail(GraphError::Kind::Parse, "empty input, expected header 'n m'");
    std::istringstream hs(header);
    long long n = 0, m = 0;
    std::string extra;
    if (!(hs >> n >> m) || (hs >> extra) || n <= 0 || m < 0)
        fail(GraphError::Kind::Parse, "line " + std::to_string(lineno) + ": bad header '" + header + "'");

    std::vector<Graph::Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    std::string body;
    while (next_line(body)) {
        std::istringstream es(body);
        long long u = 0, v = 0;
        if (!(es >> u >> v) || (es >> extra) || u < 0 || v < 0)
            fail(GraphError::Kind::Parse, "line " + std::to_string(lineno) + ": bad edge '" + body + "'");
        edges.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
    }

    if (static_cast<long long>(edges.size()) != m)
        fail(GraphError::Kind::EdgeCountMismatch,
             "declared m=" + std::to_string(m) + " but found " + std::to_string(edges.size()) + " edges");

    return Graph(static_cast<std::uint32_t>(n), edges);
}

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(GraphError::Kind::Parse, "cannot open graph file '" + path + "'");
    return load_graph(in);
}

StationaryMeasure stationary_measure(const Graph& g) {
    StationaryMeasure pi;
    pi.weights.resize(g.vertex_count());
    const double two_m = 2.0 * static_cast<double>(g.edge_count());
    for (std::uint32_t u = 0; u < g.vertex_count(); ++u) pi.weights[u] = g.degree(u) / two_m;
    return pi;
}

std::uint32_t min_degree(const Graph& g) { return g.min_degree(); }

}  // namespace gpe
