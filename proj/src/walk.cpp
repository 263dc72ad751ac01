#include "gpe/walk.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace gpe {

void simulate_lazy_walk_into(const Graph& g, std::uint32_t start, std::uint64_t t, std::uint64_t seed,
                             std::vector<std::uint32_t>& out) {
    if (start >= g.vertex_count())
        throw std::invalid_argument("walk start " + std::to_string(start) + " out of range");
    if (t < 1) throw std::invalid_argument("walk length must be >= 1");

    Xoshiro256 rng(seed);
    out.clear();
    out.reserve(t);
    std::uint32_t at = start;
    out.push_back(at);
    for (std::uint64_t i = 1; i < t; ++i) {
        at = lazy_step(g, at, rng);
        out.push_back(at);
    }
}

WalkTrace simulate_lazy_walk(const Graph& g, std::uint32_t start, std::uint64_t t, std::uint64_t seed) {
    WalkTrace trace;
    trace.start = start;
    trace.seed = seed;
    trace.graph_fingerprint = g.fingerprint();
    simulate_lazy_walk_into(g, start, t, seed, trace.steps);
    return trace;
}

Profile compute_profile(std::span<const WalkTrace> traces, const Graph& g) {
    if (traces.empty()) throw std::invalid_argument("compute_profile: no traces");
    for (const auto& trace : traces)
        if (trace.graph_fingerprint != g.fingerprint())
            throw std::invalid_argument("compute_profile: trace was generated on a different graph");

    std::size_t total = 0;
    for (const auto& trace : traces) total += trace.steps.size();

    Profile profile;
    profile.ranks.reserve(total);
    profile.degree_seq.reserve(total);

    std::vector<std::uint32_t> rank_of(g.vertex_count(), 0);  // 0 = unseen
    std::uint32_t next_rank = 1;
    for (const auto& trace : traces) {
        for (std::uint32_t v : trace.steps) {
            if (rank_of[v] == 0) rank_of[v] = next_rank++;
            profile.ranks.push_back(rank_of[v]);
            profile.degree_seq.push_back(g.degree(v));
        }
    }
    return profile;
}

namespace {

// Union-find over sparse vertex ids.
class SparseDSU {
public:
    std::uint32_t find(std::uint32_t v) {
        auto it = parent_.find(v);
        if (it == parent_.end()) {
            parent_[v] = v;
            return v;
        }
        std::uint32_t root = v;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[v] != root) {
            const std::uint32_t up = parent_[v];
            parent_[v] = root;
            v = up;
        }
        return root;
    }

    void unite(std::uint32_t a, std::uint32_t b) { parent_[find(a)] = find(b); }

private:
    std::unordered_map<std::uint32_t, std::uint32_t> parent_;
};

// Incrementally maintains acyclicity of a set of undirected edges.
class TreeTracker {
public:
    // Returns false when adding the edge closes a cycle. Repeats of a known
    // edge are ignored.
    bool add_edge(std::uint32_t u, std::uint32_t v) {
        const auto key = std::minmax(u, v);
        if (!seen_.insert(key).second) return true;
        if (dsu_.find(u) == dsu_.find(v)) return false;
        dsu_.unite(u, v);
        return true;
    }

private:
    SparseDSU dsu_;
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen_;
};

}  // namespace

bool visited_edge_subgraph_is_tree(std::span<const WalkTrace> traces, std::uint64_t total_steps) {
    TreeTracker tracker;
    std::uint64_t budget = total_steps;
    for (const auto& trace : traces) {
        const std::uint64_t take = std::min<std::uint64_t>(budget, trace.steps.size());
        for (std::uint64_t i = 1; i < take; ++i) {
            const std::uint32_t a = trace.steps[i - 1], b = trace.steps[i];
            if (a == b) continue;  // lazy hold
            if (!tracker.add_edge(a, b)) return false;
        }
        budget -= take;
        if (budget == 0) break;
    }
    return true;
}

std::optional<std::uint64_t> first_intersection_time(const Graph& g, std::uint32_t x, std::uint32_t y,
                                                     std::uint64_t cap, std::uint64_t seed) {
    if (x >= g.vertex_count() || y >= g.vertex_count())
        throw std::invalid_argument("first_intersection_time: vertex out of range");
    if (cap < 1) throw std::invalid_argument("first_intersection_time: cap must be >= 1");

    if (x == y) return 0;

    Xoshiro256 rng_x(derive_stream(seed, 0));
    Xoshiro256 rng_y(derive_stream(seed, 1));

    std::vector<char> seen_x(g.vertex_count(), 0), seen_y(g.vertex_count(), 0);
    seen_x[x] = 1;
    seen_y[y] = 1;

    std::uint32_t at_x = x, at_y = y;
    for (std::uint64_t t = 1; t <= cap; ++t) {
        at_x = lazy_step(g, at_x, rng_x);
        at_y = lazy_step(g, at_y, rng_y);
        seen_x[at_x] = 1;
        seen_y[at_y] = 1;
        if (seen_y[at_x] || seen_x[at_y]) return t;
    }
    return std::nullopt;
}

bool tree_revelation_experiment(const Graph& g, std::uint32_t x, std::uint64_t traversals,
                                std::uint64_t walk_len, std::uint64_t seed) {
    if (walk_len < 2) throw std::invalid_argument("tree_revelation_experiment: walk_len must be >= 2");

    TreeTracker tracker;
    std::uint64_t crossed = 0;
    // Expected traversals per walk is (walk_len-1)/2; the budget below makes
    // running out essentially impossible.
    const std::uint64_t max_walks = 64 + (8 * traversals) / (walk_len - 1);
    for (std::uint64_t w = 0; w < max_walks && crossed < traversals; ++w) {
        Xoshiro256 rng(derive_stream(seed, w));
        std::uint32_t at = x;
        for (std::uint64_t i = 1; i < walk_len && crossed < traversals; ++i) {
            const std::uint32_t next = lazy_step(g, at, rng);
            if (next != at) {
                ++crossed;
                if (!tracker.add_edge(at, next)) return false;
            }
            at = next;
        }
    }
    if (crossed < traversals)
        throw std::runtime_error("tree_revelation_experiment: walk budget exhausted before " +
                                 std::to_string(traversals) + " traversals");
    return true;
}

}  // namespace gpe
