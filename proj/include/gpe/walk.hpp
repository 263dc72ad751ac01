#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gpe/graph.hpp"
#include "gpe/rng.hpp"

namespace gpe {

// One lazy random walk: steps[0] = start, length = requested t. Entries are
// the walk positions at times 0..t-1; lazy holds are kept.
struct WalkTrace {
    std::uint32_t start = 0;
    std::vector<std::uint32_t> steps;
    std::uint64_t seed = 0;
    std::uint64_t graph_fingerprint = 0;
};

// One transition of the lazy walk: hold with probability 1/2 (one RNG draw),
// otherwise a second draw picks a uniform neighbor from the sorted list.
inline std::uint32_t lazy_step(const Graph& g, std::uint32_t u, Xoshiro256& rng) {
    if (rng.next_bit()) return u;
    const auto nbs = g.neighbors(u);
    return nbs[rng.uniform_below(nbs.size())];
}

WalkTrace simulate_lazy_walk(const Graph& g, std::uint32_t start, std::uint64_t t, std::uint64_t seed);

// Same walk written into a reusable buffer (hot loops).
void simulate_lazy_walk_into(const Graph& g, std::uint32_t start, std::uint64_t t, std::uint64_t seed,
                             std::vector<std::uint32_t>& out);

// Relabeling-invariant summary of one or more traces: each vertex replaced by
// the 1-based order of its first occurrence, plus the visited degrees.
struct Profile {
    std::vector<std::uint32_t> ranks;
    std::vector<std::uint32_t> degree_seq;
};

// Profile of the concatenation of the traces, in order. Traces must carry the
// graph's fingerprint.
Profile compute_profile(std::span<const WalkTrace> traces, const Graph& g);

// True iff the distinct edges traversed within the first `total_steps` trace
// entries (holds and trace boundaries traverse nothing) contain no cycle.
bool visited_edge_subgraph_is_tree(std::span<const WalkTrace> traces, std::uint64_t total_steps);

// Smallest t with {X_0..X_t} and {Y_0..Y_t} intersecting, for independent
// lazy walks from x and y; nullopt if the cap is exceeded.
std::optional<std::uint64_t> first_intersection_time(const Graph& g, std::uint32_t x, std::uint32_t y,
                                                     std::uint64_t cap, std::uint64_t seed);

// Runs concatenated lazy walks of length walk_len from x until `traversals`
// edges have been crossed and reports whether the revealed edge set is a tree.
bool tree_revelation_experiment(const Graph& g, std::uint32_t x, std::uint64_t traversals,
                                std::uint64_t walk_len, std::uint64_t seed);

}  // namespace gpe
