#pragma once

#include <cstdint>
#include <map>
#include <span>

#include "gpe/graph.hpp"
#include "gpe/walk.hpp"

namespace gpe {

// Half-open index window [lo, hi) applied to both traces of a pair.
struct WindowSpec {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
};

// Visits per vertex within a window; sum of counts equals the window length.
using VisitCounts = std::map<std::uint32_t, std::uint32_t>;

VisitCounts visit_counts(const WalkTrace& trace, WindowSpec w);

// Number of index pairs (i,j) in the window with X_i = Y_j.
std::uint64_t count_intersections(const WalkTrace& X, const WalkTrace& Y, WindowSpec w);

// Same pairs, each weighted by 1/deg of the shared vertex. On regular graphs
// the sum is taken over integers and divided once.
double count_weighted_intersections(const WalkTrace& X, const WalkTrace& Y, WindowSpec w, const Graph& g);

// Weighted intersections over [burn_in, burn_in + t) on both traces.
double count_J(const WalkTrace& X, const WalkTrace& Y, std::uint64_t t, std::uint64_t burn_in,
               const Graph& g);

// Average over all unordered trace pairs of the weighted intersections on
// [t, 2t).
double count_L_pairwise(std::span<const WalkTrace> traces, std::uint64_t t, const Graph& g);

bool has_duplicate_seeds(std::span<const WalkTrace> traces);

// Dense scratch reused across many pairs on one graph; what the estimator
// batches and stopping rounds run on.
class PairAccumulator {
public:
    explicit PairAccumulator(const Graph& g);

    std::uint64_t unweighted(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y,
                             std::uint64_t lo, std::uint64_t hi);
    double weighted(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y,
                    std::uint64_t lo, std::uint64_t hi);

private:
    const Graph* g_;
    std::vector<std::uint32_t> counts_;
    std::vector<std::uint32_t> touched_;
};

}  // namespace gpe
