#pragma once

#include <cstdint>
#include <stdexcept>

#include "gpe/graph.hpp"
#include "gpe/intersections.hpp"
#include "gpe/walk.hpp"

namespace gpe {

// The intersection batch was all zeros; the estimate would be infinite.
class InsufficientIntersections : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EstimateDiagnostics {
    double mean_statistic = 0.0;    // mean intersections, or mean 1/deg
    double sample_variance = 0.0;   // across the K replicates
    std::uint64_t burn_in = 0;
    std::uint64_t steps_per_walk = 0;
    std::uint64_t total_steps = 0;
};

struct EstimateResult {
    double value = 0.0;
    std::uint64_t t = 0;
    std::uint64_t K = 0;
    std::uint64_t seed = 0;
    EstimateDiagnostics diagnostics;
};

// Formula layer, shared by the estimators and tested as algebraic identities.
double vertex_estimate_from_mean(std::uint64_t t, double mean_intersections);
double edge_estimate_from_mean(std::uint64_t t, double mean_weighted_intersections);

// Estimators consume the relabeling-invariant profile of each walk pair, not
// vertex ids: walk simulation produces traces, an adapter converts them to a
// two-walk profile, and all counting below happens on ranks and degrees.

// Intersections between the first `first_len` entries of a concatenated
// two-walk profile and the rest, restricted to the window on both sides.
std::uint64_t profile_pair_intersections(const Profile& p, std::uint64_t first_len, WindowSpec w);
double profile_pair_weighted_intersections(const Profile& p, std::uint64_t first_len, WindowSpec w);

// Mean of 1/deg over profile positions [lo, hi).
double profile_inverse_degree_mean(const Profile& p, std::uint64_t lo, std::uint64_t hi);

// n_hat = t^2 / mean unweighted intersections over K walk pairs from x.
// Requires a regular graph.
EstimateResult estimate_vertices_regular(const Graph& g, std::uint32_t x, std::uint64_t t,
                                         std::uint64_t K, std::uint64_t seed);

// m_hat = t^2 / (2 * mean weighted intersections) over K walk pairs from x.
EstimateResult estimate_edges(const Graph& g, std::uint32_t x, std::uint64_t t, std::uint64_t K,
                              std::uint64_t seed);

// Same, counting from the window [burn_in, burn_in + t).
EstimateResult estimate_edges_burnin(const Graph& g, std::uint32_t x, std::uint64_t t, std::uint64_t K,
                                     std::uint64_t burn_in, std::uint64_t seed);

// n_hat = 2 m_hat * time average of 1/deg over [r, r+t) of a single walk.
EstimateResult estimate_vertices_general(const Graph& g, std::uint32_t x, double m_hat, std::uint64_t r,
                                         std::uint64_t t, std::uint64_t seed);

}  // namespace gpe
