#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "gpe/graph.hpp"

namespace gpe {

// Generator could not produce an acceptable sample within its retry budget.
class RetryBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Acceptance policy for the 3-regular configuration model. A sample must be
// simple and connected; for k >= lambda2_min_k its simple-walk second
// eigenvalue must not exceed lambda2_threshold (finite-size stand-in for the
// expander property). Rejected samples are resampled, never repaired.
struct RegularGraphPolicy {
    int max_attempts = 1000;
    double lambda2_threshold = 0.95;
    std::uint32_t lambda2_min_k = 16;
};

Graph gen_cycle(std::uint32_t n);
Graph gen_complete(std::uint32_t n);

// Two cliques of size clique_size joined by a path with path_length edges.
Graph gen_barbell(std::uint32_t clique_size, std::uint32_t path_length);

// Uniform simple connected 3-regular graph on k vertices via half-edge
// pairing with rejection.
Graph gen_random_regular_3(std::uint32_t k, std::uint64_t seed,
                           const RegularGraphPolicy& policy = {});

// 3-regular base with every edge replaced by a path of ell edges, plus chords
// between interior path vertices at distance 2 restoring 3-regularity.
// Requires ell >= 5 and ell == 1 (mod 4).
Graph gen_subdivided_expander(std::uint32_t k, std::uint32_t ell, std::uint64_t seed,
                              const RegularGraphPolicy& policy = {});

// 3-regular base with every vertex replaced by a q-clique and every edge by a
// path of length q; path endpoints attach round-robin to clique vertices.
Graph gen_clique_expander(std::uint32_t k, std::uint32_t q, std::uint64_t seed,
                          const RegularGraphPolicy& policy = {});

// Clique of size ell with a path of length q hanging off each clique vertex.
Graph gen_clique_with_paths(std::uint32_t ell, std::uint32_t q);

// Second-largest eigenvalue of the simple (non-lazy) walk on a regular graph,
// by power iteration on the deflated lazy operator. Exposed for tests.
double regular_walk_lambda2(const Graph& g);

// Family name + parameter map, the CLI-facing description of a generator call.
struct GenSpec {
    std::string family;
    std::map<std::string, std::uint64_t> params;
    std::uint64_t seed = 0;
};

Graph generate(const GenSpec& spec);

}  // namespace gpe
