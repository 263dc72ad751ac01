#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gpe/graph.hpp"

namespace gpe {

struct StoppingRound {
    std::uint32_t q = 0;
    std::uint64_t t = 0;           // walk-pair window (edges) or window start (mixing)
    std::uint64_t k = 0;           // pairs per experiment (edges) or walks per experiment (mixing)
    std::uint32_t repetitions = 0; // R_q
    std::uint32_t successes = 0;
    bool stopped = false;
};

struct StoppingLog {
    std::vector<StoppingRound> rounds;
    double final_value = 0.0;
    std::uint64_t total_steps = 0;  // audited sum of simulated walk entries
    std::uint64_t seed = 0;
};

struct SelfStopOptions {
    std::uint32_t max_rounds = 60;
};

struct SelfStopResult {
    std::uint64_t value = 0;  // power of two
    StoppingLog log;
};

class RoundBudgetExceeded : public std::runtime_error {
public:
    RoundBudgetExceeded(const std::string& msg, StoppingLog partial)
        : std::runtime_error(msg), log(std::move(partial)) {}

    StoppingLog log;
};

// Seed derivation, shared with the replay tests: round q uses
// derive_stream(seed, q), experiment r within it derive_stream(round, r),
// pair/walk l derive_stream(experiment, l), and each walk of a pair
// derive_stream(pair, 0|1).

// Mean weighted intersections over K fresh walk pairs of length t from x.
double edge_experiment_statistic(const Graph& g, std::uint32_t x, std::uint64_t t, std::uint64_t K,
                                 std::uint64_t experiment_seed, std::uint64_t* steps = nullptr);

// Pairwise-averaged weighted intersections on [t,2t) over K fresh walks of
// length 2t from x.
double mixing_experiment_statistic(const Graph& g, std::uint32_t x, std::uint64_t t, std::uint64_t K,
                                   std::uint64_t experiment_seed, std::uint64_t* steps = nullptr);

// Number of experiment repetitions in round q for error budget eps.
std::uint32_t stopping_repetitions(std::uint32_t q, double eps);

// Walk length for round q of the edge search: ceil(tau^{3/4} * sqrt(2 * 2^q)).
std::uint64_t edges_round_window(std::uint64_t tau, std::uint32_t q);

// Walks per experiment of the mixing search at window t:
// ceil(c * delta^-2 * ceil(sqrt(m) / t^{1/4})).
std::uint64_t mixing_round_walkers(std::uint64_t m, double delta, double c, std::uint64_t t);

// Doubling search for the edge count driven by the intersection statistic;
// tau is an upper bound on the relaxation time. Returns a power of two that
// lands in [m, 38m] with probability at least 1 - eps.
SelfStopResult selfstop_edges(const Graph& g, std::uint32_t x, std::uint64_t tau, double eps,
                              std::uint64_t K, std::uint64_t seed, SelfStopOptions options = {});

// Doubling search for the l2 mixing time from x, given the edge count m.
// Returns a power of two in [t_x(delta)/2, 2 t_x(delta/4)] with probability
// at least 1 - eps.
SelfStopResult selfstop_mixing(const Graph& g, std::uint32_t x, std::uint64_t m, double delta,
                               double eps, double c, std::uint64_t seed, SelfStopOptions options = {});

}  // namespace gpe
