#include "gpe/stopping.hpp"

#include <cmath>

#include "gpe/intersections.hpp"
#include "gpe/rng.hpp"
#include "gpe/walk.hpp"

namespace gpe {

std::uint32_t stopping_repetitions(std::uint32_t q, double eps) {
    return static_cast<std::uint32_t>(std::ceil(8.0 * std::log(4.0 / eps) + 16.0 * std::log(q + 1.0)));
}

std::uint64_t edges_round_window(std::uint64_t tau, std::uint32_t q) {
    const double tau34 = std::pow(static_cast<double>(tau), 0.75);
    const double guess = std::ldexp(1.0, static_cast<int>(q));
    return static_cast<std::uint64_t>(std::ceil(tau34 * std::sqrt(2.0 * guess)));
}

std::uint64_t mixing_round_walkers(std::uint64_t m, double delta, double c, std::uint64_t t) {
    const double walkers = std::ceil(std::sqrt(static_cast<double>(m)) / std::pow(static_cast<double>(t), 0.25));
    return static_cast<std::uint64_t>(std::ceil(c * walkers / (delta * delta)));
}

double edge_experiment_statistic(const Graph& g, std::uint32_t x, std::uint64_t t, std::uint64_t K,
                                 std::uint64_t experiment_seed, std::uint64_t* steps) {
    PairAccumulator acc(g);
    std::vector<std::uint32_t> walk_x, walk_y;
    double sum = 0.0;
    for (std::uint64_t l = 0; l < K; ++l) {
        const std::uint64_t pair_seed = derive_stream(experiment_seed, l);
        simulate_lazy_walk_into(g, x, t, derive_stream(pair_seed, 0), walk_x);
        simulate_lazy_walk_into(g, x, t, derive_stream(pair_seed, 1), walk_y);
        sum += acc.weighted(walk_x, walk_y, 0, t);
    }
    if (steps) *steps += 2 * K * t;
    return sum / static_cast<double>(K);
}

double mixing_experiment_statistic(const Graph& g, std::uint32_t x, std::uint64_t t, std::uint64_t K,
                                   std::uint64_t experiment_seed, std::uint64_t* steps) {
    PairAccumulator acc(g);
    std::vector<std::vector<std::uint32_t>> walks(K);
    for (std::uint64_t l = 0; l < K; ++l)
        simulate_lazy_walk_into(g, x, 2 * t, derive_stream(experiment_seed, l), walks[l]);
    if (steps) *steps += K * 2 * t;

    double sum = 0.0;
    for (std::uint64_t a = 0; a < K; ++a)
        for (std::uint64_t b = a + 1; b < K; ++b) sum += acc.weighted(walks[a], walks[b], t, 2 * t);
    const double pairs = 0.5 * static_cast<double>(K) * static_cast<double>(K - 1);
    return sum / pairs;
}

namespace {

// Shared doubling loop. round_params fills (t, k) for round q; experiment
// returns the statistic; success decides against the round's threshold.
template <typename RoundParams, typename Experiment, typename Success>
SelfStopResult doubling_search(double eps, std::uint64_t seed, SelfStopOptions options,
                               const char* what, RoundParams&& round_params, Experiment&& experiment,
                               Success&& success) {
    StoppingLog log;
    log.seed = seed;

    for (std::uint32_t q = 0; q <= options.max_rounds; ++q) {
        StoppingRound round;
        round.q = q;
        round_params(q, round.t, round.k);
        round.repetitions = stopping_repetitions(q, eps);

        const std::uint64_t round_seed = derive_stream(seed, q);
        for (std::uint32_t r = 0; r < round.repetitions; ++r) {
            const double statistic = experiment(round, derive_stream(round_seed, r), log.total_steps);
            if (success(q, statistic)) ++round.successes;
        }

        // Strict majority; ties continue to the next round.
        round.stopped = 2 * static_cast<std::uint64_t>(round.successes) > round.repetitions;
        log.rounds.push_back(round);
        if (round.stopped) {
            const std::uint64_t value = 1ULL << q;
            log.final_value = static_cast<double>(value);
            return {value, std::move(log)};
        }
    }
    throw RoundBudgetExceeded(std::string(what) + ": no stop within " +
                                  std::to_string(options.max_rounds) + " rounds",
                              std::move(log));
}

}  // namespace

SelfStopResult selfstop_edges(const Graph& g, std::uint32_t x, std::uint64_t tau, double eps,
                              std::uint64_t K, std::uint64_t seed, SelfStopOptions options) {
    if (tau < 1) throw std::invalid_argument("selfstop_edges: tau must be >= 1");
    if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("selfstop_edges: eps must be in (0,1)");
    if (K < 1) throw std::invalid_argument("selfstop_edges: K must be >= 1");

    const double threshold = 18.0 * std::pow(static_cast<double>(tau), 1.5);

    return doubling_search(
        eps, seed, options, "selfstop_edges",
        [&](std::uint32_t q, std::uint64_t& t, std::uint64_t& k) {
            t = edges_round_window(tau, q);
            k = K;
        },
        [&](const StoppingRound& round, std::uint64_t experiment_seed, std::uint64_t& steps) {
            return edge_experiment_statistic(g, x, round.t, round.k, experiment_seed, &steps);
        },
        [&](std::uint32_t, double statistic) { return statistic >= threshold; });
}

SelfStopResult selfstop_mixing(const Graph& g, std::uint32_t x, std::uint64_t m, double delta,
                               double eps, double c, std::uint64_t seed, SelfStopOptions options) {
    if (m < 1) throw std::invalid_argument("selfstop_mixing: m must be >= 1");
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("selfstop_mixing: delta must be in (0,1)");
    if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("selfstop_mixing: eps must be in (0,1)");
    if (c <= 0.0) throw std::invalid_argument("selfstop_mixing: c must be positive");

    return doubling_search(
        eps, seed, options, "selfstop_mixing",
        [&](std::uint32_t q, std::uint64_t& t, std::uint64_t& k) {
            t = 1ULL << q;
            k = std::max<std::uint64_t>(2, mixing_round_walkers(m, delta, c, t));
        },
        [&](const StoppingRound& round, std::uint64_t experiment_seed, std::uint64_t& steps) {
            return mixing_experiment_statistic(g, x, round.t, round.k, experiment_seed, &steps);
        },
        [&](std::uint32_t q, double statistic) {
            const double t = std::ldexp(1.0, static_cast<int>(q));
            return statistic <= (1.0 + delta / 2.0) * t * t / (2.0 * static_cast<double>(m));
        });
}

}  // namespace gpe
