#include "gpe/estimators.hpp"

#include <array>
#include <cmath>

namespace gpe {

namespace {

void check_window_against(std::uint64_t len, WindowSpec w) {
    if (w.hi <= w.lo) throw std::out_of_range("window [lo,hi) is empty or inverted");
    if (w.hi > len) throw std::out_of_range("window exceeds walk length");
}

struct BatchStats {
    double mean = 0.0;
    double sample_variance = 0.0;
    bool all_zero = true;
};

template <typename F>
BatchStats batch_over_pairs(std::uint64_t K, F&& statistic) {
    BatchStats out;
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t k = 0; k < K; ++k) {
        const double value = statistic(k);
        sum += value;
        sumsq += value * value;
        if (value != 0.0) out.all_zero = false;
    }
    out.mean = sum / static_cast<double>(K);
    if (K > 1)
        out.sample_variance =
            std::max(0.0, (sumsq - sum * sum / static_cast<double>(K)) / static_cast<double>(K - 1));
    return out;
}

}  // namespace

double vertex_estimate_from_mean(std::uint64_t t, double mean_intersections) {
    return static_cast<double>(t) * static_cast<double>(t) / mean_intersections;
}

double edge_estimate_from_mean(std::uint64_t t, double mean_weighted_intersections) {
    return static_cast<double>(t) * static_cast<double>(t) / (2.0 * mean_weighted_intersections);
}

std::uint64_t profile_pair_intersections(const Profile& p, std::uint64_t first_len, WindowSpec w) {
    check_window_against(first_len, w);
    check_window_against(p.ranks.size() - first_len, w);

    std::vector<std::uint32_t> left(p.ranks.size() + 1, 0);
    for (std::uint64_t i = w.lo; i < w.hi; ++i) ++left[p.ranks[i]];
    std::uint64_t acc = 0;
    for (std::uint64_t j = w.lo; j < w.hi; ++j) acc += left[p.ranks[first_len + j]];
    return acc;
}

double profile_pair_weighted_intersections(const Profile& p, std::uint64_t first_len, WindowSpec w) {
    check_window_against(first_len, w);
    check_window_against(p.ranks.size() - first_len, w);

    std::vector<std::uint32_t> left(p.ranks.size() + 1, 0);
    for (std::uint64_t i = w.lo; i < w.hi; ++i) ++left[p.ranks[i]];
    double acc = 0.0;
    for (std::uint64_t j = w.lo; j < w.hi; ++j) {
        const std::uint32_t rank = p.ranks[first_len + j];
        if (left[rank]) acc += static_cast<double>(left[rank]) / p.degree_seq[first_len + j];
    }
    return acc;
}

double profile_inverse_degree_mean(const Profile& p, std::uint64_t lo, std::uint64_t hi) {
    check_window_against(p.degree_seq.size(), {lo, hi});
    double acc = 0.0;
    for (std::uint64_t i = lo; i < hi; ++i) acc += 1.0 / p.degree_seq[i];
    return acc / static_cast<double>(hi - lo);
}

namespace {

// Simulates the k-th walk pair and returns its two-walk profile.
Profile pair_profile(const Graph& g, std::uint32_t x, std::uint64_t len, std::uint64_t seed,
                     std::uint64_t k) {
    const std::uint64_t pair_seed = derive_stream(seed, k);
    const std::array<WalkTrace, 2> pair{simulate_lazy_walk(g, x, len, derive_stream(pair_seed, 0)),
                                        simulate_lazy_walk(g, x, len, derive_stream(pair_seed, 1))};
    return compute_profile(pair, g);
}

EstimateResult run_pair_estimator(const Graph& g, std::uint32_t x, std::uint64_t t, std::uint64_t K,
                                  std::uint64_t burn_in, std::uint64_t seed, bool weighted) {
    if (t < 1 || K < 1) throw std::invalid_argument("estimator needs t >= 1 and K >= 1");
    const std::uint64_t len = burn_in + t;
    const WindowSpec window{burn_in, burn_in + t};

    const BatchStats stats = batch_over_pairs(K, [&](std::uint64_t k) {
        const Profile profile = pair_profile(g, x, len, seed, k);
        return weighted
                   ? profile_pair_weighted_intersections(profile, len, window)
                   : static_cast<double>(profile_pair_intersections(profile, len, window));
    });

    if (stats.all_zero)
        throw InsufficientIntersections("no intersections in " + std::to_string(K) +
                                        " walk pairs; increase t or K");

    EstimateResult result;
    result.t = t;
    result.K = K;
    result.seed = seed;
    result.value = weighted ? edge_estimate_from_mean(t, stats.mean)
                            : vertex_estimate_from_mean(t, stats.mean);
    result.diagnostics = {stats.mean, stats.sample_variance, burn_in, len, 2 * K * len};
    return result;
}

}  // namespace

EstimateResult estimate_vertices_regular(const Graph& g, std::uint32_t x, std::uint64_t t,
                                         std::uint64_t K, std::uint64_t seed) {
    if (!g.is_regular())
        throw std::invalid_argument("estimate_vertices_regular: graph is not regular");
    return run_pair_estimator(g, x, t, K, 0, seed, /*weighted=*/false);
}

EstimateResult estimate_edges(const Graph& g, std::uint32_t x, std::uint64_t t, std::uint64_t K,
                              std::uint64_t seed) {
    return run_pair_estimator(g, x, t, K, 0, seed, /*weighted=*/true);
}

EstimateResult estimate_edges_burnin(const Graph& g, std::uint32_t x, std::uint64_t t, std::uint64_t K,
                                     std::uint64_t burn_in, std::uint64_t seed) {
    return run_pair_estimator(g, x, t, K, burn_in, seed, /*weighted=*/true);
}

EstimateResult estimate_vertices_general(const Graph& g, std::uint32_t x, double m_hat, std::uint64_t r,
                                         std::uint64_t t, std::uint64_t seed) {
    if (m_hat <= 0.0) throw std::invalid_argument("estimate_vertices_general: m_hat must be positive");
    if (t < 1 || r < 1) throw std::invalid_argument("estimate_vertices_general: r and t must be >= 1");

    const std::array<WalkTrace, 1> walk{simulate_lazy_walk(g, x, r + t, derive_stream(seed, 0))};
    const Profile profile = compute_profile(walk, g);
    const double mean_inv_deg = profile_inverse_degree_mean(profile, r, r + t);

    EstimateResult result;
    result.t = t;
    result.K = 1;
    result.seed = seed;
    result.value = 2.0 * m_hat * mean_inv_deg;
    result.diagnostics = {mean_inv_deg, 0.0, r, r + t, r + t};
    return result;
}

}  // namespace gpe
