#include "gpe/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gpe/rng.hpp"

namespace gpe {

namespace {

using Edge = Graph::Edge;

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void add_clique(std::vector<Edge>& edges, std::uint32_t first, std::uint32_t size) {
    for (std::uint32_t i = 0; i < size; ++i)
        for (std::uint32_t j = i + 1; j < size; ++j) edges.emplace_back(first + i, first + j);
}

}  // namespace

Graph gen_cycle(std::uint32_t n) {
    require(n >= 3, "cycle: n must be >= 3, got " + std::to_string(n));
    std::vector<Edge> edges;
    edges.reserve(n);
    for (std::uint32_t u = 0; u < n; ++u) edges.emplace_back(u, (u + 1) % n);
    return Graph(n, edges);
}

Graph gen_complete(std::uint32_t n) {
    require(n >= 2, "complete: n must be >= 2, got " + std::to_string(n));
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    add_clique(edges, 0, n);
    return Graph(n, edges);
}

Graph gen_barbell(std::uint32_t clique_size, std::uint32_t path_length) {
    require(clique_size >= 3, "barbell: clique_size must be >= 3");
    require(path_length >= 1, "barbell: path_length must be >= 1");

    const std::uint32_t n = 2 * clique_size + path_length - 1;
    std::vector<Edge> edges;
    add_clique(edges, 0, clique_size);
    add_clique(edges, clique_size, clique_size);

    // Path with path_length edges from vertex 0 (left clique) to vertex
    // clique_size (right clique); interior vertices start at 2*clique_size.
    std::uint32_t prev = 0;
    for (std::uint32_t i = 0; i + 1 < path_length; ++i) {
        const std::uint32_t mid = 2 * clique_size + i;
        edges.emplace_back(prev, mid);
        prev = mid;
    }
    edges.emplace_back(prev, clique_size);
    return Graph(n, edges);
}

double regular_walk_lambda2(const Graph& g) {
    require(g.is_regular(), "lambda2 power iteration requires a regular graph");
    const std::uint32_t n = g.vertex_count();
    const double d = static_cast<double>(g.degree(0));

    // Deterministic start vector, deflated against the constant eigenvector.
    std::vector<double> v(n);
    SplitMix64 sm(0x5eed5eed5eed5eedULL);
    for (auto& val : v) val = static_cast<double>(sm.next() >> 11) * 0x1.0p-53 - 0.5;

    auto deflate = [&](std::vector<double>& x) {
        const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
        for (auto& val : x) val -= mean;
    };
    auto norm = [&](const std::vector<double>& x) {
        return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
    };

    deflate(v);
    const double v0 = norm(v);
    for (auto& val : v) val /= v0;

    std::vector<double> w(n);
    double lambda_lazy = 0.0;
    for (int iter = 0; iter < 5000; ++iter) {
        for (std::uint32_t u = 0; u < n; ++u) {
            double acc = 0.0;
            for (std::uint32_t nb : g.neighbors(u)) acc += v[nb];
            w[u] = 0.5 * v[u] + 0.5 * acc / d;
        }
        deflate(w);
        const double wn = norm(w);
        if (wn == 0.0) return -1.0;  // start vector annihilated; spectrum gap is trivial
        const double rayleigh = std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
        for (std::uint32_t u = 0; u < n; ++u) v[u] = w[u] / wn;
        if (iter > 16 && std::abs(rayleigh - lambda_lazy) < 1e-13) {
            lambda_lazy = rayleigh;
            break;
        }
        lambda_lazy = rayleigh;
    }
    return 2.0 * lambda_lazy - 1.0;  // undo laziness
}

Graph gen_random_regular_3(std::uint32_t k, std::uint64_t seed, const RegularGraphPolicy& policy) {
    require(k >= 4, "random_regular_3: k must be >= 4, got " + std::to_string(k));
    require(k % 2 == 0, "random_regular_3: k must be even, got " + std::to_string(k));

    for (int attempt = 0; attempt < policy.max_attempts; ++attempt) {
        Xoshiro256 rng(derive_stream(seed, static_cast<std::uint64_t>(attempt)));

        // 3 half-edges per vertex; a uniform matching is a uniform shuffle
        // paired off consecutively.
        std::vector<std::uint32_t> half(3 * static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < half.size(); ++i) half[i] = static_cast<std::uint32_t>(i / 3);
        for (std::size_t i = half.size() - 1; i > 0; --i)
            std::swap(half[i], half[rng.uniform_below(i + 1)]);

        std::vector<Edge> edges;
        edges.reserve(half.size() / 2);
        bool simple = true;
        for (std::size_t i = 0; i < half.size(); i += 2) {
            const std::uint32_t u = half[i], v = half[i + 1];
            if (u == v) {
                simple = false;
                break;
            }
            edges.emplace_back(std::min(u, v), std::max(u, v));
        }
        if (!simple) continue;

        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;

        try {
            Graph g(k, edges);
            if (k >= policy.lambda2_min_k && regular_walk_lambda2(g) > policy.lambda2_threshold)
                continue;
            return g;
        } catch (const GraphError& e) {
            if (e.kind() == GraphError::Kind::Disconnected) continue;
            throw;
        }
    }
    throw RetryBudgetExceeded("random_regular_3: no acceptable sample in " +
                              std::to_string(policy.max_attempts) + " attempts (k=" + std::to_string(k) + ")");
}

Graph gen_subdivided_expander(std::uint32_t k, std::uint32_t ell, std::uint64_t seed,
                              const RegularGraphPolicy& policy) {
    require(ell >= 5, "subdivided_expander: ell must be >= 5, got " + std::to_string(ell));
    require((ell - 1) % 4 == 0, "subdivided_expander: ell-1 must be a multiple of 4, got ell=" + std::to_string(ell));

    const Graph base = gen_random_regular_3(k, seed, policy);

    std::vector<Edge> edges;
    std::uint32_t next_id = k;
    for (const auto& [u, v] : base.edges()) {
        // Path u = p[0], p[1], ..., p[ell-1], v with ell edges.
        std::vector<std::uint32_t> p(ell + 1);
        p[0] = u;
        p[ell] = v;
        for (std::uint32_t i = 1; i < ell; ++i) p[i] = next_id++;
        for (std::uint32_t i = 0; i < ell; ++i) edges.emplace_back(p[i], p[i + 1]);

        // Distance-2 chords in blocks of four interior vertices.
        for (std::uint32_t b = 1; b + 3 < ell; b += 4) {
            edges.emplace_back(p[b], p[b + 2]);
            edges.emplace_back(p[b + 1], p[b + 3]);
        }
    }

    const std::uint32_t n = k + (3 * k / 2) * (ell - 1);
    return Graph(n, edges);
}

Graph gen_clique_expander(std::uint32_t k, std::uint32_t q, std::uint64_t seed,
                          const RegularGraphPolicy& policy) {
    require(q >= 2, "clique_expander: q must be >= 2, got " + std::to_string(q));

    const Graph base = gen_random_regular_3(k, seed, policy);

    std::vector<Edge> edges;
    for (std::uint32_t u = 0; u < k; ++u) add_clique(edges, u * q, q);

    // Path endpoints attach to clique vertices in sorted-neighbor order; the
    // j-th incident edge of u lands on clique vertex u*q + (j mod q).
    auto attach = [&](std::uint32_t u, std::uint32_t v) {
        const auto nbs = base.neighbors(u);
        const std::uint32_t j =
            static_cast<std::uint32_t>(std::lower_bound(nbs.begin(), nbs.end(), v) - nbs.begin());
        return u * q + (j % q);
    };

    std::uint32_t next_id = k * q;
    for (const auto& [u, v] : base.edges()) {
        std::uint32_t prev = attach(u, v);
        for (std::uint32_t i = 0; i + 1 < q; ++i) {
            edges.emplace_back(prev, next_id);
            prev = next_id++;
        }
        edges.emplace_back(prev, attach(v, u));
    }

    const std::uint32_t n = k * q + (3 * k / 2) * (q - 1);
    return Graph(n, edges);
}

Graph gen_clique_with_paths(std::uint32_t ell, std::uint32_t q) {
    require(ell >= 3, "clique_with_paths: ell must be >= 3, got " + std::to_string(ell));
    require(q >= 1, "clique_with_paths: q must be >= 1, got " + std::to_string(q));

    std::vector<Edge> edges;
    add_clique(edges, 0, ell);
    for (std::uint32_t c = 0; c < ell; ++c) {
        std::uint32_t prev = c;
        for (std::uint32_t i = 0; i < q; ++i) {
            const std::uint32_t node = ell + c * q + i;
            edges.emplace_back(prev, node);
            prev = node;
        }
    }
    return Graph(ell * (q + 1), edges);
}

Graph generate(const GenSpec& spec) {
    auto param = [&](const char* name) -> std::uint64_t {
        auto it = spec.params.find(name);
        require(it != spec.params.end(),
                spec.family + ": missing parameter '" + name + "'");
        return it->second;
    };
    auto p32 = [&](const char* name) { return static_cast<std::uint32_t>(param(name)); };

    if (spec.family == "cycle") return gen_cycle(p32("n"));
    if (spec.family == "complete") return gen_complete(p32("n"));
    if (spec.family == "barbell") return gen_barbell(p32("clique_size"), p32("path_length"));
    if (spec.family == "random_regular_3") return gen_random_regular_3(p32("k"), spec.seed);
    if (spec.family == "subdivided_expander")
        return gen_subdivided_expander(p32("k"), p32("ell"), spec.seed);
    if (spec.family == "clique_expander") return gen_clique_expander(p32("k"), p32("q"), spec.seed);
    if (spec.family == "clique_with_paths") return gen_clique_with_paths(p32("ell"), p32("q"));
    throw std::invalid_argument("unknown graph family '" + spec.family + "'");
}

}  // namespace gpe
