#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpe/graph.hpp"

// Exact dense-matrix computations on small graphs: transition powers,
// spectra, Green's functions, mixing quantities and closed-form intersection
// expectations. Everything here is ground truth for the statistical modules.

namespace gpe {

class OracleCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dense oracle size limit; override with env var GPE_ORACLE_CAP.
std::uint32_t oracle_cap();

// Row-major dense matrix, just large enough for the oracle's needs.
struct Mat {
    std::uint32_t n = 0;
    std::vector<double> a;

    Mat() = default;
    explicit Mat(std::uint32_t size) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}

    double operator()(std::uint32_t i, std::uint32_t j) const {
        return a[static_cast<std::size_t>(i) * n + j];
    }
    double& operator()(std::uint32_t i, std::uint32_t j) {
        return a[static_cast<std::size_t>(i) * n + j];
    }
};

// P(u,u) = 1/2, P(u,v) = 1/(2 deg u) for v ~ u.
Mat lazy_transition_matrix(const Graph& g);

struct SpectralSummary {
    // Eigenvalues of the lazy operator, descending; all in [0,1].
    std::vector<double> eigenvalues;
    std::uint64_t t_rel = 0;
    std::uint64_t t_unif = 0;
    std::vector<double> pi;
    // Right eigenvectors of P, column j in [j*n, (j+1)*n), orthonormal in l2(pi).
    std::vector<double> eigenvectors;
};

SpectralSummary spectral_summary(const Graph& g);

// g_t(x,u) = sum_{i<t} P^i(x,u): expected visits to u before time t.
struct GreenRow {
    std::uint32_t x = 0;
    std::uint64_t t = 0;
    std::vector<double> values;
};

GreenRow green_row(const Graph& g, std::uint32_t x, std::uint64_t t);

// Exact expectation of the weighted intersection count of two independent
// walks from x over [0,t). The two routes are algebraically equal: one sums
// squared Green values over vertices, the other sums return probabilities
// over index pairs; tests pin their agreement.
double expected_weighted_intersections(const Graph& g, std::uint32_t x, std::uint64_t t);
double expected_weighted_intersections_green(const Graph& g, std::uint32_t x, std::uint64_t t);

// Same statistic counted over the window [burn_in, burn_in + t) on both walks.
double expected_J(const Graph& g, std::uint32_t x, std::uint64_t t, std::uint64_t burn_in);
double expected_J_green(const Graph& g, std::uint32_t x, std::uint64_t t, std::uint64_t burn_in);

// Weighted intersections over [t, 2t); the statistic driving the mixing-time
// search.
double expected_L(const Graph& g, std::uint32_t x, std::uint64_t t);

// Exact E[(weighted intersections over [0,t))^2] for two independent walks
// from x, via the joint two-time occupation matrix. Expensive; small t only.
double expected_weighted_intersections_squared(const Graph& g, std::uint32_t x, std::uint64_t t);

// Squared l2(pi) distance of the t-step law from stationarity; equals
// P^{2t}(x,x)/pi(x) - 1 by reversibility (both routes computed and checked).
double l2_distance_sq(const Graph& g, std::uint32_t x, std::uint64_t t);

// t_x(delta): first t with d_x(t)^2 <= delta.
std::uint64_t mixing_time_from(const Graph& g, std::uint32_t x, double delta);

struct BoundCheck {
    std::string name;
    bool pass = false;
    // Smallest (rhs - lhs) seen across the sweep; negative means a violation.
    double worst_slack = 0.0;
    std::string detail;
};

struct FittedConstant {
    std::string name;
    double value = 0.0;
};

struct BoundReport {
    std::vector<BoundCheck> checks;
    std::vector<FittedConstant> fitted;
    bool all_pass = false;
};

// Sweeps the inequality suite (expectation sandwiches, Green bound, return
// probability bound, truncated-sum bound, relaxation-time bound, second
// moment on tiny graphs) and reports fitted constants for the
// constant-free variance bounds.
BoundReport verify_bounds(const Graph& g);

}  // namespace gpe
