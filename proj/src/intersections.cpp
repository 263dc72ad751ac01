#include "gpe/intersections.hpp"

#include <stdexcept>
#include <string>
#include <unordered_map>

namespace gpe {

namespace {

void check_window(const WalkTrace& trace, WindowSpec w) {
    if (w.hi <= w.lo) throw std::out_of_range("window [lo,hi) is empty or inverted");
    if (w.hi > trace.steps.size())
        throw std::out_of_range("window end " + std::to_string(w.hi) + " exceeds trace length " +
                                std::to_string(trace.steps.size()));
}

void check_pair(const WalkTrace& X, const WalkTrace& Y, WindowSpec w) {
    if (X.graph_fingerprint != Y.graph_fingerprint)
        throw std::invalid_argument("traces come from different graphs");
    check_window(X, w);
    check_window(Y, w);
}

}  // namespace

VisitCounts visit_counts(const WalkTrace& trace, WindowSpec w) {
    check_window(trace, w);
    VisitCounts counts;
    for (std::uint64_t i = w.lo; i < w.hi; ++i) ++counts[trace.steps[i]];
    return counts;
}

std::uint64_t count_intersections(const WalkTrace& X, const WalkTrace& Y, WindowSpec w) {
    check_pair(X, Y, w);
    std::unordered_map<std::uint32_t, std::uint64_t> visits;
    visits.reserve(w.hi - w.lo);
    for (std::uint64_t i = w.lo; i < w.hi; ++i) ++visits[X.steps[i]];
    std::uint64_t acc = 0;
    for (std::uint64_t j = w.lo; j < w.hi; ++j) {
        const auto it = visits.find(Y.steps[j]);
        if (it != visits.end()) acc += it->second;
    }
    return acc;
}

double count_weighted_intersections(const WalkTrace& X, const WalkTrace& Y, WindowSpec w, const Graph& g) {
    check_pair(X, Y, w);
    if (X.graph_fingerprint != g.fingerprint())
        throw std::invalid_argument("traces do not belong to the supplied graph");

    if (g.is_regular())
        return static_cast<double>(count_intersections(X, Y, w)) / g.degree(0);

    std::unordered_map<std::uint32_t, std::uint64_t> visits;
    visits.reserve(w.hi - w.lo);
    for (std::uint64_t i = w.lo; i < w.hi; ++i) ++visits[X.steps[i]];
    double acc = 0.0;
    for (std::uint64_t j = w.lo; j < w.hi; ++j) {
        const std::uint32_t u = Y.steps[j];
        const auto it = visits.find(u);
        if (it != visits.end()) acc += static_cast<double>(it->second) / g.degree(u);
    }
    return acc;
}

double count_J(const WalkTrace& X, const WalkTrace& Y, std::uint64_t t, std::uint64_t burn_in,
               const Graph& g) {
    if (t < 1) throw std::invalid_argument("count_J: t must be >= 1");
    if (X.steps.size() < burn_in + t || Y.steps.size() < burn_in + t)
        throw std::out_of_range("count_J: traces shorter than burn_in + t");
    return count_weighted_intersections(X, Y, {burn_in, burn_in + t}, g);
}

double count_L_pairwise(std::span<const WalkTrace> traces, std::uint64_t t, const Graph& g) {
    if (traces.size() < 2) throw std::invalid_argument("count_L_pairwise: need K >= 2 traces");
    if (t < 1) throw std::invalid_argument("count_L_pairwise: t must be >= 1");
    for (const auto& trace : traces)
        if (trace.steps.size() < 2 * t)
            throw std::out_of_range("count_L_pairwise: trace shorter than 2t");

    const WindowSpec w{t, 2 * t};
    double acc = 0.0;
    for (std::size_t a = 0; a < traces.size(); ++a)
        for (std::size_t b = a + 1; b < traces.size(); ++b)
            acc += count_weighted_intersections(traces[a], traces[b], w, g);
    const double pairs = 0.5 * static_cast<double>(traces.size()) * (traces.size() - 1);
    return acc / pairs;
}

bool has_duplicate_seeds(std::span<const WalkTrace> traces) {
    for (std::size_t a = 0; a < traces.size(); ++a)
        for (std::size_t b = a + 1; b < traces.size(); ++b)
            if (traces[a].seed == traces[b].seed) return true;
    return false;
}

PairAccumulator::PairAccumulator(const Graph& g) : g_(&g), counts_(g.vertex_count(), 0) {}

std::uint64_t PairAccumulator::unweighted(std::span<const std::uint32_t> x,
                                          std::span<const std::uint32_t> y, std::uint64_t lo,
                                          std::uint64_t hi) {
    for (std::uint64_t i = lo; i < hi; ++i) {
        const std::uint32_t u = x[i];
        if (counts_[u]++ == 0) touched_.push_back(u);
    }
    std::uint64_t acc = 0;
    for (std::uint64_t j = lo; j < hi; ++j) acc += counts_[y[j]];
    for (std::uint32_t u : touched_) counts_[u] = 0;
    touched_.clear();
    return acc;
}

double PairAccumulator::weighted(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y,
                                 std::uint64_t lo, std::uint64_t hi) {
    if (g_->is_regular()) return static_cast<double>(unweighted(x, y, lo, hi)) / g_->degree(0);

    for (std::uint64_t i = lo; i < hi; ++i) {
        const std::uint32_t u = x[i];
        if (counts_[u]++ == 0) touched_.push_back(u);
    }
    double acc = 0.0;
    for (std::uint64_t j = lo; j < hi; ++j) {
        const std::uint32_t u = y[j];
        if (counts_[u]) acc += static_cast<double>(counts_[u]) / g_->degree(u);
    }
    for (std::uint32_t u : touched_) counts_[u] = 0;
    touched_.clear();
    return acc;
}

}  // namespace gpe
