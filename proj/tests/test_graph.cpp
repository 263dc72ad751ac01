#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <sstream>

#include "gpe/generators.hpp"
#include "gpe/graph.hpp"
#include "gpe/oracle.hpp"

using namespace gpe;

namespace {

Graph from_text(const std::string& text) {
    std::istringstream in(text);
    return load_graph(in);
}

GraphError::Kind kind_of(const std::string& text) {
    try {
        from_text(text);
    } catch (const GraphError& e) {
        return e.kind();
    }
    FAIL("expected GraphError");
    return GraphError::Kind::Parse;
}

}  // namespace

TEST_CASE("triangle loads with the right degrees") {
    const Graph g = from_text("3 3\n0 1\n1 2\n0 2\n");
    CHECK(g.vertex_count() == 3);
    CHECK(g.edge_count() == 3);
    for (std::uint32_t u = 0; u < 3; ++u) CHECK(g.degree(u) == 2);
    CHECK(g.is_regular());
    CHECK(min_degree(g) == 2);
}

TEST_CASE("4-cycle loads") {
    const Graph g = from_text("4 4\n0 1\n1 2\n2 3\n3 0\n");
    CHECK(g.vertex_count() == 4);
    CHECK(g.edge_count() == 4);
    CHECK(g.degree(0) == 2);
    const auto nbs = g.neighbors(0);
    CHECK(nbs[0] == 1);
    CHECK(nbs[1] == 3);
}

TEST_CASE("each failure mode has its own diagnostic") {
    CHECK(kind_of("4 3\n0 1\n1 2\n2 3\n3 0\n") == GraphError::Kind::EdgeCountMismatch);
    CHECK(kind_of("3 3\n0 1\n1 1\n0 2\n") == GraphError::Kind::SelfLoop);
    CHECK(kind_of("3 3\n0 1\n0 1\n1 2\n") == GraphError::Kind::DuplicateEdge);
    CHECK(kind_of("4 2\n0 1\n2 3\n") == GraphError::Kind::Disconnected);
    CHECK(kind_of("3 1\n0 1\n") == GraphError::Kind::DegreeZero);
    CHECK(kind_of("3 2\n0 5\n1 2\n") == GraphError::Kind::VertexOutOfRange);
    CHECK(kind_of("nonsense\n") == GraphError::Kind::Parse);
    CHECK(kind_of("3 2\n0 1\nbad line\n") == GraphError::Kind::Parse);
    CHECK(kind_of("") == GraphError::Kind::Parse);
}

TEST_CASE("parse errors carry the offending line number") {
    try {
        from_text("3 2\n0 1\nbad line\n");
        FAIL("expected GraphError");
    } catch (const GraphError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("single edge graph is the smallest valid graph") {
    const Graph g = from_text("2 1\n0 1\n");
    CHECK(min_degree(g) == 1);
    CHECK(g.edge_count() == 1);
}

TEST_CASE("barbell(4,4) has minimum degree 2") {
    CHECK(min_degree(gen_barbell(4, 4)) == 2);
}

TEST_CASE("stationary measure is deg/2m") {
    SUBCASE("triangle is uniform") {
        const auto pi = stationary_measure(from_text("3 3\n0 1\n1 2\n0 2\n"));
        for (double w : pi.weights) CHECK(w == doctest::Approx(1.0 / 3).epsilon(1e-12));
    }
    SUBCASE("path 0-1-2 weights (1/4, 1/2, 1/4)") {
        const auto pi = stationary_measure(from_text("3 2\n0 1\n1 2\n"));
        CHECK(pi.weights[0] == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(pi.weights[1] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(pi.weights[2] == doctest::Approx(0.25).epsilon(1e-12));
    }
    SUBCASE("cycle is uniform") {
        const auto pi = stationary_measure(gen_cycle(4));
        for (double w : pi.weights) CHECK(w == doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("stationary weights sum to one and degrees shake hands") {
    for (const Graph& g : {gen_cycle(17), gen_barbell(4, 4), gen_clique_with_paths(5, 3),
                           gen_random_regular_3(20, 1)}) {
        const auto pi = stationary_measure(g);
        double sum = 0.0;
        for (double w : pi.weights) sum += w;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

        std::uint64_t total_degree = 0;
        for (std::uint32_t u = 0; u < g.vertex_count(); ++u) total_degree += g.degree(u);
        CHECK(total_degree == 2 * g.edge_count());
    }
}

TEST_CASE("stationary measure is invariant under the lazy transition") {
    for (const Graph& g : {gen_complete(3), gen_cycle(4), gen_barbell(4, 4),
                           gen_random_regular_3(20, 3)}) {
        const Mat P = lazy_transition_matrix(g);
        const auto pi = stationary_measure(g);
        for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
            double acc = 0.0;
            for (std::uint32_t u = 0; u < g.vertex_count(); ++u) acc += pi.weights[u] * P(u, v);
            CHECK(acc == doctest::Approx(pi.weights[v]).epsilon(1e-12));
        }
    }
}

TEST_CASE("canonical serialization round-trips bit-exactly") {
    for (const Graph& g : {gen_barbell(5, 3), gen_clique_expander(4, 3, 2),
                           gen_random_regular_3(30, 9)}) {
        const std::string text = g.serialize();
        std::istringstream in(text);
        const Graph reloaded = load_graph(in);
        CHECK(reloaded.serialize() == text);
        CHECK(reloaded.fingerprint() == g.fingerprint());
    }
}

TEST_CASE("adjacency is symmetric and sorted") {
    const Graph g = gen_random_regular_3(24, 5);
    for (std::uint32_t u = 0; u < g.vertex_count(); ++u) {
        const auto nbs = g.neighbors(u);
        CHECK(std::is_sorted(nbs.begin(), nbs.end()));
        for (std::uint32_t v : nbs) {
            const auto back = g.neighbors(v);
            CHECK(std::binary_search(back.begin(), back.end(), u));
        }
    }
}
