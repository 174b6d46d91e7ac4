#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "towerlab/correspondence.hpp"
#include "towerlab/fields.hpp"
#include "towerlab/graph.hpp"

using namespace towerlab;

namespace {

struct Tower {
    FiniteField base;
    RationalMap f, g;
    Correspondence corr;
};

Tower make_f5() {
    FiniteField F(5, 1);
    auto f = make_rational_map(F, poly_from_ints(F, {1, 0, 1}), poly_from_ints(F, {0, 2}));
    auto g = make_rational_map(F, poly_from_ints(F, {0, 0, 1}), poly_from_ints(F, {1}));
    auto corr = Correspondence::from_separated(F, f, g);
    return Tower{F, f, g, corr};
}

Tower make_bgs() {
    FiniteField F(3, 1);
    auto f = make_rational_map(F, poly_from_ints(F, {2, 1, 0, 1}), poly_from_ints(F, {0, 1}));
    auto g = make_rational_map(F, poly_from_ints(F, {1, 2}), poly_from_ints(F, {0, 0, 0, 1}));
    auto corr = Correspondence::from_separated(F, f, g);
    return Tower{F, f, g, corr};
}

std::vector<std::pair<int, int>> edge_pairs(const TowerGraph& G) {
    std::vector<std::pair<int, int>> out;
    for (const auto& e : G.edges) out.emplace_back(e.src, e.dst);
    return out;
}

std::vector<size_t> component_sizes(const ComponentCensus& cen) {
    std::vector<size_t> out;
    for (const auto& c : cen.components) out.push_back(c.vertices.size());
    return out;
}

std::vector<ProjPoint> to_points(const TowerGraph& G, const std::vector<int>& path) {
    std::vector<ProjPoint> out;
    for (int v : path) out.push_back(G.vertices[static_cast<size_t>(v)]);
    return out;
}

Correspondence in_ambient(const Tower& T, const TowerGraph& G) {
    if (G.ambient == T.base) return T.corr;
    return T.corr.embedded(Embedding(T.base, G.ambient));
}

}  // namespace

TEST_CASE("level-1 graph of the degree-2 tower, exact edge list") {
    auto T = make_f5();
    auto G = build_graph(T.base, T.corr, 1);
    REQUIRE(G.vertices.size() == 6);
    CHECK(G.q == 5);
    CHECK(G.level == 1);
    CHECK(G.d1 == 2);
    CHECK(G.d2 == 2);

    std::vector<std::pair<int, int>> want = {{0, 5}, {1, 1}, {1, 4}, {2, 0},
                                             {3, 0}, {4, 2}, {4, 3}, {5, 5}};
    CHECK(edge_pairs(G) == want);

    // dashed = f ramified at the source, red = g ramified at the target
    for (const auto& e : G.edges) {
        bool dashed = (e.src == 1 || e.src == 4);
        bool red = (e.dst == 0 || e.dst == 5);
        CHECK(e.flags.etale_pi2 == !dashed);
        CHECK(e.flags.etale_pi1 == !red);
    }

    auto cen = census(G);
    CHECK(cen.d == 2);
    CHECK(component_sizes(cen) == std::vector<size_t>{6});
    CHECK(cen.components[0].singular);
    CHECK_FALSE(cen.components[0].strongly_connected);
    CHECK(cen.singular_vertices == std::vector<int>{0, 1, 2, 3, 4, 5});
    CHECK(cen.regular_components.empty());
    CHECK_FALSE(cen.regular_core.has_value());
    CHECK_FALSE(regular_core(G, 2).has_value());

    CHECK(count_cycles_table(G, 6) ==
          std::vector<BigInt>{BigInt(2), BigInt(2), BigInt(2), BigInt(2), BigInt(2), BigInt(2)});
    CHECK(enumerate_cycles(G, 2) == std::vector<std::vector<int>>{{1, 1}, {5, 5}});

    CHECK(G.vertex_index(ProjPoint::infinity(G.ambient)) == 5);
    CHECK(G.find_edge(0, 5) != nullptr);
    CHECK(G.find_edge(0, 1) == nullptr);
}

TEST_CASE("level-1 DOT rendering is byte-exact") {
    auto T = make_f5();
    auto G = build_graph(T.base, T.corr, 1);
    auto cen = census(G);
    std::string want =
        "digraph tower {\n"
        "  rankdir=LR;\n"
        "  subgraph cluster_singular_0 {\n"
        "    label=\"singular\";\n"
        "    v0 [label=\"0\"];\n"
        "    v1 [label=\"1\"];\n"
        "    v2 [label=\"2\"];\n"
        "    v3 [label=\"3\"];\n"
        "    v4 [label=\"4\"];\n"
        "    v5 [label=\"inf\"];\n"
        "  }\n"
        "  v0 -> v5 [color=red];\n"
        "  v1 -> v1 [style=dashed];\n"
        "  v1 -> v4 [style=dashed];\n"
        "  v2 -> v0 [color=red];\n"
        "  v3 -> v0 [color=red];\n"
        "  v4 -> v2 [style=dashed];\n"
        "  v4 -> v3 [style=dashed];\n"
        "  v5 -> v5 [color=red];\n"
        "}\n";
    CHECK(export_dot(G, cen) == want);
    CHECK(export_dot(G, cen) == export_dot(G, cen));
}

TEST_CASE("level-2 census of the degree-2 tower") {
    auto T = make_f5();
    auto G = build_graph(T.base, T.corr, 2);
    REQUIRE(G.vertices.size() == 26);
    CHECK(G.edges.size() == 32);

    auto cen = census(G);
    CHECK(component_sizes(cen) == std::vector<size_t>{8, 6, 4, 4, 1, 1, 1, 1});

    // singular part is exactly the copy of the level-1 line
    CHECK(cen.singular_vertices == std::vector<int>{0, 1, 2, 3, 4, 25});

    // unique 2-regular strongly connected component of size 8
    REQUIRE(cen.regular_core.has_value());
    std::vector<int> core = {6, 9, 12, 13, 17, 18, 21, 24};
    CHECK(*cen.regular_core == core);
    CHECK(regular_core(G, 2) == core);
    const auto& top = cen.components[0];
    CHECK(top.vertices == core);
    CHECK(top.strongly_connected);
    CHECK(top.d_regular);
    CHECK_FALSE(top.singular);
    REQUIRE(top.primitive.has_value());
    CHECK(*top.primitive);

    // one of the two leftover 4-vertex components, neither strongly connected
    // nor geometrically complete
    bool saw = false;
    for (const auto& c : cen.components)
        if (c.vertices == std::vector<int>{5, 8, 20, 23}) {
            saw = true;
            CHECK_FALSE(c.strongly_connected);
            CHECK_FALSE(c.singular);
            auto comp = completeness(in_ambient(T, G), to_points(G, c.vertices));
            CHECK_FALSE(comp.forward);
            CHECK_FALSE(comp.backward);
            CHECK_FALSE(comp.complete());
        }
    CHECK(saw);

    // the core is closed in both directions
    auto cc = completeness(in_ambient(T, G), to_points(G, core));
    CHECK(cc.forward);
    CHECK(cc.backward);

    CHECK(count_paths(G, 0) == 26);
    CHECK(count_paths(G, 1) == 32);
    CHECK(count_paths(G, 2) == 42);
    CHECK(count_paths(G, 3) == 76);
    CHECK(count_cycles_table(G, 6) == std::vector<BigInt>{BigInt(4), BigInt(6), BigInt(10),
                                                          BigInt(18), BigInt(34), BigInt(66)});

    // restricted to the core the graph is 2-regular: 8 * 2^n walks
    auto sub = induced_subgraph(G, core);
    REQUIRE(sub.vertices.size() == 8);
    for (int n = 0; n <= 7; ++n) CHECK(count_paths(sub, n) == BigInt(8) << n);

    auto h = irreducibility_heuristic(G, cen, in_ambient(T, G));
    CHECK(h.irreducible);
    REQUIRE(h.witness.has_value());
    CHECK(*h.witness == 25);
    CHECK(point_to_string(G.ambient, G.vertices[25]) == "inf");
}

TEST_CASE("separated fast path agrees with the generic builder") {
    auto T5 = make_f5();
    auto A = build_graph(T5.base, T5.corr, 2);
    auto B = build_graph_separated(T5.base, T5.f, T5.g, 2);
    REQUIRE(A.vertices.size() == B.vertices.size());
    CHECK(A.vertices == B.vertices);
    REQUIRE(A.edges.size() == B.edges.size());
    for (size_t i = 0; i < A.edges.size(); ++i) {
        CHECK(A.edges[i].src == B.edges[i].src);
        CHECK(A.edges[i].dst == B.edges[i].dst);
        CHECK(A.edges[i].flags == B.edges[i].flags);
    }

    auto T3 = make_bgs();
    auto C = build_graph(T3.base, T3.corr, 3);
    auto D = build_graph_separated(T3.base, T3.f, T3.g, 3);
    CHECK(C.vertices == D.vertices);
    REQUIRE(C.edges.size() == D.edges.size());
    for (size_t i = 0; i < C.edges.size(); ++i) {
        CHECK(C.edges[i].src == D.edges[i].src);
        CHECK(C.edges[i].dst == D.edges[i].dst);
        CHECK(C.edges[i].flags == D.edges[i].flags);
    }
}

TEST_CASE("degree-3 tower censuses across levels") {
    auto T = make_bgs();

    auto G1 = build_graph_separated(T.base, T.f, T.g, 1);
    REQUIRE(G1.vertices.size() == 4);
    auto c1 = census(G1);
    CHECK(c1.singular_vertices == std::vector<int>{0, 1, 2, 3});
    CHECK(c1.regular_components.empty());
    auto h1 = irreducibility_heuristic(G1, c1, T.corr);
    CHECK(h1.irreducible);
    CHECK(*h1.witness == 0);

    auto G2 = build_graph_separated(T.base, T.f, T.g, 2);
    REQUIRE(G2.vertices.size() == 10);
    auto c2 = census(G2);
    CHECK(c2.singular_vertices.size() == 6);
    CHECK(c2.regular_components.empty());

    auto G3 = build_graph_separated(T.base, T.f, T.g, 3);
    REQUIRE(G3.vertices.size() == 28);
    CHECK(G3.edges.size() == 47);
    auto c3 = census(G3);
    CHECK(component_sizes(c3) == std::vector<size_t>{12, 4, 3, 3, 1, 1, 1, 1, 1, 1});
    CHECK(c3.singular_vertices == std::vector<int>{0, 1, 2, 27});

    std::vector<int> core = {3, 4, 5, 6, 7, 8, 9, 13, 16, 19, 21, 24};
    REQUIRE(c3.regular_core.has_value());
    CHECK(*c3.regular_core == core);
    CHECK(c3.components[0].vertices == core);
    CHECK(c3.components[0].strongly_connected);
    CHECK(c3.components[0].d_regular);
    REQUIRE(c3.components[0].primitive.has_value());
    CHECK(*c3.components[0].primitive);

    auto corr27 = in_ambient(T, G3);
    auto cc = completeness(corr27, to_points(G3, core));
    CHECK(cc.complete());

    auto h3 = irreducibility_heuristic(G3, c3, corr27);
    CHECK(h3.irreducible);
    CHECK(*h3.witness == 0);

    CHECK(count_paths(G3, 1) == 47);
    CHECK(count_paths(G3, 2) == 120);
    CHECK(count_paths(G3, 3) == 337);
    CHECK(count_cycles_table(G3, 6) == std::vector<BigInt>{BigInt(4), BigInt(12), BigInt(31),
                                                           BigInt(84), BigInt(244), BigInt(741)});

    auto sub = induced_subgraph(G3, core);
    for (int n = 0; n <= 7; ++n) {
        BigInt want = 12;
        for (int k = 0; k < n; ++k) want *= 3;
        CHECK(count_paths(sub, n) == want);
    }
}

TEST_CASE("degree-3 tower at level 6 (conjugate singular roots appear)") {
    auto T = make_bgs();
    auto G = build_graph_separated(T.base, T.f, T.g, 6);
    REQUIRE(G.vertices.size() == 730);
    CHECK(G.edges.size() == 745);

    auto cen = census(G);
    CHECK(cen.components.size() == 189);
    auto sizes = component_sizes(cen);
    CHECK(std::vector<size_t>(sizes.begin(), sizes.begin() + 10) ==
          std::vector<size_t>{57, 57, 54, 54, 24, 20, 20, 20, 19, 19});

    // the singular component now holds two extra conjugate roots of x^3 + x - 1
    CHECK(cen.singular_vertices == std::vector<int>{0, 1, 2, 131, 233, 729});

    std::vector<int> core = {144, 145, 146, 207, 208, 209, 265, 381, 445, 501, 645, 682};
    REQUIRE(cen.regular_core.has_value());
    CHECK(*cen.regular_core == core);
    CHECK(completeness(in_ambient(T, G), to_points(G, core)).complete());

    CHECK(count_paths(G, 1) == 745);
    CHECK(count_paths(G, 2) == 802);
    CHECK(count_paths(G, 3) == 1009);
    CHECK(count_cycles_table(G, 6) == std::vector<BigInt>{BigInt(6), BigInt(18), BigInt(51),
                                                          BigInt(102), BigInt(246), BigInt(903)});
}

TEST_CASE("spectral estimates track the core") {
    auto T5 = make_f5();
    auto G5 = build_graph(T5.base, T5.corr, 2);
    CHECK(spectral_radius(G5) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(spectral_core_support(G5) == std::vector<int>{6, 9, 12, 13, 17, 18, 21, 24});

    auto T3 = make_bgs();
    auto G3 = build_graph(T3.base, T3.corr, 3);
    CHECK(spectral_radius(G3) == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(spectral_core_support(G3) ==
          std::vector<int>{3, 4, 5, 6, 7, 8, 9, 13, 16, 19, 21, 24});

    TowerGraph empty;
    empty.q = 5;
    empty.ambient = FiniteField(5, 1);
    empty.vertices = enumerate_projective_line(empty.ambient, 5, 1);
    empty.out_adj.assign(empty.vertices.size(), {});
    empty.in_adj.assign(empty.vertices.size(), {});
    CHECK(spectral_radius(empty) == doctest::Approx(0.0));
}

TEST_CASE("path classification against the rank oracle") {
    auto T = make_bgs();
    auto G1 = build_graph(T.base, T.corr, 1);

    // singular: a dashed edge followed by a red one
    CHECK(classify_path(G1, {1, 2, 3}) == PathClass::singular);
    // smooth: ramification on the wrong sides only
    CHECK(classify_path(G1, {2, 1, 2}) == PathClass::smooth);
    // spec'd type-T0 point: (inf, 0, 0)
    CHECK(classify_path(G1, {3, 0, 0}) == PathClass::singular);
    CHECK(classify_path(G1, {0}) == PathClass::smooth);
    CHECK_THROWS_AS(classify_path(G1, {0, 1}), InvalidPath);
    CHECK_THROWS_AS(classify_path(G1, std::vector<int>{}), InvalidPath);

    CHECK(jacobian_oracle(T.corr, to_points(G1, {1, 2, 3})) == PathClass::singular);
    CHECK(jacobian_oracle(T.corr, to_points(G1, {2, 1, 2})) == PathClass::smooth);
    CHECK(jacobian_oracle(T.corr, to_points(G1, {3, 0, 0})) == PathClass::singular);

    // exhaustive agreement on all short paths of both level-1 graphs
    auto sweep = [](const TowerGraph& G, const Correspondence& corr) {
        std::vector<std::vector<int>> paths;
        for (size_t v = 0; v < G.vertices.size(); ++v) paths.push_back({static_cast<int>(v)});
        for (int len = 0; len < 3; ++len) {
            std::vector<std::vector<int>> next;
            for (const auto& p : paths)
                for (int w : G.out_adj[static_cast<size_t>(p.back())]) {
                    auto q = p;
                    q.push_back(w);
                    next.push_back(q);
                }
            for (const auto& p : next) {
                std::vector<ProjPoint> pts;
                for (int v : p) pts.push_back(G.vertices[static_cast<size_t>(v)]);
                CHECK(classify_path(G, p) == jacobian_oracle(corr, pts));
            }
            paths = std::move(next);
        }
    };
    sweep(G1, T.corr);
    auto T5 = make_f5();
    auto G5 = build_graph(T5.base, T5.corr, 1);
    sweep(G5, T5.corr);

    // singular paths persist at level 6, where x^3 + x - 1 gains conjugate roots
    auto G6 = build_graph_separated(T.base, T.f, T.g, 6);
    auto corr6 = in_ambient(T, G6);
    CHECK(classify_path(G6, {1, 131, 729}) == PathClass::singular);
    CHECK(jacobian_oracle(corr6, to_points(G6, {1, 131, 729})) == PathClass::singular);
    CHECK(classify_path(G6, {131, 1, 233}) == PathClass::smooth);
    CHECK(jacobian_oracle(corr6, to_points(G6, {131, 1, 233})) == PathClass::smooth);

    // length guard: 6 edges pass, 7 edges refuse
    std::vector<ProjPoint> loop7(7, G1.vertices[0]);
    CHECK(jacobian_oracle(T.corr, loop7) == PathClass::smooth);
    std::vector<ProjPoint> loop8(8, G1.vertices[0]);
    CHECK_THROWS_AS(jacobian_oracle(T.corr, loop8), PathTooLong);

    // off-correspondence input is rejected
    CHECK_THROWS_AS(jacobian_oracle(T.corr, to_points(G1, {0, 1})), Error);
}

TEST_CASE("cycle multiplicity via the product identity") {
    auto T = make_bgs();
    auto G1 = build_graph(T.base, T.corr, 1);
    std::string reason;

    // the loop at 0 is etale by pi2 only: the dt product vanishes, the ds one
    // does not, so no iterate ever satisfies the identity
    auto loop0 = to_points(G1, {0, 0});
    for (int rho : {1, 2, 8, 26}) {
        CHECK_FALSE(cycle_multiplicity_ge2(T.corr, iterate_cycle(loop0, rho), &reason));
        CHECK(reason == "product identity fails");
    }

    // point-singular cycles are multiple outright
    FiniteField F5(5, 1);
    auto sq = Correspondence::from_separated(
        F5, make_rational_map(F5, poly_from_ints(F5, {0, 0, 1}), poly_from_ints(F5, {1})),
        make_rational_map(F5, poly_from_ints(F5, {0, 0, 1}), poly_from_ints(F5, {1})));
    std::vector<ProjPoint> z2 = {ProjPoint::finite(F5, F5.zero()), ProjPoint::finite(F5, F5.zero())};
    CHECK(cycle_multiplicity_ge2(sq, z2, &reason));
    CHECK(reason == "singular point");

    // degree (2,1): the loop at 1 fails at rho = 1 and lands at rho = 4
    auto idmap = make_rational_map(F5, poly_from_ints(F5, {0, 1}), poly_from_ints(F5, {1}));
    auto sqv = make_rational_map(F5, poly_from_ints(F5, {0, 0, 1}), poly_from_ints(F5, {1}));
    auto mixed = Correspondence::from_separated(F5, sqv, idmap);
    std::vector<ProjPoint> one2 = {ProjPoint::finite(F5, F5.one()), ProjPoint::finite(F5, F5.one())};
    CHECK_FALSE(cycle_multiplicity_ge2(mixed, one2, &reason));
    CHECK(cycle_multiplicity_ge2(mixed, iterate_cycle(one2, 4), &reason));
    CHECK(reason == "product identity holds");

    CHECK_THROWS_AS(cycle_multiplicity_ge2(T.corr, to_points(G1, {0}), &reason), InvalidPath);
    CHECK_THROWS_AS(cycle_multiplicity_ge2(T.corr, to_points(G1, {1, 2}), &reason), InvalidPath);
    CHECK_THROWS_AS(iterate_cycle(loop0, 0), Error);
    CHECK(iterate_cycle(loop0, 3).size() == 4);
}

TEST_CASE("iterated etale cycles of the degree-2 tower become multiple at rho = 24") {
    auto T = make_f5();
    auto G = build_graph(T.base, T.corr, 2);
    auto corr25 = in_ambient(T, G);

    auto cycles = enumerate_cycles(G, 2);
    REQUIRE(cycles.size() == 5);  // four loops plus one 2-cycle

    int etale_seen = 0;
    for (const auto& cyc : cycles) {
        bool etale = true;
        for (size_t k = 0; k + 1 < cyc.size(); ++k) {
            const Edge* e = G.find_edge(cyc[k], cyc[k + 1]);
            REQUIRE(e != nullptr);
            if (!e->flags.etale_pi1 || !e->flags.etale_pi2) etale = false;
        }
        auto pts = to_points(G, cyc);
        if (etale) {
            ++etale_seen;
            CHECK(cycle_multiplicity_ge2(corr25, iterate_cycle(pts, 24)));
        } else {
            // one-sided loops at 1 and inf: one derivative product is zero,
            // the identity is out of reach for every iterate
            CHECK((cyc[0] == 1 || cyc[0] == 25));
            CHECK_FALSE(cycle_multiplicity_ge2(corr25, iterate_cycle(pts, 24)));
        }
    }
    CHECK(etale_seen == 3);
}

TEST_CASE("two equal-weight regular components are reported, not hidden") {
    FiniteField F(5, 1);
    auto sq = make_rational_map(F, poly_from_ints(F, {0, 0, 1}), poly_from_ints(F, {1}));
    auto corr = Correspondence::from_separated(F, sq, sq);
    auto G = build_graph(F, corr, 1);

    auto cen = census(G);
    REQUIRE(cen.regular_components.size() == 2);
    CHECK(cen.regular_components[0] == std::vector<int>{1, 4});
    CHECK(cen.regular_components[1] == std::vector<int>{2, 3});
    CHECK_FALSE(cen.regular_core.has_value());
    CHECK_THROWS_AS(regular_core(G, 2), MultipleRegularCores);

    // the only loop sits at a doubly ramified point, so the heuristic stays quiet
    auto h = irreducibility_heuristic(G, cen, corr);
    CHECK_FALSE(h.irreducible);
}
