#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "w3/dsl.hpp"
#include "w3/strata.hpp"

using namespace w3;

namespace {

const std::string kData = W3_DATA_DIR;

DualGraph graph(const std::string& name) { return load_graph(kData + "/graphs/" + name + ".graph"); }

IntVec vec(std::initializer_list<long> xs) {
    IntVec v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

Lattice diag_lattice(std::size_t n, long m) { return Lattice::scaled_identity(n, m); }

}  // namespace

TEST_CASE("graph parsing") {
    DualGraph g = parse_graph("# c\nvertex v0 genus=1 punctures=1,2\nvertex v1 genus=0 punctures=3\nedge e0 v0 v1\nedge e1 v0 v1\n");
    CHECK(g.vertices.size() == 2);
    CHECK(g.sig() == SurfaceSig{2, 3});
    CHECK(g.betti() == 1);
    for (const char* bad : {"vertex v0 genus=x\n", "edge e0 v0 v1\n", "vertex v0 genus=0\n", "vertex v0 genus=1\nvertex v0 genus=1\nedge e0 v0 v0\n",
                            "vertex v0 genus=1\nvertex v1 genus=1\n", "vertex v0 genus=1 punctures=1\nvertex v1 genus=0 punctures=1,2\nedge e0 v0 v1\n",
                            "bogus line\n"})
        CHECK_THROWS_AS(parse_graph(bad), std::invalid_argument);
}

TEST_CASE("edge classification") {
    auto loop = classify_edges(graph("loop"));
    CHECK(loop.n == std::vector<int>{0});
    CHECK(loop.s.empty());

    auto bridge = classify_edges(graph("bridge"));
    CHECK(bridge.s == std::vector<int>{0});
    CHECK(bridge.s1 == std::vector<int>{0});
    auto closed = classify_edges(graph("bridge_closed"));
    CHECK(closed.s1 == std::vector<int>{0});

    auto banana = classify_edges(graph("banana"));
    CHECK(banana.s.empty());
    CHECK(banana.p == std::vector<EdgePair>{{0, 1}});
    CHECK(banana.p_un == std::vector<EdgePair>{{0, 1}});

    auto punctured = classify_edges(graph("banana_punctured"));
    CHECK(punctured.p.size() == 1);
    CHECK(punctured.p_un.empty());

    for (const char* name : {"loop", "bridge", "banana", "triangle", "theta", "chain", "dumbbell", "two_loops", "mixed", "square"}) {
        auto c = classify_edges(graph(name));
        for (int e : c.s1) CHECK(std::find(c.s.begin(), c.s.end(), e) != c.s.end());
        for (auto p : c.p_un) CHECK(std::find(c.p.begin(), c.p.end(), p) != c.p.end());
        CHECK(c.n.size() + c.s.size() == graph(name).edges.size());
    }
}

TEST_CASE("kernel specs") {
    CHECK(parse_kernel_spec("4+", 5).stable);
    CHECK(parse_kernel_spec("4", 6).flagged());
    CHECK_FALSE(parse_kernel_spec("4", 4).flagged());
    CHECK_THROWS_AS(parse_kernel_spec("4+", 6), std::invalid_argument);
    CHECK_THROWS_AS(parse_kernel_spec("5", 5), std::invalid_argument);
    CHECK_THROWS_AS(parse_kernel_spec("2", 1), std::invalid_argument);
}

TEST_CASE("kernel rows on small graphs") {
    for (int m = 2; m <= 12; ++m) {
        Lattice b = kernel_lattice(graph("bridge"), parse_kernel_spec("2", m));
        CHECK(b == diag_lattice(1, 1));
    }
    Lattice banana = kernel_lattice(graph("banana"), parse_kernel_spec("2", 5));
    CHECK(member(banana, vec({1, -1})));
    CHECK(member(banana, vec({5, 0})));
    CHECK_FALSE(member(banana, vec({1, 0})));

    Lattice b34 = kernel_lattice(graph("banana"), parse_kernel_spec("3", 4));
    CHECK(member(b34, vec({2, -2})));
    CHECK_FALSE(member(b34, vec({1, -1})));
    CHECK(member(b34, vec({4, 0})));

    CHECK(kernel_lattice(graph("loop"), parse_kernel_spec("4+", 7)) == diag_lattice(1, 7));
    Lattice loop3 = kernel_lattice(graph("loop"), parse_kernel_spec("2", 3));
    CHECK(member(loop3, vec({0})));
    CHECK_FALSE(member(loop3, vec({1})));
    CHECK_THROWS_AS(member(loop3, vec({1, 2})), std::invalid_argument);

    // Bridge with a genus-1 unpunctured side: k=4 uses m_6 on S1.
    CHECK(kernel_lattice(graph("bridge"), parse_kernel_spec("4", 12)) == diag_lattice(1, 2));
    CHECK(kernel_lattice(graph("bridge"), parse_kernel_spec("4", 9)) == diag_lattice(1, 3));

    for (const char* name : {"triangle", "theta", "mixed", "square", "dumbbell"})
        for (int m : {5, 7, 11}) {
            DualGraph g = graph(name);
            Lattice l = kernel_lattice(g, parse_kernel_spec("4+", m));
            CHECK(l == diag_lattice(g.edges.size(), m));
            CHECK(member(l, vec_scale(identity_matrix(g.edges.size())[0], m)));
        }
}

TEST_CASE("clutching inclusions") {
    ClutchInclusion c = clutch_inclusion({1, 0}, {1, 0}, {2, 0});
    CHECK(c.part[0] == SurfaceSig{1, 1});
    CHECK(apply(c.iota[0], Word::letter(1)) == Word::letter(1));
    CHECK(apply(c.iota[0], Word::letter(2)) == Word::letter(2));
    CHECK_THROWS_AS(clutch_inclusion({1, 0}, {1, 0}, {3, 0}), std::invalid_argument);

    ClutchInclusion d = clutch_inclusion({1, 1}, {2, 0}, {3, 1});
    NilQuotient q({3, 1});
    CHECK(coef_rank(clutch_gr1(d, 0, q)) == 2);
    CHECK(coef_rank(clutch_gr1(d, 1, q)) == 4);

    // The boundary words of the two sides multiply to the target relator up to conjugacy.
    for (auto [p0, p1, t] : std::vector<std::tuple<SurfaceSig, SurfaceSig, SurfaceSig>>{{{1, 0}, {2, 0}, {3, 0}}, {{1, 1}, {2, 0}, {3, 1}}, {{0, 2}, {3, 1}, {3, 3}}}) {
        ClutchInclusion k = clutch_inclusion(p0, p1, t);
        for (int side = 0; side < 2; ++side) {
            // The part relator maps to the identity in the target group's quotient.
            NilQuotient tq(t);
            CHECK(tq.normal_form(apply(k.iota[side], relator(k.part[side]))) == tq.identity());
        }
    }
}

TEST_CASE("clutching in the outer group") {
    SurfaceSig t{3, 0};
    ClutchInclusion c = clutch_inclusion({2, 0}, {1, 0}, t);
    W3Context tc(t, kData), c0(c.part[0], kData), c1(c.part[1], kData);
    AutoOnPi id0 = realize(parse_expr(""), c0.table()), id1 = realize(parse_expr(""), c1.table());
    CHECK(tc.pict_eq(clutch_pict(tc, c, id0, id1), tc.pict_identity()));

    PiCTElement bp = clutch_pict(tc, c, realize(parse_expr("BP[a1,a1_2]"), c0.table()), id1);
    CHECK(bp.sp() == coef_identity(6));
    CHECK_FALSE(tc.hom_ext(bp.f.s).is_zero());
    // Transport agrees with the same bounding pair written on the target.
    CHECK(tc.pict_eq(bp, tc.rho_w3(parse_expr("BP[a1,a1_2]"))));

    PiCTElement tw = clutch_pict(tc, c, id0, realize(parse_expr("T[a1]"), c1.table()));
    CHECK(tc.pict_eq(tw, tc.rho_w3(parse_expr("T[a3]"))));

    // Extensions respect composition.
    AutoOnPi x = realize(parse_expr("T[a1]*T[b2]"), c0.table()), y = realize(parse_expr("T[c1]^-1"), c0.table());
    AutoOnPi xy = realize(parse_expr("T[a1]*T[b2]*T[c1]^-1"), c0.table());
    CHECK(tc.pict_eq(clutch_pict(tc, c, xy, id1), tc.pict_mul(clutch_pict(tc, c, x, id1), clutch_pict(tc, c, y, id1))));
}
