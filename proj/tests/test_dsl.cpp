#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "w3/dsl.hpp"

using namespace w3;

TEST_CASE("parse forms") {
    MappingClassExpr e = parse_expr("T[a1] * BP[c1,c1']^-2 * SEP[1]^3 * (T[b1]*T[a2])^-1");
    REQUIRE(e.terms.size() == 5);
    CHECK(e.terms[1].kind == Term::Kind::BoundingPair);
    CHECK(e.terms[1].b == "c1'");
    CHECK(e.terms[1].exp == -2);
    CHECK(e.terms[2].kind == Term::Kind::Separating);
    CHECK(e.terms[2].k == 1);
    CHECK(e.terms[3].a == "a2");
    CHECK(e.terms[3].exp == -1);
    CHECK(to_string(e) == "T[a1]*BP[c1,c1']^-2*SEP[1]^3*T[a2]^-1*T[b1]^-1");
    CHECK(parse_expr("").terms.empty());
    CHECK(parse_expr(" 1 ").terms.empty());
    CHECK(to_string(parse_expr("")) == "1");
    CHECK(parse_expr("(T[a1])^0").terms.empty());
    CHECK(parse_expr("(T[a1]*T[b1])^2").terms.size() == 4);
}

TEST_CASE("parse errors") {
    for (const char* bad : {"T[a1", "T[]", "X[a1]", "T[a1]*", "T[a1]^", "SEP[-1]", "BP[a1]", "T[a1] T[b1]", "(T[a1]"})
        CHECK_THROWS_AS(parse_expr(bad), std::invalid_argument);
}

TEST_CASE("round trip on generated expressions") {
    std::mt19937_64 rng(9);
    const std::vector<std::string> names{"a1", "b2", "c1", "c1'", "a1_2", "a2_u1", "d2"};
    for (int i = 0; i < 500; ++i) {
        MappingClassExpr e;
        int len = static_cast<int>(rng() % 6);
        for (int j = 0; j < len; ++j) {
            Term t;
            switch (rng() % 3) {
            case 0:
                t.a = names[rng() % names.size()];
                break;
            case 1:
                t.kind = Term::Kind::BoundingPair;
                t.a = names[rng() % names.size()];
                t.b = names[rng() % names.size()];
                break;
            default:
                t.kind = Term::Kind::Separating;
                t.k = static_cast<int>(rng() % 4);
            }
            t.exp = static_cast<long long>(rng() % 7) - 3;
            if (t.exp == 0) t.exp = 1;
            e.terms.push_back(t);
        }
        CHECK(parse_expr(to_string(e)) == e);
        CHECK(inverse(inverse(e)) == e);
    }
}

TEST_CASE("expression lists") {
    ExprList l = parse_expr_list("# header\nsignature = 2,1\n\nT[a1]  # trailing\nBP[a1,a1_2]\n");
    REQUIRE(l.sig.has_value());
    CHECK(*l.sig == SurfaceSig{2, 1});
    CHECK(l.exprs.size() == 2);
    CHECK(l.source[0] == "T[a1]");
    CHECK_THROWS_AS(parse_expr_list("T[a1]\nT[\n"), std::invalid_argument);
    CHECK(parse_expr_list("").exprs.empty());
    CHECK(torelli_list_path({3, 0}, "d") == "d/torelli/g3_n0.lst");
}
