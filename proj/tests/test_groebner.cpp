#include <doctest.h>

#include <random>

#include "exactfa/groebner.hpp"
#include "test_util.hpp"

using namespace exactfa;

namespace {

const std::vector<std::string> kXY = {"x", "y"};

Polynomial P(const std::string& s, const std::vector<std::string>& ring = kXY) {
    return poly_parse(s, ring);
}

GroebnerBasis gb_of(std::vector<Polynomial> gens, const MonomialOrder& ord) {
    return buchberger(Ideal(ord.arity(), std::move(gens)), ord);
}

std::mt19937_64 rng(77001);

} // namespace

TEST_SUITE_BEGIN("groebner");

TEST_CASE("buchberger on <x^2-1, x*y-1> under lex") {
    GroebnerBasis G = gb_of({P("x^2 - 1"), P("x*y - 1")}, MonomialOrder::lex(2));
    REQUIRE(G.elements.size() == 2);
    CHECK(G.elements[0] == P("x - y"));
    CHECK(G.elements[1] == P("y^2 - 1"));
    CHECK(G.reduced);
    // Both inputs are members.
    CHECK(normal_form(P("x^2 - 1"), G.elements, G.order).is_zero());
    CHECK(normal_form(P("x*y - 1"), G.elements, G.order).is_zero());
}

TEST_CASE("unit ideal collapses to {1}") {
    GroebnerBasis G = gb_of({P("x - 1"), P("x - 2")}, MonomialOrder::lex(2));
    CHECK(G.is_unit());
    CHECK(is_zero_dimensional(G));
}

TEST_CASE("normal_form vanishes exactly on ideal members") {
    for (int it = 0; it < 10; ++it) {
        Ideal I = testutil::rand_zero_dim_ideal(rng, 2);
        GroebnerBasis G = buchberger(I, MonomialOrder::grevlex(2));
        for (const auto& g : I.generators) CHECK(normal_form(g, G.elements, G.order).is_zero());
        // Random combinations are members too.
        Polynomial combo = I.generators[0] * testutil::rand_polynomial(rng, 2, 2, 3) +
                           I.generators[1] * testutil::rand_polynomial(rng, 2, 2, 3);
        CHECK(normal_form(combo, G.elements, G.order).is_zero());
    }
}

TEST_CASE("ideal_sum concatenates and intersects varieties") {
    Ideal I(2, {P("x - 1")});
    Ideal K(2, {P("y - 2")});
    Ideal S = ideal_sum(I, K);
    CHECK(S.generators.size() == 2);
    CHECK(P("x - 1").eval({Rational(1), Rational(2)}) == 0);
    GroebnerBasis G = buchberger(S, MonomialOrder::lex(2));
    // V(I+K) = {(1,2)}.
    CHECK(G.elements == std::vector<Polynomial>{P("x - 1"), P("y - 2")});

    Ideal empty_added = ideal_sum(I, Ideal(2, {}));
    CHECK(empty_added.generators.size() == 1);

    Ideal with_unit = ideal_sum(I, Ideal(2, {P("1")}));
    CHECK(buchberger(with_unit, MonomialOrder::lex(2)).is_unit());
}

TEST_CASE("saturation <x*y> : <x>^inf = <y>") {
    Ideal I(2, {P("x*y")});
    Ideal S = saturate(I, P("x"));
    GroebnerBasis G = buchberger(S, MonomialOrder::lex(2));
    REQUIRE(G.elements.size() == 1);
    CHECK(G.elements[0] == P("y"));
}

TEST_CASE("saturation by a unit returns the same ideal") {
    Ideal I(2, {P("x^2 - y"), P("x*y - 1")});
    Ideal S = saturate(I, P("3/7"));
    CHECK(buchberger(S, MonomialOrder::grevlex(2)) == buchberger(I, MonomialOrder::grevlex(2)));
    CHECK_THROWS_AS(saturate(I, Polynomial::zero(2)), DomainError);
}

TEST_CASE("saturation removes a planted component") {
    // V(<x*(y-1), x*(y+2)>) = {x=0} union {(anything with y=1 and y=-2)} = the y-axis plus nothing;
    // saturating <x^2*y - x^2> by x leaves <y - 1>.
    Ideal I(2, {P("x^2*y - x^2")});
    GroebnerBasis G = buchberger(saturate(I, P("x")), MonomialOrder::lex(2));
    REQUIRE(G.elements.size() == 1);
    CHECK(G.elements[0] == P("y - 1"));
}

TEST_CASE("is_zero_dimensional from leading monomials") {
    GroebnerBasis line = gb_of({P("x - y")}, MonomialOrder::lex(2));
    CHECK_FALSE(is_zero_dimensional(line));

    GroebnerBasis pts = gb_of({P("x^2 - 1"), P("y^3 - y")}, MonomialOrder::grevlex(2));
    CHECK(is_zero_dimensional(pts));

    GroebnerBasis unit = gb_of({P("5")}, MonomialOrder::lex(2));
    CHECK(is_zero_dimensional(unit));
}

TEST_CASE("fglm equals direct lex Buchberger") {
    SUBCASE("worked pair") {
        GroebnerBasis grev = gb_of({P("x^2 - 1"), P("x*y - 1")}, MonomialOrder::grevlex(2));
        GroebnerBasis lex = fglm(grev, MonomialOrder::lex(2));
        CHECK(lex == gb_of({P("x^2 - 1"), P("x*y - 1")}, MonomialOrder::lex(2)));
        CHECK(lex.elements == std::vector<Polynomial>{P("x - y"), P("y^2 - 1")});
    }
    SUBCASE("single variable is order-insensitive") {
        std::vector<std::string> ring = {"x"};
        GroebnerBasis g = gb_of({poly_parse("x^2 - 2", ring)}, MonomialOrder::grevlex(1));
        GroebnerBasis l = fglm(g, MonomialOrder::lex(1));
        REQUIRE(l.elements.size() == 1);
        CHECK(l.elements[0] == poly_parse("x^2 - 2", ring));
    }
    SUBCASE("randomized zero-dimensional ideals") {
        for (int it = 0; it < 8; ++it) {
            int arity = 2 + static_cast<int>(rng() % 2);
            Ideal I = testutil::rand_zero_dim_ideal(rng, arity);
            GroebnerBasis grev = buchberger(I, MonomialOrder::grevlex(arity));
            REQUIRE(is_zero_dimensional(grev));
            CHECK(fglm(grev, MonomialOrder::lex(arity)) == buchberger(I, MonomialOrder::lex(arity)));
        }
    }
    SUBCASE("rejects positive-dimensional input") {
        GroebnerBasis line = gb_of({P("x - y")}, MonomialOrder::grevlex(2));
        CHECK_THROWS_AS(fglm(line, MonomialOrder::lex(2)), DomainError);
    }
}

TEST_CASE("reduced basis is invariant under generator presentation") {
    for (int it = 0; it < 6; ++it) {
        Ideal I = testutil::rand_zero_dim_ideal(rng, 2);
        MonomialOrder ord = it % 2 == 0 ? MonomialOrder::lex(2) : MonomialOrder::grevlex(2);
        GroebnerBasis G1 = buchberger(I, ord);
        // Permuted generators.
        std::vector<Polynomial> perm(I.generators.rbegin(), I.generators.rend());
        CHECK(buchberger(Ideal(2, perm), ord) == G1);
        // Invertible rational recombination spanning the same ideal.
        std::vector<Polynomial> mixed = {I.generators[0] * Rational(3, 5),
                                         I.generators[1] + I.generators[0] * Rational(7, 2)};
        CHECK(buchberger(Ideal(2, mixed), ord) == G1);
    }
}

TEST_CASE("univariate eliminant and zero-dimensional radical") {
    SUBCASE("double root collapses") {
        std::vector<std::string> ring = {"x"};
        GroebnerBasis G = gb_of({poly_parse("x^2", ring)}, MonomialOrder::lex(1));
        GroebnerBasis R = buchberger(zero_dim_radical(G), MonomialOrder::lex(1));
        REQUIRE(R.elements.size() == 1);
        CHECK(R.elements[0] == poly_parse("x", ring));
    }
    SUBCASE("planted double point") {
        GroebnerBasis G = gb_of({P("x^2 - 2*x + 1"), P("y - x")}, MonomialOrder::lex(2));
        GroebnerBasis R = buchberger(zero_dim_radical(G), MonomialOrder::lex(2));
        CHECK(R.elements == std::vector<Polynomial>{P("x - 1"), P("y - 1")});
        // Same variety: (1,1) still solves everything.
        for (const auto& g : R.elements) CHECK(g.eval({Rational(1), Rational(1)}) == 0);
    }
    SUBCASE("already radical ideal is unchanged") {
        GroebnerBasis G = gb_of({P("x^2 - 1"), P("x*y - 1")}, MonomialOrder::grevlex(2));
        GroebnerBasis R = buchberger(zero_dim_radical(G), MonomialOrder::grevlex(2));
        CHECK(R == G);
    }
    SUBCASE("eliminant is the minimal univariate member") {
        GroebnerBasis G = gb_of({P("x - y^2"), P("y^3 - 2")}, MonomialOrder::grevlex(2));
        UniPoly ex = univariate_eliminant(G, 0);
        // x = y^2 and y^3 = 2 force x^3 = 4.
        CHECK(ex == UniPoly({Rational(-4), Rational(0), Rational(0), Rational(1)}));
        UniPoly ey = univariate_eliminant(G, 1);
        CHECK(ey == UniPoly({Rational(-2), Rational(0), Rational(0), Rational(1)}));
    }
}

TEST_CASE("budget exhaustion raises ResourceExceeded") {
    GroebnerBudget tiny;
    tiny.max_basis = 2; // <x^2-1, x*y-1> needs at least one new element
    CHECK_THROWS_AS(buchberger(Ideal(2, {P("x^2 - 1"), P("x*y - 1")}), MonomialOrder::lex(2), tiny),
                    ResourceExceeded);
}

TEST_CASE("decomposition identity on planted ideals") {
    // Every point of V(I) lands in V(I + <h>) or V(I : h^inf), and each of
    // those varieties sits inside V(I).
    for (int it = 0; it < 6; ++it) {
        auto planted = testutil::plant_points_2d(rng, 2 + static_cast<int>(rng() % 2));
        Polynomial h = testutil::rand_polynomial(rng, 2, 2, 3);
        if (h.is_zero()) continue;
        Ideal sum = ideal_sum(planted.ideal, Ideal(2, {h}));
        Ideal sat = saturate(planted.ideal, h);
        GroebnerBasis gsum = buchberger(sum, MonomialOrder::lex(2));
        GroebnerBasis gsat = buchberger(sat, MonomialOrder::lex(2));
        for (const auto& pt : planted.points) {
            bool in_sum = true, in_sat = true;
            for (const auto& g : gsum.elements)
                if (g.eval(pt) != 0) in_sum = false;
            for (const auto& g : gsat.elements)
                if (g.eval(pt) != 0) in_sat = false;
            CHECK((in_sum || in_sat));
        }
        // Reverse containment: generators of I vanish on both pieces, which
        // membership certifies algebraically.
        for (const auto& g : planted.ideal.generators) {
            CHECK(normal_form(g, gsum.elements, gsum.order).is_zero());
            if (!gsat.elements.empty())
                CHECK(normal_form(g, gsat.elements, gsat.order).is_zero());
        }
    }
}

TEST_SUITE_END();
