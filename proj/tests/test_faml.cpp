#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "exactfa/faml.hpp"
#include "test_util.hpp"

using namespace exactfa;

namespace {

std::mt19937_64 rng(55310);

FactorProblem example_problem() { return FactorProblem(testutil::example_covariance(), 1); }

// Substitute psi_i = 1 - l_i1^2 into a 6-variable worked-example polynomial,
// landing in the 3-variable loading ring. Oracle route for the ideal builder.
Polynomial substitute_psi(const Polynomial& f) {
    Polynomial out(3);
    std::vector<Polynomial> psi_of_l;
    for (int i = 0; i < 3; ++i) {
        Polynomial q = Polynomial::constant(3, 1) - Polynomial::term(Monomial::var(3, i, 2), 1);
        psi_of_l.push_back(q);
    }
    for (const auto& [m, c] : f.terms()) {
        Polynomial t = Polynomial::constant(3, c);
        for (int i = 0; i < 3; ++i)
            for (std::uint32_t e = 0; e < m.exps[i]; ++e) t = t * psi_of_l[i];
        Monomial lm({m.exps[3], m.exps[4], m.exps[5]});
        out += t * Polynomial::term(lm, 1);
    }
    return out;
}

// The seven stationary points of the worked example as (psi, l) tuples.
std::vector<std::vector<Rational>> example_solutions() {
    auto R = [](int n, int d) { return Rational(n, d); };
    return {
        {R(0, 1), R(3, 4), R(8, 9), R(1, 1), R(1, 2), R(1, 3)},
        {R(0, 1), R(3, 4), R(8, 9), R(-1, 1), R(-1, 2), R(-1, 3)},
        {R(3, 4), R(0, 1), R(5, 9), R(1, 2), R(1, 1), R(2, 3)},
        {R(3, 4), R(0, 1), R(5, 9), R(-1, 2), R(-1, 1), R(-2, 3)},
        {R(8, 9), R(5, 9), R(0, 1), R(1, 3), R(2, 3), R(1, 1)},
        {R(8, 9), R(5, 9), R(0, 1), R(-1, 3), R(-2, 3), R(-1, 1)},
        {R(1, 1), R(1, 1), R(1, 1), R(0, 1), R(0, 1), R(0, 1)},
    };
}

} // namespace

TEST_SUITE_BEGIN("faml");

TEST_CASE("rational_matrix_inverse") {
    SUBCASE("worked-example covariance") {
        RationalMatrix S = testutil::example_covariance();
        RationalMatrix inv = rational_matrix_inverse(S);
        RationalMatrix want(3, 3);
        want.at(0, 0) = Rational(4, 3);
        want.at(0, 1) = want.at(1, 0) = Rational(-2, 3);
        want.at(0, 2) = want.at(2, 0) = 0;
        want.at(1, 1) = Rational(32, 15);
        want.at(1, 2) = want.at(2, 1) = Rational(-6, 5);
        want.at(2, 2) = Rational(9, 5);
        CHECK(inv == want);
        CHECK(S * inv == RationalMatrix::identity(3));
        CHECK(S.determinant() == Rational(5, 12));
    }
    SUBCASE("identity") {
        CHECK(rational_matrix_inverse(RationalMatrix::identity(4)) == RationalMatrix::identity(4));
    }
    SUBCASE("random SPD matrix verifies by product") {
        std::uniform_int_distribution<int> v(-4, 4);
        RationalMatrix A(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) A.at(i, j) = Rational(v(rng), 1 + (rng() % 3));
        RationalMatrix S = A * A.transpose() + RationalMatrix::identity(4) * Rational(5);
        CHECK(S * rational_matrix_inverse(S) == RationalMatrix::identity(4));
    }
    SUBCASE("singular matrix names the ridge") {
        RationalMatrix Z(2, 2);
        Z.at(0, 0) = 1;
        Z.at(0, 1) = Z.at(1, 0) = 1;
        Z.at(1, 1) = 1;
        CHECK_THROWS_AS(rational_matrix_inverse(Z), SingularCovariance);
    }
}

TEST_CASE("FactorProblem validation") {
    RationalMatrix S = testutil::example_covariance();
    CHECK_NOTHROW(FactorProblem(S, 1));
    CHECK_THROWS_AS(FactorProblem(S, 0), DomainError);
    CHECK_THROWS_AS(FactorProblem(S, 3), DomainError);

    RationalMatrix bad = S;
    bad.at(0, 1) = Rational(7);
    CHECK_THROWS_AS(FactorProblem(bad, 1), StructuralError);

    // Not positive definite without a ridge.
    RationalMatrix flat(2, 2);
    flat.at(0, 0) = flat.at(1, 1) = 1;
    flat.at(0, 1) = flat.at(1, 0) = 1;
    CHECK_THROWS_AS(FactorProblem(flat, 1), SingularCovariance);
    FactorProblem ridged(flat, 1, Rational(1, 10));
    CHECK(ridged.S.at(0, 0) == Rational(11, 10));
}

TEST_CASE("likelihood ideal matches the worked-example polynomials") {
    FactorProblem prob = example_problem();
    Ideal J = build_likelihood_ideal(prob);
    REQUIRE(J.generators.size() == 3);
    // Oracle route: f4..f6 with psi substituted back.
    CHECK(J.generators[0] == substitute_psi(testutil::example_poly(4)));
    CHECK(J.generators[1] == substitute_psi(testutil::example_poly(5)));
    CHECK(J.generators[2] == substitute_psi(testutil::example_poly(6)));
}

TEST_CASE("diagonal covariance admits the zero loading") {
    RationalMatrix D = RationalMatrix::identity(3);
    D.at(1, 1) = Rational(2);
    FactorProblem prob(D, 1);
    Ideal J = build_likelihood_ideal(prob);
    std::vector<Rational> zero(prob.n_loadings(), Rational(0));
    for (const auto& g : J.generators) CHECK(g.eval(zero) == 0);
}

TEST_CASE("explicit-psi system reproduces f1..f6") {
    FactorProblem prob = example_problem();
    ExplicitPsiSystem sys = build_explicit_psi_system(prob);
    CHECK(sys.names == testutil::example_psi_ring());
    REQUIRE(sys.ideal.generators.size() == 6);
    for (int i = 1; i <= 6; ++i) CHECK(sys.ideal.generators[i - 1] == testutil::example_poly(i));
}

TEST_CASE("decomposition tree of the worked example") {
    FactorProblem prob = example_problem();
    Ideal J = build_likelihood_ideal(prob);
    auto leaves = decompose(J, prob);
    REQUIRE(leaves.size() == 8);
    std::vector<std::string> labels;
    for (const auto& n : leaves) labels.push_back(n.label);
    CHECK(labels == std::vector<std::string>{"000", "001", "010", "011", "100", "101", "110", "111"});
    auto status_of = [&](const std::string& l) {
        for (const auto& n : leaves)
            if (n.label == l) return n.status;
        return NodeStatus::Budget;
    };
    for (const auto& l : {"000", "001", "010", "100"}) CHECK(status_of(l) == NodeStatus::Empty);
    for (const auto& l : {"011", "101", "110", "111"}) CHECK(status_of(l) == NodeStatus::ZeroDim);
}

TEST_CASE("unit input ideal decomposes to a single empty root") {
    FactorProblem prob = example_problem();
    Ideal unit(prob.n_loadings(), {Polynomial::constant(prob.n_loadings(), 1)});
    auto leaves = decompose(unit, prob);
    REQUIRE(leaves.size() == 1);
    CHECK(leaves[0].label.empty());
    CHECK(leaves[0].status == NodeStatus::Empty);
}

TEST_CASE("enumerate_solutions reproduces the seven exact solutions") {
    FactorProblem prob = example_problem();
    EnumerationResult res = enumerate_solutions(prob);
    CHECK(res.branch_errors.empty());
    REQUIRE(res.solutions.size() == 7);

    std::set<std::vector<std::string>> got, want;
    for (const auto& s : res.solutions) {
        CHECK(s.exact);
        CHECK_FALSE(s.sample_only);
        CHECK(s.residual_bound == 0);
        std::vector<std::string> tuple;
        for (const auto& iv : s.psi) tuple.push_back(rat_str(iv.lo));
        for (const auto& iv : s.point.coords) tuple.push_back(rat_str(iv.lo));
        got.insert(tuple);
    }
    for (const auto& sol : example_solutions()) {
        std::vector<std::string> tuple;
        for (const auto& q : sol) tuple.push_back(rat_str(q));
        want.insert(tuple);
    }
    CHECK(got == want);

    // Sign identifiability: the seven points collapse to four classes.
    CHECK(count_sign_classes(res.solutions) == 4);

    // psi-splitter semantics: a '0' bit pins psi_i to exactly zero, a '1'
    // bit excludes zero.
    for (const auto& s : res.solutions) {
        for (int i = 0; i < 3; ++i) {
            if (s.leaf[i] == '0')
                CHECK(s.psi[i].lo == 0);
            else
                CHECK(s.psi[i].lo != 0);
        }
    }
}

TEST_CASE("solution set is invariant under splitter permutation") {
    FactorProblem prob = example_problem();
    Ideal J = build_likelihood_ideal(prob);
    auto splitters = psi_splitters(prob);
    std::reverse(splitters.begin(), splitters.end());
    auto leaves = decompose_with_splitters(J, splitters, {});

    std::set<std::vector<std::string>> got;
    MonomialOrder lex = MonomialOrder::lex(J.arity);
    for (const auto& node : leaves) {
        if (node.status != NodeStatus::ZeroDim) continue;
        auto pts = solve_triangular(fglm(*node.gb_grevlex, lex));
        for (const auto& p : pts) {
            std::vector<std::string> tuple;
            for (const auto& c : p.coords) tuple.push_back(rat_str(c.lo));
            got.insert(tuple);
        }
    }
    std::set<std::vector<std::string>> want;
    for (const auto& sol : example_solutions())
        want.insert({rat_str(sol[3]), rat_str(sol[4]), rat_str(sol[5])});
    CHECK(got == want);
}

TEST_CASE("identity covariance: unit axis points exact, axis lines sampled") {
    FactorProblem prob(RationalMatrix::identity(3), 1);
    Ideal J = build_likelihood_ideal(prob);
    // The zero loading solves the equations.
    std::vector<Rational> zero(3, Rational(0));
    for (const auto& g : J.generators) CHECK(g.eval(zero) == 0);

    EnumerationResult res = enumerate_solutions(prob);
    int exact_units = 0, samples = 0;
    for (const auto& s : res.solutions) {
        if (s.sample_only) {
            ++samples;
            // Sample points stay on a coordinate axis.
            int off_axis = 0;
            for (int t = 0; t < 3; ++t)
                if (std::abs(s.point.approx(t)) > 1e-9) ++off_axis;
            CHECK(off_axis <= 1);
        } else {
            ++exact_units;
            CHECK(s.exact);
            int on = -1;
            for (int t = 0; t < 3; ++t)
                if (s.point.coords[t].lo != 0) on = t;
            REQUIRE(on >= 0);
            CHECK(rat_abs(s.point.coords[on].lo) == 1);
        }
    }
    CHECK(exact_units == 6);
    CHECK(samples >= 1);
}

TEST_CASE("recover_psi") {
    RationalMatrix S = testutil::example_covariance();
    SUBCASE("zero loading gives diag(S)") {
        auto psi = recover_psi({{0.0}, {0.0}, {0.0}}, S);
        CHECK(psi == std::vector<double>{1.0, 1.0, 1.0});
    }
    SUBCASE("worked-example loading") {
        auto psi = recover_psi({{1.0}, {0.5}, {1.0 / 3.0}}, S);
        CHECK(psi[0] == doctest::Approx(0.0));
        CHECK(psi[1] == doctest::Approx(0.75));
        CHECK(psi[2] == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
    }
    SUBCASE("negative branch passes through unclamped") {
        auto psi = recover_psi({{1.1}, {0.0}, {0.0}}, RationalMatrix::identity(3));
        CHECK(psi[0] == doctest::Approx(-0.21));
        CHECK(psi[1] == 1.0);
    }
}

TEST_CASE("canonicalize_sign") {
    SUBCASE("all-negative column flips") {
        auto L = canonicalize_sign({{-1.0}, {-0.5}, {-1.0 / 3.0}});
        CHECK(L[0][0] == 1.0);
        CHECK(L[1][0] == 0.5);
        CHECK(L[2][0] == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("zero column unchanged") {
        auto L = canonicalize_sign({{0.0}, {0.0}});
        CHECK(L[0][0] == 0.0);
        CHECK(L[1][0] == 0.0);
    }
    SUBCASE("largest-magnitude rule with documented tie-break") {
        // Column (-0.5, 0.9): the 0.9 entry dominates and is already
        // nonnegative, so nothing flips.
        auto L = canonicalize_sign({{-0.5}, {0.9}});
        CHECK(L[0][0] == -0.5);
        CHECK(L[1][0] == 0.9);
        // Exact magnitude tie: earliest index wins, so (-0.7, 0.7) flips.
        auto T = canonicalize_sign({{-0.7}, {0.7}});
        CHECK(T[0][0] == 0.7);
        CHECK(T[1][0] == -0.7);
    }
    SUBCASE("idempotent on random matrices") {
        std::uniform_real_distribution<double> u(-1, 1);
        for (int it = 0; it < 20; ++it) {
            std::vector<std::vector<double>> L(4, std::vector<double>(2));
            for (auto& row : L)
                for (auto& x : row) x = u(rng);
            auto c1 = canonicalize_sign(L);
            CHECK(canonicalize_sign(c1) == c1);
        }
    }
}

TEST_SUITE_END();
