#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "exactfa/realsolve.hpp"
#include "test_util.hpp"

using namespace exactfa;

namespace {

const std::vector<std::string> kXY = {"x", "y"};
const std::vector<std::string> kL = {"l"};

Polynomial P(const std::string& s, const std::vector<std::string>& ring = kXY) {
    return poly_parse(s, ring);
}

std::mt19937_64 rng(99120);

// Brute-force root count of a univariate polynomial: exact sign changes on
// a dense grid (lower bound that matches for squarefree inputs with
// separated roots).
int grid_sign_changes(const UniPoly& f, const Rational& lo, const Rational& hi, int cells) {
    Rational step = (hi - lo) / cells;
    int count = 0, last = 0;
    for (int i = 0; i <= cells; ++i) {
        int s = f.sign_at(lo + step * i);
        if (s == 0) {
            ++count;  // exact hit on a grid node
            last = 0; // suppress the surrounding sign flip
            continue;
        }
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

// All real solutions of a 2-variable system by dense grid + Gauss-Newton
// polish. Independent of the algebraic pipeline.
std::vector<std::array<double, 2>> brute_force_solve2(const std::vector<Polynomial>& gens) {
    auto residual2 = [&](double x, double y) {
        double s = 0;
        for (const auto& g : gens) {
            double v = g.eval_double({x, y});
            s += v * v;
        }
        return s;
    };
    std::vector<std::array<double, 2>> found;
    for (double x0 = -4.0; x0 <= 4.0; x0 += 0.2) {
        for (double y0 = -4.0; y0 <= 4.0; y0 += 0.2) {
            double x = x0, y = y0;
            for (int it = 0; it < 60; ++it) {
                // Gauss-Newton step on the stacked system.
                double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
                for (const auto& g : gens) {
                    double v = g.eval_double({x, y});
                    double gx = g.derivative(0).eval_double({x, y});
                    double gy = g.derivative(1).eval_double({x, y});
                    a11 += gx * gx;
                    a12 += gx * gy;
                    a22 += gy * gy;
                    b1 += gx * v;
                    b2 += gy * v;
                }
                double det = a11 * a22 - a12 * a12;
                if (std::abs(det) < 1e-14) break;
                double dx = (a22 * b1 - a12 * b2) / det;
                double dy = (a11 * b2 - a12 * b1) / det;
                x -= dx;
                y -= dy;
                if (std::abs(dx) + std::abs(dy) < 1e-14) break;
            }
            if (residual2(x, y) < 1e-16 && std::abs(x) < 10 && std::abs(y) < 10) {
                bool dup = false;
                for (const auto& q : found)
                    if (std::abs(q[0] - x) < 1e-5 && std::abs(q[1] - y) < 1e-5) dup = true;
                if (!dup) found.push_back({x, y});
            }
        }
    }
    return found;
}

} // namespace

TEST_SUITE_BEGIN("realsolve");

TEST_CASE("isolation of the worked-example eliminants") {
    SUBCASE("l^3 + 5/27 l has the single real root 0") {
        auto roots = isolate_real_roots(P("l^3 + 5/27*l", kL));
        REQUIRE(roots.size() == 1);
        CHECK(roots[0].exact());
        CHECK(roots[0].lower == 0);
    }
    SUBCASE("l^2 - 1/9 has roots +-1/3") {
        auto roots = isolate_real_roots(P("l^2 - 1/9", kL));
        REQUIRE(roots.size() == 2);
        for (auto& r : roots) r.refine_below(rat_pow10_inv(12));
        CHECK(roots[0].exact());
        CHECK(roots[0].lower == Rational(-1, 3));
        CHECK(roots[1].exact());
        CHECK(roots[1].lower == Rational(1, 3));
    }
    SUBCASE("x^2 + 1 has no real roots") {
        auto roots = isolate_real_roots(P("l^2 + 1", kL));
        CHECK(roots.empty());
    }
    SUBCASE("zero polynomial is rejected") {
        CHECK_THROWS_AS(isolate_real_roots(Polynomial::zero(1)), DomainError);
    }
}

TEST_CASE("isolation handles multiplicities via squarefree preprocessing") {
    // (l - 2)^2 * (l + 1): two distinct real roots.
    auto roots = isolate_real_roots(P("l^3 - 3*l^2 + 4", kL) * Rational(1));
    REQUIRE(roots.size() == 2);
    for (auto& r : roots) r.refine_below(rat_pow10_inv(12));
    CHECK(roots[0].lower == Rational(-1));
    CHECK(roots[1].lower == Rational(2));
}

TEST_CASE("root counts match dense-grid sign changes on random polynomials") {
    std::uniform_int_distribution<int> coef(-9, 9), deg(1, 8);
    int checked = 0;
    for (int it = 0; it < 40; ++it) {
        int d = deg(rng);
        std::vector<Rational> c(d + 1);
        for (auto& x : c) x = coef(rng);
        if (c[d] == 0) c[d] = 1;
        UniPoly f(std::move(c));
        auto roots = isolate_real_roots_uni(f);
        // Oracle grid over the Cauchy-bounded range.
        Rational mx = 0;
        for (int i = 0; i < f.degree(); ++i)
            if (rat_abs(f[i]) > mx) mx = rat_abs(f[i]);
        Rational bound = 1 + mx / rat_abs(f.lead());
        int oracle = grid_sign_changes(squarefree_part(f), -bound, bound, 4096);
        CHECK(static_cast<int>(roots.size()) == oracle);
        ++checked;
    }
    CHECK(checked == 40);
}

TEST_CASE("solve_triangular on a shape-position pair") {
    GroebnerBasis G = buchberger(Ideal(2, {P("x - y"), P("y^2 - 1")}), MonomialOrder::lex(2));
    auto pts = solve_triangular(G);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].exact());
    CHECK(pts[0].coords[0].lo == Rational(-1));
    CHECK(pts[0].coords[1].lo == Rational(-1));
    CHECK(pts[1].coords[0].lo == Rational(1));
    CHECK(pts[1].coords[1].lo == Rational(1));
    for (const auto& p : pts) CHECK(p.residual_bound == 0);
}

TEST_CASE("solve_triangular rejects spurious sign combinations") {
    // x = 3y with y^2 = 1/9: only the coupled combinations survive.
    GroebnerBasis G =
        buchberger(Ideal(2, {P("x - 3*y"), P("y^2 - 1/9")}), MonomialOrder::lex(2));
    auto pts = solve_triangular(G);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].coords[0].lo == Rational(-1));
    CHECK(pts[0].coords[1].lo == Rational(-1, 3));
    CHECK(pts[1].coords[0].lo == Rational(1));
    CHECK(pts[1].coords[1].lo == Rational(1, 3));
}

TEST_CASE("solve_triangular with irrational coordinates stays certified") {
    // y^2 = 2, x = y + 1: two irrational points.
    GroebnerBasis G = buchberger(Ideal(2, {P("x - y - 1"), P("y^2 - 2")}), MonomialOrder::lex(2));
    auto pts = solve_triangular(G);
    REQUIRE(pts.size() == 2);
    double s2 = std::sqrt(2.0);
    CHECK(pts[0].approx(1) == doctest::Approx(-s2).epsilon(1e-10));
    CHECK(pts[1].approx(1) == doctest::Approx(s2).epsilon(1e-10));
    CHECK(pts[1].approx(0) == doctest::Approx(1 + s2).epsilon(1e-10));
    for (const auto& p : pts) {
        CHECK(p.residual_bound < rat_pow10_inv(10));
        for (const auto& c : p.coords) CHECK(c.width() <= rat_pow10_inv(12));
    }
}

TEST_CASE("solve_triangular point counts match brute force on random systems") {
    int done = 0;
    for (int it = 0; it < 12; ++it) {
        Ideal I = testutil::rand_zero_dim_ideal(rng, 2, 2);
        GroebnerBasis grev = buchberger(I, MonomialOrder::grevlex(2));
        if (grev.is_unit()) continue;
        GroebnerBasis rad = buchberger(zero_dim_radical(grev), MonomialOrder::grevlex(2));
        GroebnerBasis lex = fglm(rad, MonomialOrder::lex(2));
        auto pts = solve_triangular(lex);
        auto brute = brute_force_solve2(I.generators);
        CHECK(pts.size() == brute.size());
        // Every algebraic point shows up in the brute-force list.
        for (const auto& p : pts) {
            bool matched = false;
            for (const auto& q : brute)
                if (std::abs(q[0] - p.approx(0)) < 1e-6 && std::abs(q[1] - p.approx(1)) < 1e-6)
                    matched = true;
            CHECK(matched);
        }
        ++done;
    }
    CHECK(done >= 8);
}

TEST_CASE("planted rational points are recovered bit-exactly") {
    for (int it = 0; it < 6; ++it) {
        auto planted = testutil::plant_points_2d(rng, 3);
        GroebnerBasis lex = buchberger(planted.ideal, MonomialOrder::lex(2));
        auto pts = solve_triangular(lex);
        REQUIRE(pts.size() == planted.points.size());
        for (const auto& want : planted.points) {
            bool hit = false;
            for (const auto& p : pts)
                if (p.exact() && p.coords[0].lo == want[0] && p.coords[1].lo == want[1]) hit = true;
            CHECK(hit);
        }
    }
}

TEST_CASE("slice_positive_dimensional samples the line x = y") {
    GroebnerBasis G = buchberger(Ideal(2, {P("x - y")}), MonomialOrder::grevlex(2));
    auto pts = slice_positive_dimensional(G, 3, 4321);
    CHECK(pts.size() == 3);
    for (const auto& p : pts) {
        CHECK(p.sample_only);
        CHECK(p.coords[0].mid() == p.coords[1].mid());
        CHECK(p.residual_bound == 0);
    }
}

TEST_CASE("slice on x^2 + y^2 never leaves the real variety") {
    GroebnerBasis G = buchberger(Ideal(2, {P("x^2 + y^2")}), MonomialOrder::grevlex(2));
    try {
        auto pts = slice_positive_dimensional(G, 3, 99);
        for (const auto& p : pts) {
            // The only real point is the origin.
            CHECK(std::abs(p.approx(0)) < 1e-9);
            CHECK(std::abs(p.approx(1)) < 1e-9);
        }
    } catch (const EmptySample&) {
        // Acceptable: slices may miss the single real point.
    }
}

TEST_CASE("slice rejects zero-dimensional input") {
    GroebnerBasis unit = buchberger(Ideal(2, {P("1")}), MonomialOrder::grevlex(2));
    CHECK_THROWS_AS(slice_positive_dimensional(unit, 3, 1), DomainError);
}

TEST_SUITE_END();
