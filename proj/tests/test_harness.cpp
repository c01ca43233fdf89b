#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "exactfa/harness.hpp"
#include "test_util.hpp"

using namespace exactfa;

namespace {

Matrix s1_truncated() {
    Matrix L(3, 1);
    L << 0.9, 0.8, 0.7;
    return L;
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = "/tmp/exactfa_test_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

// Coherent-signs endpoint (proper) and sign-incoherent endpoint (no
// rank-one fit exists, psi runs away).
Matrix proper_endpoint() {
    Matrix S(3, 3);
    S << 1, 0.5, 0.4, 0.5, 1, 0.5, 0.4, 0.5, 1;
    return S;
}

Matrix nosolution_endpoint() {
    Matrix S(3, 3);
    S << 1, 0.5, 0.4, 0.5, 1, -0.5, 0.4, -0.5, 1;
    return S;
}

} // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("simulate_covariance") {
    SUBCASE("zero loadings give a near-identity covariance") {
        Matrix L = Matrix::Zero(3, 1);
        SimulationModel m;
        m.L_true = L;
        m.psi_true = Vector::Ones(3);
        m.N = 100;
        m.seed = 5;
        Matrix S = simulate_covariance_raw(m);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(std::abs(S(i, j) - (i == j ? 1.0 : 0.0)) < 0.5);
    }
    SUBCASE("unit-variance model validates communalities") {
        Matrix L(2, 1);
        L << 1.2, 0.5;
        CHECK_THROWS_AS(SimulationModel::unit_variance(L, 100, 1), DomainError);
    }
    SUBCASE("truncated high-communality model yields a usable rounded problem") {
        SimulationModel m = SimulationModel::unit_variance(s1_truncated(), 100, 11);
        FactorProblem prob = simulate_covariance(m);
        CHECK(prob.p == 3);
        CHECK(prob.S.is_symmetric());
        for (int i = 0; i < 3; ++i) {
            CHECK(prob.S.at(i, i) > Rational(1, 2));
            CHECK(prob.S.at(i, i) < Rational(3, 2));
        }
        // Entries are exact tenths.
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(prob.S.at(i, j).get_den() <= 10);
    }
    SUBCASE("fixed seed reproduces the covariance bit-exactly") {
        SimulationModel m = SimulationModel::unit_variance(s1_truncated(), 100, 77);
        FactorProblem a = simulate_covariance(m);
        FactorProblem b = simulate_covariance(m);
        CHECK(a.S == b.S);
        SimulationModel m2 = m;
        m2.seed = 78;
        CHECK(simulate_covariance(m2).S == simulate_covariance(m2).S);
        CHECK_FALSE(simulate_covariance(m2).S == a.S);
    }
}

TEST_CASE("covariance file round-trips") {
    SUBCASE("decimal CSV parses to exact rationals") {
        std::string path = write_temp("cov.csv", "1.0,0.5\n0.5,1.0\n");
        RationalMatrix S = read_covariance_csv(path);
        CHECK(S.at(0, 1) == Rational(1, 2));
        CHECK(S.at(0, 0) == 1);
    }
    SUBCASE("rounded covariance emits decimals that reparse bit-exactly") {
        SimulationModel m = SimulationModel::unit_variance(s1_truncated(), 100, 13);
        FactorProblem prob = simulate_covariance(m);
        std::string csv = covariance_to_csv(prob.S);
        std::string path = write_temp("round.csv", csv);
        CHECK(read_covariance_csv(path) == prob.S);
    }
    SUBCASE("JSON with p/q strings") {
        std::string path = write_temp(
            "cov.json", R"({"S": [["1", "1/2"], ["1/2", "1"]]})");
        RationalMatrix S = read_covariance_json(path);
        CHECK(S.at(1, 0) == Rational(1, 2));
    }
}

TEST_CASE("uniform_grid") {
    auto g = uniform_grid(11);
    REQUIRE(g.size() == 11);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    CHECK_THROWS_AS(uniform_grid(1), DomainError);
}

TEST_CASE("interpolate_study finds the pattern transition") {
    StudyOptions opts;
    opts.starts = 15;
    opts.seed = 4;
    opts.profile_psi_points = 4;
    opts.profile_attempts = 2;
    Matrix A = proper_endpoint(), B = nosolution_endpoint();
    auto grid = uniform_grid(5);
    InterpolateResult res = interpolate_study(A, B, grid, 1, opts);
    REQUIRE(res.rows.size() == 5);

    // Endpoints agree with direct classification.
    SolutionReport direct_b = classify_numeric(B, 1, opts.starts, opts.seed);
    SolutionReport direct_a = classify_numeric(A, 1, opts.starts, opts.seed);
    CHECK(res.rows.front().report.pattern == direct_b.pattern); // t = 0 is S_b
    CHECK(res.rows.back().report.pattern == direct_a.pattern);  // t = 1 is S_a
    CHECK(direct_a.pattern == SolutionPattern::Proper);
    CHECK(direct_b.pattern == SolutionPattern::NoSolution);

    // An interior transition is located and bracketed.
    REQUIRE(res.transition.has_value());
    CHECK(res.transition->first > 0.0);
    CHECK(res.transition->second < 1.0);
    CHECK(res.transition->second - res.transition->first <= 1e-3 + 1e-12);

    // Deterministic under the fixed seed.
    InterpolateResult res2 = interpolate_study(A, B, grid, 1, opts);
    REQUIRE(res2.rows.size() == res.rows.size());
    for (std::size_t i = 0; i < res.rows.size(); ++i)
        CHECK(res2.rows[i].report.pattern == res.rows[i].report.pattern);
    CHECK(res2.transition->first == res.transition->first);

    // Profile rows cover the grid.
    CHECK(res.profile.size() == 5 * 4);
}

TEST_CASE("monte_carlo") {
    SUBCASE("single run yields a single row") {
        SimulationModel m = SimulationModel::unit_variance(s1_truncated(), 100, 3);
        StudyOptions opts;
        opts.starts = 10;
        MonteCarloResult res = monte_carlo(m, 1, opts);
        REQUIRE(res.rows.size() == 1);
        CHECK(res.proper + res.improper + res.no_solution == 1);
        CHECK(res.to_csv().rfind("run,pattern", 0) == 0);
    }
    SUBCASE("high-communality model is predominantly proper") {
        Matrix L(3, 1);
        L << 0.9, 0.8, 0.6;
        SimulationModel m = SimulationModel::unit_variance(L, 100, 21);
        StudyOptions opts;
        opts.starts = 15;
        opts.jobs = 2;
        MonteCarloResult res = monte_carlo(m, 20, opts);
        CHECK(res.proper >= 18);
    }
    SUBCASE("near-degenerate unique variance produces improper runs") {
        Matrix L(3, 1);
        L << 0.995, 0.7, 0.6; // psi_1 true = 0.00997
        SimulationModel m = SimulationModel::unit_variance(L, 100, 9);
        StudyOptions opts;
        opts.starts = 12;
        MonteCarloResult res = monte_carlo(m, 20, opts);
        CHECK(res.improper >= 1);
    }
    SUBCASE("parallel and serial agree") {
        SimulationModel m = SimulationModel::unit_variance(s1_truncated(), 100, 31);
        StudyOptions serial;
        serial.starts = 8;
        StudyOptions parallel = serial;
        parallel.jobs = 4;
        MonteCarloResult a = monte_carlo(m, 8, serial);
        MonteCarloResult b = monte_carlo(m, 8, parallel);
        REQUIRE(a.rows.size() == b.rows.size());
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            CHECK(a.rows[i].pattern == b.rows[i].pattern);
            CHECK(a.rows[i].discrepancy == b.rows[i].discrepancy);
        }
    }
}

TEST_SUITE_END();
