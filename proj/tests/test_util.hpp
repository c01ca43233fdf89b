#ifndef EXACTFA_TEST_UTIL_HPP
#define EXACTFA_TEST_UTIL_HPP

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "exactfa/groebner.hpp"
#include "exactfa/polynomial.hpp"
#include "exactfa/ratmatrix.hpp"

namespace testutil {

inline exactfa::Rational rand_rational(std::mt19937_64& rng, int num_max = 9, int den_max = 9) {
    std::uniform_int_distribution<int> num(-num_max, num_max), den(1, den_max);
    exactfa::Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

inline exactfa::Polynomial rand_polynomial(std::mt19937_64& rng, int arity, int max_deg,
                                           int terms) {
    std::uniform_int_distribution<int> e(0, max_deg);
    exactfa::Polynomial f(arity);
    for (int t = 0; t < terms; ++t) {
        exactfa::Monomial m = exactfa::Monomial::one(arity);
        int budget = max_deg;
        for (int i = 0; i < arity; ++i) {
            int ei = e(rng) % (budget + 1);
            m.exps[i] = static_cast<std::uint32_t>(ei);
            budget -= ei;
        }
        f.add_term(m, rand_rational(rng));
    }
    return f;
}

// Ideal guaranteed zero-dimensional: for each variable one generator of the
// form z_i^d + (random tail of lower total degree), so the quotient is
// finite-dimensional regardless of order.
inline exactfa::Ideal rand_zero_dim_ideal(std::mt19937_64& rng, int arity, int max_power = 3) {
    std::uniform_int_distribution<int> dd(1, max_power);
    std::vector<exactfa::Polynomial> gens;
    for (int v = 0; v < arity; ++v) {
        int d = dd(rng);
        exactfa::Polynomial g =
            exactfa::Polynomial::term(exactfa::Monomial::var(arity, v, static_cast<std::uint32_t>(d)), 1);
        exactfa::Polynomial tail = rand_polynomial(rng, arity, std::max(0, d - 1), 3);
        gens.push_back(g + tail);
    }
    return exactfa::Ideal(arity, std::move(gens));
}

// Zero-dimensional radical ideal with planted rational solutions
// {(a_i, L(a_i))}: generators prod(x - a_i) and y - L(x), L the Lagrange
// interpolation through planted y-values. Distinct a_i required.
struct PlantedIdeal {
    exactfa::Ideal ideal;
    std::vector<std::vector<exactfa::Rational>> points;
};

inline PlantedIdeal plant_points_2d(std::mt19937_64& rng, int n_points) {
    using namespace exactfa;
    std::uniform_int_distribution<int> val(-3, 3);
    std::vector<Rational> xs, ys;
    while (static_cast<int>(xs.size()) < n_points) {
        Rational a(val(rng), 1 + (rng() % 2));
        a.canonicalize();
        bool dup = false;
        for (const auto& x : xs)
            if (x == a) dup = true;
        if (dup) continue;
        xs.push_back(a);
        Rational b(val(rng), 1 + (rng() % 2));
        b.canonicalize();
        ys.push_back(b);
    }
    Polynomial px = Polynomial::constant(2, 1);
    for (const auto& a : xs)
        px = px * (Polynomial::variable(2, 0) - Polynomial::constant(2, a));
    // Lagrange interpolation in x.
    Polynomial ly(2);
    for (int i = 0; i < n_points; ++i) {
        Polynomial term = Polynomial::constant(2, ys[i]);
        for (int j = 0; j < n_points; ++j) {
            if (j == i) continue;
            term = term * (Polynomial::variable(2, 0) - Polynomial::constant(2, xs[j]));
            term = term * Rational(1 / (xs[i] - xs[j]));
        }
        ly += term;
    }
    Polynomial gy = Polynomial::variable(2, 1) - ly;
    PlantedIdeal out{Ideal(2, {px, gy}), {}};
    for (int i = 0; i < n_points; ++i) out.points.push_back({xs[i], ys[i]});
    return out;
}

// --- Worked 3x3 example (p = 3, k = 1) -----------------------------------
// Ring [psi1, psi2, psi3, l11, l21, l31]; f1..f6 assembled from the
// displayed factored expressions, independent of the library's ideal
// builder.

inline const std::vector<std::string>& example_psi_ring() {
    static const std::vector<std::string> ring = {"psi1", "psi2", "psi3", "l11", "l21", "l31"};
    return ring;
}

inline exactfa::Polynomial example_poly(int which) {
    using exactfa::Polynomial;
    auto P = [](const std::string& s) { return exactfa::poly_parse(s, example_psi_ring()); };
    switch (which) {
        case 1: return P("psi1") - (P("1") - P("l11^2"));
        case 2: return P("psi2") - (P("1") - P("l21^2"));
        case 3: return P("psi3") - (P("1") - P("l31^2"));
        case 4:
            return P("l11") -
                   (P("l11") * (P("-2/3*l11*l21") + P("4/3") * (P("l11^2") + P("psi1"))) +
                    P("l21") * (P("32/15*l11*l21") - P("6/5*l11*l31") -
                                P("2/3") * (P("l11^2") + P("psi1"))) +
                    P("l31") * (P("-6/5*l11*l21") + P("9/5*l11*l31")));
        case 5:
            return P("l21") -
                   (P("l11") * (P("4/3*l11*l21") - P("2/3") * (P("l21^2") + P("psi2"))) +
                    P("l21") * (P("-2/3*l11*l21") - P("6/5*l21*l31") +
                                P("32/15") * (P("l21^2") + P("psi2"))) +
                    P("l31") * (P("9/5*l21*l31") - P("6/5") * (P("l21^2") + P("psi2"))));
        case 6:
            return P("l31") -
                   (P("l11") * (P("4/3*l11*l31") - P("2/3*l21*l31")) +
                    P("l21") * (P("-2/3*l11*l31") + P("32/15*l21*l31") -
                                P("6/5") * (P("l31^2") + P("psi3"))) +
                    P("l31") * (P("-6/5*l21*l31") + P("9/5") * (P("l31^2") + P("psi3"))));
        default: throw std::runtime_error("example_poly: index out of range");
    }
}

// The 3x3 covariance of the worked example as an exact matrix.
inline exactfa::RationalMatrix example_covariance() {
    using exactfa::Rational;
    exactfa::RationalMatrix S(3, 3);
    Rational half(1, 2), third(1, 3), two_thirds(2, 3);
    S.at(0, 0) = 1;
    S.at(1, 1) = 1;
    S.at(2, 2) = 1;
    S.at(0, 1) = S.at(1, 0) = half;
    S.at(0, 2) = S.at(2, 0) = third;
    S.at(1, 2) = S.at(2, 1) = two_thirds;
    return S;
}

} // namespace testutil

#endif
