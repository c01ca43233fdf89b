#ifndef EXACTFA_GROEBNER_HPP
#define EXACTFA_GROEBNER_HPP

#include <cstddef>
#include <vector>

#include "exactfa/polynomial.hpp"
#include "exactfa/unipoly.hpp"

namespace exactfa {

// A finitely generated polynomial ideal, represented by its generators.
struct Ideal {
    int arity = 0;
    std::vector<Polynomial> generators; // nonzero by construction

    Ideal() = default;
    Ideal(int arity, std::vector<Polynomial> gens);

    bool empty() const { return generators.empty(); }
};

enum class ZeroDimFlag { Unknown, Yes, No };

// Reduced Groebner basis: elements monic, no monomial of one element
// divisible by the leading monomial of another, sorted descending by
// leading monomial. Reduced bases are unique per (ideal, order), which is
// what every bit-exactness test in this project leans on.
struct GroebnerBasis {
    MonomialOrder order;
    std::vector<Polynomial> elements;
    bool reduced = false;
    ZeroDimFlag zero_dimensional = ZeroDimFlag::Unknown;

    int arity() const { return order.arity(); }
    bool is_unit() const {
        return elements.size() == 1 && elements[0] == Polynomial::constant(arity(), 1);
    }
    Ideal as_ideal() const { return Ideal(arity(), elements); }

    bool operator==(const GroebnerBasis& o) const {
        return order == o.order && elements == o.elements;
    }
};

// Pair-queue / degree budgets for Buchberger. Exceeding them raises
// ResourceExceeded instead of hanging; callers treat that per branch.
struct GroebnerBudget {
    std::size_t max_basis = 5000;
    int max_degree = 60;
};

// Reduced Groebner basis of <I> under ord (Buchberger with the coprime and
// chain criteria, degree-ordered pair queue).
GroebnerBasis buchberger(const Ideal& I, const MonomialOrder& ord,
                         const GroebnerBudget& budget = {});

// Generators concatenated; V(I + K) = V(I) n V(K).
Ideal ideal_sum(const Ideal& I, const Ideal& K);

// Saturation I : <h>^inf via the extra-variable recipe: y is appended as
// the last ring variable but ranked highest in lex; the y-free part of the
// reduced lex basis of <gens, 1 - y h> is returned (it is itself a reduced
// lex basis of the saturation).
Ideal saturate(const Ideal& I, const Polynomial& h, const GroebnerBudget& budget = {});

// Finiteness test: every variable shows up as a pure-power leading
// monomial of some element.
bool is_zero_dimensional(const GroebnerBasis& G);

// Monomials not divisible by any leading monomial of G; a basis of the
// quotient ring. Requires zero-dimensional G.
std::vector<Monomial> standard_monomials(const GroebnerBasis& G);

// Minimal monic univariate polynomial of `var` inside the ideal, found by
// linear algebra over the quotient basis. Requires zero-dimensional G.
UniPoly univariate_eliminant(const GroebnerBasis& G, int var);

// Order conversion for zero-dimensional ideals; output equals
// buchberger(I, target) bit-exactly.
GroebnerBasis fglm(const GroebnerBasis& G, const MonomialOrder& target);

// Adds the square-free part of every variable's eliminant. The result is
// radical with the same variety, all multiplicities one.
Ideal zero_dim_radical(const GroebnerBasis& G);

} // namespace exactfa

#endif
