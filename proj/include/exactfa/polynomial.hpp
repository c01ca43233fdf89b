#ifndef EXACTFA_POLYNOMIAL_HPP
#define EXACTFA_POLYNOMIAL_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "exactfa/monomial.hpp"
#include "exactfa/rational.hpp"

namespace exactfa {

// Sparse multivariate polynomial over the rationals. Terms are kept in a
// map keyed by exponent vector; zero coefficients are never stored, so the
// zero polynomial has an empty term map.
class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational>;

    Polynomial() : arity_(0) {}
    explicit Polynomial(int arity) : arity_(arity) {}

    static Polynomial zero(int arity) { return Polynomial(arity); }
    static Polynomial constant(int arity, const Rational& c);
    static Polynomial variable(int arity, int index);
    static Polynomial term(const Monomial& m, const Rational& c);

    int arity() const { return arity_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    int total_degree() const; // -1 for the zero polynomial

    // Adds c*m, dropping the term if the sum cancels.
    void add_term(const Monomial& m, const Rational& c);

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(const Rational& c) const;
    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }

    bool operator==(const Polynomial& o) const = default;

    // The order-maximal term. Throws DomainError for the zero polynomial.
    std::pair<Monomial, Rational> leading_term(const MonomialOrder& ord) const;

    // Multiplies by 1/leading coefficient.
    Polynomial monic(const MonomialOrder& ord) const;

    // Scales to integer coefficients with content 1 and positive leading
    // coefficient under ord. Same ideal membership, smaller numbers.
    Polynomial primitive(const MonomialOrder& ord) const;

    // Exact evaluation; coords.size() == arity.
    Rational eval(const std::vector<Rational>& coords) const;
    double eval_double(const std::vector<double>& coords) const;

    // d/d(var); univariate callers use var = 0.
    Polynomial derivative(int var) const;

    // Substitutes coords[i] for variable i wherever mask[i] is true,
    // producing a polynomial in the same ring.
    Polynomial substitute(const std::vector<bool>& mask, const std::vector<Rational>& coords) const;

private:
    int arity_;
    TermMap terms_;
};

std::pair<Monomial, Rational> leading_term(const Polynomial& f, const MonomialOrder& ord);
Monomial leading_monomial(const Polynomial& f, const MonomialOrder& ord);

// Remainder of f on division by G under ord: no monomial of the result is
// divisible by any LM(g), and f - result lies in <G>. Deterministic given
// ord and the ordering of G.
Polynomial normal_form(const Polynomial& f, const std::vector<Polynomial>& G, const MonomialOrder& ord);

// Plain text form, e.g. "3/4*l11^2*l21 - 1/2". Round-trips exactly.
std::string poly_str(const Polynomial& f, const std::vector<std::string>& var_names);
Polynomial poly_parse(const std::string& text, const std::vector<std::string>& var_names);

} // namespace exactfa

#endif
