#ifndef EXACTFA_UNIPOLY_HPP
#define EXACTFA_UNIPOLY_HPP

#include <utility>
#include <vector>

#include "exactfa/polynomial.hpp"
#include "exactfa/rational.hpp"

namespace exactfa {

// Dense univariate polynomial over the rationals, ascending coefficients.
// Workhorse for Sturm sequences, eliminants, and gcds.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static UniPoly zero() { return UniPoly(); }
    static UniPoly constant(const Rational& c) { return UniPoly({c}); }

    // Requires every term of f to involve only variable `var`.
    static UniPoly from_polynomial(const Polynomial& f, int var);

    // Embeds into a ring of the given arity as a polynomial in variable `var`.
    Polynomial to_polynomial(int arity, int var) const;

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const Rational& operator[](int i) const { return c_[i]; }
    const std::vector<Rational>& coeffs() const { return c_; }
    const Rational& lead() const { return c_.back(); }

    Rational eval(const Rational& x) const;
    int sign_at(const Rational& x) const;

    UniPoly derivative() const;
    UniPoly operator-() const;
    UniPoly operator+(const UniPoly& o) const;
    UniPoly operator-(const UniPoly& o) const;
    UniPoly operator*(const UniPoly& o) const;
    UniPoly operator*(const Rational& s) const;
    bool operator==(const UniPoly& o) const = default;

    // Euclidean division; o nonzero.
    std::pair<UniPoly, UniPoly> divrem(const UniPoly& o) const;

    UniPoly monic() const;
    // Integer coefficients, content 1, positive leading coefficient.
    UniPoly primitive() const;

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

// Monic gcd over the rationals.
UniPoly unipoly_gcd(const UniPoly& a, const UniPoly& b);

// f / gcd(f, f'): same distinct roots, all simple.
UniPoly squarefree_part(const UniPoly& f);

// Number of distinct real roots of a squarefree f (full real line).
int sturm_real_root_count(const UniPoly& squarefree);

// Rational with the smallest denominator in [lo, hi].
Rational simplest_rational_in(const Rational& lo, const Rational& hi);

// Isolating interval for one real root of `polynomial`. A degenerate
// interval (lower == upper) encodes an exact rational root; otherwise the
// endpoints are non-roots with opposite signs.
struct IsolatingInterval {
    Rational lower, upper;
    UniPoly polynomial; // squarefree

    bool exact() const { return lower == upper; }
    Rational width() const { return upper - lower; }
    Rational midpoint() const { return (lower + upper) / 2; }

    // Bisects until width <= target (or the root turns out rational). Exact
    // arithmetic, so this always certifies.
    void refine_below(const Rational& target_width);
};

// One interval per distinct real root, ascending. Throws DomainError for
// the zero polynomial. Applies square-free preprocessing.
std::vector<IsolatingInterval> isolate_real_roots_uni(const UniPoly& f);

} // namespace exactfa

#endif
