#ifndef EXACTFA_MONOMIAL_HPP
#define EXACTFA_MONOMIAL_HPP

#include <compare>
#include <cstdint>
#include <numeric>
#include <vector>

#include "exactfa/errors.hpp"

namespace exactfa {

// Exponent vector of fixed length (the ring arity).
struct Monomial {
    std::vector<std::uint32_t> exps;

    Monomial() = default;
    explicit Monomial(std::vector<std::uint32_t> e) : exps(std::move(e)) {}

    static Monomial one(int arity) { return Monomial(std::vector<std::uint32_t>(arity, 0)); }
    static Monomial var(int arity, int index, std::uint32_t power = 1) {
        Monomial m = one(arity);
        m.exps[index] = power;
        return m;
    }

    int arity() const { return static_cast<int>(exps.size()); }

    int degree() const {
        return std::accumulate(exps.begin(), exps.end(), 0,
                               [](int a, std::uint32_t b) { return a + static_cast<int>(b); });
    }

    bool is_one() const {
        for (auto e : exps)
            if (e != 0) return false;
        return true;
    }

    bool divides(const Monomial& other) const {
        for (std::size_t i = 0; i < exps.size(); ++i)
            if (exps[i] > other.exps[i]) return false;
        return true;
    }

    // Pure power of exactly one variable? Returns that variable's index, or
    // -1 for the unit monomial (a pure zeroth power of every variable) and
    // -2 for genuinely mixed monomials.
    int pure_power_var() const {
        int var = -1;
        for (std::size_t i = 0; i < exps.size(); ++i) {
            if (exps[i] == 0) continue;
            if (var >= 0) return -2;
            var = static_cast<int>(i);
        }
        return var;
    }

    Monomial operator*(const Monomial& o) const {
        Monomial r = *this;
        for (std::size_t i = 0; i < exps.size(); ++i) r.exps[i] += o.exps[i];
        return r;
    }

    // Exact quotient; caller guarantees o.divides(*this).
    Monomial operator/(const Monomial& o) const {
        Monomial r = *this;
        for (std::size_t i = 0; i < exps.size(); ++i) r.exps[i] -= o.exps[i];
        return r;
    }

    static Monomial lcm(const Monomial& a, const Monomial& b) {
        Monomial r = a;
        for (std::size_t i = 0; i < r.exps.size(); ++i)
            if (b.exps[i] > r.exps[i]) r.exps[i] = b.exps[i];
        return r;
    }

    bool operator==(const Monomial& o) const = default;
    // Structural order used as the term-map key; unrelated to monomial orders.
    auto operator<=>(const Monomial& o) const { return exps <=> o.exps; }
};

enum class OrderKind { Lex, Grevlex };

// A monomial order: lex or grevlex over a precedence permutation of the
// ring variables. perm[0] is the most significant variable.
struct MonomialOrder {
    OrderKind kind = OrderKind::Lex;
    std::vector<int> perm;

    static MonomialOrder lex(int arity) { return {OrderKind::Lex, identity(arity)}; }
    static MonomialOrder grevlex(int arity) { return {OrderKind::Grevlex, identity(arity)}; }
    static MonomialOrder lex_with(std::vector<int> perm) { return {OrderKind::Lex, std::move(perm)}; }

    int arity() const { return static_cast<int>(perm.size()); }

    static std::vector<int> identity(int arity) {
        std::vector<int> p(arity);
        for (int i = 0; i < arity; ++i) p[i] = i;
        return p;
    }

    bool operator==(const MonomialOrder& o) const = default;
};

// Total order on monomials of equal arity. Throws StructuralError on
// arity mismatch.
std::strong_ordering monomial_cmp(const Monomial& a, const Monomial& b, const MonomialOrder& ord);

inline bool monomial_less(const Monomial& a, const Monomial& b, const MonomialOrder& ord) {
    return monomial_cmp(a, b, ord) == std::strong_ordering::less;
}

// Comparator adapter for order-aware containers.
struct OrderLess {
    MonomialOrder ord;
    bool operator()(const Monomial& a, const Monomial& b) const { return monomial_less(a, b, ord); }
};

} // namespace exactfa

#endif
