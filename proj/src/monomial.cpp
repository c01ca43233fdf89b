#include "exactfa/monomial.hpp"

namespace exactfa {

std::strong_ordering monomial_cmp(const Monomial& a, const Monomial& b, const MonomialOrder& ord) {
    if (a.arity() != b.arity() || a.arity() != ord.arity())
        throw StructuralError("monomial_cmp: arity mismatch");
    if (ord.kind == OrderKind::Lex) {
        // Leftmost (highest-precedence) differing exponent decides.
        for (int r = 0; r < ord.arity(); ++r) {
            auto ea = a.exps[ord.perm[r]];
            auto eb = b.exps[ord.perm[r]];
            if (ea != eb) return ea < eb ? std::strong_ordering::less : std::strong_ordering::greater;
        }
        return std::strong_ordering::equal;
    }
    // Grevlex: total degree first, then the rightmost differing exponent
    // decides with reversed sense.
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db ? std::strong_ordering::less : std::strong_ordering::greater;
    for (int r = ord.arity() - 1; r >= 0; --r) {
        auto ea = a.exps[ord.perm[r]];
        auto eb = b.exps[ord.perm[r]];
        if (ea != eb) return ea > eb ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

} // namespace exactfa
