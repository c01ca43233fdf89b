#include "exactfa/interval.hpp"

namespace exactfa {

RatInterval RatInterval::pow(std::uint32_t e) const {
    if (e == 0) return point(1);
    if (e == 1) return *this;
    if (e % 2 == 1) {
        Rational a = lo, b = hi;
        Rational ra = a, rb = b;
        for (std::uint32_t i = 1; i < e; ++i) {
            ra *= a;
            rb *= b;
        }
        return {ra, rb};
    }
    Rational aa = rat_abs(lo), ab = rat_abs(hi);
    Rational big = aa > ab ? aa : ab;
    Rational small = contains_zero() ? Rational(0) : (aa < ab ? aa : ab);
    Rational rbig = big, rsmall = small;
    for (std::uint32_t i = 1; i < e; ++i) {
        rbig *= big;
        rsmall *= small;
    }
    return {rsmall, rbig};
}

RatInterval interval_eval(const Polynomial& f, const std::vector<RatInterval>& box) {
    if (static_cast<int>(box.size()) != f.arity())
        throw StructuralError("interval_eval: arity mismatch");
    RatInterval acc = RatInterval::point(0);
    for (const auto& [m, c] : f.terms()) {
        RatInterval t = RatInterval::point(1);
        for (int i = 0; i < f.arity(); ++i)
            if (m.exps[i] != 0) t = t * box[i].pow(m.exps[i]);
        acc = acc + t * c;
    }
    return acc;
}

} // namespace exactfa
