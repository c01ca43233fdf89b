#ifndef EXACTFA_INTERVAL_HPP
#define EXACTFA_INTERVAL_HPP

#include <vector>

#include "exactfa/polynomial.hpp"
#include "exactfa/rational.hpp"

namespace exactfa {

// Closed interval with exact rational endpoints. All operations are exact,
// so enclosures never leak; they only widen through dependency.
struct RatInterval {
    Rational lo, hi;

    RatInterval() : lo(0), hi(0) {}
    RatInterval(Rational a, Rational b) : lo(std::move(a)), hi(std::move(b)) {
        if (lo > hi) throw StructuralError("interval with lo > hi");
    }
    static RatInterval point(const Rational& r) { return {r, r}; }

    bool is_point() const { return lo == hi; }
    Rational width() const { return hi - lo; }
    Rational mid() const { return (lo + hi) / 2; }
    bool contains_zero() const { return lo <= 0 && hi >= 0; }
    bool contains(const Rational& r) const { return lo <= r && r <= hi; }
    bool intersects(const RatInterval& o) const { return lo <= o.hi && o.lo <= hi; }

    // Largest absolute value attained on the interval.
    Rational abs_bound() const {
        Rational a = rat_abs(lo), b = rat_abs(hi);
        return a > b ? a : b;
    }

    RatInterval operator+(const RatInterval& o) const { return {lo + o.lo, hi + o.hi}; }
    RatInterval operator-(const RatInterval& o) const { return {lo - o.hi, hi - o.lo}; }
    RatInterval operator-() const { return {-hi, -lo}; }

    RatInterval operator*(const RatInterval& o) const {
        Rational p1 = lo * o.lo, p2 = lo * o.hi, p3 = hi * o.lo, p4 = hi * o.hi;
        Rational mn = p1, mx = p1;
        for (const Rational& p : {p2, p3, p4}) {
            if (p < mn) mn = p;
            if (p > mx) mx = p;
        }
        return {mn, mx};
    }

    RatInterval operator*(const Rational& c) const {
        return c >= 0 ? RatInterval{lo * c, hi * c} : RatInterval{hi * c, lo * c};
    }

    // Tight power: even powers fold across zero.
    RatInterval pow(std::uint32_t e) const;
};

// Enclosure of f over the box; box.size() == f.arity().
RatInterval interval_eval(const Polynomial& f, const std::vector<RatInterval>& box);

} // namespace exactfa

#endif
