#include "exactfa/unipoly.hpp"

#include <algorithm>

#include "exactfa/errors.hpp"

namespace exactfa {

UniPoly UniPoly::from_polynomial(const Polynomial& f, int var) {
    std::vector<Rational> c;
    for (const auto& [m, coef] : f.terms()) {
        for (int i = 0; i < m.arity(); ++i)
            if (i != var && m.exps[i] != 0)
                throw StructuralError("from_polynomial: not univariate in the requested variable");
        std::uint32_t e = m.exps[var];
        if (c.size() <= e) c.resize(e + 1, Rational(0));
        c[e] = coef;
    }
    return UniPoly(std::move(c));
}

Polynomial UniPoly::to_polynomial(int arity, int var) const {
    Polynomial f(arity);
    for (std::size_t e = 0; e < c_.size(); ++e) {
        if (c_[e] == 0) continue;
        f.add_term(Monomial::var(arity, var, static_cast<std::uint32_t>(e)), c_[e]);
    }
    return f;
}

Rational UniPoly::eval(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

int UniPoly::sign_at(const Rational& x) const {
    Rational v = eval(x);
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

UniPoly UniPoly::derivative() const {
    if (c_.size() <= 1) return UniPoly();
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rational(static_cast<long>(i));
    return UniPoly(std::move(d));
}

UniPoly UniPoly::operator-() const {
    std::vector<Rational> d(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) d[i] = -c_[i];
    return UniPoly(std::move(d));
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
    std::vector<Rational> d(std::max(c_.size(), o.c_.size()), Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) d[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) d[i] += o.c_[i];
    return UniPoly(std::move(d));
}

UniPoly UniPoly::operator-(const UniPoly& o) const { return *this + (-o); }

UniPoly UniPoly::operator*(const UniPoly& o) const {
    if (is_zero() || o.is_zero()) return UniPoly();
    std::vector<Rational> d(c_.size() + o.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) d[i + j] += c_[i] * o.c_[j];
    return UniPoly(std::move(d));
}

UniPoly UniPoly::operator*(const Rational& s) const {
    if (s == 0) return UniPoly();
    std::vector<Rational> d(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) d[i] = c_[i] * s;
    return UniPoly(std::move(d));
}

std::pair<UniPoly, UniPoly> UniPoly::divrem(const UniPoly& o) const {
    if (o.is_zero()) throw DomainError("unipoly division by zero");
    std::vector<Rational> rem = c_;
    int dr = static_cast<int>(rem.size()) - 1;
    int dv = o.degree();
    if (dr < dv) return {UniPoly(), *this};
    std::vector<Rational> quo(dr - dv + 1, Rational(0));
    for (int k = dr - dv; k >= 0; --k) {
        Rational q = rem[dv + k] / o.c_[dv];
        quo[k] = q;
        if (q == 0) continue;
        for (int j = 0; j <= dv; ++j) rem[j + k] -= q * o.c_[j];
    }
    rem.resize(dv);
    return {UniPoly(std::move(quo)), UniPoly(std::move(rem))};
}

UniPoly UniPoly::monic() const {
    if (is_zero()) return *this;
    return *this * Rational(1 / lead());
}

UniPoly UniPoly::primitive() const {
    if (is_zero()) return *this;
    mpz_class den_lcm = 1, num_gcd = 0;
    for (const auto& c : c_) {
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    }
    Rational scale(den_lcm, num_gcd);
    scale.canonicalize();
    if (lead() < 0) scale = -scale;
    return *this * scale;
}

UniPoly unipoly_gcd(const UniPoly& a, const UniPoly& b) {
    UniPoly r0 = a, r1 = b;
    while (!r1.is_zero()) {
        UniPoly r2 = r0.divrem(r1).second;
        r0 = std::move(r1);
        r1 = r2.is_zero() ? r2 : r2.primitive();
    }
    return r0.is_zero() ? r0 : r0.monic();
}

UniPoly squarefree_part(const UniPoly& f) {
    if (f.is_zero()) throw DomainError("squarefree_part of zero");
    if (f.degree() == 0) return UniPoly::constant(1);
    UniPoly g = unipoly_gcd(f, f.derivative());
    if (g.degree() == 0) return f.monic();
    return f.divrem(g).first.monic();
}

namespace {

// Positive-only rescaling to primitive integer coefficients. Sturm chains
// may only be scaled by positive constants or the sign variations break.
UniPoly scale_positive_primitive(const UniPoly& f) {
    if (f.is_zero()) return f;
    mpz_class den_lcm = 1, num_gcd = 0;
    for (const auto& c : f.coeffs()) {
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    }
    Rational scale(den_lcm, num_gcd);
    scale.canonicalize();
    return f * scale;
}

// Sturm chain of a squarefree polynomial, kept primitive-integral so the
// numbers stay small.
std::vector<UniPoly> sturm_chain(const UniPoly& f) {
    std::vector<UniPoly> chain;
    chain.push_back(scale_positive_primitive(f));
    if (f.degree() == 0) return chain;
    chain.push_back(scale_positive_primitive(f.derivative()));
    while (chain.back().degree() > 0) {
        UniPoly rem = chain[chain.size() - 2].divrem(chain.back()).second;
        if (rem.is_zero()) break; // cannot happen for squarefree input
        chain.push_back(scale_positive_primitive(-rem));
    }
    return chain;
}

int sign_of(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

int variations(const std::vector<int>& signs) {
    int count = 0, last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

int variations_at(const std::vector<UniPoly>& chain, const Rational& x) {
    std::vector<int> signs;
    signs.reserve(chain.size());
    for (const auto& p : chain) signs.push_back(p.sign_at(x));
    return variations(signs);
}

int variations_at_infinity(const std::vector<UniPoly>& chain, bool positive) {
    std::vector<int> signs;
    signs.reserve(chain.size());
    for (const auto& p : chain) {
        int s = sign_of(p.lead());
        if (!positive && p.degree() % 2 == 1) s = -s;
        signs.push_back(s);
    }
    return variations(signs);
}

Rational cauchy_bound(const UniPoly& f) {
    Rational mx = 0;
    for (int i = 0; i < f.degree(); ++i) {
        Rational a = rat_abs(f[i]);
        if (a > mx) mx = a;
    }
    Rational b = 1 + mx / rat_abs(f.lead());
    // Round up to an integer so all bisection points are dyadic-ish.
    mpz_class z;
    mpz_cdiv_q(z.get_mpz_t(), b.get_num().get_mpz_t(), b.get_den().get_mpz_t());
    return Rational(z);
}

struct RationalRootFound {
    Rational root;
};

void bisect_isolate(const std::vector<UniPoly>& chain, const UniPoly& f, const Rational& lo,
                    const Rational& hi, int vlo, int vhi, std::vector<IsolatingInterval>& out) {
    int count = vlo - vhi;
    if (count <= 0) return;
    if (count == 1) {
        out.push_back({lo, hi, f});
        return;
    }
    Rational mid = (lo + hi) / 2;
    if (f.sign_at(mid) == 0) throw RationalRootFound{mid};
    int vmid = variations_at(chain, mid);
    bisect_isolate(chain, f, lo, mid, vlo, vmid, out);
    bisect_isolate(chain, f, mid, hi, vmid, vhi, out);
}

} // namespace

int sturm_real_root_count(const UniPoly& squarefree) {
    if (squarefree.is_zero()) throw DomainError("root count of zero polynomial");
    if (squarefree.degree() == 0) return 0;
    auto chain = sturm_chain(squarefree);
    return variations_at_infinity(chain, false) - variations_at_infinity(chain, true);
}

Rational simplest_rational_in(const Rational& lo, const Rational& hi) {
    if (lo > hi) throw StructuralError("simplest_rational_in: empty interval");
    if (lo <= 0 && hi >= 0) return 0;
    if (hi < 0) return -simplest_rational_in(-hi, -lo);
    // 0 < lo <= hi
    Rational a = lo, b = hi;
    // Continued-fraction walk.
    std::vector<mpz_class> quotients;
    while (true) {
        mpz_class fa, fb;
        mpz_fdiv_q(fa.get_mpz_t(), a.get_num().get_mpz_t(), a.get_den().get_mpz_t());
        mpz_fdiv_q(fb.get_mpz_t(), b.get_num().get_mpz_t(), b.get_den().get_mpz_t());
        if (a == Rational(fa)) {
            quotients.push_back(fa);
            break;
        }
        if (fa != fb) {
            quotients.push_back(fa + 1);
            break;
        }
        quotients.push_back(fa);
        Rational na = 1 / (b - Rational(fb));
        Rational nb = 1 / (a - Rational(fa));
        a = na;
        b = nb;
    }
    Rational v(quotients.back());
    for (int i = static_cast<int>(quotients.size()) - 2; i >= 0; --i) v = Rational(quotients[i]) + 1 / v;
    return v;
}

void IsolatingInterval::refine_below(const Rational& target_width) {
    if (exact()) return;
    while (upper - lower > target_width) {
        Rational mid = (lower + upper) / 2;
        int sm = polynomial.sign_at(mid);
        if (sm == 0) {
            lower = upper = mid;
            return;
        }
        if (polynomial.sign_at(lower) == sm)
            lower = mid;
        else
            upper = mid;
    }
    // The enclosed root may be rational: the cheapest candidate is the
    // simplest rational in the interval.
    Rational guess = simplest_rational_in(lower, upper);
    if (lower < guess && guess < upper && polynomial.eval(guess) == 0) lower = upper = guess;
}

std::vector<IsolatingInterval> isolate_real_roots_uni(const UniPoly& f) {
    if (f.is_zero()) throw DomainError("isolate_real_roots of the zero polynomial");
    UniPoly work = squarefree_part(f).primitive();
    std::vector<IsolatingInterval> out;
    while (work.degree() > 0) {
        // Peel an exact root at zero.
        if (work[0] == 0) {
            out.push_back({Rational(0), Rational(0), work});
            std::vector<Rational> shifted(work.coeffs().begin() + 1, work.coeffs().end());
            work = UniPoly(std::move(shifted));
            continue;
        }
        auto chain = sturm_chain(work);
        Rational bound = cauchy_bound(work);
        int vlo = variations_at(chain, -bound);
        int vhi = variations_at(chain, bound);
        try {
            bisect_isolate(chain, work, -bound, bound, vlo, vhi, out);
            break;
        } catch (const RationalRootFound& hit) {
            // A bisection point landed on a root: record it, deflate, rerun.
            out.erase(std::remove_if(out.begin(), out.end(),
                                     [&](const IsolatingInterval& iv) { return !iv.exact(); }),
                      out.end());
            out.push_back({hit.root, hit.root, work});
            UniPoly factor({-hit.root, Rational(1)});
            work = work.divrem(factor).first.primitive();
        }
    }
    std::sort(out.begin(), out.end(), [](const IsolatingInterval& a, const IsolatingInterval& b) {
        return a.lower < b.lower;
    });
    return out;
}

} // namespace exactfa
