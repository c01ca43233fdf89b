#include "exactfa/groebner.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>

#include "exactfa/errors.hpp"

namespace exactfa {

Ideal::Ideal(int arity, std::vector<Polynomial> gens) : arity(arity) {
    for (auto& g : gens) {
        if (g.is_zero()) continue;
        if (g.arity() != arity) throw StructuralError("ideal generator arity mismatch");
        generators.push_back(std::move(g));
    }
}

namespace {

struct Pair {
    std::size_t i, j;
    Monomial lcm;
    int sugar;
    int degree;
};

struct PairQueueLess {
    bool operator()(const Pair& a, const Pair& b) const {
        if (a.sugar != b.sugar) return a.sugar < b.sugar;
        if (a.degree != b.degree) return a.degree < b.degree;
        if (a.lcm != b.lcm) return a.lcm < b.lcm;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    }
};

struct Reducer {
    Monomial lm;
    Rational lc;
    const Polynomial* poly;
    int sugar;
};

// Division by the reducer list. With top_only the loop stops at the first
// irreducible leading monomial (enough inside Buchberger); otherwise every
// monomial is reduced. Tracks the sugar degree of the result when asked.
Polynomial reduce_by(const Polynomial& f, const std::vector<Reducer>& reducers,
                     const MonomialOrder& ord, bool top_only, int* sugar) {
    std::map<Monomial, Rational, OrderLess> work{OrderLess{ord}};
    for (const auto& [m, c] : f.terms()) work.emplace(m, c);
    Polynomial rem(f.arity());
    while (!work.empty()) {
        auto top = std::prev(work.end());
        Monomial mono = top->first;
        Rational coef = top->second;
        const Reducer* hit = nullptr;
        for (const auto& r : reducers)
            if (r.lm.divides(mono)) {
                hit = &r;
                break;
            }
        if (hit == nullptr) {
            if (top_only) {
                for (const auto& [m, c] : work) rem.add_term(m, c);
                return rem;
            }
            rem.add_term(mono, coef);
            work.erase(top);
            continue;
        }
        Monomial q = mono / hit->lm;
        if (sugar != nullptr) *sugar = std::max(*sugar, hit->sugar + q.degree());
        Rational scale = coef / hit->lc;
        for (const auto& [mg, cg] : hit->poly->terms()) {
            Monomial target = mg * q;
            Rational delta = cg * scale;
            auto it = work.find(target);
            if (it == work.end()) {
                work.emplace(target, -delta);
                it = work.find(target);
            } else {
                it->second -= delta;
            }
            if (it->second == 0) work.erase(it);
        }
    }
    return rem;
}

void sort_descending(std::vector<Polynomial>& elems, const MonomialOrder& ord) {
    std::sort(elems.begin(), elems.end(), [&](const Polynomial& a, const Polynomial& b) {
        return monomial_less(leading_monomial(b, ord), leading_monomial(a, ord), ord);
    });
}

// Minimalize + fully reduce + normalize. Assumes `basis` generates the
// ideal and contains a Groebner basis of it.
std::vector<Polynomial> reduce_basis(std::vector<Polynomial> basis, const MonomialOrder& ord) {
    // Unit ideal collapses immediately.
    for (const auto& g : basis)
        if (!g.is_zero() && g.is_constant()) return {Polynomial::constant(ord.arity(), 1)};

    std::vector<Monomial> lms;
    lms.reserve(basis.size());
    for (const auto& g : basis) lms.push_back(leading_monomial(g, ord));

    std::vector<bool> keep(basis.size(), true);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < basis.size() && keep[i]; ++j) {
            if (i == j || !keep[j]) continue;
            if (lms[j].divides(lms[i]) && !(lms[i] == lms[j] && j > i)) keep[i] = false;
        }
    }
    std::vector<Polynomial> minimal;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (keep[i]) minimal.push_back(basis[i]);

    std::vector<Polynomial> reduced;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<Polynomial> others;
        others.reserve(minimal.size() - 1);
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        Polynomial r = others.empty() ? minimal[i] : normal_form(minimal[i], others, ord);
        if (!r.is_zero()) reduced.push_back(r.monic(ord));
    }
    sort_descending(reduced, ord);
    return reduced;
}

ZeroDimFlag zero_dim_flag(const std::vector<Polynomial>& elements, const MonomialOrder& ord) {
    int arity = ord.arity();
    std::vector<bool> covered(arity, false);
    for (const auto& g : elements) {
        int v = leading_monomial(g, ord).pure_power_var();
        if (v == -1) return ZeroDimFlag::Yes; // unit ideal
        if (v >= 0) covered[v] = true;
    }
    for (bool c : covered)
        if (!c) return ZeroDimFlag::No;
    return ZeroDimFlag::Yes;
}

} // namespace

GroebnerBasis buchberger(const Ideal& I, const MonomialOrder& ord, const GroebnerBudget& budget) {
    if (I.arity != ord.arity()) throw StructuralError("buchberger: order arity mismatch");
    GroebnerBasis out;
    out.order = ord;
    if (I.generators.empty()) {
        out.reduced = true;
        out.zero_dimensional = ord.arity() == 0 ? ZeroDimFlag::Yes : ZeroDimFlag::No;
        return out;
    }

    // deque: growth must not invalidate the reducer pointers.
    std::deque<Polynomial> basis;
    std::vector<Reducer> reducers;
    for (const auto& g : I.generators) basis.push_back(g.primitive(ord));
    for (const auto& g : basis) {
        auto [m, c] = g.leading_term(ord);
        reducers.push_back({m, c, &g, g.total_degree()});
    }

    std::set<Pair, PairQueueLess> queue;
    std::set<std::pair<std::size_t, std::size_t>> treated;
    auto push_pairs_with = [&](std::size_t t) {
        for (std::size_t i = 0; i < t; ++i) {
            Monomial l = Monomial::lcm(reducers[i].lm, reducers[t].lm);
            int sugar = std::max(reducers[i].sugar + l.degree() - reducers[i].lm.degree(),
                                 reducers[t].sugar + l.degree() - reducers[t].lm.degree());
            queue.insert({i, t, l, sugar, l.degree()});
        }
    };
    for (std::size_t t = 1; t < basis.size(); ++t) push_pairs_with(t);

    int max_degree_seen = 0;
    while (!queue.empty()) {
        Pair p = *queue.begin();
        queue.erase(queue.begin());
        treated.insert({p.i, p.j});

        // Coprime criterion.
        if (p.lcm == reducers[p.i].lm * reducers[p.j].lm) continue;
        // Chain criterion.
        bool chained = false;
        for (std::size_t k = 0; k < basis.size() && !chained; ++k) {
            if (k == p.i || k == p.j) continue;
            if (!reducers[k].lm.divides(p.lcm)) continue;
            auto key1 = std::minmax(p.i, k);
            auto key2 = std::minmax(p.j, k);
            if (treated.count({key1.first, key1.second}) && treated.count({key2.first, key2.second}))
                chained = true;
        }
        if (chained) continue;

        const Polynomial& f = basis[p.i];
        const Polynomial& g = basis[p.j];
        Polynomial spoly = f * Polynomial::term(p.lcm / reducers[p.i].lm, 1 / reducers[p.i].lc) -
                           g * Polynomial::term(p.lcm / reducers[p.j].lm, 1 / reducers[p.j].lc);
        if (spoly.is_zero()) continue;
        int sugar = p.sugar;
        Polynomial rem = reduce_by(spoly, reducers, ord, /*top_only=*/true, &sugar);
        if (rem.is_zero()) continue;

        rem = rem.primitive(ord);
        max_degree_seen = std::max(max_degree_seen, rem.total_degree());
        if (rem.total_degree() > budget.max_degree)
            throw ResourceExceeded("buchberger: degree budget exceeded", basis.size(), max_degree_seen);
        basis.push_back(std::move(rem));
        if (basis.size() > budget.max_basis)
            throw ResourceExceeded("buchberger: basis size budget exceeded", basis.size(), max_degree_seen);
        {
            const Polynomial& added = basis.back();
            auto [m, c] = added.leading_term(ord);
            reducers.push_back({m, c, &added, std::max(sugar, added.total_degree())});
        }
        push_pairs_with(basis.size() - 1);
    }

    out.elements = reduce_basis(std::vector<Polynomial>(basis.begin(), basis.end()), ord);
    out.reduced = true;
    out.zero_dimensional = zero_dim_flag(out.elements, ord);
    return out;
}

Ideal ideal_sum(const Ideal& I, const Ideal& K) {
    if (I.arity != K.arity) throw StructuralError("ideal_sum: arity mismatch");
    std::vector<Polynomial> gens = I.generators;
    gens.insert(gens.end(), K.generators.begin(), K.generators.end());
    return Ideal(I.arity, std::move(gens));
}

Ideal saturate(const Ideal& I, const Polynomial& h, const GroebnerBudget& budget) {
    if (h.is_zero()) throw DomainError("saturate: zero polynomial");
    if (h.arity() != I.arity) throw StructuralError("saturate: arity mismatch");
    if (h.is_constant()) return I; // units change nothing
    int m = I.arity;

    auto lift = [m](const Polynomial& f) {
        Polynomial out(m + 1);
        for (const auto& [mono, c] : f.terms()) {
            std::vector<std::uint32_t> e = mono.exps;
            e.push_back(0);
            out.add_term(Monomial(std::move(e)), c);
        }
        return out;
    };

    std::vector<Polynomial> gens;
    gens.reserve(I.generators.size() + 1);
    for (const auto& g : I.generators) gens.push_back(lift(g));
    // 1 - y*h with y stored last.
    Polynomial yh = lift(h) * Polynomial::variable(m + 1, m);
    gens.push_back(Polynomial::constant(m + 1, 1) - yh);

    // Lex with y ranked highest eliminates y.
    std::vector<int> perm(m + 1);
    perm[0] = m;
    for (int i = 0; i < m; ++i) perm[i + 1] = i;
    MonomialOrder elim = MonomialOrder::lex_with(std::move(perm));

    // The reduced lex basis is canonical, so it may be reached by any
    // route. Grevlex first is far cheaper; FGLM converts when the extended
    // ideal is zero-dimensional, and otherwise the grevlex elements seed
    // the lex run with a much better generating set.
    Ideal extended(m + 1, std::move(gens));
    GroebnerBasis G;
    GroebnerBasis grev = buchberger(extended, MonomialOrder::grevlex(m + 1), budget);
    if (is_zero_dimensional(grev)) {
        G = fglm(grev, elim);
    } else {
        G = buchberger(grev.as_ideal(), elim, budget);
    }

    std::vector<Polynomial> kept;
    for (const auto& g : G.elements) {
        bool has_y = false;
        for (const auto& [mono, c] : g.terms())
            if (mono.exps[m] != 0) has_y = true;
        if (has_y) continue;
        Polynomial drop(m);
        for (const auto& [mono, c] : g.terms()) {
            std::vector<std::uint32_t> e(mono.exps.begin(), mono.exps.end() - 1);
            drop.add_term(Monomial(std::move(e)), c);
        }
        kept.push_back(std::move(drop));
    }
    return Ideal(m, std::move(kept));
}

bool is_zero_dimensional(const GroebnerBasis& G) {
    if (G.elements.empty()) return G.arity() == 0;
    return zero_dim_flag(G.elements, G.order) == ZeroDimFlag::Yes;
}

std::vector<Monomial> standard_monomials(const GroebnerBasis& G) {
    if (!is_zero_dimensional(G)) throw DomainError("standard_monomials: ideal is not zero-dimensional");
    std::vector<Monomial> lms;
    for (const auto& g : G.elements) lms.push_back(leading_monomial(g, G.order));
    auto is_standard = [&](const Monomial& m) {
        for (const auto& lm : lms)
            if (lm.divides(m)) return false;
        return true;
    };
    std::set<Monomial> seen;
    std::vector<Monomial> queue = {Monomial::one(G.arity())};
    std::vector<Monomial> out;
    seen.insert(queue[0]);
    while (!queue.empty()) {
        Monomial m = queue.back();
        queue.pop_back();
        if (!is_standard(m)) continue;
        out.push_back(m);
        for (int v = 0; v < G.arity(); ++v) {
            Monomial next = m * Monomial::var(G.arity(), v);
            if (seen.insert(next).second) queue.push_back(next);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Shared scaffolding for FGLM-style linear algebra over the quotient ring.
class QuotientSpace {
public:
    explicit QuotientSpace(const GroebnerBasis& G)
        : G_(G), basis_(standard_monomials(G)) {
        for (std::size_t i = 0; i < basis_.size(); ++i) index_[basis_[i]] = i;
    }

    std::size_t dim() const { return basis_.size(); }
    const std::vector<Monomial>& basis() const { return basis_; }

    // Coordinates of NF(m) over the standard-monomial basis.
    std::vector<Rational> nf_vector(const Monomial& m) {
        auto it = cache_.find(m);
        if (it != cache_.end()) return it->second;
        std::vector<Rational> v(dim(), Rational(0));
        auto idx = index_.find(m);
        if (idx != index_.end()) {
            v[idx->second] = 1;
        } else {
            Polynomial nf = normal_form(Polynomial::term(m, 1), G_.elements, G_.order);
            for (const auto& [mono, c] : nf.terms()) v[index_.at(mono)] = c;
        }
        cache_.emplace(m, v);
        return v;
    }

    // NF vector of x_var * (vector over the standard basis).
    std::vector<Rational> multiply_var(const std::vector<Rational>& v, int var) {
        std::vector<Rational> out(dim(), Rational(0));
        for (std::size_t i = 0; i < dim(); ++i) {
            if (v[i] == 0) continue;
            std::vector<Rational> col = nf_vector(basis_[i] * Monomial::var(G_.arity(), var));
            for (std::size_t r = 0; r < dim(); ++r) out[r] += v[i] * col[r];
        }
        return out;
    }

private:
    const GroebnerBasis& G_;
    std::vector<Monomial> basis_;
    std::map<Monomial, std::size_t> index_;
    std::map<Monomial, std::vector<Rational>> cache_;
};

// Incremental row space with dependence extraction: rows are stored in
// echelon form together with their expression in the inserted vectors.
class EchelonSpan {
public:
    explicit EchelonSpan(std::size_t width) : width_(width) {}

    std::size_t size() const { return rows_.size(); }

    // If v is independent of the span, inserts it and returns nullopt.
    // Otherwise returns lambda with v = sum lambda_t * (t-th inserted vector).
    std::optional<std::vector<Rational>> insert_or_express(std::vector<Rational> v) {
        std::vector<Rational> combo(size() + 1, Rational(0));
        combo.back() = 1; // v itself
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const Rational& x = v[pivots_[r]];
            if (x == 0) continue;
            Rational f = x; // rows are pivot-normalized
            for (std::size_t c = 0; c < width_; ++c) v[c] -= f * rows_[r][c];
            for (std::size_t t = 0; t < trace_[r].size(); ++t) combo[t] -= f * trace_[r][t];
        }
        std::size_t pivot = width_;
        for (std::size_t c = 0; c < width_; ++c)
            if (v[c] != 0) {
                pivot = c;
                break;
            }
        if (pivot == width_) {
            // Dependent: v = -sum_{t<size} combo_t * inserted_t.
            std::vector<Rational> lambda(size(), Rational(0));
            for (std::size_t t = 0; t < size(); ++t) lambda[t] = -combo[t];
            return lambda;
        }
        Rational inv = 1 / v[pivot];
        for (auto& x : v) x *= inv;
        std::vector<Rational> tr(combo.begin(), combo.end());
        for (auto& x : tr) x *= inv;
        rows_.push_back(std::move(v));
        trace_.push_back(std::move(tr));
        pivots_.push_back(pivot);
        return std::nullopt;
    }

private:
    std::size_t width_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<std::vector<Rational>> trace_; // row = combo of inserted vectors
    std::vector<std::size_t> pivots_;
};

} // namespace

UniPoly univariate_eliminant(const GroebnerBasis& G, int var) {
    if (var < 0 || var >= G.arity()) throw StructuralError("univariate_eliminant: bad variable");
    QuotientSpace Q(G);
    if (Q.dim() == 0) return UniPoly::constant(1); // unit ideal
    EchelonSpan span(Q.dim());
    std::vector<Rational> power = Q.nf_vector(Monomial::one(G.arity()));
    std::vector<std::vector<Rational>> powers;
    for (std::size_t d = 0; d <= Q.dim(); ++d) {
        powers.push_back(power);
        auto dep = span.insert_or_express(power);
        if (dep) {
            // x^d = sum lambda_i x^i  ->  eliminant x^d - sum lambda_i x^i.
            std::vector<Rational> coef(d + 1, Rational(0));
            coef[d] = 1;
            for (std::size_t i = 0; i < dep->size(); ++i) coef[i] = -(*dep)[i];
            return UniPoly(std::move(coef));
        }
        power = Q.multiply_var(power, var);
    }
    throw StructuralError("univariate_eliminant: no relation found (non-zero-dimensional?)");
}

GroebnerBasis fglm(const GroebnerBasis& G, const MonomialOrder& target) {
    if (!G.reduced) throw DomainError("fglm: input basis must be reduced");
    if (!is_zero_dimensional(G)) throw DomainError("fglm: ideal is not zero-dimensional");
    if (target.arity() != G.arity()) throw StructuralError("fglm: order arity mismatch");

    QuotientSpace Q(G);
    EchelonSpan span(Q.dim());

    std::vector<Monomial> staircase;                 // target standard monomials found so far
    std::vector<std::vector<Rational>> staircase_nf; // their NF vectors
    std::vector<Monomial> lead_found;
    std::vector<Polynomial> out_elems;

    std::set<Monomial, OrderLess> candidates{OrderLess{target}};
    std::map<Monomial, std::vector<Rational>> pending; // candidate -> NF vector
    Monomial one = Monomial::one(G.arity());
    candidates.insert(one);
    pending[one] = Q.dim() == 0 ? std::vector<Rational>{} : Q.nf_vector(one);

    while (!candidates.empty()) {
        Monomial m = *candidates.begin();
        candidates.erase(candidates.begin());
        std::vector<Rational> vec = pending.at(m);
        pending.erase(m);

        bool skip = false;
        for (const auto& lm : lead_found)
            if (lm.divides(m)) {
                skip = true;
                break;
            }
        if (skip) continue;

        auto dep = span.insert_or_express(vec);
        if (dep) {
            Polynomial g = Polynomial::term(m, 1);
            for (std::size_t t = 0; t < dep->size(); ++t)
                if ((*dep)[t] != 0) g.add_term(staircase[t], -(*dep)[t]);
            out_elems.push_back(std::move(g));
            lead_found.push_back(m);
            continue;
        }
        staircase.push_back(m);
        staircase_nf.push_back(vec);
        for (int v = 0; v < G.arity(); ++v) {
            Monomial next = m * Monomial::var(G.arity(), v);
            if (pending.count(next)) continue;
            bool dominated = false;
            for (const auto& lm : lead_found)
                if (lm.divides(next)) {
                    dominated = true;
                    break;
                }
            if (dominated) continue;
            pending[next] = Q.multiply_var(vec, v);
            candidates.insert(next);
        }
    }

    GroebnerBasis out;
    out.order = target;
    out.elements = std::move(out_elems);
    sort_descending(out.elements, target);
    out.reduced = true;
    out.zero_dimensional = zero_dim_flag(out.elements, target);
    return out;
}

Ideal zero_dim_radical(const GroebnerBasis& G) {
    if (!is_zero_dimensional(G)) throw DomainError("zero_dim_radical: ideal is not zero-dimensional");
    std::vector<Polynomial> gens = G.elements;
    if (G.is_unit()) return Ideal(G.arity(), std::move(gens));
    for (int v = 0; v < G.arity(); ++v) {
        UniPoly m = univariate_eliminant(G, v);
        UniPoly sf = squarefree_part(m);
        gens.push_back(sf.to_polynomial(G.arity(), v));
    }
    return Ideal(G.arity(), std::move(gens));
}

} // namespace exactfa
