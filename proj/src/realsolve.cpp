#include "exactfa/realsolve.hpp"

#include <algorithm>
#include <random>

#include "exactfa/errors.hpp"

namespace exactfa {

void RealPoint::refine(const Rational& width) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i].is_point()) continue;
        if (i >= minimal_polys.size() || minimal_polys[i].is_zero()) continue;
        IsolatingInterval iv{coords[i].lo, coords[i].hi, minimal_polys[i]};
        iv.refine_below(width);
        coords[i] = {iv.lower, iv.upper};
    }
}

std::vector<IsolatingInterval> isolate_real_roots(const Polynomial& f) {
    if (f.is_zero()) throw DomainError("isolate_real_roots of the zero polynomial");
    int var = 0;
    for (const auto& [m, c] : f.terms()) {
        int v = m.pure_power_var();
        if (v == -2) throw StructuralError("isolate_real_roots: polynomial is not univariate");
        if (v >= 0) var = v;
    }
    return isolate_real_roots_uni(UniPoly::from_polynomial(f, var));
}

namespace {

struct PartialBox {
    std::vector<RatInterval> coords;          // full arity; unassigned slots hold [0,0]
    std::vector<IsolatingInterval> isolators; // parallel; empty polynomial when unassigned
};

// Leftmost variable appearing anywhere in g, or arity when constant.
int min_variable(const Polynomial& g) {
    int mv = g.arity();
    for (const auto& [m, c] : g.terms())
        for (int i = 0; i < g.arity(); ++i)
            if (m.exps[i] != 0) {
                mv = std::min(mv, i);
                break;
            }
    return mv;
}

enum class FilterResult { Accept, Reject, Stall };

// Refine box coordinates until every polynomial in `checks` either provably
// misses zero (reject) or is confined within residual_tol (accept).
FilterResult filter_box(PartialBox& box, const std::vector<const Polynomial*>& checks,
                        const SolveOptions& opts, const Polynomial** offender) {
    for (int round = 0; round <= opts.max_refine_rounds; ++round) {
        bool all_small = true;
        const Polynomial* worst = nullptr;
        for (const Polynomial* g : checks) {
            RatInterval iv = interval_eval(*g, box.coords);
            if (!iv.contains_zero()) return FilterResult::Reject;
            if (iv.abs_bound() > opts.residual_tol) {
                all_small = false;
                worst = g;
            }
        }
        if (all_small) return FilterResult::Accept;
        if (round == opts.max_refine_rounds) {
            *offender = worst;
            return FilterResult::Stall;
        }
        for (std::size_t i = 0; i < box.coords.size(); ++i) {
            if (box.isolators[i].polynomial.is_zero() || box.coords[i].is_point()) continue;
            box.isolators[i].refine_below(box.coords[i].width() / 2);
            box.coords[i] = {box.isolators[i].lower, box.isolators[i].upper};
        }
    }
    return FilterResult::Stall;
}

bool identity_perm(const MonomialOrder& ord) {
    for (int i = 0; i < ord.arity(); ++i)
        if (ord.perm[i] != i) return false;
    return true;
}

std::vector<RealPoint> solve_lex_zero_dim(const GroebnerBasis& G, const SolveOptions& opts) {
    int m = G.arity();
    if (G.is_unit()) return {};

    // Candidate coordinate values: real roots of each variable's eliminant.
    std::vector<std::vector<IsolatingInterval>> roots(m);
    for (int v = 0; v < m; ++v) {
        UniPoly elim = squarefree_part(univariate_eliminant(G, v));
        roots[v] = isolate_real_roots_uni(elim);
        for (auto& iv : roots[v]) iv.refine_below(opts.target_width);
        if (roots[v].empty()) return {}; // no real value for this coordinate
    }

    // Generators grouped by the leftmost variable they involve; under lex
    // with identity precedence each group only sees the tail variables.
    std::vector<std::vector<const Polynomial*>> by_stage(m + 1);
    for (const auto& g : G.elements) by_stage[min_variable(g)].push_back(&g);

    std::vector<PartialBox> partial = {PartialBox{
        std::vector<RatInterval>(m, RatInterval::point(0)),
        std::vector<IsolatingInterval>(m, IsolatingInterval{Rational(0), Rational(0), UniPoly()})}};

    for (int stage = m - 1; stage >= 0; --stage) {
        std::vector<PartialBox> next;
        for (const auto& base : partial) {
            for (const auto& root : roots[stage]) {
                PartialBox cand = base;
                cand.isolators[stage] = root;
                cand.coords[stage] = {root.lower, root.upper};
                const Polynomial* offender = nullptr;
                FilterResult r = filter_box(cand, by_stage[stage], opts, &offender);
                if (r == FilterResult::Reject) continue;
                if (r == FilterResult::Stall)
                    throw PrecisionFailure(
                        "solve_triangular: interval refinement stalled",
                        poly_str(*offender, [&] {
                            std::vector<std::string> names;
                            for (int i = 0; i < m; ++i) names.push_back("z" + std::to_string(i + 1));
                            return names;
                        }()));
                next.push_back(std::move(cand));
            }
        }
        partial = std::move(next);
        if (partial.empty()) return {};
    }

    std::vector<RealPoint> out;
    for (auto& box : partial) {
        RealPoint pt;
        pt.coords = box.coords;
        pt.minimal_polys.reserve(m);
        for (int v = 0; v < m; ++v) pt.minimal_polys.push_back(box.isolators[v].polynomial);
        Rational bound = 0;
        for (const auto& g : G.elements) {
            Rational b = interval_eval(g, pt.coords).abs_bound();
            if (b > bound) bound = b;
        }
        pt.residual_bound = bound;
        out.push_back(std::move(pt));
    }
    std::sort(out.begin(), out.end(), [](const RealPoint& a, const RealPoint& b) {
        for (std::size_t i = 0; i < a.coords.size(); ++i) {
            if (a.coords[i].mid() != b.coords[i].mid()) return a.coords[i].mid() < b.coords[i].mid();
        }
        return false;
    });
    return out;
}

} // namespace

std::vector<RealPoint> solve_triangular(const GroebnerBasis& G, const SolveOptions& opts) {
    if (G.order.kind != OrderKind::Lex || !identity_perm(G.order))
        throw DomainError("solve_triangular: expected a lex basis with identity precedence");
    if (!G.reduced) throw DomainError("solve_triangular: basis must be reduced");
    if (!is_zero_dimensional(G)) throw DomainError("solve_triangular: ideal is not zero-dimensional");
    return solve_lex_zero_dim(G, opts);
}

std::vector<RealPoint> slice_positive_dimensional(const GroebnerBasis& G, int count,
                                                  std::uint64_t seed, const SolveOptions& opts) {
    if (is_zero_dimensional(G))
        throw DomainError("slice_positive_dimensional: ideal is zero-dimensional");
    if (count < 1) throw DomainError("slice_positive_dimensional: count must be positive");
    int m = G.arity();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coef(-5, 5);

    auto random_hyperplane = [&]() {
        Polynomial h(m);
        bool nonconst = false;
        while (!nonconst) {
            h = Polynomial::constant(m, coef(rng));
            for (int v = 0; v < m; ++v) {
                int c = coef(rng);
                if (c != 0) {
                    nonconst = true;
                    h.add_term(Monomial::var(m, v), c);
                }
            }
        }
        return h;
    };

    auto same_point = [](const RealPoint& a, const RealPoint& b) {
        for (std::size_t i = 0; i < a.coords.size(); ++i)
            if (!a.coords[i].intersects(b.coords[i])) return false;
        return true;
    };

    std::vector<RealPoint> found;
    int attempts = opts.slice_attempts + count;
    for (int attempt = 0; attempt < attempts && static_cast<int>(found.size()) < count; ++attempt) {
        Ideal sliced = G.as_ideal();
        GroebnerBasis slice_gb = G;
        bool ok = true;
        for (int extra = 0; extra < m && !is_zero_dimensional(slice_gb); ++extra) {
            sliced = ideal_sum(sliced, Ideal(m, {random_hyperplane()}));
            try {
                slice_gb = buchberger(sliced, MonomialOrder::grevlex(m), opts.budget);
            } catch (const ResourceExceeded&) {
                ok = false;
                break;
            }
        }
        if (!ok || !is_zero_dimensional(slice_gb) || slice_gb.is_unit()) continue;
        GroebnerBasis radical_gb =
            buchberger(zero_dim_radical(slice_gb), MonomialOrder::grevlex(m), opts.budget);
        GroebnerBasis lex_gb = fglm(radical_gb, MonomialOrder::lex(m));
        std::vector<RealPoint> pts;
        try {
            pts = solve_triangular(lex_gb, opts);
        } catch (const PrecisionFailure&) {
            continue;
        }
        for (auto& p : pts) {
            // Belt check against the original generators.
            bool on_variety = true;
            for (const auto& g : G.elements) {
                RatInterval iv = interval_eval(g, p.coords);
                if (!iv.contains_zero() || iv.abs_bound() > opts.residual_tol) on_variety = false;
            }
            if (!on_variety) continue;
            p.sample_only = true;
            bool dup = false;
            for (const auto& q : found)
                if (same_point(p, q)) dup = true;
            if (!dup && static_cast<int>(found.size()) < count) found.push_back(std::move(p));
        }
    }
    if (found.empty())
        throw EmptySample("slice_positive_dimensional: no sample point found within the retry budget");
    return found;
}

} // namespace exactfa
