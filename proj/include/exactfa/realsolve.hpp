#ifndef EXACTFA_REALSOLVE_HPP
#define EXACTFA_REALSOLVE_HPP

#include <cstdint>
#include <vector>

#include "exactfa/groebner.hpp"
#include "exactfa/interval.hpp"
#include "exactfa/unipoly.hpp"

namespace exactfa {

struct SolveOptions {
    Rational target_width = rat_pow10_inv(12);
    Rational residual_tol = rat_pow10_inv(10);
    int max_refine_rounds = 20;
    GroebnerBudget budget;
    int slice_attempts = 8;
};

// A certified real solution: every coordinate is either an exact rational
// (degenerate interval) or an interval of width <= the requested target,
// and every generator of the defining ideal evaluates within
// residual_bound over the box.
struct RealPoint {
    std::vector<RatInterval> coords;
    std::vector<UniPoly> minimal_polys; // per-coordinate; empty entries allowed
    Rational residual_bound;
    bool sample_only = false;

    bool exact() const {
        for (const auto& c : coords)
            if (!c.is_point()) return false;
        return true;
    }
    // Shrinks every non-exact coordinate below the given width using its
    // minimal polynomial.
    void refine(const Rational& width);
    double approx(int i) const { return rat_double(coords[i].mid()); }
    std::vector<double> approx_all() const {
        std::vector<double> v;
        v.reserve(coords.size());
        for (std::size_t i = 0; i < coords.size(); ++i) v.push_back(rat_double(coords[i].mid()));
        return v;
    }
};

// Sturm isolation of the real roots of a univariate polynomial (arity-1
// Polynomial); one interval per distinct root.
std::vector<IsolatingInterval> isolate_real_roots(const Polynomial& f);

// All real points of a zero-dimensional radical ideal presented by its
// reduced lex basis (identity variable precedence). Coordinates come from
// per-variable eliminants; combinations are kept or rejected by interval
// evaluation of the basis with adaptive refinement.
std::vector<RealPoint> solve_triangular(const GroebnerBasis& G, const SolveOptions& opts = {});

// Sample points of a positive-dimensional variety: random rational
// hyperplanes cut the ideal down to dimension zero and the finite slice is
// solved. Points are tagged sample_only; components can be missed.
std::vector<RealPoint> slice_positive_dimensional(const GroebnerBasis& G, int count,
                                                  std::uint64_t seed,
                                                  const SolveOptions& opts = {});

} // namespace exactfa

#endif
