#include "exactfa/faml.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "exactfa/errors.hpp"

namespace exactfa {

namespace {

using PolyMatrix = std::vector<std::vector<Polynomial>>;

PolyMatrix poly_zeros(int rows, int cols, int arity) {
    return PolyMatrix(rows, std::vector<Polynomial>(cols, Polynomial::zero(arity)));
}

PolyMatrix poly_mul(const PolyMatrix& A, const PolyMatrix& B, int arity) {
    int n = static_cast<int>(A.size());
    int m = static_cast<int>(B[0].size());
    int inner = static_cast<int>(B.size());
    PolyMatrix C = poly_zeros(n, m, arity);
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < inner; ++t) {
            if (A[i][t].is_zero()) continue;
            for (int j = 0; j < m; ++j) {
                if (B[t][j].is_zero()) continue;
                C[i][j] += A[i][t] * B[t][j];
            }
        }
    return C;
}

PolyMatrix poly_from_rational(const RationalMatrix& M, int arity) {
    PolyMatrix out = poly_zeros(M.rows(), M.cols(), arity);
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j)
            if (M.at(i, j) != 0) out[i][j] = Polynomial::constant(arity, M.at(i, j));
    return out;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

FactorProblem::FactorProblem(RationalMatrix S_in, int k_in, Rational ridge_in)
    : S(std::move(S_in)), p(S.rows()), k(k_in), ridge(std::move(ridge_in)) {
    if (S.rows() != S.cols()) throw StructuralError("covariance matrix must be square");
    if (!S.is_symmetric()) throw StructuralError("covariance matrix must be symmetric");
    if (p < 2) throw DomainError("need p >= 2 observed variables");
    if (k < 1 || k >= p) throw DomainError("need 1 <= k < p factors");
    if (ridge < 0) throw DomainError("ridge must be nonnegative");
    if (ridge > 0) S = S + RationalMatrix::identity(p) * ridge;
    for (const auto& minor : S.leading_principal_minors())
        if (minor <= 0)
            throw SingularCovariance(
                "covariance (after ridge) is not positive definite; "
                "consider a larger ridge S + lambda*I");
}

int FactorProblem::n_loadings() const {
    int n = 0;
    for (int i = 0; i < p; ++i) n += std::min(i + 1, k);
    return n;
}

std::vector<std::pair<int, int>> FactorProblem::loading_positions() const {
    std::vector<std::pair<int, int>> pos;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < std::min(i + 1, k); ++j) pos.emplace_back(i, j);
    return pos;
}

std::vector<std::string> FactorProblem::loading_names() const {
    std::vector<std::string> names;
    for (const auto& [i, j] : loading_positions())
        names.push_back("l" + std::to_string(i + 1) + std::to_string(j + 1));
    return names;
}

Polynomial FactorProblem::psi_polynomial(int i) const {
    int arity = n_loadings();
    auto pos = loading_positions();
    Polynomial psi = Polynomial::constant(arity, S.at(i, i));
    for (int t = 0; t < arity; ++t)
        if (pos[t].first == i)
            psi -= Polynomial::term(Monomial::var(arity, t, 2), 1);
    return psi;
}

namespace {

// Symbolic p x k loading matrix over a ring that holds the free entries at
// indices `offset..offset+n-1` (row-major); upper triangle is zero.
PolyMatrix symbolic_loadings(const FactorProblem& prob, int arity, int offset) {
    PolyMatrix L = poly_zeros(prob.p, prob.k, arity);
    int t = 0;
    for (const auto& [i, j] : prob.loading_positions()) L[i][j] = Polynomial::variable(arity, offset + t++);
    return L;
}

} // namespace

Ideal build_likelihood_ideal(const FactorProblem& prob) {
    int arity = prob.n_loadings();
    RationalMatrix Sinv = rational_matrix_inverse(prob.S);
    PolyMatrix L = symbolic_loadings(prob, arity, 0);
    PolyMatrix Lt = poly_zeros(prob.k, prob.p, arity);
    for (int i = 0; i < prob.p; ++i)
        for (int j = 0; j < prob.k; ++j) Lt[j][i] = L[i][j];
    PolyMatrix LLt = poly_mul(L, Lt, arity);
    // M = S - LL^T - diag(S - LL^T): off-diagonal part of S - LL^T.
    PolyMatrix M = poly_zeros(prob.p, prob.p, arity);
    for (int i = 0; i < prob.p; ++i)
        for (int j = 0; j < prob.p; ++j) {
            if (i == j) continue;
            M[i][j] = Polynomial::constant(arity, prob.S.at(i, j)) - LLt[i][j];
        }
    PolyMatrix E = poly_mul(poly_mul(M, poly_from_rational(Sinv, arity), arity), L, arity);
    std::vector<Polynomial> gens;
    for (const auto& [i, j] : prob.loading_positions()) gens.push_back(E[i][j]);
    return Ideal(arity, std::move(gens));
}

ExplicitPsiSystem build_explicit_psi_system(const FactorProblem& prob) {
    int nl = prob.n_loadings();
    int arity = prob.p + nl;
    RationalMatrix Sinv = rational_matrix_inverse(prob.S);

    ExplicitPsiSystem sys;
    sys.p = prob.p;
    sys.k = prob.k;
    for (int i = 0; i < prob.p; ++i) sys.names.push_back("psi" + std::to_string(i + 1));
    for (const auto& n : prob.loading_names()) sys.names.push_back(n);

    PolyMatrix L = symbolic_loadings(prob, arity, prob.p);
    PolyMatrix Lt = poly_zeros(prob.k, prob.p, arity);
    for (int i = 0; i < prob.p; ++i)
        for (int j = 0; j < prob.k; ++j) Lt[j][i] = L[i][j];
    PolyMatrix LLt = poly_mul(L, Lt, arity);

    std::vector<Polynomial> gens;
    // psi_i - (s_ii - sum_j l_ij^2)
    for (int i = 0; i < prob.p; ++i) {
        Polynomial f = Polynomial::variable(arity, i) -
                       (Polynomial::constant(arity, prob.S.at(i, i)) - LLt[i][i]);
        gens.push_back(f);
    }
    // L - (LL^T + Psi) S^-1 L, free entries.
    PolyMatrix A = LLt;
    for (int i = 0; i < prob.p; ++i) A[i][i] += Polynomial::variable(arity, i);
    PolyMatrix E = poly_mul(poly_mul(A, poly_from_rational(Sinv, arity), arity), L, arity);
    for (const auto& [i, j] : prob.loading_positions()) gens.push_back(L[i][j] - E[i][j]);

    sys.ideal = Ideal(arity, std::move(gens));
    return sys;
}

std::string node_status_name(NodeStatus s) {
    switch (s) {
        case NodeStatus::ZeroDim: return "zero-dimensional";
        case NodeStatus::PositiveDim: return "positive-dimensional";
        case NodeStatus::Empty: return "empty";
        case NodeStatus::Budget: return "budget-exceeded";
    }
    return "?";
}

std::vector<DecompositionNode> decompose_with_splitters(const Ideal& J,
                                                        const std::vector<Polynomial>& splitters,
                                                        const std::vector<Polynomial>& extras,
                                                        const DecomposeConfig& cfg) {
    std::vector<Polynomial> all = splitters;
    all.insert(all.end(), extras.begin(), extras.end());
    std::size_t n_base = splitters.size();
    MonomialOrder grev = MonomialOrder::grevlex(J.arity);

    struct WorkItem {
        std::string label;
        Ideal ideal;
        std::size_t next;
    };
    std::deque<WorkItem> work;
    work.push_back({"", J, 0});
    std::vector<DecompositionNode> leaves;

    auto split = [&](WorkItem item) {
        const Polynomial& h = all[item.next];
        work.push_back({item.label + "0", ideal_sum(item.ideal, Ideal(J.arity, {h})), item.next + 1});
        try {
            Ideal sat = saturate(item.ideal, h, cfg.budget);
            work.push_back({item.label + "1", std::move(sat), item.next + 1});
        } catch (const ResourceExceeded& e) {
            leaves.push_back({item.label + "1", item.ideal, std::nullopt, NodeStatus::Budget,
                              std::string("saturation: ") + e.what()});
        }
    };

    while (!work.empty()) {
        WorkItem item = std::move(work.front());
        work.pop_front();
        // A visible unit generator settles the branch without splitting.
        bool unit_gen = false;
        for (const auto& g : item.ideal.generators)
            if (g.is_constant()) unit_gen = true;
        if (unit_gen) {
            leaves.push_back({item.label, item.ideal,
                              buchberger(Ideal(J.arity, {Polynomial::constant(J.arity, 1)}), grev),
                              NodeStatus::Empty, ""});
            continue;
        }
        if (item.next < n_base) {
            split(std::move(item));
            continue;
        }
        GroebnerBasis gb;
        try {
            gb = buchberger(item.ideal, grev, cfg.budget);
        } catch (const ResourceExceeded& e) {
            leaves.push_back({item.label, item.ideal, std::nullopt, NodeStatus::Budget,
                              std::string("groebner: ") + e.what()});
            continue;
        }
        if (gb.is_unit() || gb.elements.empty()) {
            leaves.push_back({item.label, item.ideal, gb, NodeStatus::Empty, ""});
            continue;
        }
        if (is_zero_dimensional(gb)) {
            try {
                GroebnerBasis radical_gb = buchberger(zero_dim_radical(gb), grev, cfg.budget);
                leaves.push_back({item.label, item.ideal, radical_gb, NodeStatus::ZeroDim, ""});
            } catch (const ResourceExceeded& e) {
                leaves.push_back({item.label, item.ideal, gb, NodeStatus::Budget,
                                  std::string("radical: ") + e.what()});
            }
            continue;
        }
        bool complex_leaf = false;
        for (const auto& g : gb.elements)
            if (leading_monomial(g, grev).degree() > cfg.extra_splitter_lm_degree) complex_leaf = true;
        if (item.next < all.size() && complex_leaf) {
            split(std::move(item));
            continue;
        }
        leaves.push_back({item.label, item.ideal, gb, NodeStatus::PositiveDim, ""});
    }

    std::sort(leaves.begin(), leaves.end(),
              [](const DecompositionNode& a, const DecompositionNode& b) { return a.label < b.label; });
    return leaves;
}

std::vector<Polynomial> psi_splitters(const FactorProblem& prob) {
    std::vector<Polynomial> out;
    for (int i = 0; i < prob.p; ++i) out.push_back(prob.psi_polynomial(i));
    return out;
}

std::vector<Polynomial> extra_splitters(const FactorProblem& prob) {
    if (prob.k < 2) return {};
    int arity = prob.n_loadings();
    auto pos = prob.loading_positions();
    auto index_of = [&](int i, int j) {
        for (int t = 0; t < static_cast<int>(pos.size()); ++t)
            if (pos[t].first == i && pos[t].second == j) return t;
        return -1;
    };
    std::vector<Polynomial> out;
    // l_11, then the second-column entries l_22..l_p2.
    out.push_back(Polynomial::variable(arity, index_of(0, 0)));
    for (int i = 1; i < prob.p; ++i) out.push_back(Polynomial::variable(arity, index_of(i, 1)));
    // Paired-row determinants l_i1 l_j2 - l_i2 l_j1 over rows 2..p.
    for (int i = 1; i < prob.p; ++i)
        for (int j = i + 1; j < prob.p; ++j) {
            Polynomial d = Polynomial::variable(arity, index_of(i, 0)) *
                               Polynomial::variable(arity, index_of(j, 1)) -
                           Polynomial::variable(arity, index_of(i, 1)) *
                               Polynomial::variable(arity, index_of(j, 0));
            out.push_back(d);
        }
    return out;
}

std::vector<DecompositionNode> decompose(const Ideal& J, const FactorProblem& prob,
                                         const DecomposeConfig& cfg) {
    return decompose_with_splitters(J, psi_splitters(prob), extra_splitters(prob), cfg);
}

std::vector<std::vector<double>> CandidateSolution::loading_matrix() const {
    std::vector<std::vector<double>> L(p, std::vector<double>(k, 0.0));
    int t = 0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < std::min(i + 1, k); ++j) L[i][j] = point.approx(t++);
    return L;
}

std::vector<double> CandidateSolution::psi_values() const {
    std::vector<double> v;
    v.reserve(psi.size());
    for (const auto& iv : psi) v.push_back(rat_double(iv.mid()));
    return v;
}

std::vector<double> recover_psi(const std::vector<std::vector<double>>& L, const RationalMatrix& S) {
    if (static_cast<int>(L.size()) != S.rows()) throw StructuralError("recover_psi: shape mismatch");
    std::vector<double> psi(L.size());
    for (std::size_t i = 0; i < L.size(); ++i) {
        double s = rat_double(S.at(static_cast<int>(i), static_cast<int>(i)));
        for (double l : L[i]) s -= l * l;
        psi[i] = s;
    }
    return psi;
}

std::vector<RatInterval> recover_psi_intervals(const FactorProblem& prob,
                                               const std::vector<RatInterval>& loadings) {
    auto pos = prob.loading_positions();
    if (loadings.size() != pos.size()) throw StructuralError("recover_psi_intervals: shape mismatch");
    std::vector<RatInterval> psi(prob.p, RatInterval::point(0));
    for (int i = 0; i < prob.p; ++i) psi[i] = RatInterval::point(prob.S.at(i, i));
    for (std::size_t t = 0; t < pos.size(); ++t) psi[pos[t].first] = psi[pos[t].first] - loadings[t].pow(2);
    return psi;
}

std::vector<std::vector<double>> canonicalize_sign(const std::vector<std::vector<double>>& L) {
    if (L.empty()) return L;
    std::vector<std::vector<double>> out = L;
    std::size_t cols = L[0].size();
    for (std::size_t j = 0; j < cols; ++j) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < out.size(); ++i)
            if (std::abs(out[i][j]) > std::abs(out[best][j])) best = i;
        if (out[best][j] < 0)
            for (std::size_t i = 0; i < out.size(); ++i) out[i][j] = -out[i][j];
    }
    return out;
}

namespace {

bool same_candidate(CandidateSolution& a, CandidateSolution& b, const Rational& joint_width) {
    for (std::size_t i = 0; i < a.point.coords.size(); ++i)
        if (!a.point.coords[i].intersects(b.point.coords[i])) return false;
    // Overlapping enclosures: refine both before declaring equality.
    a.point.refine(joint_width);
    b.point.refine(joint_width);
    for (std::size_t i = 0; i < a.point.coords.size(); ++i)
        if (!a.point.coords[i].intersects(b.point.coords[i])) return false;
    return true;
}

} // namespace

EnumerationResult enumerate_solutions(const FactorProblem& prob, const EnumerateOptions& opts) {
    EnumerationResult out;
    Ideal J = build_likelihood_ideal(prob);
    out.leaves = decompose(J, prob, opts.decompose);

    MonomialOrder lex = MonomialOrder::lex(J.arity);
    for (const auto& node : out.leaves) {
        std::vector<RealPoint> pts;
        switch (node.status) {
            case NodeStatus::Empty:
                continue;
            case NodeStatus::Budget:
                out.branch_errors.push_back(node.label + ": " + node.diagnostic);
                continue;
            case NodeStatus::ZeroDim:
                try {
                    GroebnerBasis lex_gb = fglm(*node.gb_grevlex, lex);
                    pts = solve_triangular(lex_gb, opts.solve);
                } catch (const PrecisionFailure& e) {
                    out.branch_errors.push_back(node.label + ": " + e.what());
                    continue;
                }
                break;
            case NodeStatus::PositiveDim:
                try {
                    pts = slice_positive_dimensional(*node.gb_grevlex, opts.sample_count,
                                                     opts.seed ^ fnv1a(node.label), opts.solve);
                } catch (const EmptySample& e) {
                    out.branch_errors.push_back(node.label + ": " + e.what());
                    continue;
                }
                break;
        }
        for (auto& pt : pts) {
            CandidateSolution cand;
            cand.p = prob.p;
            cand.k = prob.k;
            cand.point = std::move(pt);
            cand.psi = recover_psi_intervals(prob, cand.point.coords);
            cand.leaf = node.label;
            cand.sample_only = cand.point.sample_only;
            cand.exact = cand.point.exact();
            Rational bound = 0;
            for (const auto& g : J.generators) {
                Rational b = interval_eval(g, cand.point.coords).abs_bound();
                if (b > bound) bound = b;
            }
            cand.residual_bound = bound;
            out.solutions.push_back(std::move(cand));
        }
    }

    // Exact-duplicate removal across leaves; first leaf label wins.
    Rational joint = opts.solve.target_width / 1000;
    std::vector<CandidateSolution> unique;
    for (auto& cand : out.solutions) {
        bool dup = false;
        for (auto& kept : unique)
            if (same_candidate(kept, cand, joint)) {
                dup = true;
                break;
            }
        if (!dup) unique.push_back(std::move(cand));
    }
    out.solutions = std::move(unique);
    std::sort(out.solutions.begin(), out.solutions.end(),
              [](const CandidateSolution& a, const CandidateSolution& b) {
                  if (a.leaf != b.leaf) return a.leaf < b.leaf;
                  for (std::size_t i = 0; i < a.point.coords.size(); ++i) {
                      Rational am = a.point.coords[i].mid(), bm = b.point.coords[i].mid();
                      if (am != bm) return am < bm;
                  }
                  return false;
              });
    return out;
}

int count_sign_classes(const std::vector<CandidateSolution>& solutions, double tol) {
    std::vector<std::pair<std::vector<std::vector<double>>, std::vector<double>>> classes;
    for (const auto& s : solutions) {
        auto canon = canonicalize_sign(s.loading_matrix());
        auto psi = s.psi_values();
        bool found = false;
        for (const auto& [cl, cp] : classes) {
            bool same = true;
            for (std::size_t i = 0; i < canon.size() && same; ++i)
                for (std::size_t j = 0; j < canon[i].size() && same; ++j)
                    if (std::abs(canon[i][j] - cl[i][j]) > tol) same = false;
            for (std::size_t i = 0; i < psi.size() && same; ++i)
                if (std::abs(psi[i] - cp[i]) > tol) same = false;
            if (same) found = true;
        }
        if (!found) classes.emplace_back(std::move(canon), std::move(psi));
    }
    return static_cast<int>(classes.size());
}

} // namespace exactfa
