#ifndef EXACTFA_FAML_HPP
#define EXACTFA_FAML_HPP

#include <optional>
#include <string>
#include <vector>

#include "exactfa/ratmatrix.hpp"
#include "exactfa/realsolve.hpp"

namespace exactfa {

// A maximum-likelihood factor analysis instance with exact covariance
// entries. The loading matrix is p x k with the upper triangle fixed to
// zero; the free entries l_ij (j <= min(i,k)) are the ring variables,
// flattened row-major.
struct FactorProblem {
    RationalMatrix S; // effective covariance, ridge already applied
    int p = 0;
    int k = 0;
    Rational ridge = 0;

    FactorProblem(RationalMatrix S_in, int k, Rational ridge = 0);

    int n_loadings() const;
    // Row-major free positions (i, j), 0-based.
    std::vector<std::pair<int, int>> loading_positions() const;
    std::vector<std::string> loading_names() const;
    // The unique-variance polynomial psi_i = s_ii - sum_j l_ij^2 in the
    // loading ring.
    Polynomial psi_polynomial(int i) const;
};

// The likelihood ideal in R[l]: the free entries of
// {S - LL^T - diag(S - LL^T)} S^-1 L, unique variances eliminated.
Ideal build_likelihood_ideal(const FactorProblem& prob);

// The explicit-unique-variance formulation used by the worked 3x3 example:
// ring [psi_1..psi_p, l...], generators psi_i - (s_ii - sum l_ij^2)
// followed by the free entries of L - (LL^T + Psi) S^-1 L.
struct ExplicitPsiSystem {
    std::vector<std::string> names;
    Ideal ideal;
    int p = 0, k = 0;
};
ExplicitPsiSystem build_explicit_psi_system(const FactorProblem& prob);

enum class NodeStatus { ZeroDim, PositiveDim, Empty, Budget };

std::string node_status_name(NodeStatus s);

// One leaf of the sum/saturation tree. For ZeroDim leaves gb_grevlex is a
// reduced grevlex basis of the radical; for PositiveDim leaves it is the
// basis of the leaf ideal itself.
struct DecompositionNode {
    std::string label;
    Ideal ideal;
    std::optional<GroebnerBasis> gb_grevlex;
    NodeStatus status = NodeStatus::Budget;
    std::string diagnostic;
};

struct DecomposeConfig {
    GroebnerBudget budget;
    // A leaf whose grevlex basis has a leading monomial of larger total
    // degree gets the extra splitters (k >= 2 only).
    int extra_splitter_lm_degree = 6;
};

// Core tree: splits J by each splitter in order (sum child appends '0',
// saturation child '1'), then classifies leaves; extra splitters extend
// only branches whose basis trips the complexity threshold. Per-branch
// budget failures become Budget nodes, never a thrown error.
std::vector<DecompositionNode> decompose_with_splitters(const Ideal& J,
                                                        const std::vector<Polynomial>& splitters,
                                                        const std::vector<Polynomial>& extras,
                                                        const DecomposeConfig& cfg = {});

// Splitters for a factor problem: psi_1..psi_p, and for k >= 2 the
// first-loading / second-column / paired-row-minor polynomials.
std::vector<Polynomial> psi_splitters(const FactorProblem& prob);
std::vector<Polynomial> extra_splitters(const FactorProblem& prob);

std::vector<DecompositionNode> decompose(const Ideal& J, const FactorProblem& prob,
                                         const DecomposeConfig& cfg = {});

// One candidate stationary point: certified loadings plus recovered unique
// variances. Sign conventions of the source leaf are preserved; the
// canonical form is available for sign-class bookkeeping.
struct CandidateSolution {
    int p = 0, k = 0;
    RealPoint point;                // free loadings, row-major
    std::vector<RatInterval> psi;   // recovered, exact when the point is
    std::string leaf;
    bool sample_only = false;
    bool exact = false;
    Rational residual_bound;        // likelihood-ideal residual over the box

    std::vector<std::vector<double>> loading_matrix() const;
    std::vector<double> psi_values() const;
};

struct EnumerationResult {
    std::vector<CandidateSolution> solutions;
    std::vector<DecompositionNode> leaves;
    std::vector<std::string> branch_errors;
};

struct EnumerateOptions {
    SolveOptions solve;
    DecomposeConfig decompose;
    int sample_count = 3;       // per positive-dimensional leaf
    std::uint64_t seed = 20240214;
};

// Full pipeline: decomposition, per-leaf FGLM + triangular solve (or
// slicing), psi recovery, and exact-duplicate removal across leaves.
EnumerationResult enumerate_solutions(const FactorProblem& prob, const EnumerateOptions& opts = {});

// psi_i = s_ii - sum_j l_ij^2; no clamping, negative values pass through.
std::vector<double> recover_psi(const std::vector<std::vector<double>>& L, const RationalMatrix& S);
std::vector<RatInterval> recover_psi_intervals(const FactorProblem& prob,
                                               const std::vector<RatInterval>& loadings);

// Flips each column so its largest-magnitude entry (earliest index on
// ties) is nonnegative. Idempotent.
std::vector<std::vector<double>> canonicalize_sign(const std::vector<std::vector<double>>& L);

// Number of distinct solutions after sign canonicalization.
int count_sign_classes(const std::vector<CandidateSolution>& solutions, double tol = 1e-9);

} // namespace exactfa

#endif
