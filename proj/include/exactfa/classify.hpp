#ifndef EXACTFA_CLASSIFY_HPP
#define EXACTFA_CLASSIFY_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "exactfa/faml.hpp"

namespace exactfa {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class SolutionPattern { Proper, Improper, NoSolution };

std::string pattern_name(SolutionPattern p);

struct ClassifyOptions {
    double eq4_tol = 1e-6;           // residual gate on the likelihood equations
    double fisher_tol_factor = 1e-6; // min eigenvalue > factor * trace / dim
    int sample_size = 100;           // N, scales the observed information
    // q >= 0 always, so a candidate at q ~ 0 is an attained global optimum
    // and the Fisher gate (which certifies local maxima) is moot for it.
    double perfect_fit_tol = 1e-10;
};

// A candidate in plain double precision; exact candidates degrade to this
// for the numeric checks.
struct NumericCandidate {
    Matrix L;
    Vector psi;
    std::string label;
    bool sample_only = false;
};

struct SolutionReport {
    SolutionPattern pattern = SolutionPattern::NoSolution;
    int best_index = -1; // into the candidate list, -1 when nothing evaluable
    double discrepancy = std::numeric_limits<double>::infinity();
    double psi_min = 0.0;
    double fisher_min_eigenvalue = 0.0;
    double eqdiff0_residual = 0.0;
    std::string algorithm;
    int starts = 0;
    std::string diagnostic;
};

enum class FitAlgorithm { Lawley, Jennrich, EM };

std::string algorithm_name(FitAlgorithm a);

struct FitOptions {
    int max_iter = 500;
    double grad_tol = 1e-9;
    double armijo_c = 1e-4;
    double psi_floor = 0.005; // Lawley only
    double em_tol = 1e-12;
};

struct FitResult {
    Matrix L;
    Vector psi;
    bool converged = false;
    int iterations = 0;
    double discrepancy = std::numeric_limits<double>::infinity();
    FitAlgorithm algorithm = FitAlgorithm::Lawley;
    std::vector<double> q_trace; // per-iteration discrepancy (EM only)
};

// Jacobi eigendecomposition of a symmetric matrix: eigenvalues descending,
// matching eigenvectors in the columns. Rotations run until the
// off-diagonal norm of the max-scaled matrix drops below 1e-13.
std::pair<Vector, Matrix> symmetric_eigen(const Matrix& M);

// q = log|Sigma| + tr(Sigma^-1 S) - log|S| - p with Sigma = LL^T + Psi.
// +infinity when |Sigma| <= 0 (no likelihood value exists there); throws
// SingularSigma when Sigma is numerically singular.
double discrepancy(const Matrix& S, const Matrix& L, const Vector& psi);

// Max-norm of the stacked likelihood equations
// Sigma^-1 (Sigma - S) Sigma^-1 L and diag(Sigma^-1 (Sigma - S) Sigma^-1).
double eqdiff0_residual(const Matrix& S, const Matrix& L, const Vector& psi);

// Observed Fisher information: central-difference Hessian of (N/2) q in
// the free parameters (lower-triangular loadings row-major, then psi) with
// one Richardson halving, symmetrized. Returns the matrix and its minimum
// eigenvalue.
std::pair<Matrix, double> observed_fisher(const Matrix& S, const Matrix& L, const Vector& psi,
                                          int N);

// The solution-pattern decision: pick the discrepancy minimizer, gate on
// the likelihood-equation residual and Fisher positivity, then split
// proper/improper on min psi.
SolutionReport classify_pattern(const std::vector<NumericCandidate>& candidates, const Matrix& S,
                                const ClassifyOptions& opts = {});
SolutionReport classify_pattern(const std::vector<CandidateSolution>& solutions,
                                const RationalMatrix& S, int N = 100,
                                const ClassifyOptions& opts = {});

std::vector<NumericCandidate> to_numeric_candidates(const std::vector<CandidateSolution>& solutions);

// factanal-style fit: L from the top-k eigenpairs of Psi^-1/2 S Psi^-1/2,
// quasi-Newton over log(psi - floor), unique variances floored at 0.005.
FitResult fit_lawley(const Matrix& S, int k, const Vector& psi0, const FitOptions& opts = {});

// Unconstrained-psi fit through the S^-1/2 Psi S^-1/2 eigenproblem; may
// return zero or negative unique variances.
FitResult fit_jennrich(const Matrix& S, int k, const Vector& psi0, const FitOptions& opts = {});

// Same, but with one unique variance held at its initial value (profile
// studies along a psi coordinate).
FitResult fit_jennrich_pinned(const Matrix& S, int k, const Vector& psi0, int pinned_index,
                              const FitOptions& opts = {});

// EM updates on the sufficient statistic S; discrepancy is monotone
// non-increasing and psi stays positive.
FitResult fit_em(const Matrix& S, int k, const Vector& psi0, const FitOptions& opts = {});

// Multi-start numeric classifier: T Jennrich fits from U(0,1) unique
// variances, then the pattern decision on the pooled fits.
SolutionReport classify_numeric(const Matrix& S, int k, int T, std::uint64_t seed,
                                const ClassifyOptions& copts = {}, const FitOptions& fopts = {});

Matrix rational_to_matrix(const RationalMatrix& S);

} // namespace exactfa

#endif
