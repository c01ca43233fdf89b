#ifndef EXACTFA_HARNESS_HPP
#define EXACTFA_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exactfa/classify.hpp"

namespace exactfa {

// Ground-truth model for the simulation studies. For unit-variance models
// the unique variances are diag(I - LL^T) and must be positive.
struct SimulationModel {
    Matrix L_true;
    Vector psi_true;
    int N = 100;
    std::uint64_t seed = 1;

    static SimulationModel unit_variance(Matrix L, int N, std::uint64_t seed);
    int p() const { return static_cast<int>(L_true.rows()); }
    int k() const { return static_cast<int>(L_true.cols()); }
};

struct SimulateOptions {
    int round_decimals = 1; // matches the covariance ingestion convention
};

// N draws from N(0, L L^T + Psi) via Cholesky and Box-Muller on the pinned
// generator; returns the sample covariance (1/N centered second moment).
Matrix simulate_covariance_raw(const SimulationModel& model);

// The exact-arithmetic version: entries rounded to the configured number
// of decimals and converted to rationals with power-of-ten denominators.
FactorProblem simulate_covariance(const SimulationModel& model, const SimulateOptions& opts = {});

RationalMatrix round_to_rational(const Matrix& S, int decimals);

// Covariance file formats: plain decimal CSV (no header, symmetric) or
// JSON {"S": [["p/q", ...], ...]}.
RationalMatrix read_covariance_csv(const std::string& path);
RationalMatrix read_covariance_json(const std::string& path);
RationalMatrix read_covariance_file(const std::string& path);
std::string covariance_to_csv(const RationalMatrix& S);

enum class ClassifyMode { Exact, Numeric };

struct StudyOptions {
    ClassifyMode mode = ClassifyMode::Numeric;
    int starts = 50; // multi-start budget for the numeric classifier
    std::uint64_t seed = 20240214;
    int jobs = 1;
    ClassifyOptions classify;
    FitOptions fit;
    EnumerateOptions enumerate;
    // psi_p-profile sampling for the interpolation study.
    int profile_psi_points = 14;
    int profile_attempts = 5;
    double profile_psi_lo = -0.3, profile_psi_hi = 1.0;
};

struct InterpolateRow {
    double t = 0;
    SolutionReport report;
};

struct ProfilePoint {
    double t, psi_last, q;
};

struct InterpolateResult {
    std::vector<InterpolateRow> rows;
    // First interval [t_lo, t_hi] where the pattern label changes, refined
    // by bisection; absent when every grid label agrees.
    std::optional<std::pair<double, double>> transition;
    std::vector<ProfilePoint> profile; // q minimized with psi_p pinned
};

// S(t) = t S_a + (1-t) S_b classified over a grid of t values, plus the
// discrepancy-vs-psi_p profile data behind the plots.
InterpolateResult interpolate_study(const Matrix& S_a, const Matrix& S_b,
                                    const std::vector<double>& grid, int k,
                                    const StudyOptions& opts = {});

std::vector<double> uniform_grid(int points);

struct MonteCarloRow {
    int run = 0;
    SolutionPattern pattern = SolutionPattern::NoSolution;
    double discrepancy = 0;
    double psi_min = 0;
    std::string note;
};

struct MonteCarloResult {
    int proper = 0, improper = 0, no_solution = 0;
    std::vector<MonteCarloRow> rows;
    std::string to_csv() const;
};

// Repeated simulate -> classify; per-run failures are recorded as
// no-solution rows with a note, never aborting the batch. Runs execute on
// a bounded pool; aggregation is ordered by run index.
MonteCarloResult monte_carlo(const SimulationModel& model, int runs, const StudyOptions& opts = {});

} // namespace exactfa

#endif
