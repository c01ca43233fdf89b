#include "exactfa/classify.hpp"

#include <cmath>
#include <limits>

#include "exactfa/errors.hpp"
#include "exactfa/rng.hpp"

namespace exactfa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::pair<int, int>> free_positions(int p, int k) {
    std::vector<std::pair<int, int>> pos;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < std::min(i + 1, k); ++j) pos.emplace_back(i, j);
    return pos;
}

double log_det_pd(const Matrix& M, const char* what) {
    Eigen::LLT<Matrix> llt(M);
    if (llt.info() != Eigen::Success) throw SingularSigma(std::string(what) + " is not positive definite");
    double ld = 0;
    for (int i = 0; i < M.rows(); ++i) ld += std::log(llt.matrixL()(i, i));
    return 2 * ld;
}

} // namespace

std::string pattern_name(SolutionPattern p) {
    switch (p) {
        case SolutionPattern::Proper: return "proper";
        case SolutionPattern::Improper: return "improper";
        case SolutionPattern::NoSolution: return "no-solution";
    }
    return "?";
}

std::string algorithm_name(FitAlgorithm a) {
    switch (a) {
        case FitAlgorithm::Lawley: return "lawley";
        case FitAlgorithm::Jennrich: return "jennrich";
        case FitAlgorithm::EM: return "em";
    }
    return "?";
}

Matrix rational_to_matrix(const RationalMatrix& S) {
    Matrix M(S.rows(), S.cols());
    for (int i = 0; i < S.rows(); ++i)
        for (int j = 0; j < S.cols(); ++j) M(i, j) = rat_double(S.at(i, j));
    return M;
}

std::pair<Vector, Matrix> symmetric_eigen(const Matrix& M) {
    if (M.rows() != M.cols()) throw StructuralError("symmetric_eigen: matrix not square");
    int n = static_cast<int>(M.rows());
    double scale = std::max(1e-300, M.cwiseAbs().maxCoeff());
    Matrix A = M / scale;
    Matrix V = Matrix::Identity(n, n);

    auto off_norm = [&]() {
        double s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += 2 * A(i, j) * A(i, j);
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < 100 && off_norm() >= 1e-13; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(A(p, q)) < 1e-300) continue;
                double theta = (A(q, q) - A(p, p)) / (2 * A(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1.0 / std::sqrt(t * t + 1);
                double s = t * c;
                for (int i = 0; i < n; ++i) {
                    double aip = A(i, p), aiq = A(i, q);
                    A(i, p) = c * aip - s * aiq;
                    A(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    double api = A(p, i), aqi = A(q, i);
                    A(p, i) = c * api - s * aqi;
                    A(q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    double vip = V(i, p), viq = V(i, q);
                    V(i, p) = c * vip - s * viq;
                    V(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    Vector vals(n);
    for (int i = 0; i < n; ++i) vals(i) = A(i, i) * scale;
    // Sort descending, carrying the eigenvectors along.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vals(a) > vals(b); });
    Vector sorted(n);
    Matrix vecs(n, n);
    for (int i = 0; i < n; ++i) {
        sorted(i) = vals(order[i]);
        vecs.col(i) = V.col(order[i]);
    }
    return {sorted, vecs};
}

double discrepancy(const Matrix& S, const Matrix& L, const Vector& psi) {
    int p = static_cast<int>(S.rows());
    Matrix Sigma = L * L.transpose();
    Sigma += Matrix(psi.asDiagonal());
    double log_det_S = log_det_pd(S, "sample covariance");
    Eigen::LLT<Matrix> llt(Sigma);
    if (llt.info() != Eigen::Success) {
        double det = Sigma.determinant();
        if (std::abs(det) < 1e-300) throw SingularSigma("model covariance is singular");
        return kInf; // invertible but not a covariance: no likelihood value
    }
    double log_det_Sigma = 0;
    for (int i = 0; i < p; ++i) log_det_Sigma += 2 * std::log(llt.matrixL()(i, i));
    double tr = llt.solve(S).trace();
    return log_det_Sigma + tr - log_det_S - p;
}

double eqdiff0_residual(const Matrix& S, const Matrix& L, const Vector& psi) {
    Matrix Sigma = L * L.transpose();
    Sigma += Matrix(psi.asDiagonal());
    Eigen::PartialPivLU<Matrix> lu(Sigma);
    double det = lu.determinant();
    if (std::abs(det) < 1e-300) throw SingularSigma("model covariance is singular");
    Matrix R = lu.solve((Sigma - S) * lu.solve(Matrix::Identity(S.rows(), S.cols())).transpose());
    // Sigma is symmetric: Sigma^-1 (Sigma - S) Sigma^-1.
    Matrix RL = R * L;
    double res = RL.cwiseAbs().maxCoeff();
    for (int i = 0; i < R.rows(); ++i) res = std::max(res, std::abs(R(i, i)));
    return res;
}

namespace {

struct ParamSpace {
    int p, k;
    std::vector<std::pair<int, int>> pos;

    ParamSpace(int p, int k) : p(p), k(k), pos(free_positions(p, k)) {}
    int dim() const { return static_cast<int>(pos.size()) + p; }

    Vector pack(const Matrix& L, const Vector& psi) const {
        Vector theta(dim());
        for (std::size_t t = 0; t < pos.size(); ++t) theta(t) = L(pos[t].first, pos[t].second);
        for (int i = 0; i < p; ++i) theta(pos.size() + i) = psi(i);
        return theta;
    }

    void unpack(const Vector& theta, Matrix& L, Vector& psi) const {
        L = Matrix::Zero(p, k);
        for (std::size_t t = 0; t < pos.size(); ++t) L(pos[t].first, pos[t].second) = theta(t);
        psi = theta.tail(p);
    }
};

} // namespace

std::pair<Matrix, double> observed_fisher(const Matrix& S, const Matrix& L, const Vector& psi,
                                          int N) {
    ParamSpace space(static_cast<int>(L.rows()), static_cast<int>(L.cols()));
    Vector theta0 = space.pack(L, psi);
    int d = space.dim();

    auto objective = [&](const Vector& theta) {
        Matrix Lt;
        Vector pt;
        space.unpack(theta, Lt, pt);
        return 0.5 * N * discrepancy(S, Lt, pt);
    };

    auto hessian_at_step = [&](double h0) {
        Vector h(d);
        for (int i = 0; i < d; ++i) h(i) = h0 * std::max(1.0, std::abs(theta0(i)));
        double f0 = objective(theta0);
        if (!std::isfinite(f0)) throw SingularSigma("observed_fisher: invalid center point");
        Matrix H(d, d);
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                double v;
                if (i == j) {
                    Vector tp = theta0, tm = theta0;
                    tp(i) += h(i);
                    tm(i) -= h(i);
                    v = (objective(tp) - 2 * f0 + objective(tm)) / (h(i) * h(i));
                } else {
                    Vector tpp = theta0, tpm = theta0, tmp = theta0, tmm = theta0;
                    tpp(i) += h(i); tpp(j) += h(j);
                    tpm(i) += h(i); tpm(j) -= h(j);
                    tmp(i) -= h(i); tmp(j) += h(j);
                    tmm(i) -= h(i); tmm(j) -= h(j);
                    v = (objective(tpp) - objective(tpm) - objective(tmp) + objective(tmm)) /
                        (4 * h(i) * h(j));
                }
                H(i, j) = v;
                H(j, i) = v;
            }
        }
        if (!H.allFinite()) throw SingularSigma("observed_fisher: singular probe point");
        return H;
    };

    Matrix H;
    double step = 1e-4;
    for (int attempt = 0;; ++attempt) {
        try {
            Matrix Hh = hessian_at_step(step);
            Matrix Hh2 = hessian_at_step(step / 2);
            H = (4 * Hh2 - Hh) / 3; // one Richardson halving
            break;
        } catch (const SingularSigma&) {
            if (attempt >= 2) throw;
            step /= 4; // perturbation retry with a smaller stencil
        }
    }
    H = ((H + H.transpose()) / 2).eval();
    auto [vals, vecs] = symmetric_eigen(H);
    return {H, vals(vals.size() - 1)};
}

namespace {

// Conditional minimizer L(psi) from the standardized eigenproblem
// (Psi^-1/2 S Psi^-1/2 for positive psi).
Matrix lawley_loading(const Matrix& S, int k, const Vector& psi) {
    int p = static_cast<int>(S.rows());
    Vector d = psi.cwiseSqrt();
    Matrix B(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) B(i, j) = S(i, j) / (d(i) * d(j));
    auto [theta, P] = symmetric_eigen(B);
    Matrix L = Matrix::Zero(p, k);
    for (int j = 0; j < k; ++j) {
        double w = std::sqrt(std::max(theta(j) - 1.0, 0.0));
        for (int i = 0; i < p; ++i) L(i, j) = d(i) * P(i, j) * w;
    }
    return L;
}

struct SqrtPair {
    Matrix half, inv_half;
};

SqrtPair matrix_sqrt_pd(const Matrix& S) {
    auto [vals, vecs] = symmetric_eigen(S);
    if (vals(vals.size() - 1) <= 0) throw SingularSigma("matrix square root needs a PD matrix");
    Matrix half = vecs * vals.cwiseSqrt().asDiagonal() * vecs.transpose();
    Matrix inv_half = vecs * vals.cwiseSqrt().cwiseInverse().asDiagonal() * vecs.transpose();
    return {half, inv_half};
}

// Conditional minimizer L(psi) from the S^-1/2 Psi S^-1/2 eigenproblem;
// valid for any real psi.
Matrix jennrich_loading(const SqrtPair& sroot, int k, const Vector& psi) {
    int p = static_cast<int>(psi.size());
    Matrix C = sroot.inv_half * Matrix(psi.asDiagonal()) * sroot.inv_half;
    auto [delta, U] = symmetric_eigen(C); // descending; smallest at the back
    Matrix L = Matrix::Zero(p, k);
    for (int j = 0; j < k; ++j) {
        int col = p - 1 - j; // j-th smallest
        double w = std::sqrt(std::max(1.0 - delta(col), 0.0));
        L.col(j) = sroot.half * U.col(col) * w;
    }
    return L;
}

// d q / d psi_i at the conditional minimizer (envelope gradient):
// diag(Sigma^-1 (Sigma - S) Sigma^-1).
Vector psi_gradient(const Matrix& S, const Matrix& L, const Vector& psi) {
    Matrix Sigma = L * L.transpose();
    Sigma += Matrix(psi.asDiagonal());
    Eigen::PartialPivLU<Matrix> lu(Sigma);
    Matrix R = lu.solve((Sigma - S) * lu.solve(Matrix::Identity(S.rows(), S.cols())).transpose());
    return R.diagonal();
}

struct BfgsOutcome {
    Vector x;
    bool converged = false;
    int iterations = 0;
};

template <typename F, typename G>
BfgsOutcome bfgs_minimize(F&& fn, G&& grad, Vector x, const FitOptions& opts) {
    int n = static_cast<int>(x.size());
    Matrix H = Matrix::Identity(n, n);
    double fx = fn(x);
    Vector g = grad(x);
    BfgsOutcome out;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        out.iterations = iter;
        if (!g.allFinite()) break;
        if (g.lpNorm<Eigen::Infinity>() < opts.grad_tol) {
            out.converged = true;
            break;
        }
        Vector dir = -(H * g);
        double gd = g.dot(dir);
        if (!(gd < 0)) {
            H = Matrix::Identity(n, n);
            dir = -g;
            gd = -g.squaredNorm();
            if (gd == 0) {
                out.converged = true;
                break;
            }
        }
        double t = 1.0;
        Vector xn;
        double fnv = kInf;
        bool ok = false;
        for (int ls = 0; ls < 60; ++ls) {
            xn = x + t * dir;
            fnv = fn(xn);
            if (std::isfinite(fnv) && fnv <= fx + opts.armijo_c * t * gd) {
                ok = true;
                break;
            }
            t *= 0.5;
        }
        if (!ok) break;
        Vector gn = grad(xn);
        Vector s = xn - x;
        Vector y = gn - g;
        double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            double rho = 1.0 / sy;
            Matrix I = Matrix::Identity(n, n);
            H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) +
                rho * s * s.transpose();
        } else {
            H = Matrix::Identity(n, n);
        }
        x = xn;
        fx = fnv;
        g = gn;
    }
    out.x = x;
    return out;
}

} // namespace

FitResult fit_lawley(const Matrix& S, int k, const Vector& psi0, const FitOptions& opts) {
    int p = static_cast<int>(S.rows());
    if (psi0.size() != p) throw StructuralError("fit_lawley: psi0 size mismatch");
    for (int i = 0; i < p; ++i)
        if (!(psi0(i) > 0)) throw DomainError("fit_lawley: initial unique variances must be positive");
    const double floor = opts.psi_floor;

    auto psi_of = [&](const Vector& x) {
        Vector psi(p);
        for (int i = 0; i < p; ++i) psi(i) = floor + std::exp(x(i));
        return psi;
    };
    auto fn = [&](const Vector& x) {
        Vector psi = psi_of(x);
        try {
            return discrepancy(S, lawley_loading(S, k, psi), psi);
        } catch (const SingularSigma&) {
            return kInf;
        }
    };
    auto grad = [&](const Vector& x) {
        Vector psi = psi_of(x);
        Matrix L = lawley_loading(S, k, psi);
        Vector g = psi_gradient(S, L, psi);
        for (int i = 0; i < p; ++i) g(i) *= std::exp(x(i));
        return g;
    };

    Vector x0(p);
    for (int i = 0; i < p; ++i) x0(i) = std::log(std::max(psi0(i) - floor, 1e-8));
    BfgsOutcome run = bfgs_minimize(fn, grad, x0, opts);

    FitResult out;
    out.algorithm = FitAlgorithm::Lawley;
    out.psi = psi_of(run.x);
    out.L = lawley_loading(S, k, out.psi);
    out.converged = run.converged;
    out.iterations = run.iterations;
    out.discrepancy = discrepancy(S, out.L, out.psi);
    return out;
}

FitResult fit_jennrich(const Matrix& S, int k, const Vector& psi0, const FitOptions& opts) {
    int p = static_cast<int>(S.rows());
    if (psi0.size() != p) throw StructuralError("fit_jennrich: psi0 size mismatch");
    SqrtPair sroot = matrix_sqrt_pd(S);

    auto fn = [&](const Vector& psi) {
        try {
            return discrepancy(S, jennrich_loading(sroot, k, psi), psi);
        } catch (const SingularSigma&) {
            return kInf;
        }
    };
    auto grad = [&](const Vector& psi) {
        Matrix L = jennrich_loading(sroot, k, psi);
        return psi_gradient(S, L, psi);
    };

    BfgsOutcome run = bfgs_minimize(fn, grad, psi0, opts);

    FitResult out;
    out.algorithm = FitAlgorithm::Jennrich;
    out.psi = run.x;
    out.L = jennrich_loading(sroot, k, out.psi);
    out.converged = run.converged;
    out.iterations = run.iterations;
    out.discrepancy = fn(out.psi);
    return out;
}

FitResult fit_jennrich_pinned(const Matrix& S, int k, const Vector& psi0, int pinned_index,
                              const FitOptions& opts) {
    int p = static_cast<int>(S.rows());
    if (psi0.size() != p) throw StructuralError("fit_jennrich_pinned: psi0 size mismatch");
    if (pinned_index < 0 || pinned_index >= p)
        throw StructuralError("fit_jennrich_pinned: bad pinned index");
    SqrtPair sroot = matrix_sqrt_pd(S);
    const double pinned_value = psi0(pinned_index);

    auto expand = [&](const Vector& free) {
        Vector psi(p);
        int t = 0;
        for (int i = 0; i < p; ++i) psi(i) = i == pinned_index ? pinned_value : free(t++);
        return psi;
    };
    auto fn = [&](const Vector& free) {
        Vector psi = expand(free);
        try {
            return discrepancy(S, jennrich_loading(sroot, k, psi), psi);
        } catch (const SingularSigma&) {
            return kInf;
        }
    };
    auto grad = [&](const Vector& free) {
        Vector psi = expand(free);
        Matrix L = jennrich_loading(sroot, k, psi);
        Vector g = psi_gradient(S, L, psi);
        Vector gf(p - 1);
        int t = 0;
        for (int i = 0; i < p; ++i)
            if (i != pinned_index) gf(t++) = g(i);
        return gf;
    };

    Vector free0(p - 1);
    {
        int t = 0;
        for (int i = 0; i < p; ++i)
            if (i != pinned_index) free0(t++) = psi0(i);
    }
    BfgsOutcome run = bfgs_minimize(fn, grad, free0, opts);

    FitResult out;
    out.algorithm = FitAlgorithm::Jennrich;
    out.psi = expand(run.x);
    out.L = jennrich_loading(sroot, k, out.psi);
    out.converged = run.converged;
    out.iterations = run.iterations;
    out.discrepancy = fn(run.x);
    return out;
}

FitResult fit_em(const Matrix& S, int k, const Vector& psi0, const FitOptions& opts) {
    int p = static_cast<int>(S.rows());
    if (psi0.size() != p) throw StructuralError("fit_em: psi0 size mismatch");
    for (int i = 0; i < p; ++i)
        if (!(psi0(i) > 0)) throw DomainError("fit_em: initial unique variances must be positive");

    // Start L from the Lawley construction so the first Sigma is sensible.
    Matrix L = lawley_loading(S, k, psi0);
    Vector psi = psi0;
    double q_prev = discrepancy(S, L, psi);

    FitResult out;
    out.algorithm = FitAlgorithm::EM;
    out.q_trace.push_back(q_prev);
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        out.iterations = iter + 1;
        Matrix Sigma = L * L.transpose();
        Sigma += Matrix(psi.asDiagonal());
        Matrix beta = L.transpose() * Sigma.llt().solve(Matrix::Identity(p, p));
        Matrix G = Matrix::Identity(k, k) - beta * L + beta * S * beta.transpose();
        Matrix Lnew = S * beta.transpose() * G.llt().solve(Matrix::Identity(k, k));
        Vector psinew = (S - Lnew * beta * S).diagonal();
        L = Lnew;
        psi = psinew;
        double q = discrepancy(S, L, psi);
        out.q_trace.push_back(q);
        if (std::abs(q_prev - q) <= opts.em_tol * std::max(1.0, std::abs(q_prev))) {
            q_prev = q;
            out.converged = true;
            break;
        }
        q_prev = q;
    }
    out.L = L;
    out.psi = psi;
    out.discrepancy = q_prev;
    return out;
}

std::vector<NumericCandidate> to_numeric_candidates(const std::vector<CandidateSolution>& solutions) {
    std::vector<NumericCandidate> out;
    out.reserve(solutions.size());
    for (const auto& s : solutions) {
        NumericCandidate c;
        auto Lm = s.loading_matrix();
        c.L = Matrix(s.p, s.k);
        for (int i = 0; i < s.p; ++i)
            for (int j = 0; j < s.k; ++j) c.L(i, j) = Lm[i][j];
        auto psi = s.psi_values();
        c.psi = Vector(s.p);
        for (int i = 0; i < s.p; ++i) c.psi(i) = psi[i];
        c.label = s.leaf;
        c.sample_only = s.sample_only;
        out.push_back(std::move(c));
    }
    return out;
}

SolutionReport classify_pattern(const std::vector<NumericCandidate>& candidates, const Matrix& S,
                                const ClassifyOptions& opts) {
    if (candidates.empty()) throw DomainError("classify_pattern: empty candidate list");
    SolutionReport rep;
    for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
        double q;
        try {
            q = discrepancy(S, candidates[idx].L, candidates[idx].psi);
        } catch (const SingularSigma&) {
            continue;
        }
        if (q < rep.discrepancy) {
            rep.discrepancy = q;
            rep.best_index = static_cast<int>(idx);
        }
    }
    if (rep.best_index < 0) {
        rep.pattern = SolutionPattern::NoSolution;
        rep.diagnostic = "no candidate admits a likelihood value";
        return rep;
    }
    const NumericCandidate& best = candidates[rep.best_index];
    rep.psi_min = best.psi.minCoeff();
    rep.eqdiff0_residual = eqdiff0_residual(S, best.L, best.psi);
    bool fisher_ok = false;
    try {
        auto [H, min_eig] = observed_fisher(S, best.L, best.psi, opts.sample_size);
        rep.fisher_min_eigenvalue = min_eig;
        double threshold = opts.fisher_tol_factor * H.trace() / H.rows();
        fisher_ok = min_eig > threshold;
    } catch (const SingularSigma& e) {
        rep.fisher_min_eigenvalue = -kInf;
        rep.diagnostic = e.what();
    }
    bool attained_global = rep.discrepancy <= opts.perfect_fit_tol;
    if (rep.eqdiff0_residual < opts.eq4_tol && (fisher_ok || attained_global))
        rep.pattern = rep.psi_min > 0 ? SolutionPattern::Proper : SolutionPattern::Improper;
    else
        rep.pattern = SolutionPattern::NoSolution;
    return rep;
}

SolutionReport classify_pattern(const std::vector<CandidateSolution>& solutions,
                                const RationalMatrix& S, int N, const ClassifyOptions& opts) {
    ClassifyOptions o = opts;
    o.sample_size = N;
    SolutionReport rep = classify_pattern(to_numeric_candidates(solutions), rational_to_matrix(S), o);
    rep.algorithm = "exact";
    return rep;
}

SolutionReport classify_numeric(const Matrix& S, int k, int T, std::uint64_t seed,
                                const ClassifyOptions& copts, const FitOptions& fopts) {
    if (T < 1) throw DomainError("classify_numeric: need at least one start");
    int p = static_cast<int>(S.rows());
    PinnedRng rng(stream_seed(seed, 0x6a3f));
    std::vector<NumericCandidate> fits;
    for (int t = 0; t < T; ++t) {
        Vector psi0(p);
        for (int i = 0; i < p; ++i) psi0(i) = rng.uniform01();
        FitResult r = fit_jennrich(S, k, psi0, fopts);
        if (!std::isfinite(r.discrepancy)) continue;
        NumericCandidate c;
        c.L = r.L;
        c.psi = r.psi;
        c.label = "start" + std::to_string(t);
        fits.push_back(std::move(c));
    }
    SolutionReport rep;
    if (fits.empty()) {
        rep.pattern = SolutionPattern::NoSolution;
        rep.diagnostic = "all numeric fits failed";
    } else {
        rep = classify_pattern(fits, S, copts);
    }
    rep.algorithm = "jennrich";
    rep.starts = T;
    return rep;
}

} // namespace exactfa
