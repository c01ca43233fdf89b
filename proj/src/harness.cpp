#include "exactfa/harness.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "exactfa/errors.hpp"
#include "exactfa/rng.hpp"

namespace exactfa {

SimulationModel SimulationModel::unit_variance(Matrix L, int N, std::uint64_t seed) {
    SimulationModel m;
    m.L_true = std::move(L);
    m.N = N;
    m.seed = seed;
    int p = m.p();
    m.psi_true = Vector(p);
    for (int i = 0; i < p; ++i) {
        double comm = m.L_true.row(i).squaredNorm();
        m.psi_true(i) = 1.0 - comm;
        if (m.psi_true(i) <= 0)
            throw DomainError("unit-variance model needs communalities below one");
    }
    return m;
}

Matrix simulate_covariance_raw(const SimulationModel& model) {
    int p = model.p();
    Matrix Sigma = model.L_true * model.L_true.transpose();
    Sigma += Matrix(model.psi_true.asDiagonal());
    Eigen::LLT<Matrix> llt(Sigma);
    if (llt.info() != Eigen::Success) throw DomainError("model covariance is not positive definite");
    Matrix chol = llt.matrixL();

    PinnedRng rng(model.seed);
    Matrix X(model.N, p);
    for (int n = 0; n < model.N; ++n) {
        Vector z(p);
        for (int i = 0; i < p; ++i) z(i) = rng.normal();
        X.row(n) = (chol * z).transpose();
    }
    Eigen::RowVectorXd mean = X.colwise().mean();
    Matrix centered = X.rowwise() - mean;
    return (centered.transpose() * centered) / model.N;
}

RationalMatrix round_to_rational(const Matrix& S, int decimals) {
    double scale = std::pow(10.0, decimals);
    Rational den = 1;
    for (int i = 0; i < decimals; ++i) den *= 10;
    RationalMatrix out(static_cast<int>(S.rows()), static_cast<int>(S.cols()));
    for (int i = 0; i < S.rows(); ++i)
        for (int j = i; j < S.cols(); ++j) {
            long long num = std::llround(S(i, j) * scale);
            Rational q(mpz_class(static_cast<long>(num)), den.get_num());
            q.canonicalize();
            out.at(i, j) = q;
            out.at(j, i) = q;
        }
    return out;
}

FactorProblem simulate_covariance(const SimulationModel& model, const SimulateOptions& opts) {
    Matrix raw = simulate_covariance_raw(model);
    RationalMatrix S = round_to_rational(raw, opts.round_decimals);
    return FactorProblem(S, model.k());
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

RationalMatrix read_covariance_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open covariance file: " + path);
    std::vector<std::vector<Rational>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<Rational> row;
        for (const auto& cell : split(line, ',')) {
            std::string t = trim(cell);
            row.push_back(t.find('/') != std::string::npos ? rat_parse(t) : rat_from_decimal(t));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DomainError("empty covariance file: " + path);
    int p = static_cast<int>(rows.size());
    RationalMatrix S(p, p);
    for (int i = 0; i < p; ++i) {
        if (static_cast<int>(rows[i].size()) != p)
            throw DomainError("covariance file is not square: " + path);
        for (int j = 0; j < p; ++j) S.at(i, j) = rows[i][j];
    }
    return S;
}

RationalMatrix read_covariance_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open covariance file: " + path);
    nlohmann::json doc = nlohmann::json::parse(in);
    if (!doc.contains("S")) throw DomainError("covariance JSON needs an \"S\" array");
    const auto& rows = doc["S"];
    int p = static_cast<int>(rows.size());
    RationalMatrix S(p, p);
    for (int i = 0; i < p; ++i) {
        if (static_cast<int>(rows[i].size()) != p) throw DomainError("covariance JSON is not square");
        for (int j = 0; j < p; ++j) {
            const auto& cell = rows[i][j];
            if (cell.is_string()) {
                std::string t = cell.get<std::string>();
                S.at(i, j) = t.find('/') != std::string::npos || t.find('.') == std::string::npos
                                 ? rat_parse(t)
                                 : rat_from_decimal(t);
            } else {
                S.at(i, j) = rat_from_decimal(cell.dump());
            }
        }
    }
    return S;
}

RationalMatrix read_covariance_file(const std::string& path) {
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") return read_covariance_json(path);
    return read_covariance_csv(path);
}

std::string covariance_to_csv(const RationalMatrix& S) {
    std::ostringstream out;
    for (int i = 0; i < S.rows(); ++i) {
        for (int j = 0; j < S.cols(); ++j) {
            if (j) out << ",";
            const Rational& q = S.at(i, j);
            // Power-of-ten denominators print as exact decimals; anything
            // else keeps the p/q form.
            mpz_class den = q.get_den();
            int tens = 0;
            mpz_class d = den;
            while (d % 10 == 0) {
                d /= 10;
                ++tens;
            }
            if (d == 1) {
                mpz_class num = q.get_num();
                bool neg = num < 0;
                if (neg) num = -num;
                std::string digits = num.get_str();
                while (static_cast<int>(digits.size()) <= tens) digits.insert(digits.begin(), '0');
                std::string whole = digits.substr(0, digits.size() - tens);
                std::string frac = digits.substr(digits.size() - tens);
                out << (neg ? "-" : "") << whole;
                if (tens > 0) out << "." << frac;
            } else {
                out << rat_str(q);
            }
        }
        out << "\n";
    }
    return out.str();
}

std::vector<double> uniform_grid(int points) {
    if (points < 2) throw DomainError("grid needs at least two points");
    std::vector<double> t(points);
    for (int i = 0; i < points; ++i) t[i] = static_cast<double>(i) / (points - 1);
    return t;
}

namespace {

SolutionReport classify_matrix(const Matrix& S, int k, const StudyOptions& opts,
                               std::uint64_t seed) {
    if (opts.mode == ClassifyMode::Numeric)
        return classify_numeric(S, k, opts.starts, seed, opts.classify, opts.fit);
    RationalMatrix SR = round_to_rational(S, 6);
    FactorProblem prob(SR, k);
    EnumerateOptions eopts = opts.enumerate;
    eopts.seed = seed;
    EnumerationResult res = enumerate_solutions(prob, eopts);
    if (res.solutions.empty()) {
        SolutionReport rep;
        rep.pattern = SolutionPattern::NoSolution;
        rep.algorithm = "exact";
        rep.diagnostic = "no candidate solutions enumerated";
        return rep;
    }
    return classify_pattern(res.solutions, SR, opts.classify.sample_size, opts.classify);
}

// Minimum discrepancy with the last unique variance pinned: Jennrich-style
// fit over the remaining coordinates.
double profile_min_q(const Matrix& S, int k, double psi_last, const FitOptions& fopts,
                     std::uint64_t seed, int attempts) {
    int p = static_cast<int>(S.rows());
    PinnedRng rng(stream_seed(seed, 0x9e));
    double best = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < attempts; ++attempt) {
        Vector psi0(p);
        for (int i = 0; i + 1 < p; ++i) psi0(i) = rng.uniform01();
        psi0(p - 1) = psi_last;
        try {
            FitResult r = fit_jennrich_pinned(S, k, psi0, p - 1, fopts);
            best = std::min(best, r.discrepancy);
        } catch (const Error&) {
        }
    }
    return best;
}

} // namespace

InterpolateResult interpolate_study(const Matrix& S_a, const Matrix& S_b,
                                    const std::vector<double>& grid, int k,
                                    const StudyOptions& opts) {
    if (S_a.rows() != S_b.rows() || S_a.cols() != S_b.cols())
        throw StructuralError("interpolate_study: shape mismatch");
    InterpolateResult out;
    auto blend = [&](double t) { return Matrix(t * S_a + (1 - t) * S_b); };

    for (double t : grid) {
        InterpolateRow row;
        row.t = t;
        row.report = classify_matrix(blend(t), k, opts, opts.seed);
        out.rows.push_back(std::move(row));
    }

    // Locate the first label change and tighten it by bisection.
    for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
        if (out.rows[i].report.pattern == out.rows[i + 1].report.pattern) continue;
        double lo = out.rows[i].t, hi = out.rows[i + 1].t;
        SolutionPattern plo = out.rows[i].report.pattern;
        for (int step = 0; step < 12 && hi - lo > 1e-3; ++step) {
            double mid = (lo + hi) / 2;
            SolutionPattern pm = classify_matrix(blend(mid), k, opts, opts.seed).pattern;
            if (pm == plo)
                lo = mid;
            else
                hi = mid;
        }
        out.transition = std::make_pair(lo, hi);
        break;
    }

    // psi_p profile curves per grid point.
    for (double t : grid) {
        Matrix St = blend(t);
        for (int i = 0; i < opts.profile_psi_points; ++i) {
            double psi_last = opts.profile_psi_lo + (opts.profile_psi_hi - opts.profile_psi_lo) * i /
                                                        std::max(1, opts.profile_psi_points - 1);
            double q = profile_min_q(St, k, psi_last, opts.fit, opts.seed, opts.profile_attempts);
            out.profile.push_back({t, psi_last, q});
        }
    }
    return out;
}

std::string MonteCarloResult::to_csv() const {
    std::ostringstream out;
    out << "run,pattern,discrepancy,psi_min,note\n";
    for (const auto& r : rows)
        out << r.run << "," << pattern_name(r.pattern) << "," << r.discrepancy << "," << r.psi_min
            << "," << r.note << "\n";
    out << "# proper=" << proper << " improper=" << improper << " no_solution=" << no_solution
        << "\n";
    return out.str();
}

MonteCarloResult monte_carlo(const SimulationModel& model, int runs, const StudyOptions& opts) {
    if (runs < 1) throw DomainError("monte_carlo: runs must be positive");
    MonteCarloResult result;
    result.rows.resize(runs);

    auto one_run = [&](int r) {
        MonteCarloRow row;
        row.run = r;
        try {
            SimulationModel m = model;
            m.seed = stream_seed(model.seed, static_cast<std::uint64_t>(r));
            SolutionReport rep;
            if (opts.mode == ClassifyMode::Numeric) {
                Matrix S = simulate_covariance_raw(m);
                rep = classify_numeric(S, model.k(), opts.starts, m.seed, opts.classify, opts.fit);
            } else {
                FactorProblem prob = simulate_covariance(m);
                EnumerateOptions eopts = opts.enumerate;
                eopts.seed = m.seed;
                EnumerationResult res = enumerate_solutions(prob, eopts);
                if (res.solutions.empty()) {
                    rep.pattern = SolutionPattern::NoSolution;
                    rep.diagnostic = "no candidates";
                } else {
                    rep = classify_pattern(res.solutions, prob.S, opts.classify.sample_size,
                                           opts.classify);
                }
            }
            row.pattern = rep.pattern;
            row.discrepancy = rep.discrepancy;
            row.psi_min = rep.psi_min;
            row.note = rep.diagnostic;
        } catch (const Error& e) {
            row.pattern = SolutionPattern::NoSolution;
            row.note = std::string("error: ") + e.what();
        }
        return row;
    };

    int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        for (int r = 0; r < runs; ++r) result.rows[r] = one_run(r);
    } else {
        std::atomic<int> next{0};
        auto worker = [&]() {
            while (true) {
                int r = next.fetch_add(1);
                if (r >= runs) return;
                result.rows[r] = one_run(r);
            }
        };
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (const auto& row : result.rows) {
        switch (row.pattern) {
            case SolutionPattern::Proper: ++result.proper; break;
            case SolutionPattern::Improper: ++result.improper; break;
            case SolutionPattern::NoSolution: ++result.no_solution; break;
        }
    }
    return result;
}

} // namespace exactfa
