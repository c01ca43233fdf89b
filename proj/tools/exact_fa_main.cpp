// exact-fa: exact and numeric maximum-likelihood factor analysis.
//
// solve-exact    enumerate every real stationary point of the likelihood
//                equations by Groebner decomposition
// solve-numeric  classical fitters (lawley / jennrich / em), multi-start
// classify       solution-pattern verdict (proper / improper / no-solution)
// simulate       Monte-Carlo pattern table for a simulation model
// interpolate    pattern transitions along a covariance segment

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "exactfa/algebra_io.hpp"
#include "exactfa/harness.hpp"
#include "exactfa/rng.hpp"

using namespace exactfa;
using nlohmann::json;

namespace {

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write output file: " + path);
    out << content;
}

std::string interval_decimal(const RatInterval& iv, int digits = 15) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, rat_double(iv.mid()));
    return buf;
}

json solution_to_json(const CandidateSolution& s) {
    json out;
    auto L = s.loading_matrix();
    out["L"] = L;
    out["psi"] = s.psi_values();
    if (s.exact) {
        json lex = json::array();
        int t = 0;
        auto pos_per_row = [&](int i) { return std::min(i + 1, s.k); };
        for (int i = 0; i < s.p; ++i) {
            json row = json::array();
            for (int j = 0; j < s.k; ++j)
                row.push_back(j < pos_per_row(i) ? rat_str(s.point.coords[t + j].lo) : "0");
            t += pos_per_row(i);
            lex.push_back(row);
        }
        out["L_exact"] = lex;
        json pex = json::array();
        for (const auto& iv : s.psi) pex.push_back(rat_str(iv.lo));
        out["psi_exact"] = pex;
    } else {
        json ldec = json::array();
        for (const auto& iv : s.point.coords) ldec.push_back(interval_decimal(iv));
        out["L_decimal"] = ldec;
    }
    out["leaf"] = s.leaf;
    out["sample_only"] = s.sample_only;
    out["exact"] = s.exact;
    out["residual_bound"] = rat_double(s.residual_bound);
    return out;
}

json report_to_json(const SolutionReport& rep) {
    json out;
    out["pattern"] = pattern_name(rep.pattern);
    out["discrepancy"] = rep.discrepancy;
    out["psi_min"] = rep.psi_min;
    out["fisher_min_eig"] = rep.fisher_min_eigenvalue;
    out["residual"] = rep.eqdiff0_residual;
    out["algorithm"] = rep.algorithm;
    out["starts"] = rep.starts;
    if (!rep.diagnostic.empty()) out["diagnostic"] = rep.diagnostic;
    return out;
}

void guard_desk_scale(const FactorProblem& prob, bool i_have_time) {
    if (i_have_time) return;
    if (prob.k >= 2 || prob.p > 4)
        throw DomainError(
            "exact mode defaults to p <= 4, k = 1 (larger instances can run for a very long "
            "time); pass --i-have-time to proceed");
}

SimulationModel model_from_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open model file: " + path);
    json doc = json::parse(in);
    auto rows = doc.at("L").get<std::vector<std::vector<double>>>();
    int p = static_cast<int>(rows.size());
    int k = static_cast<int>(rows[0].size());
    Matrix L(p, k);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < k; ++j) L(i, j) = rows[i][j];
    int N = doc.value("N", 100);
    std::uint64_t seed = doc.value("seed", 1ull);
    if (doc.contains("psi")) {
        SimulationModel m;
        m.L_true = L;
        auto psi = doc["psi"].get<std::vector<double>>();
        m.psi_true = Vector(p);
        for (int i = 0; i < p; ++i) m.psi_true(i) = psi[i];
        m.N = N;
        m.seed = seed;
        return m;
    }
    return SimulationModel::unit_variance(L, N, seed);
}

int run_solve_exact(const std::string& cov, int k, const std::string& ridge_text,
                    std::size_t budget, std::uint64_t seed, bool i_have_time,
                    const std::string& out_path, const std::string& bases_path) {
    RationalMatrix S = read_covariance_file(cov);
    Rational ridge = ridge_text.empty() ? Rational(0) : rat_parse(ridge_text);
    FactorProblem prob(S, k, ridge);
    guard_desk_scale(prob, i_have_time);

    EnumerateOptions opts;
    opts.seed = seed;
    if (budget > 0) opts.decompose.budget.max_basis = budget;
    opts.solve.budget = opts.decompose.budget;
    EnumerationResult res = enumerate_solutions(prob, opts);

    json doc;
    doc["p"] = prob.p;
    doc["k"] = prob.k;
    json sols = json::array();
    for (const auto& s : res.solutions) sols.push_back(solution_to_json(s));
    doc["solutions"] = sols;
    json leaves = json::array();
    for (const auto& n : res.leaves)
        leaves.push_back({{"label", n.label}, {"status", node_status_name(n.status)}});
    doc["leaves"] = leaves;
    doc["sign_classes"] = count_sign_classes(res.solutions);
    if (!res.branch_errors.empty()) doc["branch_errors"] = res.branch_errors;
    write_output(out_path, doc.dump(2) + "\n");

    if (!bases_path.empty()) {
        json bases = json::array();
        auto names = prob.loading_names();
        for (const auto& n : res.leaves) {
            if (!n.gb_grevlex) continue;
            json entry = basis_to_json(*n.gb_grevlex, names);
            entry["label"] = n.label;
            bases.push_back(entry);
        }
        write_output(bases_path, bases.dump(2) + "\n");
    }
    return 0;
}

int run_solve_numeric(const std::string& cov, int k, const std::string& algo, int starts,
                      std::uint64_t seed, const std::string& out_path) {
    Matrix S = rational_to_matrix(read_covariance_file(cov));
    int p = static_cast<int>(S.rows());
    PinnedRng rng(stream_seed(seed, 0));
    json fits = json::array();
    double best_q = std::numeric_limits<double>::infinity();
    json best;
    for (int t = 0; t < starts; ++t) {
        Vector psi0(p);
        for (int i = 0; i < p; ++i) psi0(i) = rng.uniform01();
        FitResult r;
        if (algo == "lawley") {
            Vector positive = psi0.cwiseMax(0.01);
            r = fit_lawley(S, k, positive);
        } else if (algo == "em") {
            Vector positive = psi0.cwiseMax(0.01);
            r = fit_em(S, k, positive);
        } else {
            r = fit_jennrich(S, k, psi0);
        }
        json f;
        std::vector<std::vector<double>> L(p, std::vector<double>(k));
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < k; ++j) L[i][j] = r.L(i, j);
        f["L"] = L;
        f["psi"] = std::vector<double>(r.psi.data(), r.psi.data() + p);
        f["discrepancy"] = r.discrepancy;
        f["converged"] = r.converged;
        f["iterations"] = r.iterations;
        fits.push_back(f);
        if (r.discrepancy < best_q) {
            best_q = r.discrepancy;
            best = f;
        }
    }
    json doc;
    doc["algorithm"] = algo;
    doc["starts"] = starts;
    doc["best"] = best;
    doc["fits"] = fits;
    write_output(out_path, doc.dump(2) + "\n");
    return 0;
}

int run_classify(const std::string& cov, int k, const std::string& mode, int starts,
                 std::uint64_t seed, bool i_have_time, const std::string& out_path) {
    RationalMatrix S = read_covariance_file(cov);
    SolutionReport rep;
    if (mode == "exact") {
        FactorProblem prob(S, k);
        guard_desk_scale(prob, i_have_time);
        EnumerateOptions opts;
        opts.seed = seed;
        EnumerationResult res = enumerate_solutions(prob, opts);
        if (res.solutions.empty()) {
            rep.pattern = SolutionPattern::NoSolution;
            rep.algorithm = "exact";
            rep.diagnostic = "no candidate solutions enumerated";
        } else {
            rep = classify_pattern(res.solutions, prob.S, 100);
        }
    } else {
        rep = classify_numeric(rational_to_matrix(S), k, starts, seed);
    }
    write_output(out_path, report_to_json(rep).dump(2) + "\n");
    return 0;
}

int run_simulate(const std::string& model_path, int runs, const std::string& mode, int starts,
                 std::uint64_t seed, int jobs, const std::string& out_path) {
    SimulationModel model = model_from_json(model_path);
    if (seed != 0) model.seed = seed;
    StudyOptions opts;
    opts.mode = mode == "exact" ? ClassifyMode::Exact : ClassifyMode::Numeric;
    opts.starts = starts;
    opts.jobs = jobs;
    MonteCarloResult res = monte_carlo(model, runs, opts);
    write_output(out_path, res.to_csv());
    return 0;
}

int run_interpolate(const std::string& cov_a, const std::string& cov_b, int grid, int k,
                    int starts, std::uint64_t seed, const std::string& out_path,
                    const std::string& profile_path) {
    Matrix A = rational_to_matrix(read_covariance_file(cov_a));
    Matrix B = rational_to_matrix(read_covariance_file(cov_b));
    StudyOptions opts;
    opts.starts = starts;
    opts.seed = seed;
    InterpolateResult res = interpolate_study(A, B, uniform_grid(grid), k, opts);
    std::ostringstream csv;
    csv << "t,pattern,discrepancy,psi_min\n";
    for (const auto& row : res.rows)
        csv << row.t << "," << pattern_name(row.report.pattern) << "," << row.report.discrepancy
            << "," << row.report.psi_min << "\n";
    if (res.transition)
        csv << "# transition in [" << res.transition->first << ", " << res.transition->second
            << "]\n";
    write_output(out_path, csv.str());
    if (!profile_path.empty()) {
        std::ostringstream pcsv;
        pcsv << "t,psi_last,q_min\n";
        for (const auto& pt : res.profile)
            pcsv << pt.t << "," << pt.psi_last << "," << pt.q << "\n";
        write_output(profile_path, pcsv.str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-fa: algebraic and numeric maximum-likelihood factor analysis"};
    app.require_subcommand(1);

    std::string cov, cov_b, out_path = "-", bases_path, profile_path, model_path;
    std::string algo = "jennrich", mode = "numeric", ridge;
    int k = 1, starts = 50, runs = 100, grid = 11, jobs = 1;
    std::size_t budget = 0;
    std::uint64_t seed = 20240214;
    bool i_have_time = false;

    auto* solve_exact = app.add_subcommand("solve-exact", "enumerate all exact stationary points");
    solve_exact->add_option("--cov", cov, "covariance file (CSV or JSON)")->required();
    solve_exact->add_option("--factors", k, "number of factors")->required();
    solve_exact->add_option("--ridge", ridge, "ridge lambda as p/q");
    solve_exact->add_option("--budget", budget, "max Groebner basis size per branch");
    solve_exact->add_option("--seed", seed, "seed for positive-dimensional sampling");
    solve_exact->add_option("--out", out_path, "output JSON path (default stdout)");
    solve_exact->add_option("--dump-bases", bases_path, "also write per-leaf bases JSON");
    solve_exact->add_flag("--i-have-time", i_have_time, "lift the desk-scale p/k guard");

    auto* solve_numeric = app.add_subcommand("solve-numeric", "multi-start classical fitters");
    solve_numeric->add_option("--cov", cov)->required();
    solve_numeric->add_option("--factors", k)->required();
    solve_numeric->add_option("--algo", algo)->check(CLI::IsMember({"lawley", "jennrich", "em"}));
    solve_numeric->add_option("--starts", starts);
    solve_numeric->add_option("--seed", seed);
    solve_numeric->add_option("--out", out_path);

    auto* classify_cmd = app.add_subcommand("classify", "solution-pattern verdict");
    classify_cmd->add_option("--cov", cov)->required();
    classify_cmd->add_option("--factors", k)->required();
    classify_cmd->add_option("--mode", mode)->check(CLI::IsMember({"exact", "numeric"}));
    classify_cmd->add_option("--starts", starts);
    classify_cmd->add_option("--seed", seed);
    classify_cmd->add_option("--out", out_path);
    classify_cmd->add_flag("--i-have-time", i_have_time);

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo pattern table");
    simulate->add_option("--model", model_path, "model JSON {L, N, seed[, psi]}")->required();
    simulate->add_option("--runs", runs);
    simulate->add_option("--mode", mode)->check(CLI::IsMember({"exact", "numeric"}));
    simulate->add_option("--starts", starts);
    simulate->add_option("--seed", seed)->default_val(0);
    simulate->add_option("--jobs", jobs);
    simulate->add_option("--out", out_path);

    auto* interpolate = app.add_subcommand("interpolate", "pattern transitions along a segment");
    interpolate->add_option("--cov-a", cov)->required();
    interpolate->add_option("--cov-b", cov_b)->required();
    interpolate->add_option("--grid", grid);
    interpolate->add_option("--factors", k);
    interpolate->add_option("--starts", starts);
    interpolate->add_option("--seed", seed);
    interpolate->add_option("--out", out_path);
    interpolate->add_option("--profile-out", profile_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_exact->parsed())
            return run_solve_exact(cov, k, ridge, budget, seed, i_have_time, out_path, bases_path);
        if (solve_numeric->parsed()) return run_solve_numeric(cov, k, algo, starts, seed, out_path);
        if (classify_cmd->parsed())
            return run_classify(cov, k, mode, starts, seed, i_have_time, out_path);
        if (simulate->parsed())
            return run_simulate(model_path, runs, mode, starts, seed, jobs, out_path);
        if (interpolate->parsed())
            return run_interpolate(cov, cov_b, grid, k, starts, seed, out_path, profile_path);
    } catch (const ResourceExceeded& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const PrecisionFailure& e) {
        std::cerr << "precision limit: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
