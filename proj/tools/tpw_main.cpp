#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tpw/checks.hpp"
#include "tpw/errors.hpp"
#include "tpw/model_io.hpp"
#include "tpw/pathspace.hpp"
#include "tpw/random_inputs.hpp"
#include "tpw/report.hpp"
#include "tpw/tensorcalc.hpp"

namespace {

using namespace tpw;

unsigned effective_seed(unsigned cli_seed) {
    if (const char* env = std::getenv("TPW_SEED")) return static_cast<unsigned>(std::stoul(env));
    return cli_seed;
}

void emit(const std::string& text, const std::string& out_file) {
    if (out_file.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream f(out_file);
        f << text << "\n";
    }
}

Vec parse_csv_numbers(const std::string& s, int n, const char* what) {
    Vec out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if (static_cast<int>(out.size()) != n)
        throw std::runtime_error(std::string("expected ") + std::to_string(n) + " components in " +
                                 what);
    return out;
}

std::vector<Expr> parse_csv_exprs(const std::string& s, int n, const char* what) {
    std::vector<Expr> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_expr(tok, n));
    if (static_cast<int>(out.size()) != n)
        throw std::runtime_error(std::string("expected ") + std::to_string(n) + " components in " +
                                 what);
    return out;
}

Report make_report(const ModelFile& mf, unsigned seed, int grid,
                   std::vector<CheckResult> checks, double ms) {
    Report r;
    r.model_id = mf.id;
    r.seed = seed;
    r.grid = grid;
    r.calibration = mf.model.calibration();
    r.checks = std::move(checks);
    r.timing_ms = ms;
    return r;
}

int cmd_verify(const std::string& model_file, bool numeric, int points, unsigned seed,
               const std::string& out) {
    ModelFile mf = load_model_file(model_file);
    bool symbolic = !numeric;
    if (symbolic && !mf.model.is_exact_fragment()) {
        std::cerr << "warning: model outside the exact fragment, running numeric checks\n";
        symbolic = false;
    }
    auto t0 = std::chrono::steady_clock::now();
    auto checks = verify_checks(mf.model, symbolic, points, seed, mf.points);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
    Report r = make_report(mf, seed, 0, std::move(checks), ms);
    emit(r.to_json(), out);
    return r.all_pass() ? 0 : 1;
}

int cmd_path(const std::string& model_file, const std::string& x0_csv, const std::string& eta_csv,
             int grid, const std::string& out) {
    ModelFile mf = load_model_file(model_file);
    const int n = mf.model.n();
    Vec x0 = parse_csv_numbers(x0_csv, n, "--x0");
    EtaSpec eta = EtaSpec::closed_form(parse_csv_exprs(eta_csv, n, "--eta"));
    AlgebroidPath p = solve_base_path(mf.model, x0, eta, Grid(grid));
    double res = anchor_residual(mf.model, p);
    emit(path_to_json(p), out);
    std::cerr << "anchor residual: " << res << "\n";
    return 0;
}

int cmd_gauge(const std::string& model_file, const std::string& path_file, const std::string& B_csv,
              double s_total, int steps, unsigned seed, const std::string& out) {
    ModelFile mf = load_model_file(model_file);
    const int n = mf.model.n();
    AlgebroidPath p = load_path_file(path_file, n);
    GaugeGenerator B = GaugeGenerator::closed_form(parse_csv_exprs(B_csv, n, "--B"), n);

    Rng rng(seed);
    std::vector<GaugeGenerator> probes;
    double pre = 0.0;
    for (int j = 0; j < 5; ++j) {
        probes.push_back(random_gauge_generator(rng, p.grid, n, 1.0));
        pre = std::max(pre, std::abs(momentum(mf.model, probes.back(), p)));
    }
    AlgebroidPath q = gauge_flow(mf.model, B, p, s_total, steps);
    double drift = 0.0;
    for (int i = 0; i < n; ++i)
        drift += std::abs(q.X.front()[i] - p.X.front()[i]) +
                 std::abs(q.X.back()[i] - p.X.back()[i]);
    double post = 0.0;
    for (auto& pb : probes) post = std::max(post, std::abs(momentum(mf.model, pb, q)));
    emit(path_to_json(q), out);
    std::cerr << "endpoint drift: " << drift << "\n"
              << "constraint |H| before/after: " << pre << " / " << post << "\n"
              << "anchor residual before/after: " << anchor_residual(mf.model, p) << " / "
              << anchor_residual(mf.model, q) << "\n";
    return drift <= 1e-12 ? 0 : 1;
}

int cmd_omega(const std::string& model_file, const std::string& path_file,
              const std::string& u_file, const std::string& v_file, const std::string& which) {
    ModelFile mf = load_model_file(model_file);
    const int n = mf.model.n();
    AlgebroidPath p = load_path_file(path_file, n);
    PathTangent u = load_tangent_file(u_file, n);
    PathTangent v = load_tangent_file(v_file, n);
    double value = 0.0;
    if (which == "0") value = omega0(p, u, v);
    else if (which == "1") value = omega1(mf.model, p, u, v);
    else if (which == "total") value = omega(mf.model, p, u, v);
    else throw std::runtime_error("--which must be 0, 1 or total");
    std::cout << "{ \"which\": \"" << which << "\", \"value\": " << std::scientific << value
              << " }\n";
    return 0;
}

int cmd_suite(const std::string& model_file, int grid, unsigned seed, const std::string& out) {
    ModelFile mf = load_model_file(model_file);
    SuiteOptions opt;
    opt.grid = grid;
    opt.seed = seed;
    auto t0 = std::chrono::steady_clock::now();
    auto checks = model_suite(mf.model, opt);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
    Report r = make_report(mf, seed, grid, std::move(checks), ms);
    emit(r.to_json(), out);
    return r.all_pass() ? 0 : 1;
}

int cmd_convergence(const std::string& model_file, const std::string& check,
                    const std::string& grids_csv, unsigned seed) {
    ModelFile mf = load_model_file(model_file);
    std::vector<int> grids;
    std::stringstream ss(grids_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) grids.push_back(std::stoi(tok));
    ConvergenceStudy st = convergence_study(mf.model, check, grids, seed);
    std::cout << "check: " << st.check << "\n";
    for (auto& row : st.rows)
        std::cout << "  N=" << row.N << "  error=" << std::scientific << row.error << "\n";
    std::cout << "order: " << st.order << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"twisted Poisson workbench"};
    app.require_subcommand(1);

    std::string model_file, out, path_file, u_file, v_file, which = "total";
    std::string x0_csv, eta_csv, B_csv, check = "solve_base_path", grids_csv = "25,50,100,200";
    unsigned seed = 12345;
    int grid = 200, points = 20, steps = 100;
    double s_total = 1.0;
    bool numeric = false, symbolic = false;

    auto* verify = app.add_subcommand("verify", "algebraic identity checks for a model");
    verify->add_option("model", model_file)->required();
    verify->add_flag("--numeric", numeric, "sampled checks instead of symbolic");
    verify->add_flag("--symbolic", symbolic, "force symbolic checks (default for exact models)");
    verify->add_option("--points", points, "sample points for numeric checks");
    verify->add_option("--seed", seed);
    verify->add_option("--out", out, "write the JSON report here");

    auto* path = app.add_subcommand("path", "integrate the anchor ODE");
    path->add_option("model", model_file)->required();
    path->add_option("--x0", x0_csv, "start point, comma separated")->required();
    path->add_option("--eta", eta_csv, "eta components, expressions in t")->required();
    path->add_option("--grid", grid);
    path->add_option("--out", out);

    auto* gauge = app.add_subcommand("gauge", "flow a path along a gauge generator");
    gauge->add_option("model", model_file)->required();
    gauge->add_option("path", path_file)->required();
    gauge->add_option("--B", B_csv, "generator components, expressions in t,x")->required();
    gauge->add_option("--s", s_total, "total flow time");
    gauge->add_option("--steps", steps);
    gauge->add_option("--seed", seed);
    gauge->add_option("--out", out);

    auto* om = app.add_subcommand("omega", "evaluate the 2-form on two tangents");
    om->add_option("model", model_file)->required();
    om->add_option("path", path_file)->required();
    om->add_option("u", u_file)->required();
    om->add_option("v", v_file)->required();
    om->add_option("--which", which, "0 | 1 | total");

    auto* suite = app.add_subcommand("suite", "full verification suite for a model");
    suite->add_option("model", model_file)->required();
    suite->add_option("--grid", grid);
    suite->add_option("--seed", seed);
    suite->add_option("--out", out);

    auto* conv = app.add_subcommand("convergence", "grid refinement study");
    conv->add_option("model", model_file)->required();
    conv->add_option("--check", check, "solve_base_path | momentum | omega1");
    conv->add_option("--grids", grids_csv);
    conv->add_option("--seed", seed);

    CLI11_PARSE(app, argc, argv);

    try {
        seed = effective_seed(seed);
        if (verify->parsed()) return cmd_verify(model_file, numeric, points, seed, out);
        if (path->parsed()) return cmd_path(model_file, x0_csv, eta_csv, grid, out);
        if (gauge->parsed())
            return cmd_gauge(model_file, path_file, B_csv, s_total, steps, seed, out);
        if (om->parsed()) return cmd_omega(model_file, path_file, u_file, v_file, which);
        if (suite->parsed()) return cmd_suite(model_file, grid, seed, out);
        if (conv->parsed()) return cmd_convergence(model_file, check, grids_csv, seed);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
