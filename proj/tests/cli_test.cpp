#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "tpw/errors.hpp"
#include "tpw/model_io.hpp"
#include "tpw/report.hpp"
#include "tpw/tensorcalc.hpp"

using namespace tpw;

namespace {

std::string models_dir() { return TPW_MODELS_DIR; }

int run_cli(const std::string& args, const std::string& out_file = "/tmp/tpw_cli_out.txt") {
    std::string cmd = std::string(TPW_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& file) {
    std::ifstream f(file);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string strip_timing(std::string s) {
    return std::regex_replace(s, std::regex("\"timing_ms\": [0-9.eE+-]+"), "\"timing_ms\": 0");
}

} // namespace

TEST_CASE("model file parsing") {
    ModelFile mf = parse_model_text("dim 3\n"
                                    "pi 1 2 : x3\n"
                                    "pi 2 3 : x1\n"
                                    "pi 1 3 : 0 - x2\n"
                                    "# a comment\n"
                                    "point 0 0 1\n",
                                    "m");
    CHECK(mf.model.n() == 3);
    CHECK(mf.points.size() == 1);
    CHECK(normal_form_equal(mf.model.pi().entry(1, 2), Expr::x(3), 3));
    CHECK(normal_form_equal(mf.model.pi().entry(3, 1), Expr::x(2), 3));

    // errors carry the line
    CHECK_THROWS_AS(parse_model_text("pi 1 2 : 1\n", "m"), parse_error);
    CHECK_THROWS_AS(parse_model_text("dim 2\npi 2 1 : 1\n", "m"), parse_error);
    CHECK_THROWS_AS(parse_model_text("dim 2\nphi 1 2 2 : 1\n", "m"), parse_error);
    CHECK_THROWS_AS(parse_model_text("dim 2\npi 1 2 : x5\n", "m"), parse_error);
    CHECK_THROWS_AS(parse_model_text("dim 2\nfrobnicate 1\n", "m"), parse_error);
    CHECK_THROWS_AS(parse_model_text("dim 2\npoint 1\n", "m"), parse_error);
    try {
        parse_model_text("dim 2\npi 2 1 : 1\n", "m");
    } catch (const parse_error& e) {
        CHECK(e.line == 2);
    }

    // calibration override
    ModelFile ov = parse_model_text("dim 2\npi 1 2 : 1\ncalib c_jac -2\ncalib c_phi 1/2\n", "m");
    CHECK(ov.model.calibration().c_jac == Rat(-2));
    CHECK(ov.model.calibration().c_phi == Rat(1, 2));

    // empty phi section means an untwisted model
    ModelFile plain = parse_model_text("dim 2\npi 1 2 : 1\n", "m");
    CHECK(plain.model.phi().is_structurally_zero());
}

TEST_CASE("shipped fixture files load and match the registry") {
    for (std::string name : {"m1", "m2", "m3", "m4"}) {
        ModelFile mf = load_model_file(models_dir() + "/" + name + ".tpw");
        CHECK(mf.id == name);
    }
    ModelFile m3 = load_model_file(models_dir() + "/m3.tpw");
    CHECK(m3.model.n() == 4);
    CHECK(normal_form_equal(m3.model.phi().component({1, 3, 4}),
                            Expr::integer(default_calibration().s_inv), 4));
}

TEST_CASE("cli: verify exit codes") {
    CHECK(run_cli("verify " + models_dir() + "/m2.tpw") == 0);
    CHECK(run_cli("verify " + models_dir() + "/m4.tpw") == 1);
    std::string report = slurp("/tmp/tpw_cli_out.txt");
    CHECK(report.find("\"twisted_jacobi\"") != std::string::npos);
    CHECK(report.find("\"all_pass\": false") != std::string::npos);
}

TEST_CASE("cli: numeric verification mode") {
    CHECK(run_cli("verify " + models_dir() + "/m3.tpw --numeric --points 10") == 0);
    std::string report = slurp("/tmp/tpw_cli_out.txt");
    CHECK(report.find("\"tolerance\": 1e-08") != std::string::npos);
}

TEST_CASE("cli: transcendental models downgrade to numeric with a warning") {
    std::ofstream("/tmp/tpw_trans.tpw") << "dim 2\npi 1 2 : 1 + exp(x1)/2\npoint 0.1 0.2\n";
    CHECK(run_cli("verify /tmp/tpw_trans.tpw") == 0);
    std::string out = slurp("/tmp/tpw_cli_out.txt");
    CHECK(out.find("warning") != std::string::npos);
    CHECK(out.find("\"tolerance\": 1e-08") != std::string::npos);
}

TEST_CASE("cli: path then gauge then omega") {
    CHECK(run_cli("path " + models_dir() + "/m1.tpw --x0 0.1,0.2 --eta 't,1-t' --grid 100 --out "
                  "/tmp/tpw_p.json") == 0);
    CHECK(run_cli("gauge " + models_dir() +
                  "/m1.tpw /tmp/tpw_p.json --B 't^2*(1-t)^2,0' --s 0.5 --steps 50 --out "
                  "/tmp/tpw_q.json") == 0);

    // simple tangent files
    AlgebroidPath p = load_path_file("/tmp/tpw_p.json", 2);
    PathTangent u = zero_tangent(p.grid, 2), v = zero_tangent(p.grid, 2);
    for (int k = 0; k <= p.grid.N; ++k) {
        u.xi[k][0] = 1.0;
        v.e[k][0] = 1.0;
    }
    std::ofstream("/tmp/tpw_u.json") << tangent_to_json(u);
    std::ofstream("/tmp/tpw_v.json") << tangent_to_json(v);
    CHECK(run_cli("omega " + models_dir() +
                  "/m1.tpw /tmp/tpw_p.json /tmp/tpw_u.json /tmp/tpw_v.json --which total") == 0);
    std::string out = slurp("/tmp/tpw_cli_out.txt");
    CHECK(out.find("\"value\"") != std::string::npos);
}

TEST_CASE("cli: suite passes on the good fixtures and fails on m4") {
    CHECK(run_cli("suite " + models_dir() + "/m1.tpw --grid 100 --seed 7") == 0);
    CHECK(run_cli("suite " + models_dir() + "/m4.tpw --grid 100 --seed 7") == 1);
    // only checks that depend on the twisted Jacobi identity may fail;
    // the symbolic ones fail unconditionally, the flow-constraint one is
    // resolution dependent
    std::string report = slurp("/tmp/tpw_cli_out.txt");
    auto passed = [&](const char* name) {
        auto pos = report.find(std::string("\"name\": \"") + name + "\"");
        REQUIRE(pos != std::string::npos);
        auto pass_pos = report.find("\"pass\":", pos);
        return report.substr(pass_pos, 14).find("true") != std::string::npos;
    };
    for (const char* name : {"twisted_jacobi", "eq4_residuals", "delta_identities"})
        CHECK_FALSE(passed(name));
    for (const char* name :
         {"dphi_closed", "bracket_consistency", "eq3_residuals", "onshell_momentum",
          "hamiltonian_relation", "gauge_flow_endpoints", "step1_gamma", "step1_lambda",
          "omega1_identity_zero", "horizontality", "invariance", "transgression_cphi", "stokes",
          "groupoid_endpoints", "prop22", "nondegeneracy"})
        CHECK(passed(name));
}

TEST_CASE("cli: reports are deterministic up to timing") {
    run_cli("verify " + models_dir() + "/m2.tpw --seed 42", "/tmp/tpw_r1.json");
    run_cli("verify " + models_dir() + "/m2.tpw --seed 42", "/tmp/tpw_r2.json");
    CHECK(strip_timing(slurp("/tmp/tpw_r1.json")) == strip_timing(slurp("/tmp/tpw_r2.json")));

    // TPW_SEED overrides --seed
    std::string cmd = std::string("TPW_SEED=42 ") + TPW_CLI_PATH + " verify " + models_dir() +
                      "/m2.tpw --seed 1 > /tmp/tpw_r3.json 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(strip_timing(slurp("/tmp/tpw_r3.json")) == strip_timing(slurp("/tmp/tpw_r1.json")));
}

TEST_CASE("cli: convergence study output") {
    CHECK(run_cli("convergence " + models_dir() + "/m2.tpw --check solve_base_path --grids "
                  "25,50,100") == 0);
    std::string out = slurp("/tmp/tpw_cli_out.txt");
    CHECK(out.find("order:") != std::string::npos);
}
