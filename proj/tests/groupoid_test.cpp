#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tpw/fixtures.hpp"
#include "tpw/groupoid.hpp"
#include "tpw/model_io.hpp"
#include "tpw/random_inputs.hpp"
#include "tpw/tensorcalc.hpp"

using namespace tpw;

namespace {

GroupoidElementRep rep_of(AlgebroidPath p) {
    return GroupoidElementRep{p, p.X.front(), p.X.back()};
}

} // namespace

TEST_CASE("identity elements") {
    Rng rng(3);
    for (const char* name : {"M1", "M2", "M3"}) {
        Model m = make_fixture(name);
        Grid g(60);
        Vec x = random_point(m, rng, 0.4);
        GroupoidElementRep id = identity_element(m, x, g);
        CHECK(id.alpha == x);
        CHECK(id.beta == x);
        CHECK(anchor_residual(m, id.path) == 0.0);
        for (int j = 0; j < 3; ++j)
            CHECK(momentum(m, random_gauge_generator(rng, g, m.n(), 1.0), id.path) == 0.0);
    }
}

TEST_CASE("invert is an involution and fixes identities") {
    Model m = make_fixture("M2");
    Grid g(80);
    Rng rng(5);

    Vec x = random_point(m, rng, 0.3);
    GroupoidElementRep id = identity_element(m, x, g);
    GroupoidElementRep idi = invert(id);
    CHECK(idi.path.X == id.path.X);
    CHECK(idi.path.eta == id.path.eta);

    GroupoidElementRep gel = rep_of(random_on_shell_path(m, rng, g));
    GroupoidElementRep ginv = invert(gel);
    CHECK(ginv.alpha == gel.beta);
    CHECK(ginv.beta == gel.alpha);
    // involution, bit-exact
    GroupoidElementRep g2 = invert(ginv);
    CHECK(g2.path.X == gel.path.X);
    CHECK(g2.path.eta == gel.path.eta);
    // time reversal leaves the anchor residual unchanged
    CHECK(anchor_residual(m, ginv.path) == doctest::Approx(anchor_residual(m, gel.path)));
}

TEST_CASE("invert flips closed-form eta") {
    Model m = make_fixture("M1");
    EtaSpec eta = EtaSpec::closed_form({Expr::t(), Expr::constant(Rat(1, 4))});
    AlgebroidPath p = solve_base_path(m, Vec{0.0, 0.0}, eta, Grid(50));
    GroupoidElementRep gi = invert(rep_of(p));
    REQUIRE(gi.path.eta_form.has_value());
    // -eta(1-t): first component -(1-t)
    std::vector<double> none;
    CHECK((*gi.path.eta_form)[0].eval(none, 0.25) == doctest::Approx(-0.75));
    CHECK((*gi.path.eta_form)[1].eval(none, 0.9) == doctest::Approx(-0.25));
}

TEST_CASE("concatenate endpoint laws and residual bound") {
    Rng rng(7);
    Model m = make_fixture("M1");
    Grid g(100);
    // two straight segments x0 -> x1 -> x2
    EtaSpec e1 = EtaSpec::closed_form({Expr::constant(Rat(1, 4)), Expr::constant(Rat(-1, 5))});
    AlgebroidPath p1 = solve_base_path(m, Vec{-0.2, 0.1}, e1, g);
    GroupoidElementRep g1 = rep_of(p1);
    EtaSpec e2 = EtaSpec::closed_form({Expr::constant(Rat(-1, 10)), Expr::constant(Rat(3, 10))});
    AlgebroidPath p2 = solve_base_path(m, g1.beta, e2, g);
    GroupoidElementRep g2 = rep_of(p2);

    GroupoidElementRep joined = concatenate(g1, g2);
    CHECK(joined.alpha == g1.alpha);
    CHECK(joined.beta == g2.beta);
    // 2x the inputs' residual plus the reparametrization's own O(N^-2)
    // discretization floor (the flattening map has large third derivatives
    // at the segment ends)
    double maxeta = 0.0;
    for (auto& row : joined.path.eta)
        for (double v : row) maxeta = std::max(maxeta, std::abs(v));
    double floor = 60.0 * (1.0 + maxeta) / (g.N * static_cast<double>(g.N));
    double bound = 2.0 * std::max(anchor_residual(m, p1), anchor_residual(m, p2)) + floor;
    CHECK(anchor_residual(m, joined.path) <= bound);

    // with the identity on the right: endpoints (alpha(g), beta(g))
    GroupoidElementRep idr = identity_element(m, g1.beta, g);
    GroupoidElementRep gid = concatenate(g1, idr);
    CHECK(gid.alpha == g1.alpha);
    CHECK(gid.beta == g1.beta);

    // with the inverse: endpoints (alpha, alpha)
    GroupoidElementRep gloop = concatenate(g1, invert(g1));
    CHECK(gloop.alpha == g1.alpha);
    CHECK(gloop.beta == g1.alpha);

    // mismatched endpoints are rejected
    GroupoidElementRep far = identity_element(m, Vec{5.0, 5.0}, g);
    CHECK_THROWS_AS(concatenate(g1, far), std::invalid_argument);
}

TEST_CASE("concatenation keeps twisted paths on shell") {
    Rng rng(11);
    Model m = make_fixture("M3");
    Grid g(200);
    AlgebroidPath p1 = random_on_shell_path(m, rng, g, 0.15, 0.2);
    GroupoidElementRep g1 = rep_of(p1);
    AlgebroidPath p2 = solve_base_path(m, g1.beta, random_eta(rng, 4, 0.2), g);
    GroupoidElementRep g2 = rep_of(p2);
    GroupoidElementRep joined = concatenate(g1, g2);
    double maxeta = 0.0;
    for (auto& row : joined.path.eta)
        for (double v : row) maxeta = std::max(maxeta, std::abs(v));
    double floor = 60.0 * (1.0 + maxeta) / (g.N * static_cast<double>(g.N));
    double bound = 2.0 * std::max(anchor_residual(m, p1), anchor_residual(m, p2)) + floor;
    CHECK(anchor_residual(m, joined.path) <= bound);
}

TEST_CASE("unit fiber lift") {
    Model m1 = make_fixture("M1");
    Grid g(64);
    Vec zero_cov(2, 0.0);
    PathTangent z = unit_fiber_lift(m1, Vec{0.1, 0.2}, zero_cov, g);
    for (int k = 0; k <= g.N; ++k)
        for (int i = 0; i < 2; ++i) {
            CHECK(z.xi[k][i] == 0.0);
            CHECK(z.e[k][i] == 0.0);
        }

    // lift of dx1 on the symplectic plane: vertical constant (1,0),
    // horizontal t * (pi^{11}, pi^{21}) = t * (0, -1). The sign is pinned
    // by the base pairing gamma = pi, not by the lift direction itself.
    PathTangent l = unit_fiber_lift(m1, Vec{0.0, 0.0}, Vec{1.0, 0.0}, g);
    for (int k = 0; k <= g.N; ++k) {
        double t = g.node(k);
        CHECK(l.xi[k][0] == 0.0);
        CHECK(l.xi[k][1] == doctest::Approx(-t));
        CHECK(l.e[k][0] == 1.0);
        CHECK(l.e[k][1] == 0.0);
    }

    // the twist never enters the lift: Omega_1 vanishes at eta = 0
    Model m3 = make_fixture("M3");
    PathTangent l3 = unit_fiber_lift(m3, Vec(4, 0.0), Vec{0, 0, 1, 0}, g);
    GroupoidElementRep id = identity_element(m3, Vec(4, 0.0), g);
    PathTangent other = unit_fiber_lift(m3, Vec(4, 0.0), Vec{0, 0, 0, 1}, g);
    CHECK(omega1(m3, id.path, l3, other) == 0.0);
}

TEST_CASE("base pairing recovers pi and the identity map") {
    Rng rng(13);
    for (const char* name : {"M1", "M2", "M3"}) {
        Model m = make_fixture(name);
        Grid g(128);
        for (int trial = 0; trial < 5; ++trial) {
            Vec x = random_point(m, rng, 0.4);
            BasePairing bp = base_pairing(m, x, g);
            for (int i = 0; i < m.n(); ++i)
                for (int j = 0; j < m.n(); ++j) {
                    double pij = m.pi().entry(i + 1, j + 1).eval(x);
                    CHECK(std::abs(bp.gamma[i][j] - pij) <= 1e-10);
                    CHECK(std::abs(bp.lambda[i][j] - (i == j ? 1.0 : 0.0)) <= 1e-10);
                }
        }
    }
    // spot value: M2 at (0,0,1) has gamma_{12} = pi^{12} = x3 = 1
    Model m2 = make_fixture("M2");
    BasePairing bp = base_pairing(m2, Vec{0, 0, 1}, Grid(100));
    CHECK(bp.gamma[0][1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("multiplicativity of the 2-form") {
    Model m = make_fixture("M1");
    Grid g(200);
    Rng rng(17);
    EtaSpec e1 = EtaSpec::closed_form({Expr::constant(Rat(1, 4)), Expr::constant(Rat(-1, 5))});
    AlgebroidPath p1 = solve_base_path(m, Vec{-0.2, 0.1}, e1, g);
    GroupoidElementRep g1 = rep_of(p1);
    EtaSpec e2 = EtaSpec::closed_form({Expr::constant(Rat(-1, 10)), Expr::constant(Rat(3, 10))});
    GroupoidElementRep g2 = rep_of(solve_base_path(m, g1.beta, e2, g));

    auto smooth_tangent = [&](unsigned s) {
        Rng r2(s);
        std::uniform_real_distribution<double> unif(-0.5, 0.5);
        PathTangent u = zero_tangent(g, 2);
        double a0 = unif(r2), a1 = unif(r2), b0 = unif(r2), b1 = unif(r2);
        for (int k = 0; k <= g.N; ++k) {
            double t = g.node(k);
            u.xi[k][0] = a0 + a1 * t;
            u.xi[k][1] = b0 * t;
            u.e[k][0] = b1 * (1 - t);
            u.e[k][1] = a0 * t * t;
        }
        return u;
    };

    // identity on the right with zero tangents there: pure bookkeeping
    // (constant tangents keep both quadratures super-convergent)
    PathTangent k1 = zero_tangent(g, 2), k2 = zero_tangent(g, 2);
    for (int k = 0; k <= g.N; ++k) {
        k1.xi[k][0] = 0.4;
        k1.e[k][1] = 0.3;
        k2.xi[k][1] = -0.2;
        k2.e[k][0] = 0.6;
    }
    GroupoidElementRep idr = identity_element(m, g1.beta, g);
    double r0 = multiplicativity_residual(m, g1, idr, k1, k2, zero_tangent(g, 2),
                                          zero_tangent(g, 2));
    CHECK(r0 <= 1e-8);

    // two straight segments with constant tangents
    PathTangent cu = zero_tangent(g, 2), cv = zero_tangent(g, 2);
    for (int k = 0; k <= g.N; ++k) {
        cu.xi[k][0] = 0.3;
        cu.e[k][1] = -0.2;
        cv.xi[k][1] = 0.25;
        cv.e[k][0] = 0.15;
    }
    CHECK(multiplicativity_residual(m, g1, g2, cu, cv, cu, cv) <= 1e-6);

    // the split location is a representative choice only
    double ra = multiplicativity_residual(m, g1, g2, smooth_tangent(3), smooth_tangent(4),
                                          smooth_tangent(5), smooth_tangent(6), 0.5);
    double rb = multiplicativity_residual(m, g1, g2, smooth_tangent(3), smooth_tangent(4),
                                          smooth_tangent(5), smooth_tangent(6), 0.55);
    CHECK(ra <= 1e-4);
    CHECK(rb <= 1e-4);
}

TEST_CASE("multiplicativity on the twisted fixture at N = 400") {
    Model m = make_fixture("M3");
    Grid g(400);
    Rng rng(19);
    AlgebroidPath p1 = random_on_shell_path(m, rng, g, 0.15, 0.2);
    GroupoidElementRep g1 = rep_of(p1);
    GroupoidElementRep g2 = rep_of(solve_base_path(m, g1.beta, random_eta(rng, 4, 0.2), g));
    auto smooth = [&](unsigned s) {
        Rng r2(s);
        std::uniform_real_distribution<double> unif(-0.5, 0.5);
        PathTangent u = zero_tangent(g, 4);
        for (int i = 0; i < 4; ++i) {
            double a = unif(r2), b = unif(r2);
            for (int k = 0; k <= g.N; ++k) {
                double t = g.node(k);
                u.xi[k][i] = a + b * t;
                u.e[k][i] = b - a * t;
            }
        }
        return u;
    };
    CHECK(multiplicativity_residual(m, g1, g2, smooth(21), smooth(22), smooth(23), smooth(24)) <=
          1e-4);
}

TEST_CASE("identity-section identities of the 2-form") {
    Rng rng(23);
    Model m1 = make_fixture("M1");
    for (auto& [name, val] : prop22_checks(m1, Vec{0.2, -0.1}, Grid(200)))
        CHECK(val <= 1e-10);

    Model m3 = make_fixture("M3");
    for (auto& [name, val] : prop22_checks(m3, random_point(m3, rng, 0.3), Grid(400)))
        CHECK(val <= 1e-6);
}

TEST_CASE("nondegeneracy along the identity") {
    // block oracle for the flat fixture: Gram = [[pi, I], [-I, 0]] with
    // pi the standard symplectic matrix; smallest singular value is
    // sqrt((3 - sqrt 5)/2), the golden-ratio conjugate.
    Model m1 = make_fixture("M1");
    double expected = std::sqrt((3.0 - std::sqrt(5.0)) / 2.0);
    CHECK(nondegeneracy_at_identity(m1, Vec{0.0, 0.0}, Grid(100)) ==
          doctest::Approx(expected).epsilon(1e-8));

    Model m3 = make_fixture("M3");
    CHECK(nondegeneracy_at_identity(m3, Vec(4, 0.0), Grid(100)) > 0.5);

    // pi = 0: the lambda block alone keeps the pairing nondegenerate
    Model degenerate(2, Bivector(2), KForm(2, 3), default_calibration());
    CHECK(nondegeneracy_at_identity(degenerate, Vec{0.0, 0.0}, Grid(64)) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("groupoid rep serialization carries endpoints") {
    Model m = make_fixture("M1");
    Rng rng(29);
    GroupoidElementRep g1 = rep_of(random_on_shell_path(m, rng, Grid(20)));
    std::string js = rep_to_json(g1);
    CHECK(js.find("\"alpha\"") != std::string::npos);
    CHECK(js.find("\"beta\"") != std::string::npos);
}
