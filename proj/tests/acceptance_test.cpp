// Acceptance suite: one criterion per section, each printed as a
// [PASS]/[FAIL] line with its measured residual and pinned tolerance.
// Exit code 0 iff every criterion holds.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "tpw/fixtures.hpp"
#include "tpw/groupoid.hpp"
#include "tpw/pathspace.hpp"
#include "tpw/random_inputs.hpp"
#include "tpw/tensorcalc.hpp"

using namespace tpw;

namespace {

struct Runner {
    int failures = 0;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void report(int idx, const std::string& what, bool pass, double value, double tol) {
        double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        t0 = std::chrono::steady_clock::now();
        std::printf("[%s] criterion %2d: %-46s value=%-12.4g tol=%-9.3g (%.0f ms)\n",
                    pass ? "PASS" : "FAIL", idx, what.c_str(), value, tol, ms);
        if (!pass) ++failures;
    }
};

GroupoidElementRep rep_of(const AlgebroidPath& p) {
    return GroupoidElementRep{p, p.X.front(), p.X.back()};
}

} // namespace

int main() {
    Runner run;
    const unsigned seed = 20240915;

    Model m1 = make_fixture("M1");
    Model m2 = make_fixture("M2");
    Model m3 = make_fixture("M3");
    Model m4 = make_fixture("M4");
    std::vector<const Model*> good = {&m1, &m2, &m3};

    // 1. twisted Jacobi residual: exact zero on M1-M3, nonzero on M4
    {
        bool pass = twisted_jacobi_residual(m1).is_normal_zero() &&
                    twisted_jacobi_residual(m2).is_normal_zero() &&
                    twisted_jacobi_residual(m3).is_normal_zero() &&
                    !twisted_jacobi_residual(m4).is_normal_zero();
        run.report(1, "symbolic twisted Jacobi on M1-M4", pass, pass ? 0.0 : 1.0, 0.0);
    }

    // 2. bracket consistency anchor: exact zero on every fixture
    {
        bool pass = true;
        for (const char* name : {"M1", "M2", "M3", "M4"}) {
            Model m = make_fixture(name);
            for (const KForm& r : bracket_consistency_residual(m))
                pass = pass && r.is_normal_zero();
        }
        run.report(2, "bracket consistency anchor on M1-M4", pass, pass ? 0.0 : 1.0, 0.0);
    }

    // 3. function-level identities for 20 random pairs; the anchor-image
    //    identity must additionally fail somewhere on M4
    {
        Rng rng(seed);
        bool pass = true;
        for (const Model* m : good) {
            for (int trial = 0; trial < 20; ++trial) {
                Expr f = random_polynomial(rng, m->n(), 2);
                Expr g = random_polynomial(rng, m->n(), 2);
                pass = pass && eq3_residual(*m, f, g).is_normal_zero();
                for (const Expr& c : eq4_residual(*m, f, g))
                    pass = pass && is_normal_zero(c, m->n());
            }
        }
        bool m4_fails = false;
        for (int trial = 0; trial < 20 && !m4_fails; ++trial) {
            Expr f = random_polynomial(rng, 4, 2);
            Expr g = random_polynomial(rng, 4, 2);
            for (const Expr& c : eq4_residual(m4, f, g))
                if (!is_normal_zero(c, 4)) m4_fails = true;
        }
        pass = pass && m4_fails;
        run.report(3, "bracket identities, 20 random pairs", pass, pass ? 0.0 : 1.0, 0.0);
    }

    // 4. delta suite: delta f = df, derivation property, delta^2 = [phi, .]
    {
        Rng rng(seed + 1);
        bool pass = true;
        for (const Model* m : good) {
            const int n = m->n();
            Expr f = random_polynomial(rng, n, 2);
            pass = pass && (delta(*m, KForm::function(n, f)) -
                            exterior_derivative(KForm::function(n, f)))
                               .is_normal_zero();
            for (int i = 1; i <= n; ++i) {
                auto [r1, r2] = delta_identities_residuals(*m, KForm::dx(n, i),
                                                           KForm::dx(n, (i % n) + 1));
                pass = pass && r1.is_normal_zero() && r2.is_normal_zero();
            }
            for (int trial = 0; trial < 10; ++trial) {
                KForm s = random_one_form(rng, n, 1);
                KForm t = random_one_form(rng, n, 1);
                auto [r1, r2] = delta_identities_residuals(*m, s, t);
                pass = pass && r1.is_normal_zero() && r2.is_normal_zero();
            }
        }
        run.report(4, "delta suite on M1-M3", pass, pass ? 0.0 : 1.0, 0.0);
    }

    // 5. path ODE self-convergence order on M2
    {
        std::vector<Expr> eta = {Expr::constant(Rat(1, 2)) * Expr::t(),
                                 Expr::constant(Rat(3, 10)),
                                 Expr::constant(Rat(1, 5)) * Expr::t() * Expr::t()};
        Vec x0{0.2, -0.1, 1.0};
        AlgebroidPath ref = solve_base_path(m2, x0, EtaSpec::closed_form(eta), Grid(4000));
        double e25 = 0.0, e200 = 0.0;
        for (int N : {25, 50, 100, 200}) {
            AlgebroidPath p = solve_base_path(m2, x0, EtaSpec::closed_form(eta), Grid(N));
            double e = 0.0;
            for (int i = 0; i < 3; ++i)
                e = std::max(e, std::abs(p.X.back()[i] - ref.X.back()[i]));
            if (N == 25) e25 = e;
            if (N == 200) e200 = e;
        }
        double order = std::log(e25 / e200) / std::log(200.0 / 25.0);
        run.report(5, "path ODE convergence order on M2", order >= 3.5, order, 3.5);
    }

    // 6. constraint: |H_B| <= C N^-2 with stable C over 10 random B;
    //    identity paths give exactly zero
    {
        Rng rng(seed + 2);
        double worstC = 0.0;
        bool pass = true;
        for (const Model* m : good) {
            for (int N : {100, 200, 400}) {
                Grid g(N);
                AlgebroidPath p = random_on_shell_path(*m, rng, g);
                for (int j = 0; j < 10; ++j) {
                    GaugeGenerator B = random_gauge_generator(rng, g, m->n(), 1.0);
                    worstC = std::max(worstC,
                                      std::abs(momentum(*m, B, p)) * N * static_cast<double>(N));
                }
            }
            Grid g(200);
            GroupoidElementRep id = identity_element(*m, random_point(*m, rng, 0.4), g);
            for (int j = 0; j < 10; ++j) {
                GaugeGenerator B = random_gauge_generator(rng, g, m->n(), 1.0);
                pass = pass && momentum(*m, B, id.path) == 0.0;
            }
        }
        pass = pass && worstC <= 1.0;
        run.report(6, "momentum bound C stable, identity exact", pass, worstC, 1.0);
    }

    // 7. Hamiltonian relation: 50 random draws, relative residual
    {
        for (const Model* mp : {&m1, &m3}) {
            const Model& m = *mp;
            double tol = (mp == &m1) ? 1e-6 : 1e-5;
            Rng rng(seed + 3);
            Grid g(200);
            const int n = m.n();
            double worst = 0.0;
            for (int trial = 0; trial < 50; ++trial) {
                AlgebroidPath p = random_on_shell_path(m, rng, g);
                PathTangent off = random_tangent(rng, g, n, 0.2);
                for (int k = 0; k <= g.N; ++k)
                    for (int i = 0; i < n; ++i) {
                        p.X[k][i] += 0.3 * off.xi[k][i] * g.node(k) * (1 - g.node(k));
                        p.eta[k][i] += off.e[k][i];
                    }
                p.on_shell = false;
                GaugeGenerator B = random_gauge_generator(rng, g, n, 0.5);
                PathTangent u = random_tangent(rng, g, n, 0.3);
                double om = omega(m, p, gauge_vector_field(m, B, p), u);
                double r = std::abs(hamiltonian_relation_residual(m, B, p, u, 1e-5));
                worst = std::max(worst, r / (1.0 + std::abs(om)));
            }
            run.report(7, std::string("Hamiltonian relation on ") + (mp == &m1 ? "M1" : "M3"),
                       worst <= tol, worst, tol);
        }
    }

    // 8. gauge flow: endpoint drift and constraint growth on M1-M3
    {
        Rng rng(seed + 4);
        double worst_drift = 0.0, worst_growth = 0.0;
        for (const Model* m : good) {
            Grid g(200);
            const int n = m->n();
            AlgebroidPath p = random_on_shell_path(*m, rng, g);
            std::vector<GaugeGenerator> probes;
            double pre = 0.0;
            for (int j = 0; j < 5; ++j) {
                probes.push_back(random_gauge_generator(rng, g, n, 1.0));
                pre = std::max(pre, std::abs(momentum(*m, probes[j], p)));
            }
            AlgebroidPath q = gauge_flow(*m, random_gauge_generator(rng, g, n, 0.5), p, 1.0, 100);
            double drift = 0.0, post = 0.0;
            for (int i = 0; i < n; ++i)
                drift += std::abs(q.X.front()[i] - p.X.front()[i]) +
                         std::abs(q.X.back()[i] - p.X.back()[i]);
            for (auto& B : probes) post = std::max(post, std::abs(momentum(*m, B, q)));
            worst_drift = std::max(worst_drift, drift);
            // roundoff floor: the flat fixture has |H| at machine epsilon
            worst_growth = std::max(worst_growth, post / std::max(pre, 1e-9));
        }
        run.report(8, "gauge flow endpoint drift", worst_drift <= 1e-12, worst_drift, 1e-12);
        run.report(8, "gauge flow constraint growth", worst_growth <= 10.0, worst_growth, 10.0);
    }

    // 9. Step 1: gamma = pi and lambda = id at 5 random points per fixture
    {
        Rng rng(seed + 5);
        double worst = 0.0;
        Grid g(200);
        for (const Model* m : good) {
            const int n = m->n();
            for (int trial = 0; trial < 5; ++trial) {
                Vec x = random_point(*m, rng, 0.4);
                BasePairing bp = base_pairing(*m, x, g);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        worst = std::max(worst, std::abs(bp.gamma[i][j] -
                                                         m->pi().entry(i + 1, j + 1).eval(x)));
                        worst = std::max(worst,
                                         std::abs(bp.lambda[i][j] - (i == j ? 1.0 : 0.0)));
                    }
            }
        }
        run.report(9, "Step 1 pairings gamma = pi, lambda = id", worst <= 1e-10, worst, 1e-10);
    }

    // 10. Omega_1 vanishes exactly on eta = 0 paths
    {
        Rng rng(seed + 6);
        Grid g(200);
        double worst = 0.0;
        for (const Model* m : {&m3, &m4}) {
            GroupoidElementRep id = identity_element(*m, random_point(*m, rng, 0.4), g);
            for (int trial = 0; trial < 5; ++trial) {
                PathTangent u = random_tangent(rng, g, m->n(), 1.0);
                PathTangent v = random_tangent(rng, g, m->n(), 1.0);
                worst = std::max(worst, std::abs(omega1(*m, id.path, u, v)));
            }
        }
        run.report(10, "Omega_1 exactly zero at eta = 0", worst == 0.0, worst, 0.0);
    }

    // 11. horizontality and invariance over 10 random configurations each
    {
        Rng rng(seed + 7);
        Grid g(200);
        double worst_h = 0.0, worst_i = 0.0;
        for (const Model* m : good) {
            const int n = m->n();
            for (int trial = 0; trial < 10; ++trial) {
                AlgebroidPath p = random_on_shell_path(*m, rng, g);
                GaugeGenerator B = random_gauge_generator(rng, g, n, 0.5);
                std::vector<GaugeGenerator> probes = {B};
                for (int j = 0; j < 6; ++j)
                    probes.push_back(random_gauge_generator(rng, g, n, 1.0));
                PathTangent u =
                    project_to_constraint(*m, p, random_tangent(rng, g, n, 0.3), probes);
                PathTangent v =
                    project_to_constraint(*m, p, random_tangent(rng, g, n, 0.3), probes);
                worst_h = std::max(worst_h, horizontality_residual(*m, B, p, u));
                double scale = 1.0 + std::abs(omega(*m, p, u, v));
                worst_i = std::max(worst_i, invariance_residual(*m, B, p, u, v) / scale);
            }
        }
        run.report(11, "horizontality residual", worst_h <= 1e-5, worst_h, 1e-5);
        run.report(11, "invariance residual (relative)", worst_i <= 1e-3, worst_i, 1e-3);
    }

    // 12. transgression calibration and the Stokes identity
    {
        auto [mean, spread] = calibrate_c_phi(m3, 10, seed + 8, Grid(400));
        double target = to_double(m3.calibration().c_phi);
        bool pass = spread <= 1e-4 && std::abs(mean - target) <= 1e-4;
        run.report(12, "c_phi single constant across 10 paths", pass,
                   std::max(spread, std::abs(mean - target)), 1e-4);

        Rng rng(seed + 9);
        double worst = 0.0;
        Grid gs(400);
        for (const Model* m : good) {
            const int n = m->n();
            for (int fam = 0; fam < 3; ++fam) {
                Vec base = random_point(*m, rng, 0.3);
                Vec p1(n), p2(n), p3(n), q1(n);
                std::uniform_real_distribution<double> unif(-0.3, 0.3);
                for (int i = 0; i < n; ++i) {
                    p1[i] = unif(rng);
                    p2[i] = unif(rng);
                    p3[i] = unif(rng);
                    q1[i] = unif(rng);
                }
                PathFamily3 f;
                f.X = [=](double a, double b, double c, double t) {
                    Vec x(base.size());
                    for (size_t i = 0; i < x.size(); ++i)
                        x[i] = base[i] + q1[i] * t * t + a * p1[i] * t + b * p2[i] * t * (1 - t) +
                               c * p3[i] * t * t * (1 - t) + a * b * p1[i] * p2[i] * t * t;
                    return x;
                };
                f.dXda = [=](double, double b, double, double t) {
                    Vec x(base.size());
                    for (size_t i = 0; i < x.size(); ++i)
                        x[i] = p1[i] * t + b * p1[i] * p2[i] * t * t;
                    return x;
                };
                f.dXdb = [=](double a, double, double, double t) {
                    Vec x(base.size());
                    for (size_t i = 0; i < x.size(); ++i)
                        x[i] = p2[i] * t * (1 - t) + a * p1[i] * p2[i] * t * t;
                    return x;
                };
                f.dXdc = [=](double, double, double, double t) {
                    Vec x(base.size());
                    for (size_t i = 0; i < x.size(); ++i) x[i] = p3[i] * t * t * (1 - t);
                    return x;
                };
                worst = std::max(worst, stokes_residual(*m, f, gs, 1e-3));
            }
        }
        run.report(12, "Stokes identity, 3 families per fixture", worst <= 1e-4, worst, 1e-4);
    }

    // 13. groupoid observables
    {
        Rng rng(seed + 10);
        // endpoint laws, exact
        double law = 0.0;
        for (const Model* m : good) {
            Grid g(200);
            AlgebroidPath pa = random_on_shell_path(*m, rng, g, 0.15, 0.2);
            GroupoidElementRep ga = rep_of(pa);
            GroupoidElementRep gb =
                rep_of(solve_base_path(*m, ga.beta, random_eta(rng, m->n(), 0.2), g));
            GroupoidElementRep gab = concatenate(ga, gb);
            GroupoidElementRep inv = invert(ga);
            for (int i = 0; i < m->n(); ++i)
                law += std::abs(gab.alpha[i] - ga.alpha[i]) + std::abs(gab.beta[i] - gb.beta[i]) +
                       std::abs(inv.alpha[i] - ga.beta[i]) + std::abs(inv.beta[i] - ga.alpha[i]);
        }
        run.report(13, "groupoid endpoint laws exact", law == 0.0, law, 0.0);

        // additivity order in 1/N with smooth tangents
        double worst_order = 10.0;
        for (const Model* m : good) {
            std::vector<double> errs;
            for (int N : {100, 200, 400}) {
                Grid gr(N);
                Rng r3(seed + 11), r4(seed + 12);
                AlgebroidPath qa = random_on_shell_path(*m, r3, gr, 0.15, 0.2);
                GroupoidElementRep ha = rep_of(qa);
                GroupoidElementRep hb =
                    rep_of(solve_base_path(*m, ha.beta, random_eta(r4, m->n(), 0.2), gr));
                auto smooth = [&](unsigned s) {
                    Rng r5(s);
                    std::uniform_real_distribution<double> unif(-0.5, 0.5);
                    PathTangent u = zero_tangent(gr, m->n());
                    for (int i = 0; i < m->n(); ++i) {
                        double a = unif(r5), b = unif(r5);
                        for (int k = 0; k <= gr.N; ++k) {
                            double t = gr.node(k);
                            u.xi[k][i] = a + b * t;
                            u.e[k][i] = b - a * t;
                        }
                    }
                    return u;
                };
                errs.push_back(multiplicativity_residual(*m, ha, hb, smooth(21), smooth(22),
                                                         smooth(23), smooth(24)));
            }
            if (errs.back() < 1e-12) continue; // already exact
            double order = std::log(errs.front() / errs.back()) / std::log(4.0);
            worst_order = std::min(worst_order, order);
        }
        run.report(13, "Omega additivity order >= 2", worst_order >= 1.9, worst_order, 1.9);

        // identity-section identities at N = 400
        double worst_p = 0.0;
        for (const Model* m : good) {
            Vec x = random_point(*m, rng, 0.3);
            for (auto& [name, val] : prop22_checks(*m, x, Grid(400)))
                worst_p = std::max(worst_p, val);
        }
        run.report(13, "identity-section 2-form identities", worst_p <= 1e-6, worst_p, 1e-6);

        double worst_s = 10.0;
        for (const Model* m : good)
            worst_s = std::min(worst_s,
                               nondegeneracy_at_identity(*m, Vec(m->n(), 0.0), Grid(200)));
        run.report(13, "nondegeneracy along the identity", worst_s > 0.5, worst_s, 0.5);
    }

    std::printf("%s: %d criterion failures\n",
                run.failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", run.failures);
    return run.failures == 0 ? 0 : 1;
}
