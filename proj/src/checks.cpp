#include "tpw/checks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tpw/errors.hpp"
#include "tpw/groupoid.hpp"
#include "tpw/pathspace.hpp"
#include "tpw/random_inputs.hpp"
#include "tpw/tensorcalc.hpp"

namespace tpw {

namespace {

double sample_max(const KForm& r, const Model& m, Rng& rng, int pts) {
    double mx = 0.0;
    for (int s = 0; s < pts; ++s) {
        Vec x = random_point(m, rng);
        mx = std::max(mx, r.max_abs_eval(x));
    }
    return mx;
}

double sample_max(const TriVector& r, const Model& m, Rng& rng, int pts) {
    double mx = 0.0;
    for (int s = 0; s < pts; ++s) {
        Vec x = random_point(m, rng);
        mx = std::max(mx, r.max_abs_eval(x));
    }
    return mx;
}

// Symbolic-zero check with a numeric magnitude quote on failure.
template <typename T>
CheckResult zero_check(const std::string& name, const T& residual, const Model& m,
                       bool symbolic, Rng& rng, int pts) {
    CheckResult c;
    c.name = name;
    if (symbolic) {
        bool zero = residual.is_normal_zero();
        c.pass = zero;
        c.tolerance = 0.0;
        c.residual = zero ? 0.0 : sample_max(residual, m, rng, std::max(pts, 5));
    } else {
        c.residual = sample_max(residual, m, rng, pts);
        c.tolerance = 1e-8;
        c.pass = c.residual <= c.tolerance;
    }
    return c;
}

double fit_order(const std::vector<ConvergenceRow>& rows) {
    // least-squares slope of log(error) against log(1/N)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& r : rows) {
        if (r.error <= 0) continue; // exact to roundoff: ignore
        double x = -std::log(static_cast<double>(r.N));
        double y = std::log(r.error);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    if (cnt < 2) return std::numeric_limits<double>::infinity();
    return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

} // namespace

std::vector<CheckResult> verify_checks(const Model& m, bool symbolic, int sample_points,
                                       unsigned seed, const std::vector<Vec>& points) {
    Rng rng(seed);
    const int n = m.n();
    std::vector<CheckResult> out;

    // File-supplied evaluation points extend the random sample in numeric mode.
    auto fold_points = [&](CheckResult& c, const auto& residual) {
        if (symbolic) return;
        for (const Vec& x : points) {
            c.residual = std::max(c.residual, residual.max_abs_eval(x));
            c.pass = c.residual <= c.tolerance;
        }
    };

    // d(phi) = 0
    {
        KForm r = exterior_derivative(m.phi());
        CheckResult c = zero_check("dphi_closed", r, m, symbolic, rng, sample_points);
        fold_points(c, r);
        out.push_back(std::move(c));
    }

    // Twisted Jacobi residual (the c_jac-calibrated Eq.-(1) check).
    {
        TriVector r = twisted_jacobi_residual(m);
        CheckResult c = zero_check("twisted_jacobi", r, m, symbolic, rng, sample_points);
        fold_points(c, r);
        out.push_back(std::move(c));
    }

    // Convention anchor, must vanish for every model.
    {
        CheckResult c;
        c.name = "bracket_consistency";
        c.tolerance = symbolic ? 0.0 : 1e-8;
        double worst = 0.0;
        bool pass = true;
        for (const KForm& r : bracket_consistency_residual(m)) {
            CheckResult one = zero_check("", r, m, symbolic, rng, sample_points);
            worst = std::max(worst, one.residual);
            pass = pass && one.pass;
        }
        c.residual = worst;
        c.pass = pass;
        out.push_back(std::move(c));
    }

    // Function-level identities: exact bracket relation and its anchor image.
    {
        CheckResult c3{"eq3_residuals", 0.0, symbolic ? 0.0 : 1e-8, true, ""};
        CheckResult c4{"eq4_residuals", 0.0, symbolic ? 0.0 : 1e-8, true, ""};
        for (int trial = 0; trial < 5; ++trial) {
            Expr f = random_polynomial(rng, n, 2);
            Expr g = random_polynomial(rng, n, 2);
            CheckResult r3 = zero_check("", eq3_residual(m, f, g), m, symbolic, rng, sample_points);
            c3.residual = std::max(c3.residual, r3.residual);
            c3.pass = c3.pass && r3.pass;
            KForm r4form(n, 1);
            VectorField r4 = eq4_residual(m, f, g);
            for (int j = 1; j <= n; ++j) r4form.add_term({j}, r4[j - 1]);
            CheckResult r4c = zero_check("", r4form, m, symbolic, rng, sample_points);
            c4.residual = std::max(c4.residual, r4c.residual);
            c4.pass = c4.pass && r4c.pass;
        }
        out.push_back(std::move(c3));
        out.push_back(std::move(c4));
    }

    // delta f = df, the derivation property and delta^2 = [phi, .].
    {
        CheckResult cd{"delta_identities", 0.0, symbolic ? 0.0 : 1e-8, true, ""};
        try {
            {
                Expr f = random_polynomial(rng, n, 2);
                KForm df = exterior_derivative(KForm::function(n, f));
                CheckResult r = zero_check("", delta(m, KForm::function(n, f)) - df, m, symbolic,
                                           rng, sample_points);
                cd.residual = std::max(cd.residual, r.residual);
                cd.pass = cd.pass && r.pass;
            }
            for (int trial = 0; trial < 3; ++trial) {
                KForm s = random_one_form(rng, n, 1);
                KForm t = random_one_form(rng, n, 1);
                auto [r1, r2] = delta_identities_residuals(m, s, t);
                CheckResult a = zero_check("", r1, m, symbolic, rng, sample_points);
                CheckResult b = zero_check("", r2, m, symbolic, rng, sample_points);
                cd.residual = std::max({cd.residual, a.residual, b.residual});
                cd.pass = cd.pass && a.pass && b.pass;
            }
        } catch (const std::invalid_argument& e) {
            cd.pass = false;
            cd.residual = 1.0;
            cd.note = e.what();
        }
        out.push_back(std::move(cd));
    }
    return out;
}

std::vector<CheckResult> model_suite(const Model& m, const SuiteOptions& opt) {
    const int n = m.n();
    const bool symbolic = opt.symbolic && m.is_exact_fragment();
    std::vector<CheckResult> out = verify_checks(m, symbolic, opt.sample_points, opt.seed);
    Rng rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
    Grid g(opt.grid);

    // Path ODE self-convergence.
    {
        CheckResult c{"path_ode_convergence", 0.0, 0.0, false, ""};
        try {
            Vec x0 = random_point(m, rng, 0.2);
            EtaSpec eta = random_eta(rng, n, 0.3);
            AlgebroidPath ref = solve_base_path(m, x0, eta, Grid(2000));
            std::vector<ConvergenceRow> rows;
            double worst = 0.0;
            for (int N : {25, 50, 100, 200}) {
                AlgebroidPath p = solve_base_path(m, x0, eta, Grid(N));
                double e = 0.0;
                for (int i = 0; i < n; ++i)
                    e = std::max(e, std::abs(p.X.back()[i] - ref.X.back()[i]));
                rows.push_back({N, e});
                worst = std::max(worst, e);
            }
            double order = fit_order(rows);
            c.residual = order;
            c.tolerance = 3.5;
            // Constant-coefficient models integrate exactly; the fit is
            // then pure roundoff and the order is meaningless.
            c.pass = order >= 3.5 || worst < 1e-12;
            c.note = worst < 1e-12 ? "integrator exact to roundoff"
                                   : "value is the measured convergence order";
        } catch (const std::exception& e) {
            c.note = e.what();
        }
        out.push_back(std::move(c));
    }

    // On-shell paths sit on the zero set of every momentum map.
    {
        CheckResult c{"onshell_momentum", 0.0, 1.0 / (g.N * static_cast<double>(g.N)), true, ""};
        AlgebroidPath p = random_on_shell_path(m, rng, g);
        for (int j = 0; j < 10; ++j) {
            GaugeGenerator B = random_gauge_generator(rng, g, n, 1.0);
            c.residual = std::max(c.residual, std::abs(momentum(m, B, p)));
        }
        c.pass = c.residual <= c.tolerance;
        out.push_back(std::move(c));

        CheckResult ci{"identity_momentum_zero", 0.0, 0.0, true, ""};
        GroupoidElementRep id = identity_element(m, random_point(m, rng, 0.4), g);
        for (int j = 0; j < 5; ++j) {
            GaugeGenerator B = random_gauge_generator(rng, g, n, 1.0);
            ci.residual = std::max(ci.residual, std::abs(momentum(m, B, id.path)));
        }
        ci.pass = ci.residual == 0.0;
        out.push_back(std::move(ci));
    }

    // Hamiltonian relation, off-shell draws.
    {
        CheckResult c{"hamiltonian_relation", 0.0, m.phi().is_structurally_zero() ? 1e-6 : 1e-5,
                      true, "relative residual"};
        for (int trial = 0; trial < 10; ++trial) {
            AlgebroidPath p = random_on_shell_path(m, rng, g);
            PathTangent shift = random_tangent(rng, g, n, 0.2);
            p = [&] { // push off shell
                AlgebroidPath q = p;
                for (int k = 0; k <= g.N; ++k)
                    for (int i = 0; i < n; ++i) {
                        q.X[k][i] += 0.3 * shift.xi[k][i] * g.node(k) * (1 - g.node(k));
                        q.eta[k][i] += shift.e[k][i];
                    }
                q.on_shell = false;
                return q;
            }();
            GaugeGenerator B = random_gauge_generator(rng, g, n, 0.5);
            PathTangent u = random_tangent(rng, g, n, 0.3);
            double om = omega(m, p, gauge_vector_field(m, B, p), u);
            double r = std::abs(hamiltonian_relation_residual(m, B, p, u)) / (1.0 + std::abs(om));
            c.residual = std::max(c.residual, r);
        }
        c.pass = c.residual <= c.tolerance;
        out.push_back(std::move(c));
    }

    // Gauge flow: endpoint preservation and constraint growth.
    {
        AlgebroidPath p = random_on_shell_path(m, rng, g);
        std::vector<GaugeGenerator> probes;
        double pre = 0.0;
        for (int j = 0; j < 5; ++j) {
            probes.push_back(random_gauge_generator(rng, g, n, 1.0));
            pre = std::max(pre, std::abs(momentum(m, probes.back(), p)));
        }
        GaugeGenerator B = random_gauge_generator(rng, g, n, 0.5);
        AlgebroidPath q = gauge_flow(m, B, p, 1.0, 100);

        CheckResult ce{"gauge_flow_endpoints", 0.0, 1e-12, true, ""};
        for (int i = 0; i < n; ++i)
            ce.residual += std::abs(q.X.front()[i] - p.X.front()[i]) +
                           std::abs(q.X.back()[i] - p.X.back()[i]);
        ce.pass = ce.residual <= ce.tolerance;
        out.push_back(std::move(ce));

        CheckResult cc{"gauge_flow_constraint", 0.0, 0.0, true, "growth factor over s=1"};
        double post = 0.0;
        for (auto& pb : probes) post = std::max(post, std::abs(momentum(m, pb, q)));
        double floor = 1.0 / (g.N * static_cast<double>(g.N) * 100.0);
        cc.residual = post / std::max(pre, floor);
        cc.tolerance = 10.0;
        cc.pass = cc.residual <= cc.tolerance;
        out.push_back(std::move(cc));
    }

    // Step 1: gamma = pi and lambda = id at random points.
    {
        CheckResult cg{"step1_gamma", 0.0, 1e-10, true, ""};
        CheckResult cl{"step1_lambda", 0.0, 1e-10, true, ""};
        for (int trial = 0; trial < 5; ++trial) {
            Vec x = random_point(m, rng, 0.4);
            BasePairing bp = base_pairing(m, x, g);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double pij = m.pi().entry(i + 1, j + 1).eval(x);
                    cg.residual = std::max(cg.residual, std::abs(bp.gamma[i][j] - pij));
                    cl.residual =
                        std::max(cl.residual, std::abs(bp.lambda[i][j] - (i == j ? 1.0 : 0.0)));
                }
        }
        cg.pass = cg.residual <= cg.tolerance;
        cl.pass = cl.residual <= cl.tolerance;
        out.push_back(std::move(cg));
        out.push_back(std::move(cl));
    }

    // Omega_1 vanishes identically on eta = 0 paths.
    {
        CheckResult c{"omega1_identity_zero", 0.0, 0.0, true, ""};
        for (int trial = 0; trial < 3; ++trial) {
            Vec x = random_point(m, rng, 0.4);
            GroupoidElementRep id = identity_element(m, x, g);
            PathTangent u = random_tangent(rng, g, n, 1.0);
            PathTangent v = random_tangent(rng, g, n, 1.0);
            c.residual = std::max(c.residual, std::abs(omega1(m, id.path, u, v)));
        }
        c.pass = c.residual == 0.0;
        out.push_back(std::move(c));
    }

    // Horizontality and invariance along the foliation.
    {
        CheckResult ch{"horizontality", 0.0, 1e-5, true, ""};
        CheckResult ci{"invariance", 0.0, 0.0, true, "relative to 1+|Omega(u,v)|"};
        for (int trial = 0; trial < 3; ++trial) {
            AlgebroidPath p = random_on_shell_path(m, rng, g);
            GaugeGenerator B = random_gauge_generator(rng, g, n, 0.5);
            std::vector<GaugeGenerator> probes = {B};
            for (int j = 0; j < 6; ++j)
                probes.push_back(random_gauge_generator(rng, g, n, 1.0));
            PathTangent u =
                project_to_constraint(m, p, random_tangent(rng, g, n, 0.3), probes);
            PathTangent v =
                project_to_constraint(m, p, random_tangent(rng, g, n, 0.3), probes);
            ch.residual = std::max(ch.residual, horizontality_residual(m, B, p, u));
            double scale = 1.0 + std::abs(omega(m, p, u, v));
            ci.residual =
                std::max(ci.residual, invariance_residual(m, B, p, u, v) / scale);
        }
        ch.pass = ch.residual <= ch.tolerance;
        ci.tolerance = 1e-3;
        ci.pass = ci.residual <= ci.tolerance;
        out.push_back(std::move(ch));
        out.push_back(std::move(ci));
    }

    // Transgression calibration (only meaningful with a twist).
    if (!m.phi().is_structurally_zero()) {
        CheckResult c{"transgression_cphi", 0.0, 1e-4, true, ""};
        auto [mean, spread] = calibrate_c_phi(m, 10, opt.seed + 7, Grid(std::max(opt.grid, 400)));
        double target = to_double(m.calibration().c_phi);
        c.residual = std::max(std::abs(mean - target), spread);
        c.note = "measured c_phi = " + std::to_string(mean);
        c.pass = c.residual <= c.tolerance;
        out.push_back(std::move(c));
    }

    // Stokes identity on polynomial families.
    {
        CheckResult c{"stokes", 0.0, 1e-4, true, ""};
        Grid gs(std::max(opt.grid, 400));
        for (int fam = 0; fam < 3; ++fam) {
            Vec base = random_point(m, rng, 0.3);
            Vec p1(n), p2(n), p3(n), q1(n);
            std::uniform_real_distribution<double> unif(-0.3, 0.3);
            for (int i = 0; i < n; ++i) {
                p1[i] = unif(rng); p2[i] = unif(rng); p3[i] = unif(rng); q1[i] = unif(rng);
            }
            PathFamily3 f;
            f.X = [=](double a, double b, double cpar, double t) {
                Vec x(base.size());
                for (size_t i = 0; i < x.size(); ++i)
                    x[i] = base[i] + q1[i] * t * t + a * p1[i] * t + b * p2[i] * t * (1 - t) +
                           cpar * p3[i] * t * t * (1 - t) + a * b * p1[i] * p2[i] * t * t;
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
            c.residual = std::max(c.residual, stokes_residual(m, f, gs));
        }
        c.pass = c.residual <= c.tolerance;
        out.push_back(std::move(c));
    }

    // Groupoid observables.
    {
        CheckResult ce{"groupoid_endpoints", 0.0, 0.0, true, ""};
        CheckResult cm{"omega_additivity", 0.0, 0.0, false, "measured order in 1/N"};
        CheckResult cp{"prop22", 0.0, 1e-6, true, ""};
        CheckResult cn{"nondegeneracy", 0.0, 0.5, false, "min singular value"};

        // endpoint laws, exact
        AlgebroidPath pa = random_on_shell_path(m, rng, g, 0.15, 0.2);
        GroupoidElementRep ga{pa, pa.X.front(), pa.X.back()};
        AlgebroidPath pb = solve_base_path(m, ga.beta, random_eta(rng, n, 0.2), g);
        GroupoidElementRep gb{pb, pb.X.front(), pb.X.back()};
        GroupoidElementRep gab = concatenate(ga, gb);
        GroupoidElementRep inv = invert(ga);
        for (int i = 0; i < n; ++i) {
            ce.residual += std::abs(gab.alpha[i] - ga.alpha[i]) +
                           std::abs(gab.beta[i] - gb.beta[i]) +
                           std::abs(inv.alpha[i] - ga.beta[i]) + std::abs(inv.beta[i] - ga.alpha[i]);
        }
        GroupoidElementRep inv2 = invert(inv);
        for (int k = 0; k <= g.N; ++k)
            for (int i = 0; i < n; ++i)
                ce.residual += std::abs(inv2.path.X[k][i] - ga.path.X[k][i]) +
                               std::abs(inv2.path.eta[k][i] - ga.path.eta[k][i]);
        ce.pass = ce.residual == 0.0;
        out.push_back(std::move(ce));

        // additivity order over grid refinement with smooth tangents
        {
            std::vector<ConvergenceRow> rows;
            for (int N : {100, 200, 400}) {
                Grid gr(N);
                Rng r3(opt.seed + 3), r4(opt.seed + 4);
                AlgebroidPath qa = random_on_shell_path(m, r3, gr, 0.15, 0.2);
                GroupoidElementRep ha{qa, qa.X.front(), qa.X.back()};
                AlgebroidPath qb = solve_base_path(m, ha.beta, random_eta(r4, n, 0.2), gr);
                GroupoidElementRep hb{qb, qb.X.front(), qb.X.back()};
                auto smooth = [&](unsigned s) {
                    Rng r2(s);
                    std::uniform_real_distribution<double> unif(-0.5, 0.5);
                    PathTangent u = zero_tangent(gr, n);
                    Vec a(n), b(n), cce(n);
                    for (int i = 0; i < n; ++i) { a[i] = unif(r2); b[i] = unif(r2); cce[i] = unif(r2); }
                    for (int k = 0; k <= gr.N; ++k) {
                        double t = gr.node(k);
                        for (int i = 0; i < n; ++i) {
                            u.xi[k][i] = a[i] + b[i] * t;
                            u.e[k][i] = cce[i] * (1 - t);
                        }
                    }
                    return u;
                };
                double r = multiplicativity_residual(m, ha, hb, smooth(11), smooth(12),
                                                     smooth(13), smooth(14));
                rows.push_back({N, r});
            }
            double order = fit_order(rows);
            cm.residual = order;
            cm.tolerance = 1.9; // second-order target with measurement slack
            cm.pass = order >= cm.tolerance || rows.back().error < 1e-12;
            out.push_back(std::move(cm));
        }

        Vec x0 = random_point(m, rng, 0.3);
        Grid gp(std::max(opt.grid, 400));
        for (auto& [name, val] : prop22_checks(m, x0, gp))
            cp.residual = std::max(cp.residual, val);
        cp.pass = cp.residual <= cp.tolerance;
        out.push_back(std::move(cp));

        cn.residual = nondegeneracy_at_identity(m, Vec(n, 0.0), g);
        cn.pass = cn.residual > 0.5;
        out.push_back(std::move(cn));
    }

    return out;
}

ConvergenceStudy convergence_study(const Model& m, const std::string& check,
                                   const std::vector<int>& grids, unsigned seed) {
    Rng rng(seed);
    const int n = m.n();
    ConvergenceStudy st;
    st.check = check;

    Vec x0 = random_point(m, rng, 0.2);
    EtaSpec eta = random_eta(rng, n, 0.3);

    if (check == "solve_base_path") {
        int refN = 10 * *std::max_element(grids.begin(), grids.end());
        AlgebroidPath ref = solve_base_path(m, x0, eta, Grid(refN));
        for (int N : grids) {
            AlgebroidPath p = solve_base_path(m, x0, eta, Grid(N));
            double e = 0.0;
            for (int i = 0; i < n; ++i)
                e = std::max(e, std::abs(p.X.back()[i] - ref.X.back()[i]));
            st.rows.push_back({N, e});
        }
    } else if (check == "momentum") {
        // the same generators on every grid, the worst momentum per level
        std::vector<GaugeFamily> fams;
        for (int j = 0; j < 3; ++j) fams.push_back(random_gauge_family(rng, n, 1.0));
        for (int N : grids) {
            Grid g(N);
            AlgebroidPath p = solve_base_path(m, x0, eta, g);
            double worst = 0.0;
            for (const auto& f : fams)
                worst = std::max(worst, std::abs(momentum(m, f.sample(g), p)));
            st.rows.push_back({N, worst});
        }
    } else if (check == "omega1") {
        int refN = 10 * *std::max_element(grids.begin(), grids.end());
        auto value_at = [&](int N) {
            Grid g(N);
            AlgebroidPath p = solve_base_path(m, x0, eta, g);
            PathTangent u = zero_tangent(g, n), v = zero_tangent(g, n);
            for (int k = 0; k <= g.N; ++k) {
                double t = g.node(k);
                for (int i = 0; i < n; ++i) {
                    u.xi[k][i] = std::sin((i + 1) * t);
                    v.xi[k][i] = std::cos((i + 2) * t);
                }
            }
            return omega1(m, p, u, v);
        };
        double ref = value_at(refN);
        for (int N : grids) st.rows.push_back({N, std::abs(value_at(N) - ref)});
    } else {
        throw std::invalid_argument("unknown convergence check '" + check + "'");
    }
    st.order = fit_order(st.rows);
    return st;
}

} // namespace tpw
