#include "tpw/random_inputs.hpp"

#include <cmath>

#include "tpw/errors.hpp"

namespace tpw {

Expr random_polynomial(Rng& rng, int n, int max_degree) {
    std::uniform_int_distribution<int> coef(-2, 2);
    std::uniform_int_distribution<int> pick(0, n); // 0 = skip factor
    Expr acc;
    for (int term = 0; term < 4; ++term) {
        int c = coef(rng);
        if (c == 0) continue;
        Expr mono = Expr::integer(c);
        for (int d = 0; d < max_degree; ++d) {
            int v = pick(rng);
            if (v > 0) mono = mono * Expr::x(v);
        }
        acc = acc + mono;
    }
    return acc;
}

KForm random_one_form(Rng& rng, int n, int max_degree) {
    KForm s(n, 1);
    for (int i = 1; i <= n; ++i) s.add_term({i}, random_polynomial(rng, n, max_degree));
    return s;
}

Vec random_point(const Model& m, Rng& rng, double box) {
    std::uniform_real_distribution<double> unif(-box, box);
    // Denominator polynomials of every stored component, for the rejection
    // margin around their zero sets.
    static thread_local std::vector<Polynomial> dens;
    dens.clear();
    auto collect = [&](const Expr& e) {
        if (!e.is_exact_fragment()) return;
        Polynomial d = e.normal_form(m.n()).den();
        if (!d.is_constant()) dens.push_back(std::move(d));
    };
    for (auto& [ij, e] : m.pi().stored()) collect(e);
    for (auto& [idx, e] : m.phi().components()) collect(e);

    Vec x(m.n());
    for (int attempt = 0; attempt < 1000; ++attempt) {
        for (double& xi : x) xi = unif(rng);
        bool ok = true;
        for (const auto& d : dens)
            if (std::abs(d.eval(x, 0.0)) < 0.05) ok = false;
        if (ok) return x;
    }
    throw std::runtime_error("random_point: rejection sampling failed");
}

GaugeGenerator GaugeFamily::sample(const Grid& g) const {
    const int n = static_cast<int>(c.size());
    NodeData vals(g.num_nodes(), Vec(n));
    for (int k = 0; k <= g.N; ++k) {
        double t = g.node(k), s = 1.0 - t;
        double t3 = t * t * t, s3 = s * s * s;
        for (int i = 0; i < n; ++i)
            vals[k][i] = c[i] * t3 * s3 + d[i] * t * t3 * s3 + e[i] * t3 * s * s3;
    }
    vals.front().assign(n, 0.0);
    vals.back().assign(n, 0.0);
    return GaugeGenerator::grid_data(std::move(vals), g);
}

GaugeFamily random_gauge_family(Rng& rng, int n, double amp) {
    std::uniform_real_distribution<double> unif(-amp, amp);
    GaugeFamily f{Vec(n), Vec(n), Vec(n)};
    for (int i = 0; i < n; ++i) {
        f.c[i] = unif(rng);
        f.d[i] = unif(rng);
        f.e[i] = unif(rng);
    }
    return f;
}

GaugeGenerator random_gauge_generator(Rng& rng, const Grid& g, int n, double amp) {
    return random_gauge_family(rng, n, amp).sample(g);
}

EtaSpec random_eta(Rng& rng, int n, double amp) {
    std::uniform_int_distribution<int> mil(-1000, 1000);
    std::vector<Expr> comps(n);
    for (int i = 0; i < n; ++i) {
        Rat a(mil(rng), 1000), b(mil(rng), 1000), c(mil(rng), 1000);
        comps[i] = Expr::constant(a * Rat(static_cast<long long>(amp * 1000), 1000)) +
                   Expr::constant(b * Rat(static_cast<long long>(amp * 1000), 1000)) * Expr::t() +
                   Expr::constant(c * Rat(static_cast<long long>(amp * 1000), 1000)) * Expr::t() *
                       Expr::t();
    }
    return EtaSpec::closed_form(std::move(comps));
}

PathTangent random_tangent(Rng& rng, const Grid& g, int n, double amp) {
    std::uniform_real_distribution<double> unif(-amp, amp);
    PathTangent u = zero_tangent(g, n);
    for (int k = 0; k <= g.N; ++k)
        for (int i = 0; i < n; ++i) {
            u.xi[k][i] = unif(rng);
            u.e[k][i] = unif(rng);
        }
    return u;
}

AlgebroidPath random_on_shell_path(const Model& m, Rng& rng, const Grid& g, double x0_box,
                                   double eta_amp) {
    for (int attempt = 0; attempt < 50; ++attempt) {
        Vec x0 = random_point(m, rng, x0_box);
        EtaSpec eta = random_eta(rng, m.n(), eta_amp);
        try {
            return solve_base_path(m, x0, eta, g);
        } catch (const divergence_error&) {
            continue; // rare: trajectory left the chart, redraw
        }
    }
    throw std::runtime_error("random_on_shell_path: could not find a bounded trajectory");
}

} // namespace tpw
