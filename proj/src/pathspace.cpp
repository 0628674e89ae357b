#include "tpw/pathspace.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "tpw/errors.hpp"
#include "tpw/tensorcalc.hpp"

namespace tpw {

namespace {

NodeData shifted(const NodeData& base, const NodeData& dir, double s) {
    NodeData out = base;
    for (size_t k = 0; k < out.size(); ++k)
        for (size_t i = 0; i < out[k].size(); ++i) out[k][i] += s * dir[k][i];
    return out;
}

AlgebroidPath shift_path(const AlgebroidPath& p, const PathTangent& u, double s) {
    AlgebroidPath q;
    q.grid = p.grid;
    q.n = p.n;
    q.X = shifted(p.X, u.xi, s);
    q.eta = shifted(p.eta, u.e, s);
    q.on_shell = false;
    return q;
}

// Numeric evaluation cache for one model: pi entries with x-derivatives,
// phi entries, and the vertical gauge coefficients.
struct Ctx {
    int n;
    struct PiEntry {
        int i, j; // i < j
        Expr e;
        std::vector<Expr> d; // d[a] = derivative along x_{a+1}
    };
    struct PhiEntry {
        int i, j, k;
        Expr e;
    };
    struct GaugeEntry {
        int r, s; // r < s
        std::vector<Expr> g; // the structure functions f^{rs}_a
    };
    std::vector<PiEntry> pi;
    std::vector<PhiEntry> phi;
    std::vector<GaugeEntry> gauge;

    explicit Ctx(const Model& m) : n(m.n()) {
        for (auto& [ij, e] : m.pi().stored()) {
            PiEntry pe{ij.first, ij.second, e, {}};
            pe.d.reserve(n);
            for (int a = 1; a <= n; ++a) pe.d.push_back(e.derivative(a));
            pi.push_back(std::move(pe));
        }
        for (auto& [idx, e] : m.phi().components())
            phi.push_back({idx[0], idx[1], idx[2], e});
        StructureFunctions sf = structure_functions(m);
        for (int r = 1; r <= n; ++r) {
            for (int s = r + 1; s <= n; ++s) {
                GaugeEntry ge{r, s, {}};
                for (int a = 1; a <= n; ++a) ge.g.push_back(sf.get(r, s, a));
                gauge.push_back(std::move(ge));
            }
        }
    }

    // out^j = sum_i pi^{ij} sigma_i
    void sharp_into(const Vec& x, const Vec& sigma, Vec& out) const {
        std::fill(out.begin(), out.end(), 0.0);
        for (auto& pe : pi) {
            double p = pe.e.eval(x);
            out[pe.j - 1] += p * sigma[pe.i - 1];
            out[pe.i - 1] -= p * sigma[pe.j - 1];
        }
    }
    Vec sharp(const Vec& x, const Vec& sigma) const {
        Vec out(n);
        sharp_into(x, sigma, out);
        return out;
    }

    double phi_eval(const Vec& x, const Vec& u, const Vec& v, const Vec& w) const {
        double acc = 0.0;
        for (auto& pe : phi) {
            int i = pe.i - 1, j = pe.j - 1, k = pe.k - 1;
            double det = u[i] * (v[j] * w[k] - v[k] * w[j]) -
                         u[j] * (v[i] * w[k] - v[k] * w[i]) +
                         u[k] * (v[i] * w[j] - v[j] * w[i]);
            acc += pe.e.eval(x) * det;
        }
        return acc;
    }

    // out^j = sum_{i,a} d_a pi^{ij} xi^a eta_i (variation of the anchor in X)
    void dpi_contract(const Vec& x, const Vec& xi, const Vec& eta, Vec& out) const {
        std::fill(out.begin(), out.end(), 0.0);
        for (auto& pe : pi) {
            double dp = 0.0;
            for (int a = 0; a < n; ++a) {
                if (pe.d[a].is_zero_node()) continue;
                dp += pe.d[a].eval(x) * xi[a];
            }
            if (dp == 0.0) continue;
            out[pe.j - 1] += dp * eta[pe.i - 1];
            out[pe.i - 1] -= dp * eta[pe.j - 1];
        }
    }

    // out_a = sum_{r<s} g^{rs}_a (eta_r B_s - eta_s B_r)
    void gauge_contract(const Vec& x, const Vec& eta, const Vec& B, Vec& out) const {
        std::fill(out.begin(), out.end(), 0.0);
        for (auto& ge : gauge) {
            double w = eta[ge.r - 1] * B[ge.s - 1] - eta[ge.s - 1] * B[ge.r - 1];
            if (w == 0.0) continue;
            for (int a = 0; a < n; ++a) {
                if (ge.g[a].is_zero_node()) continue;
                out[a] += ge.g[a].eval(x) * w;
            }
        }
    }
};

double max_abs(const Vec& v) {
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, std::abs(x));
    return mx;
}

} // namespace

PathTangent zero_tangent(const Grid& g, int n) {
    PathTangent u;
    u.grid = g;
    u.n = n;
    u.xi.assign(g.num_nodes(), Vec(n, 0.0));
    u.e.assign(g.num_nodes(), Vec(n, 0.0));
    return u;
}

// ---------------------------------------------------------------------------
// GaugeGenerator
// ---------------------------------------------------------------------------

GaugeGenerator GaugeGenerator::closed_form(std::vector<Expr> comps, int n) {
    GaugeGenerator b;
    b.n_ = n;
    b.comps_ = std::move(comps);
    if (static_cast<int>(b.comps_.size()) != n)
        throw std::invalid_argument("gauge generator needs n components");
    // Endpoint vanishing: exact for the rational fragment, sampled otherwise.
    std::mt19937_64 rng(0xb0); // fixed probe points
    std::uniform_real_distribution<double> unif(-0.5, 0.5);
    for (const Expr& c : b.comps_) {
        for (double tend : {0.0, 1.0}) {
            if (c.is_exact_fragment()) {
                Expr at = c.substitute_t(Expr::constant(Rat(tend == 0.0 ? 0 : 1)));
                if (!is_normal_zero(at, n))
                    throw std::invalid_argument("gauge generator must vanish at t=0,1");
            } else {
                Vec x(n);
                for (int s = 0; s < 3; ++s) {
                    for (double& xi : x) xi = unif(rng);
                    if (std::abs(c.eval(x, tend)) > 1e-10)
                        throw std::invalid_argument("gauge generator must vanish at t=0,1");
                }
            }
        }
    }
    return b;
}

GaugeGenerator GaugeGenerator::grid_data(NodeData values, const Grid& g) {
    GaugeGenerator b;
    b.grid_ = g;
    b.values_ = std::move(values);
    if (static_cast<int>(b.values_.size()) != g.num_nodes())
        throw std::invalid_argument("gauge generator node count mismatch");
    b.n_ = static_cast<int>(b.values_.front().size());
    if (max_abs(b.values_.front()) != 0.0 || max_abs(b.values_.back()) != 0.0)
        throw std::invalid_argument("gauge generator must vanish at t=0,1");
    return b;
}

Vec GaugeGenerator::value(const Vec& x, double t) const {
    Vec out(n_);
    if (is_closed_form()) {
        for (int i = 0; i < n_; ++i) out[i] = comps_[i].eval(x, t);
        return out;
    }
    // nodal data: exact at nodes, linear in between
    double s = t * grid_.N;
    int k = std::clamp(static_cast<int>(std::floor(s)), 0, grid_.N - 1);
    double w = s - k;
    for (int i = 0; i < n_; ++i) out[i] = (1.0 - w) * values_[k][i] + w * values_[k + 1][i];
    return out;
}

NodeData GaugeGenerator::values_along(const AlgebroidPath& p) const {
    const int K = p.grid.num_nodes();
    NodeData out(K, Vec(n_));
    for (int k = 0; k < K; ++k) {
        if (is_closed_form()) {
            double t = p.grid.node(k);
            for (int i = 0; i < n_; ++i) out[k][i] = comps_[i].eval(p.X[k], t);
        } else {
            if (!(grid_ == p.grid))
                throw std::invalid_argument("gauge generator grid mismatch");
            out[k] = values_[k];
        }
    }
    return out;
}

Vec GaugeGenerator::jacobian_apply(const Vec& x, double t, const Vec& xi) const {
    Vec out(n_, 0.0);
    if (!is_closed_form()) return out;
    for (int j = 0; j < n_; ++j) {
        double acc = 0.0;
        for (int a = 1; a <= n_; ++a) {
            Expr da = comps_[j].derivative(a);
            if (da.is_zero_node()) continue;
            acc += da.eval(x, t) * xi[a - 1];
        }
        out[j] = acc;
    }
    return out;
}

GaugeGenerator::Sampled GaugeGenerator::sample_along(const AlgebroidPath& p) const {
    Sampled s;
    s.B = values_along(p);
    if (!is_closed_form()) {
        s.dB = time_derivative(s.B, p.grid);
        return s;
    }
    // Exact t- and x-partials; X' enters by centered differences.
    const int K = p.grid.num_nodes();
    NodeData dX = time_derivative(p.X, p.grid);
    s.dB.assign(K, Vec(n_));
    for (int k = 0; k < K; ++k) {
        double t = p.grid.node(k);
        for (int i = 0; i < n_; ++i) {
            double d = comps_[i].derivative(0).eval(p.X[k], t);
            for (int a = 1; a <= n_; ++a) {
                Expr da = comps_[i].derivative(a);
                if (da.is_zero_node()) continue;
                d += da.eval(p.X[k], t) * dX[k][a - 1];
            }
            s.dB[k][i] = d;
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// EtaSpec
// ---------------------------------------------------------------------------

EtaSpec EtaSpec::closed_form(std::vector<Expr> comps) {
    EtaSpec e;
    e.comps_ = std::move(comps);
    for (const Expr& c : e.comps_)
        if (c.max_var_index() > 0)
            throw std::invalid_argument("closed-form eta must depend on t only");
    return e;
}

EtaSpec EtaSpec::grid_data(NodeData values, const Grid& g) {
    EtaSpec e;
    e.values_ = std::move(values);
    e.grid_ = g;
    if (static_cast<int>(e.values_.size()) != g.num_nodes())
        throw std::invalid_argument("eta node count mismatch");
    return e;
}

Vec EtaSpec::at(double t) const {
    if (is_closed_form()) {
        Vec out(comps_.size());
        for (size_t i = 0; i < comps_.size(); ++i) out[i] = comps_[i].eval({}, t);
        return out;
    }
    double s = t * grid_.N;
    int k = std::clamp(static_cast<int>(std::floor(s)), 0, grid_.N - 1);
    double w = s - k;
    Vec out(values_.front().size());
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = (1.0 - w) * values_[k][i] + w * values_[k + 1][i];
    return out;
}

// ---------------------------------------------------------------------------
// Core operations
// ---------------------------------------------------------------------------

double anchor_residual(const Model& m, const AlgebroidPath& p) {
    Ctx c(m);
    NodeData dX = time_derivative(p.X, p.grid);
    double mx = 0.0;
    Vec w(p.n);
    for (int k = 0; k < p.grid.num_nodes(); ++k) {
        c.sharp_into(p.X[k], p.eta[k], w);
        for (int i = 0; i < p.n; ++i) mx = std::max(mx, std::abs(dX[k][i] - w[i]));
    }
    return mx;
}

AlgebroidPath solve_base_path(const Model& m, const Vec& x0, const EtaSpec& eta,
                              const Grid& g) {
    Ctx c(m);
    const int n = m.n();
    const double h = g.h();
    AlgebroidPath p;
    p.grid = g;
    p.n = n;
    p.X.assign(g.num_nodes(), Vec(n));
    p.eta.assign(g.num_nodes(), Vec(n));
    for (int k = 0; k <= g.N; ++k) p.eta[k] = eta.at(g.node(k));

    auto f = [&](double t, const Vec& x, int node) -> Vec {
        try {
            return c.sharp(x, eta.at(t));
        } catch (const eval_domain_error& err) {
            throw divergence_error(std::string("pole on trajectory: ") + err.what(), node);
        }
    };

    Vec x = x0;
    p.X[0] = x;
    Vec tmp(n);
    for (int k = 0; k < g.N; ++k) {
        double t = g.node(k);
        Vec k1 = f(t, x, k);
        for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
        Vec k2 = f(t + 0.5 * h, tmp, k);
        for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
        Vec k3 = f(t + 0.5 * h, tmp, k);
        for (int i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
        Vec k4 = f(t + h, tmp, k);
        for (int i = 0; i < n; ++i)
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (max_abs(x) > 1e8 || !std::isfinite(max_abs(x)))
            throw divergence_error("solution norm overflow", k + 1);
        p.X[k + 1] = x;
    }
    p.on_shell = true;
    if (eta.is_closed_form()) p.eta_form = eta.comps();
    return p;
}

double momentum(const Model& m, const GaugeGenerator& B, const AlgebroidPath& p) {
    Ctx c(m);
    NodeData Bv = B.values_along(p);
    NodeData dX = time_derivative(p.X, p.grid);
    std::vector<double> integrand(p.grid.num_nodes());
    Vec w(p.n);
    for (int k = 0; k < p.grid.num_nodes(); ++k) {
        c.sharp_into(p.X[k], p.eta[k], w);
        double acc = 0.0;
        for (int i = 0; i < p.n; ++i) acc += Bv[k][i] * (dX[k][i] - w[i]);
        integrand[k] = acc;
    }
    return trapezoid(integrand, p.grid);
}

double momentum_derivative(const Model& m, const GaugeGenerator& B, const AlgebroidPath& p,
                           const PathTangent& u) {
    Ctx c(m);
    NodeData Bv = B.values_along(p);
    NodeData dX = time_derivative(p.X, p.grid);
    NodeData dXi = time_derivative(u.xi, p.grid);
    std::vector<double> integrand(p.grid.num_nodes());
    Vec w(p.n), dw(p.n), dwe(p.n);
    for (int k = 0; k < p.grid.num_nodes(); ++k) {
        c.sharp_into(p.X[k], p.eta[k], w);
        c.dpi_contract(p.X[k], u.xi[k], p.eta[k], dw);
        c.sharp_into(p.X[k], u.e[k], dwe);
        double acc = 0.0;
        for (int i = 0; i < p.n; ++i)
            acc += Bv[k][i] * (dXi[k][i] - dw[i] - dwe[i]);
        if (B.is_closed_form()) {
            Vec db = B.jacobian_apply(p.X[k], p.grid.node(k), u.xi[k]);
            for (int i = 0; i < p.n; ++i) acc += db[i] * (dX[k][i] - w[i]);
        }
        integrand[k] = acc;
    }
    return trapezoid(integrand, p.grid);
}

double omega0(const AlgebroidPath& p, const PathTangent& u, const PathTangent& v) {
    if (!(u.grid == p.grid) || !(v.grid == p.grid))
        throw std::invalid_argument("omega0: grid mismatch");
    std::vector<double> integrand(p.grid.num_nodes());
    for (int k = 0; k < p.grid.num_nodes(); ++k) {
        double acc = 0.0;
        for (int i = 0; i < p.n; ++i)
            acc += u.e[k][i] * v.xi[k][i] - v.e[k][i] * u.xi[k][i];
        integrand[k] = acc;
    }
    return trapezoid(integrand, p.grid);
}

double omega1(const Model& m, const AlgebroidPath& p, const PathTangent& u,
              const PathTangent& v) {
    if (!(u.grid == p.grid) || !(v.grid == p.grid))
        throw std::invalid_argument("omega1: grid mismatch");
    Ctx c(m);
    if (c.phi.empty()) return 0.0;
    std::vector<double> integrand(p.grid.num_nodes());
    Vec w(p.n);
    bool all_zero = true;
    for (int k = 0; k < p.grid.num_nodes(); ++k) {
        c.sharp_into(p.X[k], p.eta[k], w);
        if (max_abs(w) != 0.0) all_zero = false;
        integrand[k] = c.phi_eval(p.X[k], w, u.xi[k], v.xi[k]);
    }
    if (all_zero) return 0.0; // eta = 0: exactly zero by construction
    return -trapezoid(integrand, p.grid);
}

double omega(const Model& m, const AlgebroidPath& p, const PathTangent& u,
             const PathTangent& v) {
    return omega0(p, u, v) + omega1(m, p, u, v);
}

PathTangent gauge_vector_field(const Model& m, const GaugeGenerator& B,
                               const AlgebroidPath& p) {
    Ctx c(m);
    auto s = B.sample_along(p);
    PathTangent out = zero_tangent(p.grid, p.n);
    Vec sh(p.n), gc(p.n);
    for (int k = 0; k < p.grid.num_nodes(); ++k) {
        c.sharp_into(p.X[k], s.B[k], sh);
        for (int i = 0; i < p.n; ++i) out.xi[k][i] = -sh[i];
        c.gauge_contract(p.X[k], p.eta[k], s.B[k], gc);
        for (int a = 0; a < p.n; ++a) out.e[k][a] = -s.dB[k][a] - gc[a];
    }
    return out;
}

double hamiltonian_relation_residual(const Model& m, const GaugeGenerator& B,
                                     const AlgebroidPath& p, const PathTangent& u,
                                     double eps_fd) {
    PathTangent xb = gauge_vector_field(m, B, p);
    double lhs = omega(m, p, xb, u);
    double hp = momentum(m, B, shift_path(p, u, eps_fd));
    double hm = momentum(m, B, shift_path(p, u, -eps_fd));
    return lhs - (hp - hm) / (2.0 * eps_fd);
}

AlgebroidPath gauge_flow(const Model& m, const GaugeGenerator& B, const AlgebroidPath& p,
                         double s_total, int steps) {
    if (steps < 1) throw std::invalid_argument("gauge_flow: steps must be positive");
    const double ds = s_total / steps;
    AlgebroidPath cur = p;
    cur.eta_form.reset();

    auto add_scaled = [&](const AlgebroidPath& base, const PathTangent& w, double s) {
        return shift_path(base, w, s);
    };

    for (int step = 0; step < steps; ++step) {
        PathTangent k1 = gauge_vector_field(m, B, cur);
        PathTangent k2 = gauge_vector_field(m, B, add_scaled(cur, k1, 0.5 * ds));
        PathTangent k3 = gauge_vector_field(m, B, add_scaled(cur, k2, 0.5 * ds));
        PathTangent k4 = gauge_vector_field(m, B, add_scaled(cur, k3, ds));
        for (int k = 0; k < cur.grid.num_nodes(); ++k) {
            for (int i = 0; i < cur.n; ++i) {
                cur.X[k][i] += ds / 6.0 *
                               (k1.xi[k][i] + 2.0 * k2.xi[k][i] + 2.0 * k3.xi[k][i] + k4.xi[k][i]);
                cur.eta[k][i] += ds / 6.0 *
                                 (k1.e[k][i] + 2.0 * k2.e[k][i] + 2.0 * k3.e[k][i] + k4.e[k][i]);
            }
        }
        if (!std::isfinite(max_abs(cur.X[cur.grid.N / 2])) || max_abs(cur.X[cur.grid.N / 2]) > 1e8)
            throw divergence_error("gauge flow diverged", step);
    }
    cur.on_shell = p.on_shell;
    return cur;
}

double transgression(const Model& m, const NodeData& X, const NodeData& w1,
                     const NodeData& w2, const Grid& g) {
    Ctx c(m);
    if (c.phi.empty()) return 0.0;
    NodeData dX = time_derivative(X, g);
    std::vector<double> integrand(g.num_nodes());
    for (int k = 0; k < g.num_nodes(); ++k)
        integrand[k] = c.phi_eval(X[k], dX[k], w1[k], w2[k]);
    return trapezoid(integrand, g);
}

double stokes_residual(const Model& m, const PathFamily3& family, const Grid& g,
                       double fd_step) {
    Ctx c(m);
    auto sample = [&](const std::function<Vec(double, double, double, double)>& f, double a,
                      double b, double cc) {
        NodeData out(g.num_nodes());
        for (int k = 0; k < g.num_nodes(); ++k) out[k] = f(a, b, cc, g.node(k));
        return out;
    };
    // Phi evaluated on one pair of the coordinate family tangents.
    auto F = [&](int skip, double a, double b, double cc) {
        NodeData X = sample(family.X, a, b, cc);
        const auto& d1 = (skip == 0) ? family.dXdb : family.dXda;
        const auto& d2 = (skip == 2) ? family.dXdb : family.dXdc;
        NodeData w1 = sample(d1, a, b, cc);
        NodeData w2 = sample(d2, a, b, cc);
        return transgression(m, X, w1, w2, g);
    };
    const double d = fd_step;
    double dPhi = (F(0, d, 0, 0) - F(0, -d, 0, 0)) / (2 * d) -
                  (F(1, 0, d, 0) - F(1, 0, -d, 0)) / (2 * d) +
                  (F(2, 0, 0, d) - F(2, 0, 0, -d)) / (2 * d);
    Vec x0 = family.X(0, 0, 0, 0.0), x1 = family.X(0, 0, 0, 1.0);
    double bnd = c.phi_eval(x0, family.dXda(0, 0, 0, 0.0), family.dXdb(0, 0, 0, 0.0),
                            family.dXdc(0, 0, 0, 0.0)) -
                 c.phi_eval(x1, family.dXda(0, 0, 0, 1.0), family.dXdb(0, 0, 0, 1.0),
                            family.dXdc(0, 0, 0, 1.0));
    return std::abs(dPhi - bnd);
}

double horizontality_residual(const Model& m, const GaugeGenerator& B,
                              const AlgebroidPath& p, const PathTangent& u) {
    return std::abs(omega(m, p, gauge_vector_field(m, B, p), u));
}

namespace {

PathTangent scaled_difference(const AlgebroidPath& a, const AlgebroidPath& b, double inv2d) {
    PathTangent out;
    out.grid = a.grid;
    out.n = a.n;
    out.xi.assign(a.X.size(), Vec(a.n));
    out.e.assign(a.X.size(), Vec(a.n));
    for (size_t k = 0; k < a.X.size(); ++k) {
        for (int i = 0; i < a.n; ++i) {
            out.xi[k][i] = (a.X[k][i] - b.X[k][i]) * inv2d;
            out.e[k][i] = (a.eta[k][i] - b.eta[k][i]) * inv2d;
        }
    }
    return out;
}

} // namespace

double invariance_residual(const Model& m, const GaugeGenerator& B, const AlgebroidPath& p,
                           const PathTangent& u, const PathTangent& v,
                           const PathConfig& cfg) {
    const double sigma = cfg.flow_sigma;
    const double d = cfg.transport_step;
    const int steps = std::max(5, static_cast<int>(cfg.flow_steps_per_unit * sigma));

    auto value_at = [&](double s) {
        AlgebroidPath ps = gauge_flow(m, B, p, s, steps);
        AlgebroidPath up = gauge_flow(m, B, shift_path(p, u, d), s, steps);
        AlgebroidPath um = gauge_flow(m, B, shift_path(p, u, -d), s, steps);
        AlgebroidPath vp = gauge_flow(m, B, shift_path(p, v, d), s, steps);
        AlgebroidPath vm = gauge_flow(m, B, shift_path(p, v, -d), s, steps);
        PathTangent us = scaled_difference(up, um, 1.0 / (2 * d));
        PathTangent vs = scaled_difference(vp, vm, 1.0 / (2 * d));
        return omega(m, ps, us, vs);
    };
    return std::abs(value_at(sigma) - value_at(-sigma)) / (2.0 * sigma);
}

PathTangent project_to_constraint(const Model& m, const AlgebroidPath& p,
                                  const PathTangent& seed,
                                  const std::vector<GaugeGenerator>& probes) {
    const int n = p.n;
    const int modes = 4;
    const int M = n * modes;
    const int J = static_cast<int>(probes.size());

    // Vertical correction basis: e(t) = t^q along coordinate i.
    auto basis_tangent = [&](int i, int q) {
        PathTangent w = zero_tangent(p.grid, n);
        for (int k = 0; k < p.grid.num_nodes(); ++k)
            w.e[k][i] = std::pow(p.grid.node(k), q);
        return w;
    };

    Eigen::MatrixXd A(J, M);
    Eigen::VectorXd rhs(J);
    for (int j = 0; j < J; ++j) {
        rhs(j) = -momentum_derivative(m, probes[j], p, seed);
        for (int i = 0; i < n; ++i)
            for (int q = 0; q < modes; ++q)
                A(j, i * modes + q) = momentum_derivative(m, probes[j], p, basis_tangent(i, q));
    }
    Eigen::VectorXd mu =
        A.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);

    PathTangent out = seed;
    for (int i = 0; i < n; ++i)
        for (int q = 0; q < modes; ++q) {
            double c = mu(i * modes + q);
            if (c == 0.0) continue;
            for (int k = 0; k < p.grid.num_nodes(); ++k)
                out.e[k][i] += c * std::pow(p.grid.node(k), q);
        }
    return out;
}

std::pair<double, double> calibrate_c_phi(const Model& m, int num_paths, unsigned seed,
                                          const Grid& g) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-0.4, 0.4);
    const int n = m.n();
    double lo = 0.0, hi = 0.0, sum = 0.0;
    int used = 0;
    while (used < num_paths) {
        Vec x0(n);
        for (double& x : x0) x = 0.5 * unif(rng);
        std::vector<Expr> eta(n);
        for (int i = 0; i < n; ++i) {
            Expr a = Expr::constant(Rat(static_cast<long long>(1000 * unif(rng)), 1000));
            Expr b = Expr::constant(Rat(static_cast<long long>(1000 * unif(rng)), 1000));
            eta[i] = a + b * Expr::t();
        }
        AlgebroidPath p = solve_base_path(m, x0, EtaSpec::closed_form(eta), g);
        PathTangent u = zero_tangent(g, n), v = zero_tangent(g, n);
        for (int k = 0; k < g.num_nodes(); ++k) {
            double t = g.node(k);
            for (int i = 0; i < n; ++i) {
                u.xi[k][i] = std::sin((i + 1) * t + 0.3 * (used + 1));
                v.xi[k][i] = std::cos((i + 2) * t - 0.2 * (used + 1));
            }
        }
        double tr = transgression(m, p.X, u.xi, v.xi, g);
        if (std::abs(tr) < 1e-6) continue;
        double ratio = omega1(m, p, u, v) / tr;
        if (used == 0) {
            lo = hi = ratio;
        } else {
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        sum += ratio;
        ++used;
    }
    return {sum / used, hi - lo};
}

} // namespace tpw
