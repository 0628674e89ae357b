#include "tpw/groupoid.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tpw {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double tau(double t) { return t - std::sin(two_pi * t) / two_pi; }
double tau_prime(double t) { return 1.0 - std::cos(two_pi * t); }

// Cubic Lagrange interpolation of nodal data at u in [0,1].
Vec interp_cubic(const NodeData& f, const Grid& g, double u) {
    const int N = g.N;
    double s = u * N;
    int base = static_cast<int>(std::floor(s)) - 1;
    base = std::max(0, std::min(base, N - 3));
    double w[4];
    for (int a = 0; a < 4; ++a) {
        double num = 1.0, den = 1.0;
        for (int b = 0; b < 4; ++b) {
            if (a == b) continue;
            num *= s - (base + b);
            den *= static_cast<double>(a - b);
        }
        w[a] = num / den;
    }
    Vec out(f.front().size(), 0.0);
    for (int a = 0; a < 4; ++a)
        for (size_t i = 0; i < out.size(); ++i) out[i] += w[a] * f[base + a][i];
    return out;
}

Vec scaled(Vec v, double c) {
    for (double& x : v) x *= c;
    return v;
}

} // namespace

GroupoidElementRep identity_element(const Model& m, const Vec& m_point, const Grid& g) {
    GroupoidElementRep rep;
    rep.path.grid = g;
    rep.path.n = m.n();
    rep.path.X.assign(g.num_nodes(), m_point);
    rep.path.eta.assign(g.num_nodes(), Vec(m.n(), 0.0));
    rep.path.on_shell = true;
    rep.alpha = m_point;
    rep.beta = m_point;
    return rep;
}

GroupoidElementRep invert(const GroupoidElementRep& g) {
    const int N = g.path.grid.N;
    GroupoidElementRep out;
    out.path.grid = g.path.grid;
    out.path.n = g.path.n;
    out.path.X.resize(N + 1);
    out.path.eta.resize(N + 1);
    for (int k = 0; k <= N; ++k) {
        out.path.X[k] = g.path.X[N - k];
        out.path.eta[k] = scaled(g.path.eta[N - k], -1.0);
    }
    out.path.on_shell = g.path.on_shell;
    if (g.path.eta_form) {
        // -eta(1-t) in closed form
        std::vector<Expr> flipped;
        Expr one_minus_t = Expr::integer(1) - Expr::t();
        for (const Expr& e : *g.path.eta_form) flipped.push_back(-e.substitute_t(one_minus_t));
        out.path.eta_form = std::move(flipped);
    }
    out.alpha = g.beta;
    out.beta = g.alpha;
    return out;
}

PathTangent invert_pushforward(const PathTangent& u) {
    const int N = u.grid.N;
    PathTangent out = zero_tangent(u.grid, u.n);
    for (int k = 0; k <= N; ++k) {
        out.xi[k] = u.xi[N - k];
        out.e[k] = scaled(u.e[N - k], -1.0);
    }
    return out;
}

namespace {

// Shared sampling for concatenate/join_tangents: picks the (side, local
// parameter) decomposition of an output node.
struct JoinPoint {
    bool first;
    double s; // reparametrized local time tau(local)
    double density; // tau'(local) / segment length
};

JoinPoint join_point(double t, double split) {
    JoinPoint jp;
    if (t < split) {
        double local = t / split;
        jp = {true, tau(local), tau_prime(local) / split};
    } else {
        double local = (t - split) / (1.0 - split);
        jp = {false, tau(local), tau_prime(local) / (1.0 - split)};
    }
    return jp;
}

} // namespace

GroupoidElementRep concatenate(const GroupoidElementRep& g, const GroupoidElementRep& h,
                               double split, double tol_glue) {
    if (!(g.path.grid == h.path.grid))
        throw std::invalid_argument("concatenate: grid mismatch");
    const int n = g.path.n;
    for (int i = 0; i < n; ++i)
        if (std::abs(g.beta[i] - h.alpha[i]) > tol_glue)
            throw std::invalid_argument("concatenate: endpoint mismatch exceeds tol_glue");

    const Grid& grid = g.path.grid;
    GroupoidElementRep out;
    out.path.grid = grid;
    out.path.n = n;
    out.path.X.resize(grid.num_nodes());
    out.path.eta.resize(grid.num_nodes());
    for (int k = 0; k <= grid.N; ++k) {
        double t = grid.node(k);
        JoinPoint jp = join_point(t, split);
        const AlgebroidPath& src = jp.first ? g.path : h.path;
        out.path.X[k] = interp_cubic(src.X, grid, jp.s);
        out.path.eta[k] = scaled(interp_cubic(src.eta, grid, jp.s), jp.density);
    }
    out.path.on_shell = g.path.on_shell && h.path.on_shell;
    out.alpha = g.alpha;
    out.beta = h.beta;
    // Pin the exact endpoints (tau(0)=0, tau(1)=1 hit nodes exactly).
    out.path.X.front() = g.path.X.front();
    out.path.X.back() = h.path.X.back();
    return out;
}

PathTangent join_tangents(const PathTangent& ug, const PathTangent& uh, const Grid& out_grid,
                          double split) {
    PathTangent out = zero_tangent(out_grid, ug.n);
    for (int k = 0; k <= out_grid.N; ++k) {
        double t = out_grid.node(k);
        JoinPoint jp = join_point(t, split);
        const PathTangent& src = jp.first ? ug : uh;
        out.xi[k] = interp_cubic(src.xi, src.grid, jp.s);
        out.e[k] = scaled(interp_cubic(src.e, src.grid, jp.s), jp.density);
    }
    return out;
}

PathTangent unit_fiber_lift(const Model& m, const Vec& m_point, const Vec& xi, const Grid& g) {
    const int n = m.n();
    PathTangent out = zero_tangent(g, n);
    // h^i = sum_j pi^{ij}(m) xi_j, constant in t up to the factor t.
    Vec h(n, 0.0);
    for (auto& [ij, e] : m.pi().stored()) {
        double p = e.eval(m_point);
        h[ij.first - 1] += p * xi[ij.second - 1];
        h[ij.second - 1] -= p * xi[ij.first - 1];
    }
    for (int k = 0; k <= g.N; ++k) {
        double t = g.node(k);
        for (int i = 0; i < n; ++i) {
            out.xi[k][i] = t * h[i];
            out.e[k][i] = xi[i];
        }
    }
    return out;
}

namespace {

PathTangent horizontal_constant(const Grid& g, int n, int j) {
    PathTangent u = zero_tangent(g, n);
    for (int k = 0; k <= g.N; ++k) u.xi[k][j] = 1.0;
    return u;
}

Vec unit_covector(int n, int i) {
    Vec v(n, 0.0);
    v[i] = 1.0;
    return v;
}

} // namespace

BasePairing base_pairing(const Model& m, const Vec& m_point, const Grid& g) {
    const int n = m.n();
    GroupoidElementRep id = identity_element(m, m_point, g);
    std::vector<PathTangent> lifts;
    for (int i = 0; i < n; ++i)
        lifts.push_back(unit_fiber_lift(m, m_point, unit_covector(n, i), g));
    BasePairing bp;
    bp.gamma.assign(n, Vec(n, 0.0));
    bp.lambda.assign(n, Vec(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            bp.gamma[i][j] = omega(m, id.path, lifts[i], lifts[j]);
            bp.lambda[i][j] = omega0(id.path, lifts[i], horizontal_constant(g, n, j));
        }
    }
    return bp;
}

double multiplicativity_residual(const Model& m, const GroupoidElementRep& g,
                                 const GroupoidElementRep& h, const PathTangent& ug,
                                 const PathTangent& vg, const PathTangent& uh,
                                 const PathTangent& vh, double split) {
    GroupoidElementRep gh = concatenate(g, h, split);
    PathTangent u = join_tangents(ug, uh, gh.path.grid, split);
    PathTangent v = join_tangents(vg, vh, gh.path.grid, split);
    double total = omega(m, gh.path, u, v);
    double parts = omega(m, g.path, ug, vg) + omega(m, h.path, uh, vh);
    return std::abs(total - parts);
}

std::vector<std::pair<std::string, double>> prop22_checks(const Model& m, const Vec& m_point,
                                                          const Grid& g) {
    const int n = m.n();
    GroupoidElementRep id = identity_element(m, m_point, g);
    std::vector<PathTangent> lifts, horiz;
    for (int i = 0; i < n; ++i) {
        lifts.push_back(unit_fiber_lift(m, m_point, unit_covector(n, i), g));
        horiz.push_back(horizontal_constant(g, n, i));
    }

    double eps_pullback = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            eps_pullback = std::max(eps_pullback, std::abs(omega(m, id.path, horiz[i], horiz[j])));

    // i*omega = -omega on a mixed basis at the identity (fixed by inversion).
    double inv_antisym = 0.0;
    std::vector<PathTangent> basis = lifts;
    basis.insert(basis.end(), horiz.begin(), horiz.end());
    for (const auto& u : basis) {
        for (const auto& v : basis) {
            double w = omega(m, id.path, u, v);
            double wi = omega(m, id.path, invert_pushforward(u), invert_pushforward(v));
            inv_antisym = std::max(inv_antisym, std::abs(wi + w));
        }
    }

    double orthogonality = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            orthogonality = std::max(
                orthogonality,
                std::abs(omega(m, id.path, lifts[i], invert_pushforward(lifts[j]))));

    double sign_relation = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double right = omega(m, id.path, lifts[i], lifts[j]);
            double left = omega(m, id.path, invert_pushforward(lifts[i]),
                                invert_pushforward(lifts[j]));
            sign_relation = std::max(sign_relation, std::abs(left + right));
        }

    return {{"unit_pullback", eps_pullback},
            {"inversion_antisymmetry", inv_antisym},
            {"right_left_orthogonality", orthogonality},
            {"fiber_sign_relation", sign_relation}};
}

double nondegeneracy_at_identity(const Model& m, const Vec& m_point, const Grid& g) {
    const int n = m.n();
    GroupoidElementRep id = identity_element(m, m_point, g);
    std::vector<PathTangent> basis;
    for (int i = 0; i < n; ++i)
        basis.push_back(unit_fiber_lift(m, m_point, unit_covector(n, i), g));
    for (int i = 0; i < n; ++i) basis.push_back(horizontal_constant(g, n, i));

    Eigen::MatrixXd gram(2 * n, 2 * n);
    for (int a = 0; a < 2 * n; ++a)
        for (int b = 0; b < 2 * n; ++b)
            gram(a, b) = omega(m, id.path, basis[a], basis[b]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
    return svd.singularValues().minCoeff();
}

} // namespace tpw
