#pragma once
#include <functional>
#include <optional>
#include <vector>

#include "tpw/grid.hpp"
#include "tpw/tensor.hpp"

namespace tpw {

/// Discretized algebroid path: base path X and the dt-coefficient of eta,
/// both sampled at the grid nodes. `on_shell` marks solutions of the
/// anchor equation dX/dt = pi#(X) eta; off-shell pairs are first-class
/// citizens (general points of the path cotangent space).
struct AlgebroidPath {
    Grid grid;
    int n = 0;
    NodeData X;   // node -> chart coordinates
    NodeData eta; // node -> covector density
    bool on_shell = false;
    std::optional<std::vector<Expr>> eta_form; // closed form in t, when known
};

/// Tangent vector to the path space: horizontal (base) and vertical
/// (covector density) parts on the same grid as the base path.
struct PathTangent {
    Grid grid;
    int n = 0;
    NodeData xi; // horizontal
    NodeData e;  // vertical
};

PathTangent zero_tangent(const Grid& g, int n);

/// Time-dependent covector field B with B(0) = B(1) = 0, either closed
/// form in (t, x1..xn) or nodal samples (then x-independent).
class GaugeGenerator {
public:
    static GaugeGenerator closed_form(std::vector<Expr> comps, int n);
    static GaugeGenerator grid_data(NodeData values, const Grid& g);

    bool is_closed_form() const { return !comps_.empty(); }
    int n() const { return n_; }

    /// B(t)(x) as a covector.
    Vec value(const Vec& x, double t) const;

    /// B and d(B_X)/dt sampled along a path: exact t/x partials for closed
    /// forms (with centered X'), centered differences for grid data.
    struct Sampled {
        NodeData B;
        NodeData dB;
    };
    Sampled sample_along(const AlgebroidPath& p) const;

    /// B values only (used by the momentum integrand).
    NodeData values_along(const AlgebroidPath& p) const;

    /// (sum_a dB_j/dx_a xi^a)_j; zero for grid data (x-independent).
    Vec jacobian_apply(const Vec& x, double t, const Vec& xi) const;

private:
    GaugeGenerator() = default;
    std::vector<Expr> comps_;
    NodeData values_;
    Grid grid_;
    int n_ = 0;
};

/// eta input for the base-path solver: closed form in t, or nodal
/// samples interpolated linearly.
class EtaSpec {
public:
    static EtaSpec closed_form(std::vector<Expr> comps);
    static EtaSpec grid_data(NodeData values, const Grid& g);
    Vec at(double t) const;
    bool is_closed_form() const { return !comps_.empty(); }
    const std::vector<Expr>& comps() const { return comps_; }

private:
    EtaSpec() = default;
    std::vector<Expr> comps_;
    NodeData values_;
    Grid grid_;
};

struct PathConfig {
    double eps_fd = 1e-5;         // momentum finite-difference step
    double transport_step = 1e-4; // flow-map divided-difference step
    double flow_sigma = 1e-2;     // flow-time step for invariance residuals
    int flow_steps_per_unit = 100;
};

/// Max-norm of dX/dt - pi#(X) eta over the nodes.
double anchor_residual(const Model& m, const AlgebroidPath& p);

/// Integrates dX/dt = pi#(X(t)) eta(t) with classical RK4 from x0.
AlgebroidPath solve_base_path(const Model& m, const Vec& x0, const EtaSpec& eta,
                              const Grid& g);

/// H_B = integral of <B_X, X' - pi#(X) eta> (trapezoid, centered X').
double momentum(const Model& m, const GaugeGenerator& B, const AlgebroidPath& p);

/// Exact directional derivative of the discrete momentum along u.
double momentum_derivative(const Model& m, const GaugeGenerator& B, const AlgebroidPath& p,
                           const PathTangent& u);

/// Omega_0 = integral of <e1, xi2> - <e2, xi1>.
double omega0(const AlgebroidPath& p, const PathTangent& u, const PathTangent& v);

/// Twist correction to the canonical 2-form, evaluated on horizontal
/// parts: Omega_1 = -integral of phi(X)(pi#(X) eta, xi1, xi2). The
/// normalization is the one for which gauge_vector_field is exactly
/// Hamiltonian and constraint-preserving at once; the measured ratio to
/// the transgressed form is the calibration constant c_phi.
double omega1(const Model& m, const AlgebroidPath& p, const PathTangent& u,
              const PathTangent& v);

double omega(const Model& m, const AlgebroidPath& p, const PathTangent& u,
             const PathTangent& v);

/// Hamiltonian vector field of H_B with respect to Omega, equal to the
/// generator of the gauge action on on-shell paths:
///   horizontal:  (xi_B)^i = sum_j pi^{ij}(X) (B_X)_j
///   vertical:    (xi_B)_a = -d(B_X)_a/dt - f^{rs}_a(X) eta_r (B_X)_s
PathTangent gauge_vector_field(const Model& m, const GaugeGenerator& B,
                               const AlgebroidPath& p);

/// Omega(xi_B, u) - D_u H_B with a central finite difference along u.
double hamiltonian_relation_residual(const Model& m, const GaugeGenerator& B,
                                     const AlgebroidPath& p, const PathTangent& u,
                                     double eps_fd = 1e-5);

/// RK4 flow of the gauge field in flow time s; endpoints of X are preserved.
AlgebroidPath gauge_flow(const Model& m, const GaugeGenerator& B, const AlgebroidPath& p,
                         double s_total, int steps);

/// Transgressed 2-form on base paths: integral of phi(X)(X', w1, w2).
double transgression(const Model& m, const NodeData& X, const NodeData& w1,
                     const NodeData& w2, const Grid& g);

/// Three-parameter family of base paths in closed form with exact
/// parameter derivatives, for the Stokes identity check.
struct PathFamily3 {
    std::function<Vec(double a, double b, double c, double t)> X;
    std::function<Vec(double a, double b, double c, double t)> dXda;
    std::function<Vec(double a, double b, double c, double t)> dXdb;
    std::function<Vec(double a, double b, double c, double t)> dXdc;
};

/// |dPhi(da,db,dc) - phi(X(0))(...) + phi(X(1))(...)| at parameters (0,0,0),
/// dPhi by second-order central differences with the given step.
double stokes_residual(const Model& m, const PathFamily3& family, const Grid& g,
                       double fd_step = 1e-3);

/// |Omega(xi_B, u)| for a constraint tangent u.
double horizontality_residual(const Model& m, const GaugeGenerator& B,
                              const AlgebroidPath& p, const PathTangent& u);

/// |d/ds Omega(u_s, v_s)| at s=0, tangents transported by divided
/// differences of the flow map.
double invariance_residual(const Model& m, const GaugeGenerator& B, const AlgebroidPath& p,
                           const PathTangent& u, const PathTangent& v,
                           const PathConfig& cfg = {});

/// Kills D_u H_{B'} for every probe generator by adjusting the vertical
/// part of the seed tangent (least-squares over polynomial modes).
PathTangent project_to_constraint(const Model& m, const AlgebroidPath& p,
                                  const PathTangent& seed,
                                  const std::vector<GaugeGenerator>& probes);

/// Measured ratio Omega_1 / transgression over on-shell paths; the
/// calibration oracle for c_phi. Returns {mean, spread}.
std::pair<double, double> calibrate_c_phi(const Model& m, int num_paths, unsigned seed,
                                          const Grid& g);

} // namespace tpw
