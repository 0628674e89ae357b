#pragma once
#include <map>
#include <utility>
#include <vector>

#include "tpw/tensor.hpp"

namespace tpw {

/// Anchor map: (pi# sigma)^j = sum_i pi^{ij} sigma_i.
VectorField sharp(const Bivector& pi, const KForm& sigma);

/// {f, g} = sum pi^{ij} d_i f d_j g.
Expr poisson_bracket_fn(const Model& m, const Expr& f, const Expr& g);

/// X_f = pi# df.
VectorField hamiltonian_vf(const Model& m, const Expr& f);

/// Commutator of vector fields, [X, Y]^j = X^a d_a Y^j - Y^a d_a X^j.
VectorField vf_commutator(const VectorField& X, const VectorField& Y, int n);

/// phi(X, Y, .) as a 1-form.
KForm phi_insert2(const Model& m, const VectorField& X, const VectorField& Y);

/// Twisted bracket of 1-forms:
/// L_{pi#s} tau - L_{pi#t} sigma - d pi(s,t) + phi(pi#s, pi#t, .).
KForm twisted_bracket(const Model& m, const KForm& sigma, const KForm& tau);

struct StructureFunctions {
    int n = 0;
    // f[{i,j}][k-1] with i<j; antisymmetric in (i,j) via accessor.
    std::map<std::pair<int, int>, std::vector<Expr>> f;
    Expr get(int i, int j, int k) const;
};

/// f^{ij}_k = d_k pi^{ij} + sum pi^{mi} pi^{nj} phi_{mnk}.
StructureFunctions structure_functions(const Model& m);

/// [dx^i, dx^j] - sum_k f^{ij}_k dx^k for all i<j; identically zero for
/// any model. This is the convention anchor for the whole module.
std::vector<KForm> bracket_consistency_residual(const Model& m);

/// J^{ijk} - c_jac * Phi3^{ijk} with
///   J^{ijk}    = sum_l pi^{il} d_l pi^{jk} + cyclic,
///   Phi3^{ijk} = sum pi^{li} pi^{mj} pi^{nk} phi_{lmn}.
TriVector twisted_jacobi_residual(const Model& m);

/// [[s,t],r] + [[t,r],s] + [[r,s],t].
KForm jacobiator(const Model& m, const KForm& s, const KForm& t, const KForm& r);

/// Deformed differential: delta f = df, delta sigma = d sigma - i_{pi#s} phi,
/// extended to higher degrees as a graded derivation over the wedge.
KForm delta(const Model& m, const KForm& a);

/// The bracket extended to all forms as a biderivation (degree -1 graded
/// Lie bracket; base cases [f,g]=0, [s,g]=(pi#s)g, [s,t]=twisted bracket).
KForm extended_bracket(const Model& m, const KForm& a, const KForm& b);

/// r1 = delta[s,t] - [delta s, t] - [s, delta t]
/// r2 = delta(delta s) - delta2_sign * [phi, s]
/// Requires the model to satisfy the twisted Jacobi identity.
std::pair<KForm, KForm> delta_identities_residuals(const Model& m, const KForm& sigma,
                                                   const KForm& tau);

/// [df,dg] - d{f,g} - phi(X_f, X_g, .); zero for every model.
KForm eq3_residual(const Model& m, const Expr& f, const Expr& g);

/// [X_f,X_g] - X_{f,g} - pi#(phi(X_f,X_g,.)); zero iff twisted Poisson.
VectorField eq4_residual(const Model& m, const Expr& f, const Expr& g);

/// Runs the symbolic calibration oracles on the built-in nondegenerate
/// fixture and returns the pinned constants (c_phi keeps its default; the
/// numeric transgression oracle lives in pathspace).
CalibrationConstants calibrate_symbolic();

/// Lazily calibrated constants shared by default-constructed models.
const CalibrationConstants& default_calibration();

} // namespace tpw
