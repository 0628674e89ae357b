#pragma once
#include <string>
#include <utility>
#include <vector>

#include "tpw/pathspace.hpp"

namespace tpw {

/// A representative of a gauge class: an on-shell path with its
/// endpoints (alpha = X(0), beta = X(1); the operational convention).
struct GroupoidElementRep {
    AlgebroidPath path;
    Vec alpha; // value at t = 0
    Vec beta;  // value at t = 1
};

using Mat = std::vector<Vec>;

/// Discrete stand-in for the base pairing at a point: gamma from Omega on
/// unit fiber lifts, lambda from Omega_0 against horizontal constants.
struct BasePairing {
    Mat gamma;  // antisymmetric n x n
    Mat lambda; // ~ identity when omega is nondegenerate at the identity
};

GroupoidElementRep identity_element(const Model& m, const Vec& m_point, const Grid& g);

/// Time reversal: X(1-t), -eta(1-t); swaps endpoints; involution on the nose.
GroupoidElementRep invert(const GroupoidElementRep& g);

/// Joins base paths on [0,split] u [split,1] after the boundary-flattening
/// reparametrization tau(t) = t - sin(2 pi t)/(2 pi); eta rescales as a
/// dt-density. Endpoint mismatch above tol_glue is an error.
GroupoidElementRep concatenate(const GroupoidElementRep& g, const GroupoidElementRep& h,
                               double split = 0.5, double tol_glue = 1e-8);

/// Tangent transported the same way concatenate joins paths.
PathTangent join_tangents(const PathTangent& ug, const PathTangent& uh, const Grid& out_grid,
                          double split = 0.5);

/// Pushforward of a tangent under inversion.
PathTangent invert_pushforward(const PathTangent& u);

/// Tangent at the identity over a fiber direction xi (a covector):
/// horizontal t -> t * pi^{ij} xi_j, vertical constant xi.
PathTangent unit_fiber_lift(const Model& m, const Vec& m_point, const Vec& xi, const Grid& g);

/// gamma[i][j] = Omega(lift e_i, lift e_j), lambda[i][j] = Omega_0(lift e_i, horiz e_j)
/// at the identity element of m_point.
BasePairing base_pairing(const Model& m, const Vec& m_point, const Grid& g);

/// |Omega_{g.h}(join u, join v) - Omega_g(u_g,v_g) - Omega_h(u_h,v_h)|.
double multiplicativity_residual(const Model& m, const GroupoidElementRep& g,
                                 const GroupoidElementRep& h, const PathTangent& ug,
                                 const PathTangent& vg, const PathTangent& uh,
                                 const PathTangent& vh, double split = 0.5);

/// Named residuals for the identity-section identities of the 2-form:
/// unit pullback, inversion antisymmetry, right/left orthogonality and
/// the sign relation on fiber lifts.
std::vector<std::pair<std::string, double>> prop22_checks(const Model& m, const Vec& m_point,
                                                          const Grid& g);

/// Smallest singular value of the Gram matrix of Omega on
/// {unit fiber lifts} u {horizontal constants} at the identity.
double nondegeneracy_at_identity(const Model& m, const Vec& m_point, const Grid& g);

} // namespace tpw
