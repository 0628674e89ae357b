#pragma once
#include <random>

#include "tpw/pathspace.hpp"
#include "tpw/tensor.hpp"

namespace tpw {

using Rng = std::mt19937_64;

/// Random polynomial with small integer coefficients, degree <= max_degree.
Expr random_polynomial(Rng& rng, int n, int max_degree);

/// 1-form with random polynomial components of degree <= max_degree.
KForm random_one_form(Rng& rng, int n, int max_degree);

/// Sample point in [-box, box]^n, at least 0.05 away from every stored
/// denominator zero of the model (rejection).
Vec random_point(const Model& m, Rng& rng, double box = 0.9);

/// Coefficients of the cubic-boundary gauge family
///   t^3(1-t)^3, t^4(1-t)^3, t^3(1-t)^4
/// (B and B'' vanish at both endpoints); samples onto any grid.
struct GaugeFamily {
    Vec c, d, e;
    GaugeGenerator sample(const Grid& g) const;
};
GaugeFamily random_gauge_family(Rng& rng, int n, double amp);

/// One draw of the family already sampled at the nodes.
GaugeGenerator random_gauge_generator(Rng& rng, const Grid& g, int n, double amp);

/// Closed-form eta with low-degree polynomial components in t.
EtaSpec random_eta(Rng& rng, int n, double amp);

/// Rough nodal tangent with entries in [-amp, amp].
PathTangent random_tangent(Rng& rng, const Grid& g, int n, double amp);

/// On-shell path from a random start point and random closed-form eta.
AlgebroidPath random_on_shell_path(const Model& m, Rng& rng, const Grid& g,
                                   double x0_box = 0.2, double eta_amp = 0.3);

} // namespace tpw
