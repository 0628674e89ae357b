#pragma once
#include <stdexcept>
#include <vector>

namespace tpw {

using Vec = std::vector<double>;
using NodeData = std::vector<Vec>; // one Vec per grid node

/// Uniform grid on [0,1] with N intervals, nodes t_k = k/N.
struct Grid {
    int N = 0;

    Grid() = default;
    explicit Grid(int intervals) : N(intervals) {
        if (N < 2) throw std::invalid_argument("grid needs at least 2 intervals");
    }

    int    num_nodes() const { return N + 1; }
    double h() const { return 1.0 / N; }
    double node(int k) const { return static_cast<double>(k) / N; }

    bool operator==(const Grid& o) const { return N == o.N; }
};

/// d/dt of nodal data: centered differences inside, second-order
/// one-sided stencils at the endpoints.
NodeData time_derivative(const NodeData& f, const Grid& g);

/// Composite trapezoid rule over [0,1].
double trapezoid(const std::vector<double>& f, const Grid& g);

} // namespace tpw
