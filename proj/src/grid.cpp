#include "tpw/grid.hpp"

namespace tpw {

NodeData time_derivative(const NodeData& f, const Grid& g) {
    const int N = g.N;
    const double h = g.h();
    const size_t dim = f.front().size();
    NodeData d(N + 1, Vec(dim));
    // One-sided stencils grouped as differences so constant data
    // differentiates to exactly zero.
    for (size_t i = 0; i < dim; ++i) {
        d[0][i] = (3.0 * (f[1][i] - f[0][i]) + (f[1][i] - f[2][i])) / (2.0 * h);
        d[N][i] = (3.0 * (f[N][i] - f[N - 1][i]) + (f[N - 2][i] - f[N - 1][i])) / (2.0 * h);
    }
    for (int k = 1; k < N; ++k)
        for (size_t i = 0; i < dim; ++i)
            d[k][i] = (f[k + 1][i] - f[k - 1][i]) / (2.0 * h);
    return d;
}

double trapezoid(const std::vector<double>& f, const Grid& g) {
    double acc = 0.5 * (f.front() + f.back());
    for (int k = 1; k < g.N; ++k) acc += f[k];
    return acc * g.h();
}

} // namespace tpw
