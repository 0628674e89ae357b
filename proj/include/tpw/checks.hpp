#pragma once
#include <optional>
#include <string>
#include <vector>

#include "tpw/grid.hpp"
#include "tpw/report.hpp"
#include "tpw/tensor.hpp"

namespace tpw {

struct SuiteOptions {
    int grid = 200;
    unsigned seed = 12345;
    bool symbolic = true;  // exact-fragment models: symbolic zero tests
    int sample_points = 20; // numeric fallback sampling
};

/// Algebraic verification block: d(phi)=0, twisted Jacobi, bracket
/// consistency, the function-level bracket identities and the delta suite.
std::vector<CheckResult> verify_checks(const Model& m, bool symbolic, int sample_points,
                                       unsigned seed,
                                       const std::vector<Vec>& points = {});

/// Full per-model suite: verify_checks plus the path-space and groupoid
/// checks at the given grid resolution.
std::vector<CheckResult> model_suite(const Model& m, const SuiteOptions& opt);

struct ConvergenceRow {
    int N;
    double error;
};
struct ConvergenceStudy {
    std::string check;
    std::vector<ConvergenceRow> rows;
    double order; // least-squares slope in log error vs log N
};

/// Grid-refinement study for "solve_base_path", "momentum" or "omega1".
ConvergenceStudy convergence_study(const Model& m, const std::string& check,
                                   const std::vector<int>& grids, unsigned seed);

} // namespace tpw
