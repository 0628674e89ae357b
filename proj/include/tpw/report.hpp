#pragma once
#include <string>
#include <vector>

#include "tpw/tensor.hpp"

namespace tpw {

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note; // optional
};

/// Machine-readable verification report, schema "tpw-report/1".
/// Deterministic for fixed (model, seed, grid) except the timing field.
struct Report {
    std::string model_id;
    unsigned seed = 0;
    int grid = 0;
    CalibrationConstants calibration;
    std::vector<CheckResult> checks;
    double timing_ms = 0.0;

    bool all_pass() const;
    std::string to_json() const;
};

} // namespace tpw
