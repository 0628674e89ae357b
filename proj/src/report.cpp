#include "tpw/report.hpp"

#include <json.hpp>

namespace tpw {

bool Report::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string Report::to_json() const {
    nlohmann::ordered_json j;
    j["schema"] = "tpw-report/1";
    j["model"] = model_id;
    j["seed"] = seed;
    j["grid"] = grid;
    j["calibration"] = {{"c_jac", calibration.c_jac.str()},
                        {"c_phi", calibration.c_phi.str()},
                        {"s_inv", calibration.s_inv},
                        {"delta2_sign", calibration.delta2_sign}};
    nlohmann::ordered_json cj = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json one;
        one["name"] = c.name;
        one["residual"] = c.residual;
        one["tolerance"] = c.tolerance;
        one["pass"] = c.pass;
        if (!c.note.empty()) one["note"] = c.note;
        cj.push_back(std::move(one));
    }
    j["checks"] = std::move(cj);
    j["all_pass"] = all_pass();
    j["timing_ms"] = timing_ms;
    return j.dump(2);
}

} // namespace tpw
