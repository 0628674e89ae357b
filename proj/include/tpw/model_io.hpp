#pragma once
#include <optional>
#include <string>
#include <vector>

#include "tpw/groupoid.hpp"
#include "tpw/pathspace.hpp"
#include "tpw/tensor.hpp"

namespace tpw {

/// Parsed model file: the model plus optional evaluation points.
struct ModelFile {
    std::string id;
    Model model;
    std::vector<Vec> points;
};

/// Line-based model format:
///   dim <n>
///   pi <i> <j> : <expr>        (i < j)
///   phi <i> <j> <k> : <expr>   (i < j < k)
///   point <v1> ... <vn>
///   calib <name> <rational>    (optional overrides)
///   # comment
ModelFile parse_model_text(const std::string& text, const std::string& id);
ModelFile load_model_file(const std::string& path);

std::string path_to_json(const AlgebroidPath& p);
AlgebroidPath path_from_json(const std::string& text, int n);
AlgebroidPath load_path_file(const std::string& file, int n);

std::string tangent_to_json(const PathTangent& u);
PathTangent tangent_from_json(const std::string& text, int n);
PathTangent load_tangent_file(const std::string& file, int n);

std::string rep_to_json(const GroupoidElementRep& rep);

} // namespace tpw
