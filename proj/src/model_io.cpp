#include "tpw/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tpw/errors.hpp"
#include "tpw/tensorcalc.hpp"

namespace tpw {

namespace {

Rat parse_rat(const std::string& s, int line) {
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rat(BigInt(s));
        return Rat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw parse_error("malformed rational '" + s + "'", line, 1);
    }
}

} // namespace

ModelFile parse_model_text(const std::string& text, const std::string& id) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int dim = 0;
    std::optional<Bivector> pi;
    std::optional<KForm> phi;
    std::vector<Vec> points;
    CalibrationConstants calib = default_calibration();

    auto need_dim = [&](const char* what) {
        if (dim == 0)
            throw parse_error(std::string(what) + " before 'dim'", lineno, 1);
    };

    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;

        if (kw == "dim") {
            if (!(ls >> dim) || dim < 1)
                throw parse_error("malformed 'dim' line", lineno, 1);
            pi = Bivector(dim);
            phi = KForm(dim, 3);
        } else if (kw == "pi") {
            need_dim("'pi'");
            int i, j;
            std::string colon;
            if (!(ls >> i >> j >> colon) || colon != ":")
                throw parse_error("malformed 'pi' line (want: pi i j : expr)", lineno, 1);
            if (i < 1 || j > dim || i >= j)
                throw parse_error("pi indices must satisfy 1 <= i < j <= dim", lineno, 1);
            std::string expr_text;
            std::getline(ls, expr_text);
            pi->set(i, j, parse_expr(expr_text, dim));
        } else if (kw == "phi") {
            need_dim("'phi'");
            int i, j, k;
            std::string colon;
            if (!(ls >> i >> j >> k >> colon) || colon != ":")
                throw parse_error("malformed 'phi' line (want: phi i j k : expr)", lineno, 1);
            if (i < 1 || k > dim || i >= j || j >= k)
                throw parse_error("phi indices must satisfy 1 <= i < j < k <= dim", lineno, 1);
            std::string expr_text;
            std::getline(ls, expr_text);
            phi->add_term({i, j, k}, parse_expr(expr_text, dim));
        } else if (kw == "point") {
            need_dim("'point'");
            Vec p;
            double v;
            while (ls >> v) p.push_back(v);
            if (static_cast<int>(p.size()) != dim)
                throw parse_error("point needs exactly dim coordinates", lineno, 1);
            points.push_back(std::move(p));
        } else if (kw == "calib") {
            std::string name, value;
            if (!(ls >> name >> value))
                throw parse_error("malformed 'calib' line", lineno, 1);
            if (name == "c_jac") calib.c_jac = parse_rat(value, lineno);
            else if (name == "c_phi") calib.c_phi = parse_rat(value, lineno);
            else if (name == "s_inv") calib.s_inv = static_cast<int>(parse_rat(value, lineno));
            else if (name == "delta2_sign")
                calib.delta2_sign = static_cast<int>(parse_rat(value, lineno));
            else throw parse_error("unknown calibration constant '" + name + "'", lineno, 1);
        } else {
            throw parse_error("unknown directive '" + kw + "'", lineno, 1);
        }
    }
    if (dim == 0) throw parse_error("missing 'dim' line", lineno, 1);
    return ModelFile{id, Model(dim, *pi, *phi, calib), std::move(points)};
}

ModelFile load_model_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open model file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    std::string id = path;
    auto slash = id.find_last_of('/');
    if (slash != std::string::npos) id.erase(0, slash + 1);
    auto dot = id.find_last_of('.');
    if (dot != std::string::npos) id.erase(dot);
    return parse_model_text(ss.str(), id);
}

namespace {

nlohmann::ordered_json node_data_json(const NodeData& d) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const Vec& row : d) a.push_back(row);
    return a;
}

NodeData node_data_from_json(const nlohmann::json& a, int n, int nodes, const char* what) {
    if (!a.is_array() || static_cast<int>(a.size()) != nodes)
        throw std::runtime_error(std::string("bad node array '") + what + "'");
    NodeData d;
    d.reserve(a.size());
    for (const auto& row : a) {
        Vec r = row.get<Vec>();
        if (static_cast<int>(r.size()) != n)
            throw std::runtime_error(std::string("bad row width in '") + what + "'");
        d.push_back(std::move(r));
    }
    return d;
}

std::string read_file(const std::string& file) {
    std::ifstream f(file);
    if (!f) throw std::runtime_error("cannot open '" + file + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

std::string path_to_json(const AlgebroidPath& p) {
    nlohmann::ordered_json j;
    j["grid"] = p.grid.N;
    j["X"] = node_data_json(p.X);
    j["eta"] = node_data_json(p.eta);
    return j.dump(2);
}

AlgebroidPath path_from_json(const std::string& text, int n) {
    auto j = nlohmann::json::parse(text);
    AlgebroidPath p;
    p.grid = Grid(j.at("grid").get<int>());
    p.n = n;
    p.X = node_data_from_json(j.at("X"), n, p.grid.num_nodes(), "X");
    p.eta = node_data_from_json(j.at("eta"), n, p.grid.num_nodes(), "eta");
    return p;
}

AlgebroidPath load_path_file(const std::string& file, int n) {
    return path_from_json(read_file(file), n);
}

std::string tangent_to_json(const PathTangent& u) {
    nlohmann::ordered_json j;
    j["grid"] = u.grid.N;
    j["xi"] = node_data_json(u.xi);
    j["e"] = node_data_json(u.e);
    return j.dump(2);
}

PathTangent tangent_from_json(const std::string& text, int n) {
    auto j = nlohmann::json::parse(text);
    PathTangent u;
    u.grid = Grid(j.at("grid").get<int>());
    u.n = n;
    u.xi = node_data_from_json(j.at("xi"), n, u.grid.num_nodes(), "xi");
    u.e = node_data_from_json(j.at("e"), n, u.grid.num_nodes(), "e");
    return u;
}

PathTangent load_tangent_file(const std::string& file, int n) {
    return tangent_from_json(read_file(file), n);
}

std::string rep_to_json(const GroupoidElementRep& rep) {
    nlohmann::ordered_json j;
    j["grid"] = rep.path.grid.N;
    j["X"] = node_data_json(rep.path.X);
    j["eta"] = node_data_json(rep.path.eta);
    j["alpha"] = rep.alpha;
    j["beta"] = rep.beta;
    return j.dump(2);
}

} // namespace tpw
