#pragma once
#include <stdexcept>
#include <string>

namespace tpw {

// Syntax error with source location (1-based line/column).
struct parse_error : std::runtime_error {
    int line, col;
    parse_error(const std::string& msg, int line_, int col_)
        : std::runtime_error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
          line(line_), col(col_) {}
};

// Evaluation hit a pole / division by zero.
struct eval_domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact (polynomial/rational) operation requested on an expression
// containing sin/cos/exp.
struct not_exact_error : std::runtime_error {
    not_exact_error() : std::runtime_error("not in exact fragment") {}
    explicit not_exact_error(const std::string& msg) : std::runtime_error(msg) {}
};

// ODE solution left the chart (pole or norm overflow).
struct divergence_error : std::runtime_error {
    int node;
    divergence_error(const std::string& msg, int node_)
        : std::runtime_error(msg + " at node " + std::to_string(node_)), node(node_) {}
};

} // namespace tpw
