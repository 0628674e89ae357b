#pragma once
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tpw/dual.hpp"
#include "tpw/polynomial.hpp"
#include "tpw/rational.hpp"

namespace tpw {

enum class ExprKind { constant, variable, add, sub, mul, div, pow, func };
enum class Func { sin, cos, exp };

struct ExprNode;
using ExprNodePtr = std::shared_ptr<const ExprNode>;

/// Immutable scalar expression over rational constants, t (index 0) and
/// x1..xn (index i), with +,-,*,/, integer powers and sin/cos/exp.
/// Construction folds constants and drops neutral elements; exact
/// equality goes through the rational normal form.
class Expr {
public:
    Expr(); // zero

    static Expr constant(const Rat& c);
    static Expr integer(long long v) { return constant(Rat(v)); }
    static Expr x(int i);     // x_i, i >= 1
    static Expr t();          // time variable
    static Expr var(int idx); // 0 = t, i = x_i

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    Expr pow(int k) const;

    static Expr sin(const Expr& a);
    static Expr cos(const Expr& a);
    static Expr exp(const Expr& a);

    /// Exact partial derivative; var 0 = t, i = x_i.
    Expr derivative(int var) const;

    double eval(std::span<const double> x, double t = 0.0) const;

    /// Forward-mode evaluation: value and derivative along `dir` (x-slots),
    /// with optional t-velocity.
    Dual eval_dual(std::span<const double> x, std::span<const double> dir,
                   double t = 0.0, double tdot = 0.0) const;

    bool is_exact_fragment() const; // no sin/cos/exp
    int  max_var_index() const;     // 0 if only t/constants
    bool depends_on(int var) const;

    /// true iff the node is literally the constant 0 (cheap check).
    bool is_zero_node() const;
    bool is_constant() const;
    Rat  constant_value() const;

    /// Canonical rational normal form over variables {t, x1..xn}.
    /// Throws not_exact_error if sin/cos/exp are present.
    RatFunc normal_form(int n) const;

    /// Replace t by the given expression.
    Expr substitute_t(const Expr& g) const;

    std::string str() const;

    const ExprNode& node() const { return *node_; }

private:
    explicit Expr(ExprNodePtr n) : node_(std::move(n)) {}
    ExprNodePtr node_;
};

/// a - b normalizes to zero exactly. Throws not_exact_error outside the
/// polynomial/rational fragment.
bool normal_form_equal(const Expr& a, const Expr& b, int n);
bool is_normal_zero(const Expr& a, int n);

/// Parse per the expression grammar; variables restricted to x1..xn.
Expr parse_expr(const std::string& text, int n);

} // namespace tpw
