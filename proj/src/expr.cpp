#include "tpw/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "tpw/errors.hpp"

namespace tpw {

struct ExprNode {
    ExprKind kind;
    Rat value;       // constant
    int var = -1;    // variable
    int exponent = 0;
    Func fn = Func::sin;
    ExprNodePtr a, b;
};

namespace {

ExprNodePtr make_const(const Rat& c) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::constant;
    n->value = c;
    return n;
}

bool is_const(const ExprNodePtr& n, const Rat& c) {
    return n->kind == ExprKind::constant && n->value == c;
}

} // namespace

Expr::Expr() : node_(make_const(Rat(0))) {}

Expr Expr::constant(const Rat& c) { return Expr(make_const(c)); }

Expr Expr::var(int idx) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::variable;
    n->var = idx;
    return Expr(std::move(n));
}

Expr Expr::x(int i) { return var(i); }
Expr Expr::t() { return var(0); }

Expr operator+(const Expr& a, const Expr& b) {
    if (a.node_->kind == ExprKind::constant && b.node_->kind == ExprKind::constant)
        return Expr::constant(a.node_->value + b.node_->value);
    if (is_const(a.node_, 0)) return b;
    if (is_const(b.node_, 0)) return a;
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::add;
    n->a = a.node_;
    n->b = b.node_;
    return Expr(std::move(n));
}

Expr operator-(const Expr& a, const Expr& b) {
    if (a.node_->kind == ExprKind::constant && b.node_->kind == ExprKind::constant)
        return Expr::constant(a.node_->value - b.node_->value);
    if (is_const(b.node_, 0)) return a;
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::sub;
    n->a = a.node_;
    n->b = b.node_;
    return Expr(std::move(n));
}

Expr operator-(const Expr& a) { return Expr::constant(Rat(0)) - a; }

Expr operator*(const Expr& a, const Expr& b) {
    if (a.node_->kind == ExprKind::constant && b.node_->kind == ExprKind::constant)
        return Expr::constant(a.node_->value * b.node_->value);
    if (is_const(a.node_, 0) || is_const(b.node_, 0)) return Expr();
    if (is_const(a.node_, 1)) return b;
    if (is_const(b.node_, 1)) return a;
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::mul;
    n->a = a.node_;
    n->b = b.node_;
    return Expr(std::move(n));
}

Expr operator/(const Expr& a, const Expr& b) {
    if (b.node_->kind == ExprKind::constant) {
        if (b.node_->value == 0) throw eval_domain_error("division by zero constant");
        if (a.node_->kind == ExprKind::constant)
            return Expr::constant(a.node_->value / b.node_->value);
        if (b.node_->value == 1) return a;
    }
    if (is_const(a.node_, 0)) return Expr();
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::div;
    n->a = a.node_;
    n->b = b.node_;
    return Expr(std::move(n));
}

Expr Expr::pow(int k) const {
    if (k == 0) return constant(Rat(1));
    if (k == 1) return *this;
    if (node_->kind == ExprKind::constant) {
        Rat r = 1;
        Rat base = node_->value;
        bool inv = k < 0;
        if (inv && base == 0) throw eval_domain_error("zero to negative power");
        unsigned e = inv ? static_cast<unsigned>(-static_cast<long long>(k)) : static_cast<unsigned>(k);
        for (unsigned i = 0; i < e; ++i) r *= base;
        return constant(inv ? Rat(1) / r : r);
    }
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::pow;
    n->exponent = k;
    n->a = node_;
    return Expr(std::move(n));
}

Expr Expr::sin(const Expr& a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::func; n->fn = Func::sin; n->a = a.node_;
    return Expr(std::move(n));
}
Expr Expr::cos(const Expr& a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::func; n->fn = Func::cos; n->a = a.node_;
    return Expr(std::move(n));
}
Expr Expr::exp(const Expr& a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::func; n->fn = Func::exp; n->a = a.node_;
    return Expr(std::move(n));
}

Expr Expr::derivative(int var) const {
    const ExprNode& n = *node_;
    switch (n.kind) {
        case ExprKind::constant: return Expr();
        case ExprKind::variable: return n.var == var ? constant(Rat(1)) : Expr();
        case ExprKind::add: return Expr(n.a).derivative(var) + Expr(n.b).derivative(var);
        case ExprKind::sub: return Expr(n.a).derivative(var) - Expr(n.b).derivative(var);
        case ExprKind::mul:
            return Expr(n.a).derivative(var) * Expr(n.b) + Expr(n.a) * Expr(n.b).derivative(var);
        case ExprKind::div: {
            Expr u(n.a), v(n.b);
            return (u.derivative(var) * v - u * v.derivative(var)) / (v * v);
        }
        case ExprKind::pow: {
            Expr u(n.a);
            return constant(Rat(n.exponent)) * u.pow(n.exponent - 1) * u.derivative(var);
        }
        case ExprKind::func: {
            Expr u(n.a);
            Expr du = u.derivative(var);
            switch (n.fn) {
                case Func::sin: return cos(u) * du;
                case Func::cos: return -(sin(u) * du);
                case Func::exp: return exp(u) * du;
            }
        }
    }
    return Expr();
}

double Expr::eval(std::span<const double> x, double t) const {
    const ExprNode& n = *node_;
    switch (n.kind) {
        case ExprKind::constant: return to_double(n.value);
        case ExprKind::variable: return n.var == 0 ? t : x[n.var - 1];
        case ExprKind::add: return Expr(n.a).eval(x, t) + Expr(n.b).eval(x, t);
        case ExprKind::sub: return Expr(n.a).eval(x, t) - Expr(n.b).eval(x, t);
        case ExprKind::mul: return Expr(n.a).eval(x, t) * Expr(n.b).eval(x, t);
        case ExprKind::div: {
            double denom = Expr(n.b).eval(x, t);
            if (denom == 0.0) throw eval_domain_error("division by zero");
            return Expr(n.a).eval(x, t) / denom;
        }
        case ExprKind::pow: {
            double base = Expr(n.a).eval(x, t);
            if (base == 0.0 && n.exponent < 0) throw eval_domain_error("zero to negative power");
            return std::pow(base, n.exponent);
        }
        case ExprKind::func: {
            double u = Expr(n.a).eval(x, t);
            switch (n.fn) {
                case Func::sin: return std::sin(u);
                case Func::cos: return std::cos(u);
                case Func::exp: return std::exp(u);
            }
        }
    }
    return 0.0;
}

Dual Expr::eval_dual(std::span<const double> x, std::span<const double> dir,
                     double t, double tdot) const {
    const ExprNode& n = *node_;
    switch (n.kind) {
        case ExprKind::constant: return {to_double(n.value), 0.0};
        case ExprKind::variable:
            return n.var == 0 ? Dual{t, tdot} : Dual{x[n.var - 1], dir[n.var - 1]};
        case ExprKind::add: return Expr(n.a).eval_dual(x, dir, t, tdot) + Expr(n.b).eval_dual(x, dir, t, tdot);
        case ExprKind::sub: return Expr(n.a).eval_dual(x, dir, t, tdot) - Expr(n.b).eval_dual(x, dir, t, tdot);
        case ExprKind::mul: return Expr(n.a).eval_dual(x, dir, t, tdot) * Expr(n.b).eval_dual(x, dir, t, tdot);
        case ExprKind::div: return Expr(n.a).eval_dual(x, dir, t, tdot) / Expr(n.b).eval_dual(x, dir, t, tdot);
        case ExprKind::pow: return pow_int(Expr(n.a).eval_dual(x, dir, t, tdot), n.exponent);
        case ExprKind::func: {
            Dual u = Expr(n.a).eval_dual(x, dir, t, tdot);
            switch (n.fn) {
                case Func::sin: return tpw::sin(u);
                case Func::cos: return tpw::cos(u);
                case Func::exp: return tpw::exp(u);
            }
        }
    }
    return {};
}

bool Expr::is_exact_fragment() const {
    const ExprNode& n = *node_;
    switch (n.kind) {
        case ExprKind::constant:
        case ExprKind::variable: return true;
        case ExprKind::func: return false;
        case ExprKind::pow: return Expr(n.a).is_exact_fragment();
        default: return Expr(n.a).is_exact_fragment() && Expr(n.b).is_exact_fragment();
    }
}

int Expr::max_var_index() const {
    const ExprNode& n = *node_;
    switch (n.kind) {
        case ExprKind::constant: return 0;
        case ExprKind::variable: return n.var;
        case ExprKind::pow:
        case ExprKind::func: return Expr(n.a).max_var_index();
        default: return std::max(Expr(n.a).max_var_index(), Expr(n.b).max_var_index());
    }
}

bool Expr::depends_on(int var) const {
    const ExprNode& n = *node_;
    switch (n.kind) {
        case ExprKind::constant: return false;
        case ExprKind::variable: return n.var == var;
        case ExprKind::pow:
        case ExprKind::func: return Expr(n.a).depends_on(var);
        default: return Expr(n.a).depends_on(var) || Expr(n.b).depends_on(var);
    }
}

bool Expr::is_zero_node() const { return is_const(node_, 0); }
bool Expr::is_constant() const { return node_->kind == ExprKind::constant; }
Rat Expr::constant_value() const {
    if (!is_constant()) throw std::logic_error("not a constant expression");
    return node_->value;
}

RatFunc Expr::normal_form(int n) const {
    const int nv = n + 1;
    const ExprNode& nd = *node_;
    switch (nd.kind) {
        case ExprKind::constant: return RatFunc::constant(nv, nd.value);
        case ExprKind::variable: return RatFunc::variable(nv, nd.var);
        case ExprKind::add: return Expr(nd.a).normal_form(n) + Expr(nd.b).normal_form(n);
        case ExprKind::sub: return Expr(nd.a).normal_form(n) - Expr(nd.b).normal_form(n);
        case ExprKind::mul: return Expr(nd.a).normal_form(n) * Expr(nd.b).normal_form(n);
        case ExprKind::div: return Expr(nd.a).normal_form(n) / Expr(nd.b).normal_form(n);
        case ExprKind::pow: return Expr(nd.a).normal_form(n).pow(nd.exponent);
        case ExprKind::func: throw not_exact_error();
    }
    return RatFunc::constant(nv, Rat(0));
}

Expr Expr::substitute_t(const Expr& g) const {
    const ExprNode& n = *node_;
    switch (n.kind) {
        case ExprKind::constant: return *this;
        case ExprKind::variable: return n.var == 0 ? g : *this;
        case ExprKind::add: return Expr(n.a).substitute_t(g) + Expr(n.b).substitute_t(g);
        case ExprKind::sub: return Expr(n.a).substitute_t(g) - Expr(n.b).substitute_t(g);
        case ExprKind::mul: return Expr(n.a).substitute_t(g) * Expr(n.b).substitute_t(g);
        case ExprKind::div: return Expr(n.a).substitute_t(g) / Expr(n.b).substitute_t(g);
        case ExprKind::pow: return Expr(n.a).substitute_t(g).pow(n.exponent);
        case ExprKind::func: {
            Expr u = Expr(n.a).substitute_t(g);
            switch (n.fn) {
                case Func::sin: return sin(u);
                case Func::cos: return cos(u);
                case Func::exp: return exp(u);
            }
        }
    }
    return *this;
}

namespace {

int precedence(ExprKind k) {
    switch (k) {
        case ExprKind::add:
        case ExprKind::sub: return 1;
        case ExprKind::mul:
        case ExprKind::div: return 2;
        case ExprKind::pow: return 3;
        default: return 4;
    }
}

void print_node(std::ostringstream& os, const ExprNode& n, int parent_prec, bool rhs);

void print_child(std::ostringstream& os, const ExprNodePtr& c, int prec, bool rhs) {
    print_node(os, *c, prec, rhs);
}

void print_node(std::ostringstream& os, const ExprNode& n, int parent_prec, bool rhs) {
    int prec = precedence(n.kind);
    bool paren = prec < parent_prec || (prec == parent_prec && rhs && prec <= 2);
    switch (n.kind) {
        case ExprKind::constant: {
            bool neg = n.value < 0;
            if (neg && parent_prec > 0) os << "(";
            os << n.value.str();
            if (neg && parent_prec > 0) os << ")";
            return;
        }
        case ExprKind::variable:
            os << (n.var == 0 ? std::string("t") : "x" + std::to_string(n.var));
            return;
        case ExprKind::add:
            if (paren) os << "(";
            print_child(os, n.a, prec, false); os << " + "; print_child(os, n.b, prec, true);
            if (paren) os << ")";
            return;
        case ExprKind::sub:
            if (paren) os << "(";
            print_child(os, n.a, prec, false); os << " - "; print_child(os, n.b, prec, true);
            if (paren) os << ")";
            return;
        case ExprKind::mul:
            if (paren) os << "(";
            print_child(os, n.a, prec, false); os << "*"; print_child(os, n.b, prec, true);
            if (paren) os << ")";
            return;
        case ExprKind::div:
            if (paren) os << "(";
            print_child(os, n.a, prec, false); os << "/"; print_child(os, n.b, prec, true);
            if (paren) os << ")";
            return;
        case ExprKind::pow:
            print_child(os, n.a, prec + 1, false);
            os << "^" << n.exponent;
            return;
        case ExprKind::func:
            switch (n.fn) {
                case Func::sin: os << "sin("; break;
                case Func::cos: os << "cos("; break;
                case Func::exp: os << "exp("; break;
            }
            print_child(os, n.a, 0, false);
            os << ")";
            return;
    }
}

} // namespace

std::string Expr::str() const {
    std::ostringstream os;
    print_node(os, *node_, 0, false);
    return os.str();
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' ['-'] int)?
//   base   := number | 'x' int | 't' | func '(' expr ')' | '(' expr ')'
// The optional leading '-' is a lenient extension used when printing.
// ---------------------------------------------------------------------------

namespace {

struct Lexer {
    const std::string& s;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) advance();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    void advance() {
        if (pos < s.size()) {
            if (s[pos] == '\n') { ++line; col = 1; }
            else ++col;
            ++pos;
        }
    }
    char get() {
        skip_ws();
        char c = pos < s.size() ? s[pos] : '\0';
        advance();
        return c;
    }
    [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, line, col); }
};

struct Parser {
    Lexer lex;
    int n;

    Parser(const std::string& text, int n_) : lex(text), n(n_) {}

    Expr parse() {
        Expr e = expr();
        if (lex.peek() != '\0') lex.fail("unexpected trailing input");
        return e;
    }

    Expr expr() {
        bool neg = false;
        if (lex.peek() == '-') { lex.get(); neg = true; }
        Expr e = term();
        if (neg) e = Expr::constant(Rat(-1)) * e;
        while (true) {
            char c = lex.peek();
            if (c == '+') { lex.get(); e = e + term(); }
            else if (c == '-') { lex.get(); e = e - term(); }
            else break;
        }
        return e;
    }

    Expr term() {
        Expr e = factor();
        while (true) {
            char c = lex.peek();
            if (c == '*') { lex.get(); e = e * factor(); }
            else if (c == '/') { lex.get(); e = e / factor(); }
            else break;
        }
        return e;
    }

    Expr factor() {
        Expr e = base();
        if (lex.peek() == '^') {
            lex.get();
            bool neg = false;
            if (lex.peek() == '-') { lex.get(); neg = true; }
            long long k = read_int("integer exponent");
            e = e.pow(static_cast<int>(neg ? -k : k));
        }
        return e;
    }

    long long read_int(const char* what) {
        lex.skip_ws();
        if (lex.pos >= lex.s.size() || !std::isdigit(static_cast<unsigned char>(lex.s[lex.pos])))
            lex.fail(std::string("expected ") + what);
        long long v = 0;
        while (lex.pos < lex.s.size() && std::isdigit(static_cast<unsigned char>(lex.s[lex.pos]))) {
            v = v * 10 + (lex.s[lex.pos] - '0');
            lex.advance();
        }
        return v;
    }

    Expr base() {
        char c = lex.peek();
        if (c == '(') {
            lex.get();
            Expr e = expr();
            if (lex.peek() != ')') lex.fail("expected ')'");
            lex.get();
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        lex.fail("expected number, variable or '('");
    }

    Expr number() {
        lex.skip_ws();
        int line = lex.line, col = lex.col;
        std::string digits;
        while (lex.pos < lex.s.size() && std::isdigit(static_cast<unsigned char>(lex.s[lex.pos]))) {
            digits += lex.s[lex.pos];
            lex.advance();
        }
        std::string frac;
        if (lex.pos < lex.s.size() && lex.s[lex.pos] == '.') {
            lex.advance();
            while (lex.pos < lex.s.size() && std::isdigit(static_cast<unsigned char>(lex.s[lex.pos]))) {
                frac += lex.s[lex.pos];
                lex.advance();
            }
        }
        if (digits.empty() && frac.empty()) throw parse_error("malformed number", line, col);
        // Exact decimal -> rational conversion.
        BigInt numer = digits.empty() ? BigInt(0) : BigInt(digits);
        BigInt denom = 1;
        for (char d : frac) {
            numer = numer * 10 + (d - '0');
            denom *= 10;
        }
        return Expr::constant(Rat(numer, denom));
    }

    Expr identifier() {
        lex.skip_ws();
        int line = lex.line, col = lex.col;
        std::string id;
        while (lex.pos < lex.s.size() && std::isalpha(static_cast<unsigned char>(lex.s[lex.pos]))) {
            id += lex.s[lex.pos];
            lex.advance();
        }
        if (id == "t") return Expr::t();
        if (id == "x") {
            if (lex.pos >= lex.s.size() || !std::isdigit(static_cast<unsigned char>(lex.s[lex.pos])))
                throw parse_error("expected variable index after 'x'", line, col);
            long long idx = read_int("variable index");
            if (idx < 1 || idx > n)
                throw parse_error("unknown variable x" + std::to_string(idx) +
                                      " (dimension " + std::to_string(n) + ")",
                                  line, col);
            return Expr::x(static_cast<int>(idx));
        }
        if (id == "sin" || id == "cos" || id == "exp") {
            if (lex.peek() != '(') lex.fail("expected '(' after function name");
            lex.get();
            Expr arg = expr();
            if (lex.peek() != ')') lex.fail("expected ')'");
            lex.get();
            if (id == "sin") return Expr::sin(arg);
            if (id == "cos") return Expr::cos(arg);
            return Expr::exp(arg);
        }
        throw parse_error("unknown identifier '" + id + "'", line, col);
    }
};

} // namespace

Expr parse_expr(const std::string& text, int n) {
    Parser p(text, n);
    return p.parse();
}

bool normal_form_equal(const Expr& a, const Expr& b, int n) {
    return (a - b).normal_form(n).is_zero();
}

bool is_normal_zero(const Expr& a, int n) { return a.normal_form(n).is_zero(); }

} // namespace tpw
