#include "tpw/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tpw/errors.hpp"

namespace tpw {

Polynomial Polynomial::constant(int nvars, const Rat& c) {
    Polynomial p(nvars);
    if (c != 0) p.terms_[Mono(nvars, 0)] = c;
    return p;
}

Polynomial Polynomial::variable(int nvars, int var) {
    Polynomial p(nvars);
    Mono m(nvars, 0);
    m.at(var) = 1;
    p.terms_[m] = 1;
    return p;
}

bool Polynomial::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const Mono& m = terms_.begin()->first;
    return std::all_of(m.begin(), m.end(), [](unsigned e) { return e == 0; });
}

Rat Polynomial::constant_value() const {
    if (terms_.empty()) return Rat(0);
    if (!is_constant()) throw std::logic_error("polynomial is not constant");
    return terms_.begin()->second;
}

void Polynomial::add_term(const Mono& m, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator-() const {
    Polynomial r(nvars_);
    for (auto& [m, c] : terms_) r.terms_[m] = -c;
    return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r = *this;
    for (auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Polynomial r = *this;
    for (auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial r(nvars_);
    Mono m(nvars_);
    for (auto& [ma, ca] : terms_) {
        for (auto& [mb, cb] : o.terms_) {
            for (int i = 0; i < nvars_; ++i) m[i] = ma[i] + mb[i];
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

Polynomial Polynomial::operator*(const Rat& c) const {
    Polynomial r(nvars_);
    if (c == 0) return r;
    for (auto& [m, coef] : terms_) r.terms_[m] = coef * c;
    return r;
}

Polynomial Polynomial::pow(unsigned k) const {
    Polynomial r = constant(nvars_, 1);
    Polynomial base = *this;
    while (k > 0) {
        if (k & 1u) r = r * base;
        base = base * base;
        k >>= 1u;
    }
    return r;
}

Polynomial Polynomial::derivative(int var) const {
    Polynomial r(nvars_);
    for (auto& [m, c] : terms_) {
        if (m[var] == 0) continue;
        Mono dm = m;
        dm[var] -= 1;
        r.add_term(dm, c * Rat(m[var]));
    }
    return r;
}

double Polynomial::eval(std::span<const double> x, double t) const {
    double acc = 0.0;
    for (auto& [m, c] : terms_) {
        double term = to_double(c);
        for (int v = 0; v < nvars_; ++v) {
            if (m[v] == 0) continue;
            double base = (v == 0) ? t : x[v - 1];
            for (unsigned e = 0; e < m[v]; ++e) term *= base;
        }
        acc += term;
    }
    return acc;
}

Rat Polynomial::eval_exact(const std::vector<Rat>& vals) const {
    Rat acc = 0;
    for (auto& [m, c] : terms_) {
        Rat term = c;
        for (int v = 0; v < nvars_; ++v)
            for (unsigned e = 0; e < m[v]; ++e) term *= vals[v];
        acc += term;
    }
    return acc;
}

int Polynomial::degree_in(int var) const {
    int d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m[var]));
    return d;
}

Polynomial Polynomial::coeff_of(int var, int k) const {
    Polynomial r(nvars_);
    for (auto& [m, c] : terms_) {
        if (static_cast<int>(m[var]) != k) continue;
        Mono mm = m;
        mm[var] = 0;
        r.add_term(mm, c);
    }
    return r;
}

const Rat& Polynomial::leading_coeff() const {
    if (terms_.empty()) throw std::logic_error("leading_coeff of zero polynomial");
    return terms_.rbegin()->second;
}

Polynomial Polynomial::monic() const {
    if (is_zero()) return *this;
    Rat lc = leading_coeff();
    Polynomial r(nvars_);
    for (auto& [m, c] : terms_) r.terms_[m] = c / lc;
    return r;
}

Polynomial Polynomial::exact_divide(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw std::logic_error("division by zero polynomial");
    Polynomial rem = a, quot(a.nvars_);
    const Mono& lmb = b.terms_.rbegin()->first;
    const Rat&  lcb = b.terms_.rbegin()->second;
    while (!rem.is_zero()) {
        const Mono& lma = rem.terms_.rbegin()->first;
        Mono q(a.nvars_);
        for (int i = 0; i < a.nvars_; ++i) {
            if (lma[i] < lmb[i]) throw std::logic_error("polynomial division not exact");
            q[i] = lma[i] - lmb[i];
        }
        Rat qc = rem.terms_.rbegin()->second / lcb;
        quot.add_term(q, qc);
        Polynomial qpoly(a.nvars_);
        qpoly.terms_[q] = qc;
        rem = rem - qpoly * b;
    }
    return quot;
}

std::vector<int> Polynomial::present_vars() const {
    std::set<int> s;
    for (auto& [m, c] : terms_)
        for (int v = 0; v < nvars_; ++v)
            if (m[v] > 0) s.insert(v);
    return {s.begin(), s.end()};
}

Polynomial Polynomial::content_wrt(int var) const {
    Polynomial g(nvars_);
    for (int k = 0; k <= degree_in(var); ++k) {
        Polynomial c = coeff_of(var, k);
        if (!c.is_zero()) g = gcd(g, c);
    }
    return g;
}

Polynomial Polynomial::prem(const Polynomial& a, const Polynomial& b, int var) {
    int da = a.degree_in(var), db = b.degree_in(var);
    Polynomial lb = b.coeff_of(var, db);
    Polynomial r = a;
    int steps = da - db + 1;
    while (!r.is_zero() && r.degree_in(var) >= db) {
        int dr = r.degree_in(var);
        Polynomial lr = r.coeff_of(var, dr);
        Polynomial shift(a.nvars_);
        Mono m(a.nvars_, 0);
        m[var] = dr - db;
        shift.terms_[m] = 1;
        r = r * lb - b * (lr * shift);
        --steps;
    }
    // Keep the classical lc(b)^(da-db+1) scaling so the result stays polynomial.
    while (steps-- > 0) r = r * lb;
    return r;
}

Polynomial Polynomial::gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return constant(a.nvars_, 1);

    auto va = a.present_vars(), vb = b.present_vars();
    std::set<int> all(va.begin(), va.end());
    all.insert(vb.begin(), vb.end());
    int v = *all.begin();

    Polynomial ca = a.content_wrt(v), cb = b.content_wrt(v);
    Polynomial pa = exact_divide(a, ca), pb = exact_divide(b, cb);
    Polynomial c = gcd(ca, cb);

    Polynomial p = pa, q = pb;
    if (p.degree_in(v) < q.degree_in(v)) std::swap(p, q);
    while (true) {
        if (q.is_zero()) {
            Polynomial cp = p.content_wrt(v);
            p = exact_divide(p, cp);
            return (c * p).monic();
        }
        if (q.degree_in(v) == 0) return c.monic();
        Polynomial r = prem(p, q, v);
        p = q;
        if (r.is_zero()) {
            q = r;
        } else {
            Polynomial cr = r.content_wrt(v);
            q = exact_divide(r, cr);
        }
    }
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!first) os << " + ";
        first = false;
        os << it->second.str();
        for (int v = 0; v < nvars_; ++v) {
            if (it->first[v] == 0) continue;
            os << (v == 0 ? "*t" : "*x" + std::to_string(v));
            if (it->first[v] > 1) os << "^" << it->first[v];
        }
    }
    return os.str();
}

RatFunc::RatFunc(Polynomial num)
    : num_(std::move(num)), den_(Polynomial::constant(num_.nvars(), 1)) {}

RatFunc::RatFunc(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw eval_domain_error("division by zero in exact normalization");
    reduce();
}

RatFunc RatFunc::constant(int nvars, const Rat& c) { return RatFunc(Polynomial::constant(nvars, c)); }
RatFunc RatFunc::variable(int nvars, int var) { return RatFunc(Polynomial::variable(nvars, var)); }

void RatFunc::reduce() {
    if (num_.is_zero()) {
        den_ = Polynomial::constant(num_.nvars(), 1);
        return;
    }
    Polynomial g = Polynomial::gcd(num_, den_);
    if (!g.is_constant()) {
        num_ = Polynomial::exact_divide(num_, g);
        den_ = Polynomial::exact_divide(den_, g);
    }
    Rat lc = den_.leading_coeff();
    num_ = num_ * (Rat(1) / lc);
    den_ = den_ * (Rat(1) / lc);
}

RatFunc RatFunc::operator-() const {
    RatFunc r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
    return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const {
    return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator*(const RatFunc& o) const {
    return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
    if (o.num_.is_zero()) throw eval_domain_error("division by zero in exact normalization");
    return RatFunc(num_ * o.den_, den_ * o.num_);
}

RatFunc RatFunc::pow(int k) const {
    if (k == 0) return constant(num_.nvars(), 1);
    bool inv = k < 0;
    unsigned e = inv ? static_cast<unsigned>(-static_cast<long long>(k)) : static_cast<unsigned>(k);
    RatFunc base = *this, r = constant(num_.nvars(), 1);
    while (e > 0) {
        if (e & 1u) r = r * base;
        base = base * base;
        e >>= 1u;
    }
    if (inv) return constant(num_.nvars(), 1) / r;
    return r;
}

RatFunc RatFunc::derivative(int var) const {
    Polynomial n = num_.derivative(var) * den_ - num_ * den_.derivative(var);
    return RatFunc(n, den_ * den_);
}

} // namespace tpw
