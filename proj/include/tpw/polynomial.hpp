#pragma once
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tpw/rational.hpp"

namespace tpw {

/// Multivariate polynomial with exact rational coefficients.
///
/// Variable slot 0 is the time variable t, slots 1..n are x1..xn.
/// Monomials are exponent vectors of fixed width `nvars`, kept in a map
/// under lexicographic order; this is the canonical normal form used by
/// all exact-equality checks.
class Polynomial {
public:
    using Mono = std::vector<unsigned>;

    Polynomial() : nvars_(0) {}
    explicit Polynomial(int nvars) : nvars_(nvars) {}

    static Polynomial constant(int nvars, const Rat& c);
    static Polynomial variable(int nvars, int var);

    int  nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rat  constant_value() const; // requires is_constant()

    const std::map<Mono, Rat>& terms() const { return terms_; }

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(const Rat& c) const;
    bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

    Polynomial pow(unsigned k) const;
    Polynomial derivative(int var) const;

    double eval(std::span<const double> x, double t) const;
    Rat    eval_exact(const std::vector<Rat>& vals) const; // vals[0]=t, vals[i]=x_i

    int degree_in(int var) const;
    /// Coefficient of var^k, as a polynomial with the same width but var-exponent 0.
    Polynomial coeff_of(int var, int k) const;

    /// Lexicographically leading coefficient.
    const Rat& leading_coeff() const;

    /// Divide by the leading coefficient (canonical monic form).
    Polynomial monic() const;

    /// Exact division; throws std::logic_error if not divisible.
    static Polynomial exact_divide(const Polynomial& a, const Polynomial& b);

    /// Monic gcd (primitive PRS over Q).
    static Polynomial gcd(const Polynomial& a, const Polynomial& b);

    std::string str() const; // debugging aid

    void add_term(const Mono& m, const Rat& c);

private:
    int nvars_;
    std::map<Mono, Rat> terms_;

    std::vector<int> present_vars() const;
    Polynomial content_wrt(int var) const;
    static Polynomial prem(const Polynomial& a, const Polynomial& b, int var);
};

/// Rational function as a reduced fraction of polynomials with
/// monic-normalized denominator. Canonical: equal values compare equal
/// field-by-field.
class RatFunc {
public:
    RatFunc() : num_(0), den_(0) {}
    explicit RatFunc(Polynomial num);
    RatFunc(Polynomial num, Polynomial den); // reduces

    static RatFunc constant(int nvars, const Rat& c);
    static RatFunc variable(int nvars, int var);

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    RatFunc operator-() const;
    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc operator/(const RatFunc& o) const;
    RatFunc pow(int k) const;
    RatFunc derivative(int var) const;
    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }

private:
    Polynomial num_, den_;
    void reduce();
};

} // namespace tpw
