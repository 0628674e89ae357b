#pragma once
#include <cmath>

#include "tpw/errors.hpp"

namespace tpw {

/// Forward-mode dual number: value + one directional derivative.
struct Dual {
    double v = 0.0;
    double d = 0.0;

    friend Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
    friend Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
    friend Dual operator-(Dual a) { return {-a.v, -a.d}; }
    friend Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
    friend Dual operator/(Dual a, Dual b) {
        if (b.v == 0.0) throw eval_domain_error("division by zero");
        return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
    }
};

inline Dual sin(Dual a) { return {std::sin(a.v), std::cos(a.v) * a.d}; }
inline Dual cos(Dual a) { return {std::cos(a.v), -std::sin(a.v) * a.d}; }
inline Dual exp(Dual a) { return {std::exp(a.v), std::exp(a.v) * a.d}; }

inline Dual pow_int(Dual a, int k) {
    if (k == 0) return {1.0, 0.0};
    if (a.v == 0.0 && k < 0) throw eval_domain_error("zero to negative power");
    double p  = std::pow(a.v, k);
    double dp = static_cast<double>(k) * std::pow(a.v, k - 1) * a.d;
    return {p, dp};
}

} // namespace tpw
