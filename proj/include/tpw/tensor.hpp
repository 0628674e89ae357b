#pragma once
#include <map>
#include <span>
#include <vector>

#include "tpw/expr.hpp"

namespace tpw {

using MultiIndex = std::vector<int>;   // strictly increasing coordinate indices 1..n
using VectorField = std::vector<Expr>; // component j-1 holds the dx_j coefficient

/// Sorts idx ascending in place; returns the permutation sign, or 0 on a
/// repeated index.
int sort_multi_index(MultiIndex& idx);

/// Differential k-form on one chart, components stored on strictly
/// increasing multi-indices. Degree 0 is a single scalar at the empty index.
class KForm {
public:
    KForm() : n_(0), degree_(0) {}
    KForm(int n, int degree) : n_(n), degree_(degree) {}

    static KForm function(int n, const Expr& f);
    static KForm dx(int n, int i);

    int n() const { return n_; }
    int degree() const { return degree_; }
    const std::map<MultiIndex, Expr>& components() const { return comps_; }

    /// Adds e on the (possibly unsorted) index, with permutation sign.
    void add_term(MultiIndex idx, const Expr& e);

    /// Component on a sorted index (zero Expr if absent).
    Expr component(const MultiIndex& idx) const;
    /// Component on an arbitrary index order, antisymmetric extension.
    Expr component_signed(MultiIndex idx) const;

    KForm operator+(const KForm& o) const;
    KForm operator-(const KForm& o) const;
    KForm operator-() const;
    KForm operator*(const Expr& s) const;
    KForm wedge(const KForm& o) const;

    bool is_structurally_zero() const;
    bool is_normal_zero() const;          // exact fragment only
    double max_abs_eval(std::span<const double> x, double t = 0.0) const;
    bool is_exact_fragment() const;

private:
    int n_, degree_;
    std::map<MultiIndex, Expr> comps_;
};

KForm exterior_derivative(const KForm& a);
KForm interior_product(const VectorField& X, const KForm& a);
KForm lie_derivative(const VectorField& X, const KForm& a);

/// Bivector with components pi^{ij} stored for i<j.
class Bivector {
public:
    Bivector() : n_(0) {}
    explicit Bivector(int n) : n_(n) {}

    int n() const { return n_; }
    void set(int i, int j, const Expr& e); // i != j, either order
    Expr entry(int i, int j) const;        // signed, zero on diagonal
    const std::map<std::pair<int, int>, Expr>& stored() const { return comps_; }

    /// pi(sigma, tau) = sum pi^{ij} sigma_i tau_j.
    Expr pairing(const KForm& sigma, const KForm& tau) const;

    bool is_exact_fragment() const;

private:
    int n_;
    std::map<std::pair<int, int>, Expr> comps_; // keys i<j
};

/// Contravariant degree-3 tensor (fully antisymmetric), same storage
/// discipline as KForm; holds Jacobiator-type residuals.
class TriVector {
public:
    TriVector() : n_(0) {}
    explicit TriVector(int n) : n_(n) {}

    int n() const { return n_; }
    void add_term(MultiIndex idx, const Expr& e);
    Expr component(const MultiIndex& idx) const;
    const std::map<MultiIndex, Expr>& components() const { return comps_; }

    TriVector operator-(const TriVector& o) const;
    bool is_normal_zero() const;
    double max_abs_eval(std::span<const double> x) const;

private:
    int n_;
    std::map<MultiIndex, Expr> comps_;
};

/// Convention constants left free by the underlying theory; values are
/// pinned once by the calibration oracles and quoted in reports.
struct CalibrationConstants {
    Rat c_jac{1};        // Jacobiator vs trivector factor
    Rat c_phi{-1};       // Omega_1 vs transgression factor
    int s_inv = 1;       // 3-form sign in the nondegenerate fixture
    int delta2_sign = 1; // global sign in the delta^2 = [phi, .] identity
};

/// A coordinate chart of dimension n with a bivector and a closed 3-form.
class Model {
public:
    Model(int n, Bivector pi, KForm phi, CalibrationConstants calib,
          bool check_closed = true);

    int n() const { return n_; }
    const Bivector& pi() const { return pi_; }
    const KForm& phi() const { return phi_; }
    const CalibrationConstants& calibration() const { return calib_; }
    bool is_exact_fragment() const;

private:
    int n_;
    Bivector pi_;
    KForm phi_;
    CalibrationConstants calib_;
};

} // namespace tpw
