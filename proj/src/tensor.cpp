#include "tpw/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "tpw/errors.hpp"

namespace tpw {

int sort_multi_index(MultiIndex& idx) {
    int sign = 1;
    for (size_t i = 1; i < idx.size(); ++i) {
        size_t j = i;
        while (j > 0 && idx[j] < idx[j - 1]) {
            std::swap(idx[j], idx[j - 1]);
            sign = -sign;
            --j;
        }
    }
    for (size_t i = 1; i < idx.size(); ++i)
        if (idx[i] == idx[i - 1]) return 0;
    return sign;
}

KForm KForm::function(int n, const Expr& f) {
    KForm a(n, 0);
    a.add_term({}, f);
    return a;
}

KForm KForm::dx(int n, int i) {
    KForm a(n, 1);
    a.add_term({i}, Expr::integer(1));
    return a;
}

void KForm::add_term(MultiIndex idx, const Expr& e) {
    if (static_cast<int>(idx.size()) != degree_)
        throw std::logic_error("KForm index arity mismatch");
    if (e.is_zero_node()) return;
    for (int i : idx)
        if (i < 1 || i > n_) throw std::logic_error("KForm index out of range");
    int sign = sort_multi_index(idx);
    if (sign == 0) return;
    Expr add = sign == 1 ? e : -e;
    auto it = comps_.find(idx);
    if (it == comps_.end())
        comps_.emplace(std::move(idx), add);
    else {
        it->second = it->second + add;
        if (it->second.is_zero_node()) comps_.erase(it);
    }
}

Expr KForm::component(const MultiIndex& idx) const {
    auto it = comps_.find(idx);
    return it == comps_.end() ? Expr() : it->second;
}

Expr KForm::component_signed(MultiIndex idx) const {
    int sign = sort_multi_index(idx);
    if (sign == 0) return Expr();
    Expr c = component(idx);
    return sign == 1 ? c : -c;
}

KForm KForm::operator+(const KForm& o) const {
    // A structurally empty form is the zero of every degree.
    if (o.comps_.empty()) return *this;
    if (comps_.empty()) return o;
    KForm r = *this;
    for (auto& [m, e] : o.comps_) r.add_term(m, e);
    return r;
}

KForm KForm::operator-(const KForm& o) const {
    if (o.comps_.empty()) return *this;
    if (comps_.empty()) return -o;
    KForm r = *this;
    for (auto& [m, e] : o.comps_) r.add_term(m, -e);
    return r;
}

KForm KForm::operator-() const {
    KForm r(n_, degree_);
    for (auto& [m, e] : comps_) r.add_term(m, -e);
    return r;
}

KForm KForm::operator*(const Expr& s) const {
    KForm r(n_, degree_);
    if (s.is_zero_node()) return r;
    for (auto& [m, e] : comps_) r.add_term(m, s * e);
    return r;
}

KForm KForm::wedge(const KForm& o) const {
    KForm r(n_, degree_ + o.degree_);
    for (auto& [ma, ea] : comps_) {
        for (auto& [mb, eb] : o.comps_) {
            MultiIndex m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            r.add_term(std::move(m), ea * eb);
        }
    }
    return r;
}

bool KForm::is_structurally_zero() const { return comps_.empty(); }

bool KForm::is_normal_zero() const {
    for (auto& [m, e] : comps_)
        if (!tpw::is_normal_zero(e, n_)) return false;
    return true;
}

bool KForm::is_exact_fragment() const {
    for (auto& [m, e] : comps_)
        if (!e.is_exact_fragment()) return false;
    return true;
}

double KForm::max_abs_eval(std::span<const double> x, double t) const {
    double mx = 0.0;
    for (auto& [m, e] : comps_) mx = std::max(mx, std::abs(e.eval(x, t)));
    return mx;
}

KForm exterior_derivative(const KForm& a) {
    if (a.degree() > 3) throw std::invalid_argument("exterior derivative: degree overflow");
    KForm r(a.n(), a.degree() + 1);
    for (auto& [m, e] : a.components()) {
        for (int j = 1; j <= a.n(); ++j) {
            Expr de = e.derivative(j);
            if (de.is_zero_node()) continue;
            MultiIndex idx;
            idx.reserve(m.size() + 1);
            idx.push_back(j);
            idx.insert(idx.end(), m.begin(), m.end());
            r.add_term(std::move(idx), de);
        }
    }
    return r;
}

KForm interior_product(const VectorField& X, const KForm& a) {
    if (a.degree() == 0) return KForm(a.n(), 0);
    KForm r(a.n(), a.degree() - 1);
    for (auto& [m, e] : a.components()) {
        for (size_t p = 0; p < m.size(); ++p) {
            const Expr& xc = X[m[p] - 1];
            if (xc.is_zero_node()) continue;
            MultiIndex idx;
            idx.reserve(m.size() - 1);
            for (size_t q = 0; q < m.size(); ++q)
                if (q != p) idx.push_back(m[q]);
            Expr term = xc * e;
            r.add_term(std::move(idx), (p % 2 == 0) ? term : -term);
        }
    }
    return r;
}

KForm lie_derivative(const VectorField& X, const KForm& a) {
    return interior_product(X, exterior_derivative(a)) +
           exterior_derivative(interior_product(X, a));
}

void Bivector::set(int i, int j, const Expr& e) {
    if (i == j || i < 1 || j < 1 || i > n_ || j > n_)
        throw std::logic_error("bivector index out of range");
    if (i < j)
        comps_[{i, j}] = e;
    else
        comps_[{j, i}] = -e;
}

Expr Bivector::entry(int i, int j) const {
    if (i == j) return Expr();
    bool flip = i > j;
    auto it = comps_.find(flip ? std::make_pair(j, i) : std::make_pair(i, j));
    if (it == comps_.end()) return Expr();
    return flip ? -it->second : it->second;
}

Expr Bivector::pairing(const KForm& sigma, const KForm& tau) const {
    Expr acc;
    for (auto& [ij, p] : comps_) {
        auto [i, j] = ij;
        Expr si = sigma.component({i}), sj = sigma.component({j});
        Expr ti = tau.component({i}), tj = tau.component({j});
        acc = acc + p * (si * tj - sj * ti);
    }
    return acc;
}

bool Bivector::is_exact_fragment() const {
    for (auto& [ij, e] : comps_)
        if (!e.is_exact_fragment()) return false;
    return true;
}

void TriVector::add_term(MultiIndex idx, const Expr& e) {
    if (idx.size() != 3) throw std::logic_error("TriVector index arity mismatch");
    if (e.is_zero_node()) return;
    int sign = sort_multi_index(idx);
    if (sign == 0) return;
    Expr add = sign == 1 ? e : -e;
    auto it = comps_.find(idx);
    if (it == comps_.end())
        comps_.emplace(std::move(idx), add);
    else {
        it->second = it->second + add;
        if (it->second.is_zero_node()) comps_.erase(it);
    }
}

Expr TriVector::component(const MultiIndex& idx) const {
    MultiIndex m = idx;
    int sign = sort_multi_index(m);
    if (sign == 0) return Expr();
    auto it = comps_.find(m);
    if (it == comps_.end()) return Expr();
    return sign == 1 ? it->second : -it->second;
}

TriVector TriVector::operator-(const TriVector& o) const {
    TriVector r = *this;
    for (auto& [m, e] : o.comps_) r.add_term(m, -e);
    return r;
}

bool TriVector::is_normal_zero() const {
    for (auto& [m, e] : comps_)
        if (!tpw::is_normal_zero(e, n_)) return false;
    return true;
}

double TriVector::max_abs_eval(std::span<const double> x) const {
    double mx = 0.0;
    for (auto& [m, e] : comps_) mx = std::max(mx, std::abs(e.eval(x)));
    return mx;
}

Model::Model(int n, Bivector pi, KForm phi, CalibrationConstants calib, bool check_closed)
    : n_(n), pi_(std::move(pi)), phi_(std::move(phi)), calib_(calib) {
    if (phi_.degree() != 3) throw std::invalid_argument("phi must be a 3-form");
    if (!check_closed) return;
    KForm dphi = exterior_derivative(phi_);
    if (phi_.is_exact_fragment()) {
        if (!dphi.is_normal_zero()) throw std::invalid_argument("phi is not closed");
    } else {
        std::mt19937_64 rng(0x5eedULL);
        std::uniform_real_distribution<double> unif(-0.9, 0.9);
        std::vector<double> x(n_);
        for (int s = 0; s < 20; ++s) {
            for (double& xi : x) xi = unif(rng);
            try {
                if (dphi.max_abs_eval(x) > 1e-9)
                    throw std::invalid_argument("phi is not closed");
            } catch (const eval_domain_error&) {
                --s; // resample away from poles
            }
        }
    }
}

bool Model::is_exact_fragment() const {
    return pi_.is_exact_fragment() && phi_.is_exact_fragment();
}

} // namespace tpw
