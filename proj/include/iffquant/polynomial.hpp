/**
 * @file polynomial.hpp
 * @brief Univariate polynomials over the rationals.
 *
 * Dense coefficient representation, ascending powers. Provides the exact
 * arithmetic needed by spectral computations: euclidean division, gcd/lcm,
 * Yun squarefree decomposition, evaluation and canonical printing.
 */
#pragma once

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "rational.hpp"

namespace iffquant {

class QPoly {
public:
    QPoly() = default;
    explicit QPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { normalize(); }
    QPoly(std::initializer_list<Rational> coeffs) : c_(coeffs) { normalize(); }

    static QPoly zero() { return QPoly(); }
    static QPoly one() { return QPoly({Rational(1)}); }
    static QPoly constant(const Rational& a) { return QPoly({a}); }
    /// x - r
    static QPoly linear_root(const Rational& r) { return QPoly({-r, Rational(1)}); }
    static QPoly x() { return QPoly({Rational(0), Rational(1)}); }

    bool is_zero() const { return c_.empty(); }
    /// Degree; -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : Rational(0);
    }
    Rational lc() const {
        if (is_zero()) throw std::domain_error("QPoly: lc of zero polynomial");
        return c_.back();
    }
    bool is_monic() const { return !is_zero() && c_.back().is_one(); }

    QPoly operator-() const {
        std::vector<Rational> r(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) r[i] = -c_[i];
        return QPoly(std::move(r));
    }

    friend QPoly operator+(const QPoly& a, const QPoly& b) {
        std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()));
        for (size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
        return QPoly(std::move(r));
    }
    friend QPoly operator-(const QPoly& a, const QPoly& b) { return a + (-b); }
    friend QPoly operator*(const QPoly& a, const QPoly& b) {
        if (a.is_zero() || b.is_zero()) return QPoly();
        std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return QPoly(std::move(r));
    }
    friend QPoly operator*(const Rational& s, const QPoly& p) {
        std::vector<Rational> r(p.c_.size());
        for (size_t i = 0; i < p.c_.size(); ++i) r[i] = s * p.c_[i];
        return QPoly(std::move(r));
    }

    friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const QPoly& a, const QPoly& b) { return !(a == b); }

    /// Euclidean division, returns (quotient, remainder).
    static std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
        if (b.is_zero()) throw std::domain_error("QPoly: division by zero polynomial");
        QPoly q, r = a;
        std::vector<Rational> qc(std::max<int>(a.degree() - b.degree() + 1, 0), Rational(0));
        const Rational inv_lc = b.lc().inverse();
        while (!r.is_zero() && r.degree() >= b.degree()) {
            const int shift = r.degree() - b.degree();
            Rational factor = r.lc() * inv_lc;
            qc[shift] = factor;
            std::vector<Rational> rc = r.c_;
            for (int i = 0; i <= b.degree(); ++i) rc[i + shift] -= factor * b.c_[i];
            r = QPoly(std::move(rc));
        }
        return {QPoly(std::move(qc)), r};
    }
    friend QPoly operator/(const QPoly& a, const QPoly& b) { return divmod(a, b).first; }
    friend QPoly operator%(const QPoly& a, const QPoly& b) { return divmod(a, b).second; }

    bool divides(const QPoly& other) const { return divmod(other, *this).second.is_zero(); }

    QPoly monic() const {
        if (is_zero()) return *this;
        return lc().inverse() * *this;
    }

    QPoly derivative() const {
        if (c_.size() <= 1) return QPoly();
        std::vector<Rational> r(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = Rational(static_cast<long>(i)) * c_[i];
        return QPoly(std::move(r));
    }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    /// f(s*x)
    QPoly scale_arg(const Rational& s) const {
        std::vector<Rational> r(c_.size());
        Rational pw(1);
        for (size_t i = 0; i < c_.size(); ++i) {
            r[i] = c_[i] * pw;
            pw *= s;
        }
        return QPoly(std::move(r));
    }

    static QPoly gcd(QPoly a, QPoly b) {
        while (!b.is_zero()) {
            QPoly r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    static QPoly lcm(const QPoly& a, const QPoly& b) {
        if (a.is_zero() || b.is_zero()) return QPoly();
        return ((a * b) / gcd(a, b)).monic();
    }

    /// Extended euclid: returns (g, s, t) with s*a + t*b = g = gcd(a,b), g monic.
    static std::tuple<QPoly, QPoly, QPoly> ext_gcd(const QPoly& a, const QPoly& b) {
        QPoly r0 = a, r1 = b;
        QPoly s0 = one(), s1 = zero(), t0 = zero(), t1 = one();
        while (!r1.is_zero()) {
            auto [q, r] = divmod(r0, r1);
            QPoly s2 = s0 - q * s1;
            QPoly t2 = t0 - q * t1;
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s2);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        if (r0.is_zero()) return {r0, s0, t0};
        const Rational inv = r0.lc().inverse();
        return {inv * r0, inv * s0, inv * t0};
    }

    bool is_squarefree() const {
        if (is_zero()) return false;
        if (degree() == 0) return true;
        return gcd(*this, derivative()).degree() == 0;
    }

    /// Yun squarefree decomposition: returns (g_i, i) with *this = lc * prod g_i^i,
    /// all g_i monic squarefree and pairwise coprime.
    std::vector<std::pair<QPoly, int>> squarefree_decomposition() const {
        if (is_zero()) throw std::domain_error("QPoly: squarefree decomposition of zero");
        std::vector<std::pair<QPoly, int>> out;
        QPoly f = monic();
        if (f.degree() == 0) return out;
        QPoly fp = f.derivative();
        QPoly a = gcd(f, fp);
        QPoly b = f / a;
        QPoly c = fp / a;
        QPoly d = c - b.derivative();
        int i = 1;
        while (b.degree() > 0) {
            QPoly g = gcd(b, d);
            if (g.degree() > 0) out.emplace_back(g.monic(), i);
            b = b / g;
            c = d / g;
            d = c - b.derivative();
            ++i;
        }
        return out;
    }

    /// Canonical display in the variable "x", descending powers.
    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            const Rational& a = c_[i];
            if (a.is_zero()) continue;
            const bool first = s.empty();
            Rational mag = a.abs();
            if (!first) s += (a.sign() < 0) ? " - " : " + ";
            else if (a.sign() < 0) s += "-";
            std::string term;
            if (i == 0) {
                term = mag.to_string();
            } else {
                std::string xp = (i == 1) ? "x" : "x^" + std::to_string(i);
                term = mag.is_one() ? xp : mag.to_string() + "*" + xp;
            }
            s += term;
        }
        return s;
    }

private:
    void normalize() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<Rational> c_;
};

} // namespace iffquant
