#pragma once

// Dense univariate polynomials over Q, ascending coefficients.

#include <gmpxx.h>

#include <algorithm>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace rf {

class Poly {
public:
    Poly() = default;
    Poly(const Rational& c) {  // NOLINT(implicit)
        if (c != 0) c_.push_back(c);
    }
    Poly(long c) : Poly(Rational(c)) {}  // NOLINT(implicit)
    explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly x() { return Poly(std::vector<Rational>{0, 1}); }
    static Poly monomial(const Rational& c, int d) {
        std::vector<Rational> v(static_cast<size_t>(d) + 1, Rational(0));
        v.back() = c;
        return Poly(std::move(v));
    }
    // a*x + b
    static Poly linear(const Rational& a, const Rational& b) { return Poly(std::vector<Rational>{b, a}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational operator[](int i) const {
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)] : Rational(0);
    }
    Rational lead() const { return c_.empty() ? Rational(0) : c_.back(); }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
        return Poly(std::move(v));
    }
    Poly operator-() const {
        Poly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> v(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
        }
        return Poly(std::move(v));
    }
    friend Poly operator*(const Rational& s, const Poly& p) {
        if (s == 0) return {};
        Poly r = p;
        for (auto& x : r.c_) x *= s;
        return r;
    }
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly pow(unsigned e) const {
        Poly r(1), b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    // Euclidean division over Q.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw ValidationError("polynomial division by zero");
        if (a.degree() < b.degree()) return {Poly(), a};
        std::vector<Rational> r = a.c_;
        std::vector<Rational> q(static_cast<size_t>(a.degree() - b.degree() + 1), Rational(0));
        Rational lb = b.lead();
        for (int i = a.degree(); i >= b.degree(); --i) {
            Rational t = r[static_cast<size_t>(i)] / lb;
            if (t == 0) continue;
            q[static_cast<size_t>(i - b.degree())] = t;
            for (int j = 0; j <= b.degree(); ++j) r[static_cast<size_t>(i - b.degree() + j)] -= t * b.c_[static_cast<size_t>(j)];
        }
        r.resize(static_cast<size_t>(b.degree()));
        return {Poly(std::move(q)), Poly(std::move(r))};
    }
    friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
    friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

    // Throws unless b divides a.
    static Poly exact_div(const Poly& a, const Poly& b) {
        auto [q, r] = divmod(a, b);
        if (!r.is_zero()) throw Error("inexact polynomial division");
        return q;
    }
    bool divisible_by(const Poly& b) const { return divmod(*this, b).second.is_zero(); }

    // Pseudo-remainder: lead(b)^(deg a - deg b + 1) * a mod b.
    static Poly prem(const Poly& a, const Poly& b) {
        if (a.degree() < b.degree()) return a;
        Rational l = rpow(b.lead(), a.degree() - b.degree() + 1);
        return divmod(l * a, b).second;
    }

    Rational eval(const Rational& x) const {
        Rational r = 0;
        for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }
    double eval(double x) const {
        double r = 0;
        for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i].get_d();
        return r;
    }

    // p(a*x + b)
    Poly compose_affine(const Rational& a, const Rational& b) const {
        Poly r, lin = linear(a, b);
        for (size_t i = c_.size(); i-- > 0;) r = r * lin + Poly(c_[i]);
        return r;
    }
    Poly shift(const Rational& s) const { return compose_affine(1, s); }

    Poly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Rational> v(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * static_cast<long>(i);
        return Poly(std::move(v));
    }

    // Positive rational c with p/c in Z[x] primitive.
    Rational content() const {
        if (is_zero()) return 0;
        mpz_class g = 0, l = 1;
        for (const auto& x : c_) {
            if (x == 0) continue;
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num().get_mpz_t());
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
        }
        return make_rational(g, l);
    }
    Poly primitive() const { return is_zero() ? Poly() : (1 / content()) * *this; }
    Poly monic() const { return is_zero() ? Poly() : (1 / lead()) * *this; }

    std::string str(const std::string& var = "x") const;

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

inline std::string Poly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
        const Rational& a = c_[static_cast<size_t>(i)];
        if (a == 0) continue;
        Rational mag = abs(a);
        if (s.empty()) {
            if (a < 0) s += "-";
        } else {
            s += a < 0 ? " - " : " + ";
        }
        bool unit = mag == 1 && i > 0;
        if (!unit) s += mag.get_str();
        if (i > 0) {
            if (!unit) s += "*";
            s += var;
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

// Monic gcd; primitive remainder sequence keeps integer coefficients small.
inline Poly poly_gcd(const Poly& a, const Poly& b) {
    if (a.is_zero() && b.is_zero()) throw ValidationError("gcd of two zero polynomials");
    Poly x = a.primitive(), y = b.primitive();
    if (x.degree() < y.degree()) std::swap(x, y);
    while (!y.is_zero()) {
        Poly r = Poly::prem(x, y);
        x = std::move(y);
        y = r.primitive();
    }
    return x.monic();
}

inline Poly poly_lcm(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return Poly::exact_div(a * b, poly_gcd(a, b)).monic();
}

// Subresultant PRS (Collins); over Q the divisions are exact.
inline Rational resultant(const Poly& a0, const Poly& b0) {
    if (a0.is_zero() || b0.is_zero()) return 0;
    Poly a = a0, b = b0;
    Rational s = 1;
    if (a.degree() < b.degree()) {
        std::swap(a, b);
        if (a.degree() % 2 == 1 && b.degree() % 2 == 1) s = -s;
    }
    if (b.degree() == 0) return s * rpow(b.lead(), a.degree());
    Rational g = 1, h = 1;
    while (true) {
        int d = a.degree() - b.degree();
        if (a.degree() % 2 == 1 && b.degree() % 2 == 1) s = -s;
        Poly r = Poly::prem(a, b);
        a = b;
        b = (1 / (g * rpow(h, d))) * r;
        g = a.lead();
        h = rpow(h, 1 - d) * rpow(g, d);
        if (b.is_zero()) return 0;
        if (b.degree() == 0) {
            h = rpow(b.lead(), a.degree()) * rpow(h, 1 - a.degree());
            return s * h;
        }
    }
}

}  // namespace rf
