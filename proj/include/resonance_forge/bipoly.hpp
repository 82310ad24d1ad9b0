#pragma once

// Polynomials in (m, k) stored as Q[m][k]: entry j is the coefficient of k^j,
// itself a polynomial in m. k is the distinguished variable.

#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "poly.hpp"

namespace rf {

class BiPoly {
public:
    BiPoly() = default;
    BiPoly(const Rational& c) : BiPoly(Poly(c)) {}  // NOLINT(implicit)
    BiPoly(long c) : BiPoly(Poly(c)) {}             // NOLINT(implicit)
    BiPoly(const Poly& in_m) {                       // NOLINT(implicit)
        if (!in_m.is_zero()) c_.push_back(in_m);
    }
    explicit BiPoly(std::vector<Poly> by_k) : c_(std::move(by_k)) { trim(); }

    static BiPoly m() { return BiPoly(Poly::x()); }
    static BiPoly k() { return BiPoly(std::vector<Poly>{Poly(), Poly(1)}); }
    // a*m + b*k + c
    static BiPoly affine(const Rational& a, const Rational& b, const Rational& c) {
        return BiPoly(std::vector<Poly>{Poly::linear(a, c), Poly(b)});
    }
    // Coefficient matrix indexed [deg m][deg k].
    static BiPoly from_matrix(const std::vector<std::vector<Rational>>& mk) {
        std::vector<Poly> by_k;
        for (size_t i = 0; i < mk.size(); ++i) {
            for (size_t j = 0; j < mk[i].size(); ++j) {
                if (by_k.size() <= j) by_k.resize(j + 1);
                by_k[j] += Poly::monomial(mk[i][j], static_cast<int>(i));
            }
        }
        return BiPoly(std::move(by_k));
    }

    bool is_zero() const { return c_.empty(); }
    int degree_k() const { return static_cast<int>(c_.size()) - 1; }
    int degree_m() const {
        int d = -1;
        for (const auto& p : c_) d = std::max(d, p.degree());
        return d;
    }
    const std::vector<Poly>& by_k() const { return c_; }
    Poly coeff_k(int j) const { return (j >= 0 && j < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(j)] : Poly(); }
    Rational coeff(int i_m, int j_k) const { return coeff_k(j_k)[i_m]; }
    Poly lead_k() const { return c_.empty() ? Poly() : c_.back(); }
    // Leading rational coefficient: lead in k, then lead in m.
    Rational lead() const { return lead_k().lead(); }

    std::vector<std::vector<Rational>> matrix() const {
        std::vector<std::vector<Rational>> mk(static_cast<size_t>(std::max(0, degree_m() + 1)),
                                              std::vector<Rational>(c_.size(), Rational(0)));
        for (size_t j = 0; j < c_.size(); ++j)
            for (int i = 0; i <= c_[j].degree(); ++i) mk[static_cast<size_t>(i)][j] = c_[j][i];
        return mk;
    }

    friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

    friend BiPoly operator+(const BiPoly& a, const BiPoly& b) {
        std::vector<Poly> v(std::max(a.c_.size(), b.c_.size()));
        for (size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
        return BiPoly(std::move(v));
    }
    BiPoly operator-() const {
        BiPoly r = *this;
        for (auto& p : r.c_) p = -p;
        return r;
    }
    friend BiPoly operator-(const BiPoly& a, const BiPoly& b) { return a + (-b); }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Poly> v(a.c_.size() + b.c_.size() - 1);
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
        }
        return BiPoly(std::move(v));
    }
    friend BiPoly operator*(const Poly& s, const BiPoly& p) {
        if (s.is_zero()) return {};
        BiPoly r = p;
        for (auto& x : r.c_) x = s * x;
        r.trim();
        return r;
    }
    BiPoly& operator+=(const BiPoly& o) { return *this = *this + o; }
    BiPoly& operator-=(const BiPoly& o) { return *this = *this - o; }
    BiPoly& operator*=(const BiPoly& o) { return *this = *this * o; }

    BiPoly pow(unsigned e) const {
        BiPoly r(1), b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    Rational eval(const Rational& m, const Rational& k) const {
        Rational r = 0;
        for (size_t i = c_.size(); i-- > 0;) r = r * k + c_[i].eval(m);
        return r;
    }
    double eval(double m, double k) const {
        double r = 0;
        for (size_t i = c_.size(); i-- > 0;) r = r * k + c_[i].eval(m);
        return r;
    }
    // Fix m, leaving a polynomial in k.
    Poly at_m(const Rational& m) const {
        std::vector<Rational> v;
        v.reserve(c_.size());
        for (const auto& p : c_) v.push_back(p.eval(m));
        return Poly(std::move(v));
    }
    // Substitute k = a*m + b, leaving a polynomial in m.
    Poly at_k_affine(const Rational& a, const Rational& b) const {
        Poly r, lin = Poly::linear(a, b);
        for (size_t i = c_.size(); i-- > 0;) r = r * lin + c_[i];
        return r;
    }
    Poly at_k(const Rational& k) const { return at_k_affine(0, k); }

    // p(m, k + s)
    BiPoly shift_k(const Rational& s) const {
        BiPoly r, lin = affine(0, 1, s);
        for (size_t i = c_.size(); i-- > 0;) r = r * lin + BiPoly(c_[i]);
        return r;
    }
    // p(m + s, k)
    BiPoly shift_m(const Rational& s) const {
        BiPoly r = *this;
        for (auto& p : r.c_) p = p.shift(s);
        return r;
    }

    // Monic gcd in Q[m] of the k-coefficients.
    Poly content_m() const {
        if (is_zero()) return {};
        Poly g;
        for (const auto& p : c_) {
            if (p.is_zero()) continue;
            g = g.is_zero() ? p.monic() : poly_gcd(g, p);
            if (g.degree() == 0) break;
        }
        return g;
    }
    // Positive rational with p / c having coprime integer coefficients.
    Rational content_q() const {
        mpz_class g = 0, l = 1;
        for (const auto& p : c_) {
            for (const auto& x : p.coeffs()) {
                if (x == 0) continue;
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num().get_mpz_t());
                mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
            }
        }
        return g == 0 ? Rational(0) : make_rational(g, l);
    }
    // Divided by its m-content and rational content; sign makes lead() positive.
    BiPoly primitive() const {
        if (is_zero()) return {};
        Poly cm = content_m();
        BiPoly r = divide_by_m(cm);
        Rational q = r.content_q();
        if (r.lead() < 0) q = -q;
        return Poly(1 / q) * r;
    }
    // Rational scale only: coprime integer coefficients, lead() positive.
    BiPoly normalized() const {
        if (is_zero()) return {};
        Rational q = content_q();
        if (lead() < 0) q = -q;
        return Poly(1 / q) * *this;
    }
    BiPoly divide_by_m(const Poly& d) const {
        BiPoly r = *this;
        for (auto& p : r.c_) p = Poly::exact_div(p, d);
        return r;
    }

    // lead_k(b)^(deg a - deg b + 1) * a reduced modulo b in k.
    static BiPoly prem(const BiPoly& a, const BiPoly& b) {
        if (b.is_zero()) throw ValidationError("pseudo-division by zero");
        BiPoly r = a;
        int db = b.degree_k();
        Poly lb = b.lead_k();
        int e = a.degree_k() - db + 1;
        while (!r.is_zero() && r.degree_k() >= db) {
            int s = r.degree_k() - db;
            std::vector<Poly> mono(static_cast<size_t>(s) + 1);
            mono.back() = r.lead_k();
            r = lb * r - BiPoly(std::move(mono)) * b;
            --e;
        }
        if (e > 0) r = lb.pow(static_cast<unsigned>(e)) * r;
        return r;
    }

    // Exact quotient a / b; throws if b does not divide a.
    static BiPoly exact_div(const BiPoly& a, const BiPoly& b) {
        if (b.is_zero()) throw ValidationError("division by zero polynomial");
        BiPoly r = a;
        std::vector<Poly> q(static_cast<size_t>(std::max(0, a.degree_k() - b.degree_k() + 1)));
        Poly lb = b.lead_k();
        while (!r.is_zero()) {
            int s = r.degree_k() - b.degree_k();
            if (s < 0) throw Error("inexact bivariate division");
            Poly t = Poly::exact_div(r.lead_k(), lb);
            q[static_cast<size_t>(s)] = t;
            std::vector<Poly> mono(static_cast<size_t>(s) + 1);
            mono.back() = t;
            r = r - BiPoly(std::move(mono)) * b;
        }
        return BiPoly(std::move(q));
    }

    std::string str() const;

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Poly> c_;
};

inline std::string BiPoly::str() const {
    if (is_zero()) return "0";
    std::string s;
    for (int j = degree_k(); j >= 0; --j) {
        const Poly& p = c_[static_cast<size_t>(j)];
        if (p.is_zero()) continue;
        if (!s.empty()) s += " + ";
        s += "(" + p.str("m") + ")";
        if (j > 0) s += "*k" + (j > 1 ? "^" + std::to_string(j) : std::string());
    }
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const BiPoly& p) { return os << p.str(); }

namespace detail {

// Newton interpolation through (xs[i], ys[i]).
inline Poly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
    std::vector<Rational> c = ys;
    size_t n = xs.size();
    for (size_t j = 1; j < n; ++j)
        for (size_t i = n - 1; i >= j; --i) c[i] = (c[i] - c[i - 1]) / (xs[i] - xs[i - j]);
    Poly r;
    for (size_t i = n; i-- > 0;) r = r * Poly::linear(1, -xs[i]) + Poly(c[i]);
    return r;
}

inline bool divides(const BiPoly& d, const BiPoly& a) {
    try {
        (void)BiPoly::exact_div(a, d);
        return true;
    } catch (const Error&) {
        return false;
    }
}

// Primitive PRS in k; fine for small inputs, slow once coefficients swell.
inline BiPoly gcd_prs(BiPoly x, BiPoly y) {
    if (x.degree_k() < y.degree_k()) std::swap(x, y);
    while (!y.is_zero() && y.degree_k() > 0) {
        BiPoly r = BiPoly::prem(x, y);
        x = std::move(y);
        y = r.primitive();
    }
    return y.is_zero() ? x : BiPoly(1);
}

// gcd of two m-primitive polynomials by specializing m, taking univariate
// gcds in k and interpolating; the candidate is confirmed by exact division.
inline std::optional<BiPoly> gcd_interpolate(const BiPoly& x, const BiPoly& y) {
    Poly lx = x.lead_k(), ly = y.lead_k();
    auto usable = [&](const Rational& m0) { return lx.eval(m0) != 0 && ly.eval(m0) != 0; };
    // degree of the gcd in k: minimum over a few specializations
    int d = std::min(x.degree_k(), y.degree_k());
    for (Rational m0 : {make_rational(7, 3), make_rational(29, 11), make_rational(-53, 17)}) {
        if (!usable(m0)) continue;
        d = std::min(d, poly_gcd(x.at_m(m0), y.at_m(m0)).degree());
    }
    if (d == 0) return BiPoly(1);
    Poly gamma = poly_gcd(lx, ly);
    int n = gamma.degree() + std::min(x.degree_m(), y.degree_m()) + 1;
    std::vector<Rational> xs;
    std::vector<std::vector<Rational>> cols(static_cast<size_t>(d) + 1);
    for (long t = 1; static_cast<int>(xs.size()) < n; ++t) {
        if (t > 100L * n + 100) return std::nullopt;
        Rational m0 = t;
        if (!usable(m0)) continue;
        Poly g = poly_gcd(x.at_m(m0), y.at_m(m0));
        if (g.degree() != d) continue;  // unlucky point
        Rational s = gamma.eval(m0);
        xs.push_back(m0);
        for (int j = 0; j <= d; ++j) cols[static_cast<size_t>(j)].push_back(s * g[j]);
    }
    std::vector<Poly> by_k;
    for (const auto& c : cols) by_k.push_back(interpolate(xs, c));
    BiPoly g = BiPoly(std::move(by_k)).primitive();
    if (g.degree_k() != d || !divides(g, x) || !divides(g, y)) return std::nullopt;
    return g;
}

}  // namespace detail

// gcd in Q[m][k]: content gcd in Q[m] times the gcd of the primitive parts,
// normalized to coprime integer coefficients and a positive lead.
inline BiPoly bipoly_gcd(const BiPoly& a, const BiPoly& b) {
    if (a.is_zero()) return b.normalized();
    if (b.is_zero()) return a.normalized();
    Poly c = poly_gcd(a.content_m(), b.content_m());
    BiPoly x = a.primitive(), y = b.primitive();
    BiPoly g(1);
    if (x.degree_k() > 0 && y.degree_k() > 0) {
        auto fast = detail::gcd_interpolate(x, y);
        g = fast ? *fast : detail::gcd_prs(x, y);
    }
    return (c * g).normalized();
}

inline void to_json(nlohmann::json& j, const BiPoly& p) {
    j = nlohmann::json::array();
    for (const auto& row : p.matrix()) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& x : row) r.push_back(to_fraction_string(x));
        j.push_back(r);
    }
}

// num/den with gcd removed; den primitive with positive leading coefficient.
class RatFunc {
public:
    RatFunc() : num_(), den_(1) {}
    RatFunc(const BiPoly& n) : num_(n), den_(1) {}  // NOLINT(implicit)
    RatFunc(const BiPoly& n, const BiPoly& d) : num_(n), den_(d) { reduce(); }

    const BiPoly& num() const { return num_; }
    const BiPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        // Cross-cancel first so the products stay small.
        BiPoly g1 = bipoly_gcd(a.num_, b.den_), g2 = bipoly_gcd(b.num_, a.den_);
        RatFunc r;
        r.num_ = BiPoly::exact_div(a.num_, g1) * BiPoly::exact_div(b.num_, g2);
        r.den_ = BiPoly::exact_div(a.den_, g2) * BiPoly::exact_div(b.den_, g1);
        r.normalize_scale();
        return r;
    }
    RatFunc inverse() const {
        if (is_zero()) throw PoleError("inverse of zero rational function");
        RatFunc r;
        r.num_ = den_;
        r.den_ = num_;
        r.normalize_scale();
        return r;
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
        BiPoly g = bipoly_gcd(a.den_, b.den_);
        BiPoly ad = BiPoly::exact_div(a.den_, g), bd = BiPoly::exact_div(b.den_, g);
        return RatFunc(a.num_ * bd + b.num_ * ad, ad * b.den_);
    }
    RatFunc operator-() const {
        RatFunc r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

    RatFunc shift_k(const Rational& s) const {
        RatFunc r;
        r.num_ = num_.shift_k(s);
        r.den_ = den_.shift_k(s);
        r.normalize_scale();
        return r;
    }
    RatFunc shift_m(const Rational& s) const {
        RatFunc r;
        r.num_ = num_.shift_m(s);
        r.den_ = den_.shift_m(s);
        r.normalize_scale();
        return r;
    }

    Rational eval(const Rational& m, const Rational& k) const {
        Rational d = den_.eval(m, k);
        if (d == 0) throw PoleError("rational function pole");
        return num_.eval(m, k) / d;
    }
    double eval(double m, double k) const { return num_.eval(m, k) / den_.eval(m, k); }

    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

private:
    void reduce() {
        if (den_.is_zero()) throw PoleError("rational function with zero denominator");
        if (num_.is_zero()) {
            den_ = BiPoly(1);
            return;
        }
        BiPoly g = bipoly_gcd(num_, den_);
        num_ = BiPoly::exact_div(num_, g);
        den_ = BiPoly::exact_div(den_, g);
        normalize_scale();
    }
    void normalize_scale() {
        if (num_.is_zero()) {
            den_ = BiPoly(1);
            return;
        }
        Rational q = den_.content_q();
        if (den_.lead() < 0) q = -q;
        Poly s(1 / q);
        num_ = s * num_;
        den_ = s * den_;
    }
    BiPoly num_;
    BiPoly den_;
};

}  // namespace rf
