#pragma once

#include <gmpxx.h>
#include <json.hpp>

#include <cmath>
#include <ostream>
#include <string>

#include "rational.hpp"
#include "squarefree.hpp"

namespace rf {

// q * pi^(h/2) * sqrt(r). Canonical: r is a squarefree positive integer and
// zero is (0, 0, 1). Addition only works inside one class (same h and r).
class ExactScalar {
public:
    ExactScalar() = default;
    ExactScalar(const Rational& q) : q_(q) { canonicalize_zero(); }  // NOLINT(implicit)
    ExactScalar(long v) : q_(v) {}                                    // NOLINT(implicit)

    // Builds q * pi^(h/2) * sqrt(r) for any positive rational r.
    static ExactScalar make(const Rational& q, int h, const Rational& r) {
        if (r <= 0) throw ValidationError("radicand must be positive");
        ExactScalar s;
        // sqrt(a/b) = sqrt(a*b)/b
        mpz_class ab = r.get_num() * r.get_den();
        SquareSplit sp = split_square(ab);
        s.q_ = q * Rational(sp.square_root, r.get_den());
        s.q_.canonicalize();
        s.h_ = h;
        s.r_ = sp.radicand;
        s.canonicalize_zero();
        return s;
    }

    static ExactScalar sqrt_of(const Rational& x) { return make(1, 0, x); }
    static ExactScalar pi_power(int h) { return make(1, h, 1); }

    const Rational& q() const { return q_; }
    int h() const { return h_; }
    const mpz_class& r() const { return r_; }

    bool is_zero() const { return q_ == 0; }
    bool is_rational() const { return h_ == 0 && r_ == 1; }
    int sign() const { return sgn(q_); }
    bool same_class(const ExactScalar& o) const { return h_ == o.h_ && r_ == o.r_; }

    friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
        return a.q_ == b.q_ && a.h_ == b.h_ && a.r_ == b.r_;
    }
    friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

    friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
        if (a.is_zero() || b.is_zero()) return {};
        ExactScalar s;
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), a.r_.get_mpz_t(), b.r_.get_mpz_t());
        // both radicands squarefree: r_a r_b = g^2 (r_a/g)(r_b/g), the cofactor is squarefree
        s.q_ = a.q_ * b.q_ * Rational(g);
        s.r_ = (a.r_ / g) * (b.r_ / g);
        s.h_ = a.h_ + b.h_;
        return s;
    }

    ExactScalar inverse() const {
        if (is_zero()) throw PoleError("division by exact zero");
        ExactScalar s;
        s.q_ = 1 / (q_ * Rational(r_));
        s.h_ = -h_;
        s.r_ = r_;
        return s;
    }

    friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) { return a * b.inverse(); }

    friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (!a.same_class(b)) {
            throw IncompatibleClassError("cannot add " + a.str() + " and " + b.str() +
                                         ": different pi-power or radicand");
        }
        ExactScalar s = a;
        s.q_ += b.q_;
        s.canonicalize_zero();
        return s;
    }

    ExactScalar operator-() const {
        ExactScalar s = *this;
        s.q_ = -s.q_;
        return s;
    }
    friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) { return a + (-b); }

    ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }
    ExactScalar& operator/=(const ExactScalar& o) { return *this = *this / o; }
    ExactScalar& operator+=(const ExactScalar& o) { return *this = *this + o; }
    ExactScalar& operator-=(const ExactScalar& o) { return *this = *this - o; }

    ExactScalar pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        ExactScalar r(1), b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    // Square root, defined when the result stays in the representable set.
    ExactScalar sqrt() const {
        if (sign() < 0) throw ValidationError("square root of a negative scalar");
        if (is_zero()) return {};
        if (r_ != 1 || h_ % 2 != 0) throw IncompatibleClassError("square root leaves the scalar classes: " + str());
        return make(1, h_ / 2, q_);
    }

    // Same-class ordering; throws for mixed classes rather than guessing.
    friend bool less_same_class(const ExactScalar& a, const ExactScalar& b) {
        if (a.is_zero() || b.is_zero() || a.same_class(b)) return a.q_ < b.q_;
        throw IncompatibleClassError("ordering across classes: " + a.str() + " vs " + b.str());
    }

    // Correctly rounded to within a couple of ulp: everything is carried in 256-bit mpf.
    double to_double() const {
        if (is_zero()) return 0.0;
        constexpr unsigned bits = 256;
        mpf_class num(q_.get_num(), bits), den(q_.get_den(), bits);
        mpf_class v(num / den, bits);
        if (r_ != 1) {
            mpf_class rr(r_, bits);
            v *= mpf_class(::sqrt(rr), bits);
        }
        if (h_ != 0) {
            static const mpf_class pi(
                "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899863",
                bits);
            static const mpf_class sqrt_pi = mpf_class(::sqrt(pi), bits);
            mpf_class f(1, bits);
            int e = h_ < 0 ? -h_ : h_;
            for (int i = 0; i < e; ++i) f *= sqrt_pi;
            if (h_ < 0) v /= f; else v *= f;
        }
        return v.get_d();
    }

    std::string str() const {
        std::string s = q_.get_str();
        if (h_ == 2) s += "*pi";
        else if (h_ % 2 == 0 && h_ != 0) s += "*pi^" + std::to_string(h_ / 2);
        else if (h_ != 0) s += "*pi^(" + std::to_string(h_) + "/2)";
        if (r_ != 1) s += "*sqrt(" + r_.get_str() + ")";
        return s;
    }

private:
    void canonicalize_zero() {
        if (q_ == 0) {
            h_ = 0;
            r_ = 1;
        }
    }

    Rational q_ = 0;
    int h_ = 0;
    mpz_class r_ = 1;
};

inline double to_float(const ExactScalar& a) { return a.to_double(); }
inline ExactScalar scalar_mul(const ExactScalar& a, const ExactScalar& b) { return a * b; }
inline ExactScalar scalar_add(const ExactScalar& a, const ExactScalar& b) { return a + b; }
inline double scalar_to_float(const ExactScalar& a) { return a.to_double(); }

inline std::ostream& operator<<(std::ostream& os, const ExactScalar& s) { return os << s.str(); }

inline void to_json(nlohmann::json& j, const ExactScalar& s) {
    j = nlohmann::json{{"q", to_fraction_string(s.q())}, {"h", s.h()}, {"r", to_fraction_string(Rational(s.r()))}};
}

inline void from_json(const nlohmann::json& j, ExactScalar& s) {
    s = ExactScalar::make(parse_rational(j.at("q").get<std::string>()), j.at("h").get<int>(),
                          parse_rational(j.at("r").get<std::string>()));
}

// Gamma at x = twice_x / 2. Integers give factorials, half-integers q*sqrt(pi);
// negative half-integers follow from Gamma(x) = Gamma(x+1)/x run downward.
inline ExactScalar gamma_exact(long twice_x) {
    if (twice_x % 2 == 0) {
        long n = twice_x / 2;
        if (n <= 0) throw PoleError("Gamma has a pole at " + std::to_string(n));
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n - 1));
        return ExactScalar(Rational(f));
    }
    // x = n + 1/2
    long n = (twice_x - 1) / 2;
    mpz_class f2n, fn, four = 4;
    if (n >= 0) {
        // Gamma(n + 1/2) = (2n)! / (4^n n!) sqrt(pi)
        mpz_fac_ui(f2n.get_mpz_t(), static_cast<unsigned long>(2 * n));
        mpz_fac_ui(fn.get_mpz_t(), static_cast<unsigned long>(n));
        mpz_class p4;
        mpz_pow_ui(p4.get_mpz_t(), four.get_mpz_t(), static_cast<unsigned long>(n));
        return ExactScalar::make(Rational(f2n, p4 * fn), 1, 1);
    }
    // Gamma(1/2 - k) = (-4)^k k! / (2k)! sqrt(pi), k = -n
    long k = -n;
    mpz_fac_ui(f2n.get_mpz_t(), static_cast<unsigned long>(2 * k));
    mpz_fac_ui(fn.get_mpz_t(), static_cast<unsigned long>(k));
    mpz_class p4;
    mpz_pow_ui(p4.get_mpz_t(), four.get_mpz_t(), static_cast<unsigned long>(k));
    Rational q(p4 * fn, f2n);
    q.canonicalize();
    if (k % 2) q = -q;
    return ExactScalar::make(q, 1, 1);
}

// Gamma of a rational argument that must be an integer or half-integer.
inline ExactScalar gamma_exact(const Rational& x) {
    Rational tx = 2 * x;
    if (!is_integer(tx)) throw ValidationError("gamma_exact needs a half-integer argument, got " + x.get_str());
    if (!tx.get_num().fits_slong_p()) throw ValidationError("gamma_exact argument out of range");
    return gamma_exact(tx.get_num().get_si());
}

}  // namespace rf
