#pragma once

// Hypergeometric terms in (m, k): a constant times powers of affine factors,
// Gamma functions of affine arguments, a geometric factor and an optional
// polynomial factor. Shift ratios come out as reduced rational functions and
// integer points are evaluated exactly, including removable poles.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bipoly.hpp"
#include "exact_scalar.hpp"

namespace rf {

// am*m + ak*k + c
struct Affine {
    Rational am, ak, c;

    Rational at(const Rational& m, const Rational& k) const { return am * m + ak * k + c; }
    BiPoly poly() const { return BiPoly::affine(am, ak, c); }
};

// A value of the form lead * eps^order, the leading behaviour of F(m0, k0 + eps).
struct Leading {
    ExactScalar lead = 1;
    long order = 0;
    bool exact_zero = false;  // vanishes identically in eps

    Leading& operator*=(const Leading& o) {
        exact_zero = exact_zero || o.exact_zero;
        lead = lead * o.lead;
        order += o.order;
        return *this;
    }
    Leading pow(int e) const {
        Leading r;
        if (e < 0 && exact_zero) throw PoleError("reciprocal of an identically vanishing factor");
        r.exact_zero = exact_zero && e > 0;
        r.lead = e >= 0 ? lead.pow(e) : lead.inverse().pow(-e);
        r.order = order * e;
        return r;
    }
    // Value at eps = 0.
    ExactScalar value() const {
        if (exact_zero || order > 0) return {};
        if (order < 0) throw PoleError("hypergeometric term has a pole here");
        return lead;
    }
};

// Lowest-order term of p(m0, k0 + eps) for a bivariate polynomial.
inline Leading leading_of(const BiPoly& p, const Rational& m0, const Rational& k0) {
    Poly in_eps = p.at_m(m0).shift(k0);
    Leading l;
    if (in_eps.is_zero()) {
        l.exact_zero = true;
        l.lead = 0;
        return l;
    }
    int i = 0;
    while (in_eps[i] == 0) ++i;
    l.lead = ExactScalar(in_eps[i]);
    l.order = i;
    return l;
}

struct HyperTerm {
    std::string label;
    ExactScalar constant = 1;
    std::vector<std::pair<Affine, int>> linear;  // factor^exponent
    std::vector<std::pair<Affine, int>> gammas;  // Gamma(arg)^exponent
    BiPoly extra = BiPoly(1);                    // polynomial factor
    Rational geo_base = 1;                       // geo_base^(geo_m*m + geo_k*k)
    long geo_m = 0, geo_k = 0;
    Affine upper;         // K(m); upper.ak must be 0
    long min_m = 0;       // smallest m where the upper limit is valid
    bool natural_boundary = true;  // F(m,k) = 0 for k > K(m) and k < 0

    long upper_at(long m) const {
        Rational k = upper.at(m, 0);
        if (!is_integer(k)) throw ValidationError("upper limit is not an integer");
        return k.get_num().get_si();
    }

    // Leading behaviour of F(m0, k0 + eps).
    Leading leading(const Rational& m0, const Rational& k0) const {
        Leading acc;
        acc.lead = constant;
        for (const auto& [a, e] : linear) {
            Rational v = a.at(m0, k0);
            Leading f;
            if (v != 0) {
                f.lead = ExactScalar(v);
            } else if (a.ak != 0) {
                f.lead = ExactScalar(a.ak);
                f.order = 1;
            } else {
                f.exact_zero = true;
                f.lead = 0;
            }
            acc *= f.pow(e);
        }
        for (const auto& [a, e] : gammas) {
            Rational v = a.at(m0, k0);
            Leading f;
            if (v > 0 || !is_integer(v)) {
                if (!is_integer(2 * v)) throw ValidationError("Gamma argument is not a half-integer");
                f.lead = gamma_exact(v);
            } else {
                // Gamma(-n + a eps) ~ (-1)^n / (n! a eps)
                if (a.ak == 0) {
                    if (e > 0) throw PoleError("Gamma pole independent of k");
                    f.exact_zero = true;  // 1/Gamma at a pole vanishes identically
                    f.lead = 0;
                    acc *= f;
                    continue;
                }
                Rational nv = -v;
                long n = nv.get_num().get_si();
                mpz_class fact;
                mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(n));
                Rational c = Rational(n % 2 == 0 ? 1 : -1) / (Rational(fact) * a.ak);
                c.canonicalize();
                f.lead = ExactScalar(c);
                f.order = -1;
            }
            acc *= f.pow(e);
        }
        if (extra.degree_k() > 0 || !(extra == BiPoly(1))) acc *= leading_of(extra, m0, k0);
        if (geo_m != 0 || geo_k != 0) {
            Rational ex = geo_m * m0 + geo_k * k0;
            if (!is_integer(ex)) throw ValidationError("geometric exponent is not an integer");
            acc.lead = acc.lead * ExactScalar(rpow(geo_base, ex.get_num().get_si()));
        }
        return acc;
    }

    ExactScalar eval(long m, long k) const { return leading(m, k).value(); }

    // Sum over k = 0..K(m).
    ExactScalar sum(long m) const {
        ExactScalar s;
        long K = upper_at(m);
        for (long k = 0; k <= K; ++k) s += eval(m, k);
        return s;
    }

    // F(m,k+1)/F(m,k) and F(m+1,k)/F(m,k).
    RatFunc k_ratio() const { return shift_ratio(0, 1); }
    RatFunc m_ratio() const { return shift_ratio(1, 0); }

private:
    RatFunc shift_ratio(long dm, long dk) const {
        // Multiset of normalized factors; identical ones cancel before any gcd.
        std::map<std::string, std::pair<BiPoly, int>> fac;
        Rational scalar = 1;
        auto add = [&](const BiPoly& p, int e) {
            if (e == 0) return;
            BiPoly n = p.normalized();
            Rational s = p.lead() / n.lead();
            scalar *= e > 0 ? rpow(s, e) : 1 / rpow(s, -e);
            auto& slot = fac[n.str()];
            slot.first = n;
            slot.second += e;
        };
        auto shifted = [&](const Affine& a) {
            return Affine{a.am, a.ak, a.c + a.am * dm + a.ak * dk};
        };
        for (const auto& [a, e] : linear) {
            add(shifted(a).poly(), e);
            add(a.poly(), -e);
        }
        for (const auto& [a, e] : gammas) {
            Rational step = a.am * dm + a.ak * dk;
            if (!is_integer(step)) throw ValidationError("non-integer Gamma shift");
            long s = step.get_num().get_si();
            // Gamma(A+s)/Gamma(A) = prod_{i<s}(A+i), or 1/prod_{i=1..-s}(A-i)
            for (long i = 0; i < s; ++i) add(Affine{a.am, a.ak, a.c + i}.poly(), e);
            for (long i = 1; i <= -s; ++i) add(Affine{a.am, a.ak, a.c - i}.poly(), -e);
        }
        if (!(extra == BiPoly(1))) {
            add(extra.shift_m(dm).shift_k(dk), 1);
            add(extra, -1);
        }
        long gexp = geo_m * dm + geo_k * dk;
        if (gexp != 0) scalar *= rpow(geo_base, gexp);
        BiPoly num(scalar), den(1);
        for (const auto& [key, pe] : fac) {
            (void)key;
            if (pe.second > 0) num = num * pe.first.pow(static_cast<unsigned>(pe.second));
            if (pe.second < 0) den = den * pe.first.pow(static_cast<unsigned>(-pe.second));
        }
        return RatFunc(num, den);
    }
};

// Geometric fixture: F(m,k) = 2^k summed over k = 0..m, so f(m) = 2^(m+1) - 1.
inline HyperTerm geometric_fixture() {
    HyperTerm t;
    t.label = "geometric 2^k, k=0..m";
    t.geo_base = 2;
    t.geo_k = 1;
    t.upper = Affine{1, 0, 0};
    t.natural_boundary = false;
    return t;
}

}  // namespace rf
