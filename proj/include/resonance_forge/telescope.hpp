#pragma once

// Gosper normal form, Zeilberger's creative telescoping for sums
// f(m) = sum_{k=0}^{K(m)} F(m,k), certificate and boundary verification, and
// the exact recurrence / monotonicity checks for the diagonal coefficients.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "closed_forms.hpp"
#include "coefficients.hpp"
#include "hyperterm.hpp"
#include "nullspace.hpp"

namespace rf {

// ---------------------------------------------------------------------------
// Summands of the diagonal sums: f(m) = C_00mm / omega_m^2 = sum_k F(m,k).

inline HyperTerm term_for_diag(const ModelConfig& cfg) {
    HyperTerm t;
    const long d = cfg.delta;
    auto half = [](long twice) { return make_rational(twice, 2); };
    auto G = [&](Rational am, Rational ak, Rational c, int e) { t.gammas.push_back({Affine{am, ak, c}, e}); };
    auto L = [&](Rational am, Rational ak, Rational c, int e) { t.linear.push_back({Affine{am, ak, c}, e}); };
    if (cfg.model == Model::KG) {
        t.label = "kg diagonal, delta=" + std::to_string(d);
        t.constant = gamma_exact(2 * d + 2) * gamma_exact(4 * d - 3) / (ExactScalar::pi_power(4) * gamma_exact(2 * d - 1));
        L(0, -4, 5 - 4 * d, 1);
        L(2, 0, d, -1);  // (d+2m) / omega_m^2
        G(0, 1, d - 1, 1);
        G(0, 1, half(4 * d - 5), 1);
        G(0, 1, half(2 * d - 1), -1);
        G(0, 1, 2 * d - 2, -1);
        G(0, 1, 2 * d - 1, -1);
        G(0, 1, half(-1), 1);
        G(0, 1, half(1), 1);
        G(0, 1, 1, -1);
        G(2, -1, half(3), 1);
        G(2, 1, 2 * d - 1, 1);
        G(2, -1, 2, -1);
        G(2, 1, half(4 * d - 1), -1);
        t.upper = Affine{2, 0, 1};
        t.min_m = 0;
    } else {
        t.label = "wm diagonal, delta=" + std::to_string(d);
        t.constant = ExactScalar(2 * (d + 1) * (d + 2)) * gamma_exact(2 * d).pow(2);
        L(2, -2, 2 * d + 1, 1);
        L(2, 0, d + 2, -1);
        t.extra = wm_V(d);
        G(0, 1, 1, -1);
        G(0, 1, 3, -1);
        G(1, 0, 1, 1);
        G(1, 0, 2, 1);
        G(0, -1, d, -1);
        G(0, -1, d + 2, -1);
        G(1, -1, 1, -1);
        G(1, -1, 2, -1);
        G(1, 0, d + 1, -1);
        G(1, 0, d + 2, -1);
        G(1, -1, 2 * d, 1);
        G(1, -1, 2 * d + 1, 1);
        G(2, -1, 2 * d + 2, -1);
        G(2, -1, d, 1);
        G(2, -1, d + 2, 1);
        G(2, -1, 2 * d + 4, -1);
        // 1/Gamma(d-k) kills k >= d, so K = d-1 is exact for every m >= 0.
        t.upper = Affine{0, 0, d - 1};
        t.min_m = 0;
    }
    return t;
}

// ---------------------------------------------------------------------------
// Gosper normal form

struct GosperForm {
    BiPoly p1, p2, p3;
    std::vector<long> shifts;  // integer shifts j that were removed
};

namespace detail {

// Fujiwara bound on the absolute value of the roots.
inline double root_bound(const Poly& p) {
    if (p.degree() <= 0) return 0;
    double lead = std::fabs(p.lead().get_d()), b = 0;
    int n = p.degree();
    for (int i = 1; i <= n; ++i) {
        double c = std::fabs(p[n - i].get_d()) / lead;
        if (i == n) c /= 2;
        b = std::max(b, std::pow(c, 1.0 / i));
    }
    return 2 * b;
}

// Specializations of m used to locate candidate shifts.
inline const std::vector<Rational>& probe_points() {
    static const std::vector<Rational> pts = {make_rational(7, 3), make_rational(29, 11)};
    return pts;
}

// Nonnegative integers j with resultant(a(k), b(k+j)) = 0 at every probe point.
inline std::vector<long> shift_candidates(const BiPoly& a, const BiPoly& b) {
    std::vector<long> out;
    if (a.degree_k() <= 0 || b.degree_k() <= 0) return out;
    const auto& pts = probe_points();
    std::vector<Poly> as, bs;
    double bound = 0;
    for (const auto& m0 : pts) {
        as.push_back(a.at_m(m0));
        bs.push_back(b.at_m(m0));
        bound = std::max(bound, detail::root_bound(as.back()) + detail::root_bound(bs.back()));
    }
    long jmax = static_cast<long>(std::ceil(bound)) + 1;
    for (long j = 0; j <= jmax; ++j) {
        bool all = true;
        for (size_t i = 0; i < pts.size() && all; ++i) all = resultant(as[i], bs[i].shift(j)) == 0;
        if (all) out.push_back(j);
    }
    return out;
}

}  // namespace detail

// r/s = (p1(k+1)/p1(k)) (p2(k)/p3(k)) with gcd(p2(k), p3(k+j)) = 1 for j >= 0.
inline GosperForm gosper_form(const RatFunc& ratio) {
    GosperForm g;
    g.p1 = BiPoly(1);
    g.p2 = ratio.num();
    g.p3 = ratio.den();
    for (long j : detail::shift_candidates(g.p2, g.p3)) {
        while (true) {
            BiPoly c = bipoly_gcd(g.p2, g.p3.shift_k(j));
            if (c.degree_k() <= 0) break;
            g.p2 = BiPoly::exact_div(g.p2, c);
            g.p3 = BiPoly::exact_div(g.p3, c.shift_k(-j));
            for (long i = 1; i <= j; ++i) g.p1 = g.p1 * c.shift_k(-i);
            if (g.shifts.empty() || g.shifts.back() != j) g.shifts.push_back(j);
        }
    }
    // Keep p1 and p3 scale-free; the rational scale rides on p2.
    Rational s1 = g.p1.lead() / g.p1.normalized().lead();
    Rational s3 = g.p3.lead() / g.p3.normalized().lead();
    g.p1 = g.p1.normalized();
    g.p3 = g.p3.normalized();
    g.p2 = Poly(1 / s3) * g.p2;
    (void)s1;  // p1(k+1)/p1(k) is scale invariant
    return g;
}

// resultant(p2(k), p3(k+j)) != 0 at the probe points for j in [0, j_max].
inline bool shift_coprime(const GosperForm& g, long j_max) {
    for (const auto& m0 : detail::probe_points()) {
        Poly a = g.p2.at_m(m0), b = g.p3.at_m(m0);
        if (a.degree() <= 0 || b.degree() <= 0) continue;
        for (long j = 0; j <= j_max; ++j)
            if (resultant(a, b.shift(j)) == 0) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Zeilberger

namespace detail {

inline constexpr long kIdenticallyZero = 1L << 20;

// Orders of vanishing in eps at k = T(m) + eps, for generic m.
// p(m, a*m + b + eps) as a polynomial in (m, eps); returns the lowest eps order.
inline long bipoly_order_at(const BiPoly& p, const Affine& T) {
    if (p.is_zero()) return kIdenticallyZero;
    BiPoly lin = BiPoly::affine(T.am, 1, T.c), r;
    for (int i = p.degree_k(); i >= 0; --i) r = r * lin + BiPoly(p.coeff_k(i));
    int i = 0;
    while (r.coeff_k(i).is_zero()) ++i;
    return i;
}

inline long term_order_at(const HyperTerm& t, const Affine& T) {
    long ord = 0;
    for (const auto& [a, e] : t.linear) {
        Rational mc = a.am + a.ak * T.am, c = a.c + a.ak * T.c;
        if (mc == 0 && c == 0) {
            if (a.ak == 0) return e > 0 ? kIdenticallyZero : -kIdenticallyZero;
            ord += e;
        }
    }
    for (const auto& [a, e] : t.gammas) {
        Rational mc = a.am + a.ak * T.am, c = a.c + a.ak * T.c;
        if (mc == 0 && c <= 0 && is_integer(c)) {
            if (a.ak == 0) return e < 0 ? kIdenticallyZero : -kIdenticallyZero;
            ord -= e;
        }
    }
    if (!(t.extra == BiPoly(1))) ord += bipoly_order_at(t.extra, T);
    return ord;
}

}  // namespace detail

struct TelescopeResult {
    int order = 0;
    std::vector<Poly> alphas;  // primitive; highest nonzero alpha has positive lead
    BiPoly b_num;              // b(k) = b_num(m,k) / b_den(m)
    Poly b_den = Poly(1);
    RatFunc certificate;       // G(m,k) = R(m,k) F(m,k)
    GosperForm gosper;
    int degree_bound = 0;      // Gosper bound before slack
    int b_degree = 0;          // degree actually searched
    bool homogeneous = true;
    Affine boundary_T;         // G evaluated at k = T(m) = K(m+J)+1 and k = 0
    long upper_order = 0, lower_order = 0;
    // True when both boundary values of G vanish identically and the sum
    // needs no tail correction.
    bool boundary_zero = false;
};

namespace detail {

inline std::vector<Poly> bipoly_rows(const BiPoly& p, int rows) {
    std::vector<Poly> v(static_cast<size_t>(rows));
    for (int r = 0; r <= p.degree_k(); ++r) v[static_cast<size_t>(r)] = p.coeff_k(r);
    return v;
}

inline BiPoly k_power(const Rational& shift, int i) { return BiPoly::affine(0, 1, shift).pow(static_cast<unsigned>(i)); }

struct Prepared {
    std::vector<RatFunc> u;  // F(m+j,k)/F(m,k)
    BiPoly D;
    std::vector<BiPoly> N;   // u_j = N_j / D
    RatFunc k_ratio;
};

inline Prepared prepare(const HyperTerm& term, int J) {
    Prepared pr;
    RatFunc mr = term.m_ratio();
    pr.k_ratio = term.k_ratio();
    pr.u.push_back(RatFunc(BiPoly(1)));
    for (int j = 1; j <= J; ++j) pr.u.push_back(pr.u.back() * mr.shift_m(j - 1));
    pr.D = BiPoly(1);
    for (const auto& u : pr.u) {
        BiPoly g = bipoly_gcd(pr.D, u.den());
        pr.D = BiPoly::exact_div(pr.D, g) * u.den();
    }
    pr.D = pr.D.normalized();
    for (const auto& u : pr.u) pr.N.push_back(u.num() * BiPoly::exact_div(pr.D, u.den()));
    return pr;
}

}  // namespace detail

struct ZeilbergerOptions {
    int j_min = 0;            // smallest order tried
    bool homogeneous = true;  // require G(m,0) = G(m,T) = 0 identically
};

namespace detail {

struct OrderSetup {
    Prepared pr;
    GosperForm gf;
    BiPoly p3s;                    // p3(k-1)
    std::vector<BiPoly> cols_alpha;
    int bound = 0;                 // Gosper degree bound for b
    long lower_base = 0;           // order of G(m,0)/b(0) in eps
};

inline OrderSetup setup_order(const HyperTerm& term, int J) {
    OrderSetup s;
    s.pr = prepare(term, J);
    RatFunc rs(s.pr.k_ratio.num() * s.pr.D, s.pr.k_ratio.den() * s.pr.D.shift_k(1));
    s.gf = gosper_form(rs);
    s.p3s = s.gf.p3.shift_k(-1);
    int deg_p = -1;
    for (const auto& n : s.pr.N) {
        s.cols_alpha.push_back(-(s.gf.p1 * n));
        deg_p = std::max(deg_p, s.cols_alpha.back().degree_k());
    }
    int d2 = s.gf.p2.degree_k(), d3 = s.p3s.degree_k();
    if (d2 != d3 || s.gf.p2.lead_k() != s.p3s.lead_k()) {
        s.bound = deg_p - std::max(d2, d3);
    } else {
        // leading terms cancel; a second candidate comes from the next coefficient
        s.bound = deg_p - d2 + 1;
        Poly diff = s.p3s.coeff_k(d3 - 1) - s.gf.p2.coeff_k(d2 - 1);
        auto [q, r] = Poly::divmod(diff, s.gf.p2.lead_k());
        if (r.is_zero() && q.degree() <= 0 && is_integer(q[0]) && q[0] >= 0)
            s.bound = std::max(s.bound, static_cast<int>(q[0].get_num().get_si()));
    }
    Affine zero{0, 0, 0};
    s.lower_base = term_order_at(term, zero) + bipoly_order_at(s.p3s, zero) - bipoly_order_at(s.gf.p1 * s.pr.D, zero);
    return s;
}

// Nullspace vectors with a nonzero alpha part for b of degree nb.
inline std::vector<PolyVector> telescoper_space(const OrderSetup& s, int J, int nb, bool homogeneous) {
    std::vector<BiPoly> cols = s.cols_alpha;
    for (int i = 0; i <= nb; ++i) cols.push_back(s.gf.p2 * k_power(1, i) - s.p3s * k_power(0, i));
    int rows = 0;
    for (const auto& c : cols) rows = std::max(rows, c.degree_k() + 1);
    PolyMatrix M(static_cast<size_t>(rows), std::vector<Poly>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) {
        auto v = bipoly_rows(cols[c], rows);
        for (int r = 0; r < rows; ++r) M[static_cast<size_t>(r)][c] = v[static_cast<size_t>(r)];
    }
    // G(m,0) = 0: b must vanish at k = 0 to the order left over by F and R.
    if (homogeneous && s.lower_base < kIdenticallyZero / 2) {
        for (long i = 0; i <= -s.lower_base && i <= nb; ++i) {
            std::vector<Poly> row(cols.size());
            row[static_cast<size_t>(J + 1 + i)] = Poly(1);
            M.push_back(row);
        }
    }
    std::vector<PolyVector> out;
    for (auto& v : solve_nullspace(M)) {
        bool nonzero = false;
        for (int j = 0; j <= J; ++j) nonzero = nonzero || !v[static_cast<size_t>(j)].is_zero();
        if (nonzero) out.push_back(std::move(v));
    }
    return out;
}

inline TelescopeResult make_result(const HyperTerm& term, const OrderSetup& s, int J, int nb, const PolyVector& v,
                                   bool homogeneous) {
    // Normalize the alphas: primitive over Z[m], highest nonzero alpha positive.
    std::vector<Poly> alphas(v.begin(), v.begin() + J + 1);
    std::vector<Poly> tmp = alphas;
    make_primitive(tmp);
    size_t idx = 0;
    while (alphas[idx].is_zero()) ++idx;
    Poly g = Poly::exact_div(alphas[idx], tmp[idx]);  // alphas = g * tmp
    for (size_t j = static_cast<size_t>(J) + 1; j-- > 0;) {
        if (tmp[j].is_zero()) continue;
        if (tmp[j].lead() < 0) {
            for (auto& p : tmp) p = -p;
            g = -g;
        }
        break;
    }
    TelescopeResult res;
    res.order = J;
    res.alphas = tmp;
    res.gosper = s.gf;
    res.degree_bound = s.bound;
    res.b_degree = nb;
    res.homogeneous = homogeneous;
    res.b_num = BiPoly(std::vector<Poly>(v.begin() + J + 1, v.end()));
    res.b_den = g;
    // R = p3(k-1) b(k) / (p1(k) D(k))
    res.certificate = RatFunc(s.p3s * res.b_num, s.gf.p1 * s.pr.D * BiPoly(res.b_den));
    Rational T_am = term.upper.am, T_c = term.upper.c + term.upper.am * J + 1;
    res.boundary_T = Affine{T_am, 0, T_c};
    auto order_G = [&](const Affine& at) {
        if (res.certificate.is_zero()) return kIdenticallyZero;
        return term_order_at(term, at) + bipoly_order_at(res.certificate.num(), at) -
               bipoly_order_at(res.certificate.den(), at);
    };
    res.upper_order = order_G(Affine{T_am, 1, T_c});
    res.lower_order = order_G(Affine{0, 1, 0});
    res.boundary_zero = term.natural_boundary && res.upper_order > 0 && res.lower_order > 0;
    return res;
}

}  // namespace detail

// Smallest order J in [j_min, j_max], then smallest degree of b up to the
// Gosper bound plus slack. With several solutions at that degree the first
// nullspace basis vector is taken, which is deterministic.
inline TelescopeResult zeilberger(const HyperTerm& term, int j_max = 4, int degree_slack = 2, ZeilbergerOptions opt = {}) {
    if (j_max < 0 || j_max > 4) throw ValidationError("j_max must lie in [0, 4]");
    if (opt.j_min < 0 || opt.j_min > j_max) throw ValidationError("j_min must lie in [0, j_max]");
    if (degree_slack < 0) throw ValidationError("degree slack must be nonnegative");
    if (opt.homogeneous && !term.natural_boundary) throw ValidationError("homogeneous mode needs a natural boundary");
    for (int J = opt.j_min; J <= j_max; ++J) {
        detail::OrderSetup s = detail::setup_order(term, J);
        int top = std::max(s.bound, 0) + degree_slack;
        for (int nb = 0; nb <= top; ++nb) {
            auto space = detail::telescoper_space(s, J, nb, opt.homogeneous);
            for (const auto& v : space) {
                TelescopeResult res = detail::make_result(term, s, J, nb, v, opt.homogeneous);
                if (opt.homogeneous && !res.boundary_zero) continue;
                return res;
            }
        }
    }
    throw NoRecurrenceFound("no telescoping recurrence of order <= " + std::to_string(j_max) + " with degree slack " +
                            std::to_string(degree_slack));
}

// ---------------------------------------------------------------------------
// Verification

struct CertificateReport {
    bool identity_holds = false;
    int spot_checks = 0;
    double max_relative_residual = 0;
};

// Sum_j alpha_j F(m+j,k) - G(m,k+1) + G(m,k), divided by F(m,k) and cleared of
// denominators; must vanish as a polynomial in (m, k).
inline CertificateReport verify_certificate(const HyperTerm& term, const TelescopeResult& res, unsigned seed = 12345) {
    const int J = res.order;
    if (static_cast<int>(res.alphas.size()) != J + 1) throw ValidationError("alphas do not match the order");
    detail::Prepared pr = detail::prepare(term, J);
    const BiPoly& A = res.certificate.num();
    const BiPoly& B = res.certificate.den();
    BiPoly A1 = A.shift_k(1), B1 = B.shift_k(1);
    const BiPoly& r = pr.k_ratio.num();
    const BiPoly& s = pr.k_ratio.den();
    BiPoly sum;
    for (int j = 0; j <= J; ++j) sum = sum + BiPoly(res.alphas[static_cast<size_t>(j)]) * pr.N[static_cast<size_t>(j)];
    BiPoly E = sum * B * B1 * s - A1 * r * pr.D * B + A * pr.D * B1 * s;
    if (!E.is_zero()) {
        for (long m = 1; m <= 60; ++m)
            for (long k = 0; k <= 60; ++k)
                if (E.eval(Rational(m), Rational(k)) != 0)
                    throw CertificateInvalid("telescoping identity fails at (m,k) = (" + std::to_string(m) + "," +
                                             std::to_string(k) + ")");
        throw CertificateInvalid("telescoping identity fails as a polynomial identity");
    }
    CertificateReport rep;
    rep.identity_holds = true;

    // Spot checks straight from the shift ratios at random rational points,
    // evaluated exactly: degree-20 polynomials cancel badly in double.
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> den_d(1, 8), num_d(8, 320);
    RatFunc mr = term.m_ratio();
    while (rep.spot_checks < 200) {
        long q = den_d(rng);
        Rational m(num_d(rng) % (40 * q) + q, q), k(num_d(rng) % (40 * q), q);
        m.canonicalize();
        k.canonicalize();
        Rational lhs = 0, u = 1, scale = 0;
        bool bad = false;
        for (int j = 0; j <= J && !bad; ++j) {
            if (j > 0) {
                Rational den = mr.den().eval(m + j - 1, k);
                if (den == 0) {
                    bad = true;
                    break;
                }
                u *= mr.num().eval(m + j - 1, k) / den;
            }
            Rational t = res.alphas[static_cast<size_t>(j)].eval(m) * u;
            lhs += t;
            scale = std::max(scale, Rational(abs(t)));
        }
        Rational Bk = B.eval(m, k), Bk1 = B.eval(m, k + 1), sk = s.eval(m, k);
        if (bad || Bk == 0 || Bk1 == 0 || sk == 0) continue;
        Rational g1 = A.eval(m, k + 1) / Bk1 * r.eval(m, k) / sk, g0 = A.eval(m, k) / Bk;
        scale = std::max({scale, Rational(abs(g1)), Rational(abs(g0))});
        double rel = scale > 0 ? Rational(abs(lhs - g1 + g0) / scale).get_d() : 0;
        rep.max_relative_residual = std::max(rep.max_relative_residual, rel);
        if (!(rel <= 1e-8)) {
            std::ostringstream os;
            os << "spot check fails at (m,k) = (" << m << "," << k << "), residual " << rel;
            throw CertificateInvalid(os.str());
        }
        ++rep.spot_checks;
    }
    return rep;
}

// G(m0, k0) exactly, removable singularities included.
inline ExactScalar certificate_value(const HyperTerm& term, const TelescopeResult& res, long m0, long k0) {
    Leading l = term.leading(m0, k0);
    if (res.certificate.is_zero()) return {};
    Leading n = leading_of(res.certificate.num(), m0, k0), d = leading_of(res.certificate.den(), m0, k0);
    l *= n;
    l *= d.pow(-1);
    return l.value();
}

// The recurrence's right-hand side at m: sum_j alpha_j(m) f(m+j).
// Equals G(m,T) - G(m,0) minus the tails sum_{k=K(m+j)+1}^{T-1} alpha_j F(m+j,k).
inline ExactScalar boundary_check(const HyperTerm& term, const TelescopeResult& res, long m) {
    long T = res.boundary_T.at(m, 0).get_num().get_si();
    ExactScalar v = certificate_value(term, res, m, T) - certificate_value(term, res, m, 0);
    for (int j = 0; j <= res.order; ++j) {
        const Poly& a = res.alphas[static_cast<size_t>(j)];
        Rational aj = a.eval(Rational(m));
        if (aj == 0) continue;
        for (long k = term.upper_at(m + j) + 1; k < T; ++k) v -= ExactScalar(aj) * term.eval(m + j, k);
    }
    return v;
}

inline nlohmann::json telescope_to_json(const TelescopeResult& r) {
    nlohmann::json j;
    j["order"] = r.order;
    auto coeffs = [](const Poly& p) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& c : p.coeffs()) a.push_back(to_fraction_string(c));
        return a;
    };
    j["alphas"] = nlohmann::json::array();
    for (const auto& a : r.alphas) j["alphas"].push_back(coeffs(a));
    j["b"]["numerator"] = nlohmann::json::array();
    for (int i = 0; i <= r.b_num.degree_k(); ++i) j["b"]["numerator"].push_back(coeffs(r.b_num.coeff_k(i)));
    j["b"]["denominator"] = coeffs(r.b_den);
    nlohmann::json num, den;
    rf::to_json(num, r.certificate.num());
    rf::to_json(den, r.certificate.den());
    j["certificate"] = {{"numerator", num}, {"denominator", den}};
    j["gosper"] = {{"p1", r.gosper.p1.str()}, {"p2", r.gosper.p2.str()}, {"p3", r.gosper.p3.str()}};
    j["degree_bound"] = r.degree_bound;
    j["b_degree"] = r.b_degree;
    j["boundary"] = {{"upper_k", "(" + r.boundary_T.am.get_str() + ")*m + " + r.boundary_T.c.get_str()},
                     {"upper_order", r.upper_order},
                     {"lower_order", r.lower_order},
                     {"identically_zero", r.boundary_zero}};
    return j;
}

// ---------------------------------------------------------------------------
// Recurrences for f_m = C_00mm / omega_m^2

struct Recurrence {
    int order = 2;
    std::vector<Poly> coeffs;  // sum_j coeffs[j](m) f(m+j) = 0
};

// (P, -Q, R) in the KG notation, the analogous triple for WM.
inline Recurrence stored_recurrence(const ModelConfig& cfg) {
    long d = cfg.delta;
    Recurrence r;
    if (cfg.model == Model::KG)
        r.coeffs = {kg_P(d), -kg_Q(d), kg_R(d)};
    else
        r.coeffs = {wm_P(d), -wm_Q(d), wm_R(d)};
    return r;
}

inline ExactScalar f_value(const ModelConfig& cfg, long m) {
    long w = omega(cfg, m);
    return diag_closed(cfg, m) / ExactScalar(w * w);
}

struct RecurrenceReport {
    long m_checked = 0;
};

inline RecurrenceReport recurrence_verify(const ModelConfig& cfg, long m_max) {
    if (m_max < 3) throw ValidationError("m_max must be at least 3");
    Recurrence rec = stored_recurrence(cfg);
    std::vector<ExactScalar> f;
    for (long m = 0; m <= m_max + 2; ++m) f.push_back(f_value(cfg, m));
    RecurrenceReport rep;
    for (long m = 1; m <= m_max; ++m) {
        ExactScalar s;
        for (int j = 0; j <= 2; ++j) s += ExactScalar(rec.coeffs[static_cast<size_t>(j)].eval(Rational(m))) * f[static_cast<size_t>(m + j)];
        if (!s.is_zero()) throw RecurrenceViolated("recurrence fails at m = " + std::to_string(m) + " for " + cfg.name());
        ++rep.m_checked;
    }
    return rep;
}

// f_1 .. f_{m_max} from exact seeds f_1, f_2.
inline std::vector<ExactScalar> recurrence_iterate(const ModelConfig& cfg, const ExactScalar& f1, const ExactScalar& f2, long m_max) {
    Recurrence rec = stored_recurrence(cfg);
    std::vector<ExactScalar> f = {f1, f2};
    for (long m = 1; static_cast<long>(f.size()) < m_max; ++m) {
        Rational P = rec.coeffs[0].eval(Rational(m)), mQ = rec.coeffs[1].eval(Rational(m)), R = rec.coeffs[2].eval(Rational(m));
        const ExactScalar& a = f[f.size() - 2];
        const ExactScalar& b = f[f.size() - 1];
        f.push_back((ExactScalar(-P) * a + ExactScalar(-mQ) * b) / ExactScalar(R));
    }
    f.resize(static_cast<size_t>(std::max<long>(m_max, 0)));
    return f;
}

struct MonotonicityReport {
    Rational x1;
    Rational x1_closed;
    std::vector<Rational> x;  // x_1 .. x_{m_max}
    std::vector<Rational> sign_coefficients;
    long m_checked = 0;
};

// Sign certificate polynomial: KG Q-P-R (all coefficients negative), WM
// P+R-Q (all coefficients positive).
inline Poly sign_certificate_poly(const ModelConfig& cfg) {
    Recurrence rec = stored_recurrence(cfg);
    Poly qpr = -rec.coeffs[1] - rec.coeffs[0] - rec.coeffs[2];
    return cfg.model == Model::KG ? qpr : -qpr;
}

inline std::vector<Rational> sign_certificate_display(const ModelConfig& cfg) {
    return cfg.model == Model::KG ? kg_sign_coeffs(cfg.delta) : wm_sign_coeffs(cfg.delta);
}

inline Rational x1_closed(const ModelConfig& cfg) {
    return cfg.model == Model::KG ? kg_x1_closed(cfg.delta) : wm_x1_closed(cfg.delta);
}

inline MonotonicityReport ratio_monotone(const ModelConfig& cfg, long m_max) {
    if (m_max < 2) throw ValidationError("m_max must be at least 2");
    MonotonicityReport rep;
    std::vector<ExactScalar> f;
    for (long m = 0; m <= m_max + 1; ++m) f.push_back(f_value(cfg, m));
    for (long m = 1; m <= m_max; ++m) {
        const ExactScalar& a = f[static_cast<size_t>(m)];
        const ExactScalar& b = f[static_cast<size_t>(m + 1)];
        if (!a.same_class(b)) throw MonotonicityViolated("f_m changes class");
        Rational x = b.q() / a.q();
        rep.x.push_back(x);
        if (!(x < 1)) throw MonotonicityViolated("x_m >= 1 at m = " + std::to_string(m));
    }
    rep.x1 = rep.x[0];
    rep.x1_closed = x1_closed(cfg);
    if (rep.x1 != rep.x1_closed) throw MonotonicityViolated("x_1 differs from its closed form for " + cfg.name());

    Poly cert = sign_certificate_poly(cfg);
    std::vector<Rational> disp = sign_certificate_display(cfg);
    rep.sign_coefficients = disp;
    if (cert != Poly(disp)) throw MonotonicityViolated("sign certificate polynomial differs from its expansion");
    for (const auto& c : disp) {
        if (cfg.model == Model::KG ? !(c < 0) : !(c > 0))
            throw MonotonicityViolated("sign certificate coefficient has the wrong sign for " + cfg.name());
    }
    Recurrence rec = stored_recurrence(cfg);
    for (long m = 1; m <= m_max; ++m) {
        Rational P = rec.coeffs[0].eval(Rational(m)), Q = -rec.coeffs[1].eval(Rational(m)), R = rec.coeffs[2].eval(Rational(m));
        if (!(R > 0)) throw MonotonicityViolated("R_m <= 0 at m = " + std::to_string(m));
        if (!(P / R > 0)) throw MonotonicityViolated("B_m <= 0 at m = " + std::to_string(m));
        if (!(Q / R - P / R < 1)) throw MonotonicityViolated("A_m - B_m >= 1 at m = " + std::to_string(m));
        ++rep.m_checked;
    }
    return rep;
}

}  // namespace rf
