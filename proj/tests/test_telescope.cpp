#include <gtest/gtest.h>

#include <resonance_forge/telescope.hpp>

using namespace rf;

namespace {

ModelConfig kg(int d) { return ModelConfig::make(Model::KG, d); }
ModelConfig wm(int d) { return ModelConfig::make(Model::WM, d); }

// (a*m + b*k + c)
BiPoly L(long a, long b, long c) { return BiPoly::affine(a, b, c); }

BiPoly prod(std::initializer_list<BiPoly> fs) {
    BiPoly p(1);
    for (const auto& f : fs) p = p * f;
    return p;
}

// a/b == c/d as rational functions
bool same_ratio(const BiPoly& a, const BiPoly& b, const BiPoly& c, const BiPoly& d) { return (a * d + -(b * c)).is_zero(); }

bool proportional(const BiPoly& a, const BiPoly& b) { return same_ratio(a, b, BiPoly(a.lead()), BiPoly(b.lead())); }

// q with a_j * q == b_j for every j, if one exists
std::optional<Poly> common_quotient(const std::vector<Poly>& a, const std::vector<Poly>& b) {
    std::optional<Poly> q;
    for (size_t j = 0; j < a.size(); ++j) {
        auto [qq, rem] = Poly::divmod(b[j], a[j]);
        if (!rem.is_zero()) return std::nullopt;
        if (q && *q != qq) return std::nullopt;
        q = qq;
    }
    return q;
}

Poly m_poly(long a, long c) { return Poly::monomial(a, 1) + Poly(Rational(c)); }

// Reference order-2 coefficients at delta = 3.
std::vector<Poly> reference_alphas() {
    Poly m = Poly::x();
    Poly a0 = Poly(2) * m_poly(1, 1).pow(2) * m_poly(1, 3) * m_poly(2, 1) * m_poly(2, 3).pow(2) * m_poly(2, 5) * m_poly(2, 6) *
              (Poly(34) + Poly(24) * m + Poly(4) * m * m);
    Poly u = m * m_poly(1, 5);
    Poly a1 = Poly(-8) * m_poly(2, 5).pow(4) * (Poly(819) + Poly(4) * u * (Poly(106) + u * (Poly(18) + u)));
    Poly a2 = Poly(8) * m_poly(1, 2).pow(2) * m_poly(1, 4).pow(2) * m_poly(2, 5) * m_poly(2, 7).pow(2) * m_poly(2, 9) *
              (Poly(7) + Poly(2) * m * m_poly(1, 4));
    return {a0, a1, a2};
}

}  // namespace

TEST(Telescope, GosperTrivial) {
    GosperForm g = gosper_form(RatFunc(L(0, 1, 1), L(0, 1, 0)));
    EXPECT_TRUE(proportional(g.p1, L(0, 1, 0)));
    EXPECT_EQ(g.p2.degree_k(), 0);
    EXPECT_EQ(g.p3.degree_k(), 0);
    EXPECT_TRUE(same_ratio(g.p2, g.p3, BiPoly(1), BiPoly(1)));

    GosperForm one = gosper_form(RatFunc(BiPoly(1), BiPoly(1)));
    EXPECT_EQ(one.p1.degree_k(), 0);
    EXPECT_TRUE(same_ratio(one.p2, one.p3, BiPoly(1), BiPoly(1)));
}

// The tabulated p3 is (k+2)(k+3)(2k-4m-1)(2k+4m+15); that does not reproduce the
// input ratio. The form below does.
TEST(Telescope, GosperOrderTwoInput) {
    BiPoly r = prod({L(0, 1, 2), L(0, 2, -1), L(0, 2, 1), L(0, 2, 7), L(0, 4, 11), L(-2, 1, -5), L(2, 1, 5)});
    BiPoly s = prod({L(0, 1, 1), L(0, 1, 4), L(0, 1, 5), L(0, 2, 5), L(0, 4, 7), L(-4, 2, -1), L(4, 2, 19)});
    GosperForm g = gosper_form(RatFunc(r, s));
    EXPECT_TRUE(proportional(g.p1, prod({L(0, 1, 1), L(0, 2, 5), L(0, 4, 7)})));
    EXPECT_TRUE(proportional(g.p2, prod({L(0, 2, -1), L(0, 2, 1), L(-2, 1, -5), L(2, 1, 5)})));
    EXPECT_TRUE(proportional(g.p3, prod({L(0, 1, 4), L(0, 1, 5), L(-4, 2, -1), L(4, 2, 19)})));
    // r/s = p1(k+1)/p1(k) * p2/p3
    EXPECT_TRUE(same_ratio(r, s, g.p1.shift_k(1) * g.p2, g.p1 * g.p3));
    BiPoly reference_p3 = prod({L(0, 1, 2), L(0, 1, 3), L(-4, 2, -1), L(4, 2, 15)});
    EXPECT_FALSE(same_ratio(r, s, g.p1.shift_k(1) * g.p2, g.p1 * reference_p3));

    BiPoly m = BiPoly::affine(1, 0, 0), k = BiPoly::affine(0, 1, 0);
    BiPoly p2 = BiPoly(4) * k.pow(4) + -((BiPoly(16) * m * m + BiPoly(80) * m + BiPoly(101)) * k * k) + BiPoly(4) * m * m +
                BiPoly(20) * m + BiPoly(25);
    EXPECT_TRUE(proportional(g.p2, p2));
    int mdeg = std::max(g.p2.degree_m(), g.p3.degree_m());
    EXPECT_TRUE(shift_coprime(g, 4 * mdeg + 20));
}

TEST(Telescope, ShiftRatiosMatchReferenceForms) {
    HyperTerm t = term_for_diag(kg(3));
    RatFunc back = t.m_ratio().shift_m(-1);  // F(m,k)/F(m-1,k)
    BiPoly s1 = prod({L(2, 0, 1), L(-4, 2, -1), L(-4, 2, 1), L(2, 1, 3), L(2, 1, 4)});
    BiPoly s2 = prod({L(2, 0, 3), L(-2, 1, -1), L(-2, 1, 0), L(4, 2, 7), L(4, 2, 9)});
    EXPECT_TRUE(same_ratio(back.num(), back.den(), s1, s2));
    BiPoly r1 = prod({L(0, 1, 2), L(0, 2, -1), L(0, 2, 1), L(0, 2, 7), L(0, 4, 11), L(-2, 1, -1), L(2, 1, 5)});
    BiPoly r2 = prod({L(0, 1, 1), L(0, 1, 4), L(0, 1, 5), L(0, 2, 5), L(0, 4, 7), L(-4, 2, -1), L(4, 2, 11)});
    RatFunc kr = t.k_ratio();
    EXPECT_TRUE(same_ratio(kr.num(), kr.den(), r1, r2));
}

TEST(Telescope, TermSumsMatchDiagonal) {
    for (int d = 2; d <= 5; ++d)
        for (long m = 0; m <= 5; ++m) EXPECT_EQ(term_for_diag(kg(d)).sum(m), f_value(kg(d), m)) << d << " " << m;
    for (int d = 1; d <= 5; ++d)
        for (long m = 0; m <= 5; ++m) EXPECT_EQ(term_for_diag(wm(d)).sum(m), f_value(wm(d), m)) << d << " " << m;
}

// The KG diagonal sum is hypergeometric in m, so the minimal telescoper has order 1.
TEST(Telescope, MinimalOrderIsOne) {
    for (int d = 2; d <= 4; ++d) {
        HyperTerm t = term_for_diag(kg(d));
        TelescopeResult res = zeilberger(t);
        EXPECT_EQ(res.order, 1) << d;
        EXPECT_TRUE(res.boundary_zero);
        EXPECT_TRUE(verify_certificate(t, res).identity_holds);
        for (long m = 1; m <= 10; ++m) {
            ExactScalar ratio = f_value(kg(d), m + 1) / f_value(kg(d), m);
            Rational expect = -res.alphas[0].eval(Rational(m)) / res.alphas[1].eval(Rational(m));
            EXPECT_EQ(ratio, ExactScalar(expect)) << d << " " << m;
        }
    }
}

TEST(Telescope, OrderTwoMatchesRecurrenceKG3) {
    HyperTerm t = term_for_diag(kg(3));
    ZeilbergerOptions opt;
    opt.j_min = 2;
    TelescopeResult res = zeilberger(t, 4, 2, opt);
    ASSERT_EQ(res.order, 2);
    EXPECT_EQ(res.b_degree, 8);
    EXPECT_TRUE(res.boundary_zero);

    auto q = common_quotient(res.alphas, stored_recurrence(kg(3)).coeffs);
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, Poly(8) * m_poly(2, 5));
    auto qp = common_quotient(res.alphas, reference_alphas());
    ASSERT_TRUE(qp.has_value());
    EXPECT_EQ(*qp, *q);

    CertificateReport rep = verify_certificate(t, res);
    EXPECT_TRUE(rep.identity_holds);
    EXPECT_EQ(rep.spot_checks, 200);
    EXPECT_LE(rep.max_relative_residual, 1e-8);
    for (long m = 1; m <= 6; ++m) EXPECT_TRUE(boundary_check(t, res, m).is_zero()) << m;

    TelescopeResult bad = res;
    bad.alphas[1] = bad.alphas[1] + Poly(1);
    EXPECT_THROW(verify_certificate(t, bad), CertificateInvalid);
}

TEST(Telescope, WMOrderTwo) {
    HyperTerm t = term_for_diag(wm(2));
    TelescopeResult res = zeilberger(t);
    ASSERT_EQ(res.order, 2);
    EXPECT_TRUE(res.boundary_zero);
    EXPECT_TRUE(verify_certificate(t, res).identity_holds);
    for (long m = 1; m <= 5; ++m) EXPECT_TRUE(boundary_check(t, res, m).is_zero()) << m;
    auto q = common_quotient(res.alphas, stored_recurrence(wm(2)).coeffs);
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, Poly(2));
}

TEST(Telescope, GeometricFixtureBoundary) {
    HyperTerm t = geometric_fixture();
    ZeilbergerOptions opt;
    opt.homogeneous = false;
    TelescopeResult res = zeilberger(t, 4, 2, opt);
    EXPECT_EQ(res.order, 0);
    EXPECT_FALSE(res.boundary_zero);
    EXPECT_TRUE(verify_certificate(t, res).identity_holds);
    for (long m = 0; m <= 6; ++m) {
        ExactScalar lhs = ExactScalar(res.alphas[0].eval(Rational(m))) * t.sum(m);
        EXPECT_EQ(boundary_check(t, res, m), lhs) << m;
        EXPECT_EQ(t.sum(m), ExactScalar(Rational((2L << m) - 1)));
    }
    EXPECT_THROW(zeilberger(t), ValidationError);
}

TEST(Telescope, Validation) {
    HyperTerm t = term_for_diag(kg(2));
    EXPECT_THROW(zeilberger(t, 5, 2), ValidationError);
    EXPECT_THROW(zeilberger(t, 4, -1), ValidationError);
    ZeilbergerOptions opt;
    opt.j_min = 2;
    EXPECT_THROW(zeilberger(t, 1, 2, opt), ValidationError);
}

TEST(Telescope, Deterministic) {
    HyperTerm t = term_for_diag(kg(2));
    EXPECT_EQ(telescope_to_json(zeilberger(t)).dump(), telescope_to_json(zeilberger(t)).dump());
    nlohmann::json j = telescope_to_json(zeilberger(t));
    EXPECT_EQ(j["order"], 1);
    EXPECT_EQ(j["alphas"].size(), 2u);
    EXPECT_TRUE(j["boundary"]["identically_zero"].get<bool>());
}

TEST(Telescope, RecurrenceVerify) {
    EXPECT_EQ(recurrence_verify(kg(2), 50).m_checked, 50);
    EXPECT_EQ(recurrence_verify(kg(9), 50).m_checked, 50);
    EXPECT_EQ(recurrence_verify(wm(4), 50).m_checked, 50);
    for (int d = 3; d <= 8; ++d) EXPECT_NO_THROW(recurrence_verify(kg(d), 20));
    for (int d = 1; d <= 9; ++d) EXPECT_NO_THROW(recurrence_verify(wm(d), 20));
    EXPECT_THROW(recurrence_verify(kg(2), 2), ValidationError);
}

TEST(Telescope, RecurrenceIterate) {
    for (const auto& cfg : {kg(2), kg(5), wm(1), wm(3)}) {
        auto f = recurrence_iterate(cfg, f_value(cfg, 1), f_value(cfg, 2), 60);
        ASSERT_EQ(f.size(), 60u);
        for (long m = 1; m <= 60; ++m) ASSERT_EQ(f[static_cast<size_t>(m - 1)], f_value(cfg, m)) << cfg.name() << " " << m;
    }
}

TEST(Telescope, RatioMonotone) {
    EXPECT_EQ(ratio_monotone(kg(2), 30).x1, make_rational(4, 9));
    EXPECT_EQ(ratio_monotone(kg(3), 30).x1, make_rational(925, 1862));
    EXPECT_EQ(ratio_monotone(kg(5), 30).x1, make_rational(41377, 73359));
    EXPECT_EQ(ratio_monotone(wm(1), 30).x1, make_rational(11, 21));
    EXPECT_EQ(ratio_monotone(wm(2), 30).x1, make_rational(45, 88));
    EXPECT_EQ(ratio_monotone(wm(4), 30).x1, make_rational(20, 37));
    for (int d = 2; d <= 9; ++d) {
        MonotonicityReport r = ratio_monotone(kg(d), 40);
        EXPECT_EQ(r.x1, r.x1_closed);
        ASSERT_EQ(r.sign_coefficients.size(), 9u);
        for (const auto& c : r.sign_coefficients) EXPECT_LT(c, 0);
        for (const auto& x : r.x) EXPECT_LT(x, 1);
    }
    for (int d = 1; d <= 9; ++d) {
        MonotonicityReport r = ratio_monotone(wm(d), 40);
        ASSERT_EQ(r.sign_coefficients.size(), 7u);
        for (const auto& c : r.sign_coefficients) EXPECT_GT(c, 0);
    }
    EXPECT_THROW(ratio_monotone(kg(2), 1), ValidationError);
}

TEST(Telescope, SignCertificateConstantTerm) {
    // c0 at delta = 3 from its expansion in delta
    Rational c0 = sign_certificate_display(kg(3))[0];
    EXPECT_LT(c0, 0);
    EXPECT_EQ(c0, sign_certificate_poly(kg(3))[0]);
}
