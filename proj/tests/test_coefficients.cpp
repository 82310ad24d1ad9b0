#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include <resonance_forge/closed_forms.hpp>
#include <resonance_forge/coefficients.hpp>

using namespace rf;

namespace {

ModelConfig kg(int d) { return ModelConfig::make(Model::KG, d); }
ModelConfig wm(int d) { return ModelConfig::make(Model::WM, d); }
ExactScalar over_pi(long num, long den) { return ExactScalar::make(make_rational(num, den), -2, 1); }

}  // namespace

TEST(Coefficients, KeyParsing) {
    CoeffKey k = parse_key("3,1,2,7");
    EXPECT_EQ(k.canonical(), (CoeffKey{1, 2, 3, 7}));
    EXPECT_EQ(k.max_index(), 7);
    EXPECT_THROW(parse_key("1,2,3"), ValidationError);
    EXPECT_THROW(parse_key("1,2,3,4,5"), ValidationError);
    EXPECT_THROW(parse_key("1,-2,3,4"), ValidationError);
    EXPECT_THROW(parse_key("1,x,3,4"), ValidationError);
}

TEST(Coefficients, MomentExamples) {
    EXPECT_EQ(moment(0, 0, 2), ExactScalar(make_rational(2, 3)));
    EXPECT_EQ(moment(make_rational(1, 2), make_rational(1, 2), 0), ExactScalar::make(make_rational(1, 2), 2, 1));
    EXPECT_TRUE(moment(make_rational(1, 2), make_rational(1, 2), 1).is_zero());
    EXPECT_THROW(moment(-1, 0, 0), ValidationError);
}

// Binomial/Beta expansion against the integration-by-parts recurrence.
TEST(Coefficients, MomentRecurrence) {
    for (auto [a, b] : {std::pair{make_rational(1, 2), make_rational(3, 2)}, std::pair{Rational(3), Rational(3)},
                        std::pair{make_rational(1, 2), make_rational(11, 2)}}) {
        std::vector<ExactScalar> M;
        for (int n = 0; n <= 20; ++n) M.push_back(moment(a, b, n));
        for (int n = 1; n < 20; ++n) {
            ExactScalar lhs = ExactScalar(a + b + n + 2) * M[static_cast<size_t>(n + 1)];
            ExactScalar rhs = ExactScalar(b - a) * M[static_cast<size_t>(n)] + ExactScalar(Rational(n)) * M[static_cast<size_t>(n - 1)];
            EXPECT_EQ(lhs, rhs) << n;
        }
    }
}

TEST(Coefficients, ExactExamples) {
    EXPECT_EQ(coeff_exact(kg(2), {0, 0, 1, 1}), over_pi(8, 1));
    EXPECT_TRUE(coeff_exact(kg(2), {0, 0, 0, 2}).is_zero());
    EXPECT_EQ(coeff_exact(wm(1), {0, 0, 0, 0}), ExactScalar(make_rational(18, 5)));
    EXPECT_THROW(coeff_exact(kg(2), {0, 0, 0, 65}), IndexTooLarge);
}

TEST(Coefficients, QuadratureExamples) {
    EXPECT_NEAR(coeff_quad(kg(2), {0, 0, 5, 5}), 8 / M_PI, 1e-10);
    double e = to_float(coeff_exact(wm(2), {1, 1, 1, 1}));
    EXPECT_NEAR(coeff_quad(wm(2), {1, 1, 1, 1}), e, 1e-10 * std::max(1.0, std::fabs(e)));
    EXPECT_NEAR(coeff_quad(kg(3), {0, 0, 0, 3}), 0.0, 1e-12);
    EXPECT_THROW(coeff_quad(kg(2), {0, 0, 0, 513}), IndexTooLarge);
}

TEST(Coefficients, QuadratureAgreesWithExact) {
    for (const auto& cfg : {kg(2), kg(5), wm(1), wm(3)}) {
        double worst = 0;
        for (int i = 0; i <= 12; ++i)
            for (int j = i; j <= 12; ++j)
                for (int k = j; k <= 12; ++k)
                    for (int m = 0; m <= 12; m += 3) {
                        double e = to_float(coeff_exact(cfg, {i, j, k, m}));
                        double q = coeff_quad(cfg, {i, j, k, m});
                        worst = std::max(worst, std::fabs(q - e) / std::max(1.0, std::fabs(e)));
                    }
        EXPECT_LE(worst, 1e-10) << cfg.name();
    }
}

TEST(Coefficients, ResonanceClass) {
    EXPECT_EQ(resonance_class(kg(2), {0, 0, 0, 2}), Resonance::OneMinus);
    EXPECT_EQ(resonance_class(kg(2), {1, 0, 1, 0}), Resonance::TwoMinus);
    EXPECT_EQ(resonance_class(kg(2), {0, 0, 0, 5}), Resonance::NonResonant);
    EXPECT_EQ(resonance_name(Resonance::OneMinus), "OneMinus");
}

TEST(Coefficients, OneMinusKeysVanishExactly) {
    for (const auto& cfg : {kg(2), kg(3), wm(1), wm(2)}) {
        int hits = 0;
        for (int i = 0; i <= 12; ++i)
            for (int j = i; j <= 12; ++j)
                for (int k = j; k <= 12; ++k)
                    for (int m = 0; m <= 12; ++m) {
                        CoeffKey key{i, j, k, m};
                        if (resonance_class(cfg, key) != Resonance::OneMinus) continue;
                        ++hits;
                        EXPECT_TRUE(coeff_exact(cfg, key).is_zero()) << cfg.name() << " " << i << j << k << m;
                    }
        EXPECT_GT(hits, 0);
    }
}

TEST(Coefficients, PermutationSymmetry) {
    for (const auto& cfg : {kg(3), wm(2)}) {
        for (int i = 0; i <= 8; ++i)
            for (int j = i; j <= 8; ++j)
                for (int k = j; k <= 8; ++k)
                    for (int m = k; m <= 8; ++m) {
                        std::array<int, 4> p{i, j, k, m};
                        ExactScalar ref = coeff_exact(cfg, {i, j, k, m});
                        while (std::next_permutation(p.begin(), p.end()))
                            ASSERT_EQ(coeff_exact(cfg, {p[0], p[1], p[2], p[3]}), ref) << cfg.name();
                    }
    }
}

TEST(Coefficients, DiagonalFrozenValues) {
    std::vector<ExactScalar> kg3 = {over_pi(14, 1), over_pi(38, 3), over_pi(37, 3), over_pi(61, 5)};
    std::vector<ExactScalar> kg4 = {over_pi(528, 25), over_pi(3124, 175), over_pi(8912, 525), over_pi(548, 33)};
    for (long m = 0; m < 4; ++m) {
        EXPECT_EQ(diag_closed(kg(3), m), kg3[static_cast<size_t>(m)]);
        EXPECT_EQ(diag_closed(kg(4), m), kg4[static_cast<size_t>(m)]);
    }
    std::vector<std::vector<Rational>> w = {
        {make_rational(18, 5), make_rational(30, 7), make_rational(22, 5), make_rational(342, 77), make_rational(58, 13), make_rational(246, 55)},
        {make_rational(72, 35), make_rational(68, 35), make_rational(136, 77), make_rational(1676, 1001), make_rational(232, 143), make_rational(19332, 12155)},
        {make_rational(100, 63), make_rational(130, 99), make_rational(1138, 1001), make_rational(124, 117), make_rational(12020, 11781), make_rational(322475, 323323)},
        {make_rational(15, 11), make_rational(148, 143), make_rational(125, 143), make_rational(13758, 17017), make_rational(71625, 92378), make_rational(14380, 19019)}};
    for (int d = 1; d <= 4; ++d)
        for (long m = 0; m < 6; ++m) EXPECT_EQ(diag_closed(wm(d), m), ExactScalar(w[static_cast<size_t>(d - 1)][static_cast<size_t>(m)])) << d << " " << m;
}

TEST(Coefficients, DiagonalExamples) {
    EXPECT_EQ(diag_closed(kg(2), 7), over_pi(8, 1));
    EXPECT_EQ(diag_closed(kg(3), 1), over_pi(38, 3));
    EXPECT_EQ(diag_closed(wm(1), 1), ExactScalar(make_rational(30, 7)));
    EXPECT_THROW(diag_closed(kg(2), -1), ValidationError);
}

TEST(Coefficients, DiagonalMatchesReferenceForms) {
    for (int d = 2; d <= 5; ++d)
        for (long m = 0; m <= 30; ++m) EXPECT_EQ(diag_closed(kg(d), m), diag_display(Model::KG, d, m)) << d << " " << m;
    // the WM displays are stated for m >= delta - 1; they also hold below it
    for (int d = 1; d <= 4; ++d)
        for (long m = 0; m <= 30; ++m) EXPECT_EQ(diag_closed(wm(d), m), diag_display(Model::WM, d, m)) << d << " " << m;
}

TEST(Coefficients, DualPathDiagonal) {
    for (int d = 2; d <= 9; ++d)
        for (long m = 0; m <= 30; ++m)
            ASSERT_EQ(diag_closed(kg(d), m), coeff_exact(kg(d), {0, 0, static_cast<int>(m), static_cast<int>(m)})) << d << " " << m;
    for (int d = 1; d <= 6; ++d)
        for (long m = 0; m <= 30; ++m)
            ASSERT_EQ(diag_closed(wm(d), m), coeff_exact(wm(d), {0, 0, static_cast<int>(m), static_cast<int>(m)})) << d << " " << m;
}

TEST(Coefficients, LimitValues) {
    EXPECT_EQ(c_infinity(1), ExactScalar(make_rational(9, 2)));
    EXPECT_EQ(c_infinity(2), ExactScalar(make_rational(3, 2)));
    EXPECT_EQ(c_infinity(3), ExactScalar(make_rational(15, 16)));
    for (int d = 1; d <= 12; ++d) EXPECT_EQ(c_infinity(d), c_infinity_recurrence(d)) << d;
}

// |C_00mm - C_inf| <= K/m on [10, 200]. The fitted K is attained early, so it
// does not move when the window grows.
TEST(Coefficients, LimitApproachBound) {
    for (int d = 1; d <= 4; ++d) {
        double cinf = to_float(c_infinity(d));
        auto fit = [&](long hi) {
            double k = 0;
            for (long m = 10; m <= hi; ++m) k = std::max(k, m * std::fabs(to_float(diag_closed(wm(d), m)) - cinf));
            return k;
        };
        double k100 = fit(100), k200 = fit(200);
        EXPECT_GT(k200, 0);
        EXPECT_NEAR(k200, k100, 1e-12 * k200) << d;
        for (long m = 10; m <= 200; ++m) EXPECT_LE(std::fabs(to_float(diag_closed(wm(d), m)) - cinf), k200 / m * (1 + 1e-12));
    }
}

TEST(Coefficients, TableExamples) {
    CoeffTable t0 = build_table(kg(2), 0, ExactPolicy::All);
    ASSERT_EQ(t0.entries.size(), 1u);
    EXPECT_EQ(t0.entries.begin()->first, (CoeffKey{0, 0, 0, 0}));

    CoeffTable t = build_table(kg(2), 4, ExactPolicy::All);
    ASSERT_TRUE(t.at({0, 0, 2, 2}).exact.has_value());
    EXPECT_EQ(*t.at({0, 0, 2, 2}).exact, over_pi(8, 1));
    EXPECT_EQ(t.value(1, 0, 2, 3), t.value(0, 1, 2, 3));
    EXPECT_EQ(t.value(2, 0, 1, 3), t.value(0, 1, 2, 3));
    EXPECT_THROW(t.at({0, 0, 0, 5}), TableIncomplete);
    EXPECT_THROW(build_table(kg(2), 65, ExactPolicy::All), IndexTooLarge);
}

TEST(Coefficients, TablePolicies) {
    CoeffTable d = build_table(wm(2), 5, ExactPolicy::DiagonalOnly);
    CoeffTable n = build_table(wm(2), 5, ExactPolicy::None);
    EXPECT_TRUE(d.at({0, 0, 3, 3}).exact.has_value());
    EXPECT_FALSE(d.at({1, 2, 3, 3}).exact.has_value());
    for (const auto& [key, v] : n.entries) {
        // one-minus keys are always exact and zero
        if (resonance_class(n.cfg, key) == Resonance::OneMinus) {
            ASSERT_TRUE(v.exact.has_value());
            EXPECT_TRUE(v.exact->is_zero());
        }
        if (v.exact) { EXPECT_NEAR(v.approx, to_float(*v.exact), 1e-10 * std::max(1.0, std::fabs(v.approx))); }
        EXPECT_NEAR(v.approx, d.entries.at(key).approx, 1e-10 * std::max(1.0, std::fabs(v.approx)));
    }
}

TEST(Coefficients, TableThreadIndependent) {
    CoeffTable a = build_table(kg(3), 6, ExactPolicy::DiagonalOnly, 1);
    CoeffTable b = build_table(kg(3), 6, ExactPolicy::DiagonalOnly, 4);
    EXPECT_EQ(table_to_json(a).dump(), table_to_json(b).dump());
}

TEST(Coefficients, TableJsonRoundTrip) {
    CoeffTable t = build_table(kg(3), 3, ExactPolicy::All);
    nlohmann::json j = table_to_json(t);
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_EQ(j["model"], "kg");
    CoeffTable back = table_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(back.max_index, 3);
    ASSERT_EQ(back.entries.size(), t.entries.size());
    for (const auto& [key, v] : t.entries) {
        const CoeffValue& w = back.entries.at(key);
        EXPECT_EQ(w.approx, v.approx);
        ASSERT_EQ(w.exact.has_value(), v.exact.has_value());
        if (v.exact) { EXPECT_EQ(*w.exact, *v.exact); }
    }
    nlohmann::json bad = j;
    bad["schema_version"] = 2;
    EXPECT_THROW(table_from_json(bad), ValidationError);
    std::string csv = table_to_csv(t);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "i,j,k,m,approx");
}
