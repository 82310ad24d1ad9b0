#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <resonance_forge/evolve.hpp>

using namespace rf;

namespace {

ModelConfig kg(int d) { return ModelConfig::make(Model::KG, d); }
ModelConfig wm(int d) { return ModelConfig::make(Model::WM, d); }

ModeVector random_modes(std::mt19937_64& rng, size_t n) {
    std::normal_distribution<double> nd;
    ModeVector q(n);
    for (auto& x : q) x = nd(rng);
    return q;
}

EvolveConfig evolve_cfg(const ModelConfig& cfg, double eps, int trunc, double periods) {
    EvolveConfig ec;
    ec.cfg = cfg;
    ec.eps = eps;
    ec.trunc = trunc;
    ec.periods = periods;
    return ec;
}

}  // namespace

TEST(Evolve, RhsLinearPart) {
    CoeffTable t = build_table(kg(2), 5, ExactPolicy::None);
    ModeVector q(6, 0.0);
    q[2] = 0.5;
    ModeVector a = rhs(kg(2), t, q, 0.0);
    EXPECT_DOUBLE_EQ(a[2], -36 * 0.5);  // w_2 = 6
    for (size_t m = 0; m < a.size(); ++m)
        if (m != 2) { EXPECT_EQ(a[m], 0.0); }
    for (double v : rhs(kg(2), t, ModeVector(6, 0.0), 0.3)) EXPECT_EQ(v, 0.0);
    EXPECT_THROW(rhs(kg(2), t, ModeVector(8, 0.0), 0.1), TableIncomplete);
}

TEST(Evolve, RhsMatchesNaiveSum) {
    std::mt19937_64 rng(3);
    const ModelConfig cfg = wm(2);
    const size_t n = 6;
    CoeffTable t = build_table(cfg, static_cast<int>(n) - 1, ExactPolicy::None);
    for (int s = 0; s < 5; ++s) {
        ModeVector q = random_modes(rng, n);
        ModeVector a = rhs(cfg, t, q, 0.2);
        for (size_t m = 0; m < n; ++m) {
            double sum = 0;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j)
                    for (size_t k = 0; k < n; ++k)
                        sum += t.value(int(i), int(j), int(k), int(m)) * q[i] * q[j] * q[k];
            double w = omega(cfg, static_cast<long>(m));
            double expect = -w * w * q[m] - 0.04 * sum;
            EXPECT_NEAR(a[m], expect, 1e-13 * std::max(1.0, std::fabs(expect)));
        }
    }
}

TEST(Evolve, QuadratureForceMatchesTable) {
    std::mt19937_64 rng(8);
    for (const auto& cfg : {kg(2), kg(4), wm(1), wm(3)}) {
        const size_t n = 9;
        CoeffTable t = build_table(cfg, static_cast<int>(n) - 1, ExactPolicy::None);
        GalerkinForce f(cfg, n, 0.3);
        for (int s = 0; s < 5; ++s) {
            ModeVector q = random_modes(rng, n), a(n);
            f.accel(q, a);
            ModeVector b = rhs(cfg, t, q, 0.3);
            double scale = 0, err = 0;
            for (size_t m = 0; m < n; ++m) {
                scale = std::max(scale, std::fabs(b[m]));
                err = std::max(err, std::fabs(a[m] - b[m]));
            }
            EXPECT_LE(err / scale, 1e-13) << cfg.name();
        }
    }
}

TEST(Evolve, StepIsReversible) {
    std::mt19937_64 rng(4);
    GalerkinForce f(kg(3), 10, 0.5);
    StateVector s(random_modes(rng, 10), random_modes(rng, 10));
    StateVector t = s;
    for (int i = 0; i < 100; ++i) t = step(f, t, 1e-3);
    for (int i = 0; i < 100; ++i) t = step(f, t, -1e-3);
    for (size_t m = 0; m < 10; ++m) {
        EXPECT_NEAR(t.q[m], s.q[m], 1e-13);
        EXPECT_NEAR(t.p[m], s.p[m], 1e-13 * omega(kg(3), static_cast<long>(m)));
    }
}

TEST(Evolve, FreeStepIsExactRotation) {
    std::mt19937_64 rng(6);
    GalerkinForce f(wm(2), 8, 0.0);
    StateVector s(random_modes(rng, 8), random_modes(rng, 8));
    StateVector a = step(f, s, 0.0137), b = linear_flow(wm(2), s, 0.0137);
    for (size_t m = 0; m < 8; ++m) {
        EXPECT_NEAR(a.q[m], b.q[m], 1e-14);
        EXPECT_NEAR(a.p[m], b.p[m], 1e-13);
    }
}

TEST(Evolve, EnergyErrorIsSecondOrder) {
    auto band = [](double dt) {
        EvolveConfig ec = evolve_cfg(kg(2), 0.4, 8, 2);
        ec.dt = dt;
        ec.record_every = 1;
        return integrate_one_mode(ec).energy_band();
    };
    double coarse = band(2 * M_PI / 400), fine = band(2 * M_PI / 800);
    EXPECT_GT(coarse / fine, 3.5);
    EXPECT_LT(coarse / fine, 4.5);
}

TEST(Evolve, LinearDynamicsStayOnOrbit) {
    Trajectory tr = integrate_one_mode(evolve_cfg(kg(2), 0.0, 16, 5));
    EXPECT_LE(tr.sup_dist(), 1e-10);
    EXPECT_LE(tr.energy_drift(), 1e-12);
}

TEST(Evolve, ActionsConservedWithoutCoupling) {
    std::mt19937_64 rng(12);
    const ModelConfig cfg = wm(1);
    EvolveConfig ec = evolve_cfg(cfg, 0.0, 7, 3);
    StateVector s(random_modes(rng, 8), random_modes(rng, 8));
    Trajectory tr = integrate(ec, s);
    for (const auto& x : tr.states)
        for (size_t m = 0; m < 8; ++m) {
            double w = omega(cfg, static_cast<long>(m));
            double a0 = w * s.q[m] * s.q[m] + s.p[m] * s.p[m] / w, a = w * x.q[m] * x.q[m] + x.p[m] * x.p[m] / w;
            EXPECT_NEAR(a, a0, 1e-11 * std::max(1.0, a0));
        }
}

TEST(Evolve, EnergyConservedOverLongRun) {
    Trajectory tr = integrate_one_mode(evolve_cfg(kg(2), 0.05, 16, 100));
    EXPECT_LE(tr.energy_drift(), 1e-6);
    EXPECT_LE(tr.energy_band(), 1e-6);
    EXPECT_NEAR(tr.times.back(), 200 * M_PI, 1e-9);
}

TEST(Evolve, DistanceScalesLikeEpsSquared) {
    ScalingStudy st = eps_scaling(evolve_cfg(kg(2), 0, 16, 50), {0.02, 0.04, 0.08});
    ASSERT_EQ(st.sup_dist.size(), 3u);
    EXPECT_LT(st.sup_dist[0], st.sup_dist[1]);
    EXPECT_LT(st.sup_dist[1], st.sup_dist[2]);
    EXPECT_NEAR(st.slope, 2.0, 0.3);
}

TEST(Evolve, TruncationConverges) {
    Trajectory a = integrate_one_mode(evolve_cfg(wm(1), 0.1, 16, 10));
    Trajectory b = integrate_one_mode(evolve_cfg(wm(1), 0.1, 32, 10));
    EXPECT_NEAR(a.sup_dist(), b.sup_dist(), 0.01 * b.sup_dist());
}

TEST(Evolve, DistanceExamples) {
    const ModelConfig cfg = kg(3);
    const double eps = 0.05;
    StateVector xi = one_mode_state(cfg, 6, eps);
    EXPECT_LE(distance_to_linear_orbit(cfg, linear_flow(cfg, xi, 0.37), eps), 1e-8);
    StateVector bumped = xi;
    bumped.q[2] += 1e-3;
    EXPECT_NEAR(distance_to_linear_orbit(cfg, bumped, eps), 1e-3 * omega(cfg, 2), 1e-12);
    double k0 = to_float(kappa0(cfg));
    EXPECT_NEAR(distance_to_linear_orbit(cfg, StateVector(6), eps), eps * k0 * omega(cfg, 0), 1e-14);
}

TEST(Evolve, ConfigValidation) {
    EvolveConfig ec = evolve_cfg(kg(2), 0.1, 16, 1);
    EXPECT_EQ(ec.steps_per_period(), 64 * 34);
    EXPECT_EQ(ec.total_steps(), 64 * 34);
    ec.trunc = 1;
    EXPECT_THROW(ec.validate(), ValidationError);
    ec = evolve_cfg(kg(2), -1, 16, 1);
    EXPECT_THROW(ec.validate(), ValidationError);
    ec = evolve_cfg(kg(2), 0.1, 16, 1);
    EXPECT_THROW(integrate(ec, StateVector(5)), ValidationError);
}

TEST(Evolve, CsvAndSummary) {
    EvolveConfig ec = evolve_cfg(kg(2), 0.1, 4, 1);
    ec.record_every = 100;
    Trajectory tr = integrate_one_mode(ec);
    std::string csv = trajectory_to_csv(tr);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,H,h_omega,dist_linear,q_0,q_1,q_2,q_3,q_4,p_0,p_1,p_2,p_3,p_4");
    EXPECT_EQ(static_cast<size_t>(std::count(csv.begin(), csv.end(), '\n')), tr.times.size() + 1);

    nlohmann::json j = trajectory_summary(ec, tr);
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_EQ(j["model"], "kg");
    EXPECT_EQ(j["trunc"], 4);
    EXPECT_TRUE(j["slope_estimate"].is_null());
    EXPECT_FALSE(j.contains("scaling"));
    ScalingStudy st{{0.1, 0.2}, {1.0, 4.0}, 2.0};
    nlohmann::json k = trajectory_summary(ec, tr, &st);
    EXPECT_EQ(k["slope_estimate"], 2.0);
    EXPECT_EQ(k["scaling"]["eps"].size(), 2u);
    EXPECT_NEAR(loglog_slope({0.1, 0.2}, {1.0, 4.0}), 2.0, 1e-14);
}
