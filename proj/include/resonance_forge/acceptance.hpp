#pragma once

// The ten acceptance checks, shared by the acceptance binary and `selftest`.
// Each check returns pass/fail plus a one-line detail; exceptions count as a
// failure and their message becomes the detail.

#include <chrono>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "evolve.hpp"
#include "resonant.hpp"
#include "telescope.hpp"

namespace rf {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
    double budget = 0;  // seconds, 0 = none
};

namespace acceptance {

inline ModelConfig kg(int d) { return ModelConfig::make(Model::KG, d); }
inline ModelConfig wm(int d) { return ModelConfig::make(Model::WM, d); }

inline std::vector<ModelConfig> configs(int kg_hi, int wm_hi) {
    std::vector<ModelConfig> out;
    for (int d = 2; d <= kg_hi; ++d) out.push_back(kg(d));
    for (int d = 1; d <= wm_hi; ++d) out.push_back(wm(d));
    return out;
}

// Runs fn on every config, at most `threads` at a time. Configs never share an
// engine, so this is safe. Returns the first failure message, if any.
inline std::string for_each_config(const std::vector<ModelConfig>& cfgs, unsigned threads,
                                   const std::function<std::string(const ModelConfig&)>& fn) {
    std::vector<std::string> errs(cfgs.size());
    auto work = [&](size_t i) {
        try {
            errs[i] = fn(cfgs[i]);
        } catch (const std::exception& e) {
            errs[i] = cfgs[i].name() + ": " + e.what();
        }
    };
    threads = std::max(1u, threads);
    for (size_t base = 0; base < cfgs.size(); base += threads) {
        std::vector<std::thread> pool;
        for (size_t i = base; i < std::min(cfgs.size(), base + threads); ++i) pool.emplace_back(work, i);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errs)
        if (!e.empty()) return e;
    return {};
}

inline std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

// Divide out the polynomial gcd and make the first entry monic.
inline std::vector<Poly> normalized(std::vector<Poly> a) {
    Poly g = a[0];
    for (size_t j = 1; j < a.size(); ++j) g = poly_gcd(g, a[j]);
    for (auto& p : a) p = Poly::divmod(p, g).first;
    Rational lead = a[0].lead();
    for (auto& p : a) p = p * Poly(1 / lead);
    return a;
}

// Reference order-2 coefficients for the diagonal sum at KG delta = 3.
inline std::vector<Poly> reference_kg3_alphas() {
    auto lin = [](long a, long c) { return Poly::monomial(a, 1) + Poly(Rational(c)); };
    Poly m = Poly::x();
    Poly a0 = Poly(2) * lin(1, 1).pow(2) * lin(1, 3) * lin(2, 1) * lin(2, 3).pow(2) * lin(2, 5) * lin(2, 6) *
              (Poly(34) + Poly(24) * m + Poly(4) * m * m);
    Poly u = m * lin(1, 5);
    Poly a1 = Poly(-8) * lin(2, 5).pow(4) * (Poly(819) + Poly(4) * u * (Poly(106) + u * (Poly(18) + u)));
    Poly a2 = Poly(8) * lin(1, 2).pow(2) * lin(1, 4).pow(2) * lin(2, 5) * lin(2, 7).pow(2) * lin(2, 9) *
              (Poly(7) + Poly(2) * m * lin(1, 4));
    return {a0, a1, a2};
}

using Check = std::function<std::string(unsigned threads, std::string& detail)>;

inline std::string closed_formulas(unsigned threads, std::string& detail) {
    std::vector<ModelConfig> cfgs = {kg(2), kg(3), kg(4), kg(5), wm(1), wm(2), wm(3), wm(4)};
    std::string err = for_each_config(cfgs, threads, [](const ModelConfig& cfg) -> std::string {
        long lo = cfg.model == Model::WM ? cfg.delta - 1 : 0;
        for (long m = lo; m <= 50; ++m)
            if (diag_closed(cfg, m) != diag_display(cfg.model, cfg.delta, m)) return cfg.name() + " differs at m = " + std::to_string(m);
        return {};
    });
    detail = "KG 2..5, WM 1..4, m <= 50, exact";
    return err;
}

inline std::string dual_path(unsigned threads, std::string& detail) {
    std::vector<double> worst;
    auto cfgs = configs(9, 6);
    worst.assign(cfgs.size(), 0);
    std::string err = for_each_config(cfgs, threads, [&](const ModelConfig& cfg) -> std::string {
        for (long m = 0; m <= 30; ++m)
            if (coeff_exact(cfg, {0, 0, static_cast<int>(m), static_cast<int>(m)}) != diag_closed(cfg, m))
                return cfg.name() + " diagonal differs at m = " + std::to_string(m);
        double w = 0;
        for (int i = 0; i <= 12; ++i)
            for (int j = i; j <= 12; ++j)
                for (int k = j; k <= 12; ++k)
                    for (int m = 0; m <= 12; ++m) {
                        double e = to_float(coeff_exact(cfg, {i, j, k, m}));
                        w = std::max(w, std::fabs(coeff_quad(cfg, {i, j, k, m}) - e) / std::max(1.0, std::fabs(e)));
                    }
        size_t idx = static_cast<size_t>(&cfg - cfgs.data());
        worst[idx] = w;
        return w <= 1e-10 ? std::string() : cfg.name() + " quadrature error " + fmt(w);
    });
    detail = "max quad error " + fmt(*std::max_element(worst.begin(), worst.end())) + " (tol 1e-10), indices <= 12";
    return err;
}

inline std::string vanishing(unsigned threads, std::string& detail) {
    auto cfgs = configs(6, 6);
    std::vector<long> hits(cfgs.size(), 0);
    std::string err = for_each_config(cfgs, threads, [&](const ModelConfig& cfg) -> std::string {
        long n = 0;
        for (int i = 0; i <= 12; ++i)
            for (int j = i; j <= 12; ++j)
                for (int k = j; k <= 12; ++k)
                    for (int m = 0; m <= 12; ++m) {
                        CoeffKey key{i, j, k, m};
                        if (resonance_class(cfg, key) != Resonance::OneMinus) continue;
                        ++n;
                        if (!coeff_exact(cfg, key).is_zero()) return cfg.name() + " nonzero at " + key.str();
                    }
        hits[static_cast<size_t>(&cfg - cfgs.data())] = n;
        return n > 0 ? std::string() : cfg.name() + " has no one-minus keys";
    });
    long total = 0;
    for (long h : hits) total += h;
    detail = std::to_string(total) + " one-minus quadruples exactly zero";
    return err;
}

inline std::string recurrences(unsigned threads, std::string& detail) {
    std::string err = for_each_config(configs(9, 9), threads, [](const ModelConfig& cfg) -> std::string {
        recurrence_verify(cfg, 100);
        return {};
    });
    detail = "KG 2..9, WM 1..9, m in [1,100], exact";
    return err;
}

inline std::string zeilberger_kg3(unsigned, std::string& detail) {
    HyperTerm t = term_for_diag(kg(3));
    ZeilbergerOptions opt;
    opt.j_min = 2;
    TelescopeResult res = zeilberger(t, 4, 2, opt);
    if (res.order != 2) return "order " + std::to_string(res.order);
    if (normalized(res.alphas) != normalized(reference_kg3_alphas())) return "normalized alphas differ from the displays";
    // the displays carry an extra common factor; it must divide exactly
    std::vector<Poly> ref = reference_kg3_alphas();
    Poly quotient;
    for (size_t j = 0; j < 3; ++j) {
        auto [q, r] = Poly::divmod(ref[j], res.alphas[j]);
        if (!r.is_zero()) return "display not divisible by derived alpha";
        if (j > 0 && q != quotient) return "no common quotient";
        quotient = q;
    }
    CertificateReport rep = verify_certificate(t, res);
    if (!rep.identity_holds) return "certificate identity fails";
    if (!res.boundary_zero) return "boundary term not identically zero";
    for (long m = 1; m <= 10; ++m)
        if (!boundary_check(t, res, m).is_zero()) return "boundary nonzero at m = " + std::to_string(m);
    detail = "J = 2, common factor " + quotient.str("m") + ", certificate exact, boundary 0";
    return {};
}

inline std::string sign_certificates(unsigned threads, std::string& detail) {
    std::string err = for_each_config(configs(9, 9), threads, [](const ModelConfig& cfg) -> std::string {
        MonotonicityReport r = ratio_monotone(cfg, 40);  // throws on any sign failure
        if (r.x1 != r.x1_closed) return cfg.name() + " x1 mismatch";
        return {};
    });
    if (!err.empty()) return err;
    const std::vector<Rational> kg_x1 = {make_rational(4, 9), make_rational(925, 1862), make_rational(1671, 3124),
                                         make_rational(41377, 73359), make_rational(31864, 54275), make_rational(5211, 8602),
                                         make_rational(364825, 587214), make_rational(30239, 47671)};
    const std::vector<Rational> wm_x1 = {make_rational(11, 21), make_rational(45, 88), make_rational(3983, 7605),
                                         make_rational(20, 37), make_rational(729, 1309), make_rational(3389, 5928),
                                         make_rational(935, 1599), make_rational(48474, 81305), make_rational(30511, 50325)};
    for (int d = 2; d <= 9; ++d)
        if (x1_closed(kg(d)) != kg_x1[static_cast<size_t>(d - 2)]) return "KG x1 display mismatch at delta " + std::to_string(d);
    for (int d = 1; d <= 9; ++d)
        if (x1_closed(wm(d)) != wm_x1[static_cast<size_t>(d - 1)]) return "WM x1 display mismatch at delta " + std::to_string(d);
    // KG delta = 2: C_00mm is constant, so x1 = (w1/w2)^2
    long w1 = omega(kg(2), 1), w2 = omega(kg(2), 2);
    if (diag_closed(kg(2), 1) != diag_closed(kg(2), 2) || make_rational(w1 * w1, w2 * w2) != make_rational(4, 9))
        return "constant-C ratio check fails";
    detail = "KG c_j < 0 (delta 2..9), WM c_j > 0 (delta 1..9), x1 exact";
    return {};
}

inline std::string stability(unsigned threads, std::string& detail) {
    std::string err = for_each_config(configs(9, 9), threads, [](const ModelConfig& cfg) -> std::string {
        GapReport r = stability_classify(cfg, 100);
        return r.coercive ? std::string() : cfg.name() + " not coercive";
    });
    if (!err.empty()) return err;
    GapReport ten = stability_classify(kg(10), 50);
    if (ten.coercive || kg_U1(10) != -2 || ten.gaps.front().sign() >= 0) return "KG delta 10 classified coercive";
    if (*stability_classify(kg(2), 10).c_perp != ExactScalar::make(make_rational(1, 1), -2, 1)) return "c_perp(KG 2) != 1/pi";
    detail = "KG 2..9 and WM 1..9 coercive, KG 10 not (U1 = -2), c_perp = 1/pi";
    return {};
}

inline std::string resonant_identities(unsigned threads, std::string& detail) {
    std::vector<ModelConfig> cfgs = {kg(2), kg(3), wm(1), wm(2)};
    struct Worst {
        double m = 0, g = 0, h = 0, t = 0;
    };
    std::vector<Worst> worst(cfgs.size());
    std::string err = for_each_config(cfgs, threads, [&](const ModelConfig& cfg) -> std::string {
        Worst& w = worst[static_cast<size_t>(&cfg - cfgs.data())];
        CoeffTable table = build_table(cfg, 16, ExactPolicy::DiagonalOnly);
        w.m = M_residual(cfg, table, 16);
        w.g = gradient_residual(cfg, table, 10);
        std::mt19937_64 rng(static_cast<unsigned>(cfg.delta) * 31 + static_cast<unsigned>(cfg.model));
        std::normal_distribution<double> nd;
        detail::Tensor C(table, 10);
        GapCache g = gap_cache(cfg, 10);
        for (int s = 0; s < 100; ++s) {
            StateVector X(10), z(9);
            for (size_t l = 1; l < 10; ++l) {
                X.q[l] = nd(rng) / omega(cfg, static_cast<long>(l));
                X.p[l] = nd(rng);
            }
            double a = second_diff(cfg, X, g);
            w.h = std::max(w.h, std::fabs(a - second_diff_fd(cfg, C, X)) / std::fabs(a));
            for (size_t l = 0; l < 9; ++l) z.q[l] = nd(rng), z.p[l] = nd(rng);
            TimeAverage ta = time_average_f(cfg, table, z);
            w.t = std::max(w.t, std::fabs(ta.closed - ta.direct) / std::fabs(ta.direct));
        }
        if (w.m > 1e-10) return cfg.name() + " M residual " + fmt(w.m);
        if (w.g > 1e-8) return cfg.name() + " gradient " + fmt(w.g);
        if (w.h > 1e-5) return cfg.name() + " hessian " + fmt(w.h);
        if (w.t > 1e-8) return cfg.name() + " time average " + fmt(w.t);
        return {};
    });
    Worst all;
    for (const auto& w : worst) all = {std::max(all.m, w.m), std::max(all.g, w.g), std::max(all.h, w.h), std::max(all.t, w.t)};
    detail = "M " + fmt(all.m) + ", grad " + fmt(all.g) + ", hessian " + fmt(all.h) + ", average " + fmt(all.t);
    return err;
}

inline std::string dynamics(unsigned threads, std::string& detail) {
    EvolveConfig ec;
    ec.cfg = kg(2);
    ec.trunc = 32;
    ec.eps = 0.05;
    ec.periods = 100;
    double drift = 0, slope = 0, rev = 0;
    std::string err;
    std::thread long_run([&] {
        try {
            drift = integrate_one_mode(ec).energy_drift();
        } catch (const std::exception& e) {
            err = e.what();
        }
    });
    EvolveConfig sc = ec;
    sc.periods = 50;
    if (threads > 1) {
        std::vector<double> eps = {0.02, 0.04, 0.08}, sup(3);
        std::vector<std::thread> pool;
        for (size_t i = 0; i < 3; ++i)
            pool.emplace_back([&, i] {
                EvolveConfig c = sc;
                c.eps = eps[i];
                sup[i] = integrate_one_mode(c).sup_dist();
            });
        for (auto& t : pool) t.join();
        slope = loglog_slope(eps, sup);
    } else {
        slope = eps_scaling(sc, {0.02, 0.04, 0.08}).slope;
    }
    long_run.join();
    if (!err.empty()) return err;

    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    GalerkinForce f(kg(2), 33, 0.5);
    StateVector s(33), t;
    for (size_t m = 0; m < 33; ++m) s.q[m] = nd(rng), s.p[m] = nd(rng);
    t = s;
    double dt = ec.step_size();
    for (int i = 0; i < 200; ++i) t = step(f, t, dt);
    for (int i = 0; i < 200; ++i) t = step(f, t, -dt);
    for (size_t m = 0; m < 33; ++m) rev = std::max({rev, std::fabs(t.q[m] - s.q[m]), std::fabs(t.p[m] - s.p[m]) / omega(kg(2), static_cast<long>(m))});

    detail = "drift " + fmt(drift) + ", slope " + fmt(slope) + ", reversibility " + fmt(rev);
    if (drift > 1e-6) return "energy drift " + fmt(drift);
    if (std::fabs(slope - 2.0) > 0.3) return "scaling slope " + fmt(slope);
    if (rev > 1e-13) return "reversibility " + fmt(rev);
    return {};
}

inline std::string wm_asymptotics(unsigned threads, std::string& detail) {
    auto cfgs = configs(0, 9);
    std::string err = for_each_config(cfgs, threads, [](const ModelConfig& cfg) -> std::string {
        if (c_infinity(cfg.delta) != c_infinity_recurrence(cfg.delta)) return cfg.name() + " limit forms disagree";
        double cinf = to_float(c_infinity(cfg.delta));
        std::vector<double> diff;
        for (long m = 10; m <= 200; ++m) diff.push_back(std::fabs(to_float(diag_closed(cfg, m)) - cinf));
        double k100 = 0, k200 = 0;
        for (long m = 10; m <= 200; ++m) {
            double v = static_cast<double>(m) * diff[static_cast<size_t>(m - 10)];
            if (m <= 100) k100 = std::max(k100, v);
            k200 = std::max(k200, v);
        }
        if (std::fabs(k200 - k100) > 1e-12 * k200) return cfg.name() + " K not stable";
        return {};
    });
    detail = "|C - Cinf| <= K/m on [10,200] with K fixed on [10,100], limits exact for delta 1..9";
    return err;
}

struct Entry {
    int id;
    const char* name;
    double budget;
    Check check;
};

inline const std::vector<Entry>& entries() {
    static const std::vector<Entry> e = {
        {1, "closed-formula reproduction", 10, closed_formulas},
        {2, "dual-path coefficient oracle", 120, dual_path},
        {3, "vanishing certificate", 0, vanishing},
        {4, "recurrence verification", 0, recurrences},
        {5, "telescoper reproduction", 300, zeilberger_kg3},
        {6, "sign certificates", 0, sign_certificates},
        {7, "stability classification", 0, stability},
        {8, "resonant-system identities", 120, resonant_identities},
        {9, "dynamics", 600, dynamics},
        {10, "WM asymptotics", 0, wm_asymptotics},
    };
    return e;
}

}  // namespace acceptance

inline CriterionResult run_criterion(const acceptance::Entry& e, unsigned threads) {
    CriterionResult r;
    r.id = e.id;
    r.name = e.name;
    r.budget = e.budget;
    auto t0 = std::chrono::steady_clock::now();
    std::string err;
    try {
        err = e.check(threads, r.detail);
    } catch (const std::exception& ex) {
        err = ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (err.empty() && r.budget > 0 && r.seconds > r.budget) err = "over the " + acceptance::fmt(r.budget) + " s budget";
    r.pass = err.empty();
    if (!r.pass) r.detail = err;
    return r;
}

// ids empty = all ten
inline std::vector<CriterionResult> run_acceptance(unsigned threads, const std::vector<int>& ids = {},
                                                   const std::function<void(const CriterionResult&)>& on_result = {}) {
    std::vector<CriterionResult> out;
    for (const auto& e : acceptance::entries()) {
        if (!ids.empty() && std::find(ids.begin(), ids.end(), e.id) == ids.end()) continue;
        out.push_back(run_criterion(e, threads));
        if (on_result) on_result(out.back());
    }
    return out;
}

inline std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << "  " << (r.id < 10 ? " " : "") << r.id << "  " << r.name << "  ("
       << acceptance::fmt(r.seconds) << " s)  " << r.detail;
    return os.str();
}

inline nlohmann::json results_to_json(const std::vector<CriterionResult>& rs) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["criteria"] = nlohmann::json::array();
    bool all = true;
    for (const auto& r : rs) {
        j["criteria"].push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        all = all && r.pass;
    }
    j["all_pass"] = all;
    return j;
}

}  // namespace rf
