#pragma once

// Quartic Fourier coefficients C_ijkm: exact (Jacobi expansion + Beta moments),
// quadrature, the closed diagonal sums, and persisted tables.

#include <json.hpp>

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "closed_forms.hpp"
#include "spectrum.hpp"

namespace rf {

struct CoeffKey {
    int i = 0, j = 0, k = 0, m = 0;

    // (i, j, k) sorted ascending, m kept in place.
    CoeffKey canonical() const {
        std::array<int, 3> a{i, j, k};
        std::sort(a.begin(), a.end());
        return {a[0], a[1], a[2], m};
    }
    int max_index() const { return std::max({i, j, k, m}); }
    std::array<int, 4> arr() const { return {i, j, k, m}; }
    std::string str() const { return std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + "," + std::to_string(m); }
    friend bool operator<(const CoeffKey& a, const CoeffKey& b) { return a.arr() < b.arr(); }
    friend bool operator==(const CoeffKey& a, const CoeffKey& b) { return a.arr() == b.arr(); }
};

inline CoeffKey parse_key(const std::string& s) {
    CoeffKey key;
    std::array<int*, 4> slots{&key.i, &key.j, &key.k, &key.m};
    std::stringstream ss(s);
    std::string item;
    size_t n = 0;
    while (std::getline(ss, item, ',')) {
        if (n >= 4) throw ValidationError("key needs exactly four indices: " + s);
        try {
            size_t pos = 0;
            int v = std::stoi(item, &pos);
            if (pos != item.size() || v < 0) throw std::invalid_argument(item);
            *slots[n++] = v;
        } catch (const std::exception&) {
            throw ValidationError("bad key index '" + item + "'");
        }
    }
    if (n != 4) throw ValidationError("key needs exactly four indices: " + s);
    return key;
}

// 2^(e) for half-integer e, exactly.
inline ExactScalar pow2_half(const Rational& e) {
    Rational twice = 2 * e;
    if (!is_integer(twice)) throw ValidationError("power of two must be a half-integer");
    long t = twice.get_num().get_si();
    long whole = t >= 0 ? t / 2 : -((-t + 1) / 2);
    ExactScalar r(rpow(2, whole));
    if (t - 2 * whole == 1) r *= ExactScalar::sqrt_of(2);
    return r;
}

// Integral of (1-y)^a (1+y)^b y^n over [-1, 1] via y^n = ((1+y) - 1)^n and Beta integrals.
inline ExactScalar moment(const Rational& a, const Rational& b, int n) {
    if (a <= -1 || b <= -1) throw ValidationError("moment exponents must exceed -1");
    ExactScalar total;
    mpz_class binom;
    for (int j = 0; j <= n; ++j) {
        mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(j));
        Rational c(binom);
        if ((n - j) % 2) c = -c;
        ExactScalar t = ExactScalar(c) * pow2_half(a + b + j + 1) * gamma_exact(a + 1) * gamma_exact(b + j + 1) /
                        gamma_exact(a + b + j + 2);
        total += t;
    }
    return total;
}

enum class Resonance { NonResonant, OneMinus, TwoMinus, NoMinus };

inline std::string resonance_name(Resonance r) {
    switch (r) {
        case Resonance::OneMinus: return "OneMinus";
        case Resonance::TwoMinus: return "TwoMinus";
        case Resonance::NoMinus: return "NoMinus";
        default: return "NonResonant";
    }
}

// Sign patterns w_i +- w_j +- w_k +- w_m; three minus signs are a one-minus
// pattern up to an overall sign.
inline Resonance resonance_class(const ModelConfig& cfg, const CoeffKey& key) {
    long w[4] = {omega(cfg, key.i), omega(cfg, key.j), omega(cfg, key.k), omega(cfg, key.m)};
    bool one = false, two = false, none = false;
    for (int mask = 0; mask < 8; ++mask) {
        long s = w[0];
        int minus = 0;
        for (int b = 0; b < 3; ++b) {
            if (mask & (1 << b)) {
                s -= w[b + 1];
                ++minus;
            } else {
                s += w[b + 1];
            }
        }
        if (s != 0) continue;
        if (minus == 1 || minus == 3) one = true;
        else if (minus == 2) two = true;
        else none = true;
    }
    if (one) return Resonance::OneMinus;
    if (two) return Resonance::TwoMinus;
    if (none) return Resonance::NoMinus;
    return Resonance::NonResonant;
}

inline constexpr int kMaxExactIndex = 64;
inline constexpr int kMaxQuadIndex = 512;

// C_ijkm = prefactor * integral of e_i e_j e_k e_m against the Jacobi weight.
inline ExactScalar coupling_prefactor(const ModelConfig& cfg) {
    long d = cfg.model == Model::KG ? cfg.delta : cfg.delta + 2;
    return ExactScalar(rpow(4, -d));
}

// Per-configuration caches for the exact and quadrature paths. Methods lock an
// internal mutex, so one engine may be shared across threads.
class CoeffEngine {
public:
    explicit CoeffEngine(const ModelConfig& cfg) : cfg_(cfg) {
        prefactor_ = coupling_prefactor(cfg);
        ExactScalar m0 = moment(cfg.weight_a, cfg.weight_b, 0);
        moment0_ = m0.q();
        unit_ = m0 / ExactScalar(moment0_);
    }

    const ModelConfig& cfg() const { return cfg_; }

    ExactScalar exact(const CoeffKey& key) {
        if (key.max_index() > kMaxExactIndex)
            throw IndexTooLarge("exact coefficients support indices up to " + std::to_string(kMaxExactIndex));
        std::lock_guard<std::mutex> lock(mu_);
        const auto& qij = pair(key.i, key.j);
        const auto& tkm = tail(key.k, key.m, qij.size());
        Rational s = 0;
        for (size_t a = 0; a < qij.size(); ++a) s += qij[a] * tkm[a];
        if (s == 0) return {};
        return prefactor_ * ExactScalar(s) * unit_ * norm(key.i) * norm(key.j) * norm(key.k) * norm(key.m);
    }

    double quad(const CoeffKey& key) {
        if (key.max_index() > kMaxQuadIndex)
            throw IndexTooLarge("quadrature coefficients support indices up to " + std::to_string(kMaxQuadIndex));
        int npts = (key.i + key.j + key.k + key.m + 1) / 2 + 2;
        std::lock_guard<std::mutex> lock(mu_);
        const QuadratureRule& rule = rule_for(npts);
        long double a = cfg_.jacobi_a.get_d(), b = cfg_.jacobi_b.get_d();
        long double s = 0;
        for (size_t l = 0; l < rule.nodes_ld.size(); ++l) {
            long double x = rule.nodes_ld[l];
            s += rule.weights_ld[l] * jacobi_eval(key.i, a, b, x).p * jacobi_eval(key.j, a, b, x).p *
                 jacobi_eval(key.k, a, b, x).p * jacobi_eval(key.m, a, b, x).p;
        }
        long double nprod = norm_ld(key.i) * norm_ld(key.j) * norm_ld(key.k) * norm_ld(key.m);
        return static_cast<double>(static_cast<long double>(to_float(prefactor_)) * nprod * s);
    }

    // N_n in long double.
    long double norm_ld(int n) {
        auto it = norm_ld_.find(n);
        if (it != norm_ld_.end()) return it->second;
        long double v = std::sqrt(static_cast<long double>(to_float(norm_sq(cfg_, n))));
        norm_ld_[n] = v;
        return v;
    }

private:
    const std::vector<Rational>& jacobi(int n) {
        while (static_cast<int>(jac_.size()) <= n) {
            jac_.push_back(jacobi_poly(static_cast<int>(jac_.size()), cfg_.jacobi_a, cfg_.jacobi_b).coeffs());
        }
        return jac_[static_cast<size_t>(n)];
    }
    // moment / unit, always rational. Integration by parts against
    // (1-y)^(a+1) (1+y)^(b+1) y^n gives
    // (a+b+n+2) M_{n+1} = (b-a) M_n + n M_{n-1}.
    const Rational& mom(int n) {
        if (mom_.empty()) mom_.push_back(moment0_);
        const Rational& a = cfg_.weight_a;
        const Rational& b = cfg_.weight_b;
        while (static_cast<int>(mom_.size()) <= n) {
            long k = static_cast<long>(mom_.size()) - 1;
            Rational prev = k > 0 ? mom_[static_cast<size_t>(k - 1)] : Rational(0);
            mom_.push_back(((b - a) * mom_.back() + k * prev) / (a + b + k + 2));
        }
        return mom_[static_cast<size_t>(n)];
    }
    const std::vector<Rational>& pair(int i, int j) {
        if (i > j) std::swap(i, j);
        auto key = std::make_pair(i, j);
        auto it = pairs_.find(key);
        if (it != pairs_.end()) return it->second;
        std::vector<Rational> pi = jacobi(i), pj = jacobi(j);
        std::vector<Rational> out(pi.size() + pj.size() - 1, Rational(0));
        for (size_t x = 0; x < pi.size(); ++x)
            for (size_t y = 0; y < pj.size(); ++y) out[x + y] += pi[x] * pj[y];
        return pairs_.emplace(key, std::move(out)).first->second;
    }
    // T[a] = sum_b Q_km[b] * M[a + b] for a < len; grown on demand.
    const std::vector<Rational>& tail(int k, int m, size_t len) {
        if (k > m) std::swap(k, m);
        auto key = std::make_pair(k, m);
        auto it = tails_.find(key);
        if (it != tails_.end() && it->second.size() >= len) return it->second;
        std::vector<Rational> q = pair(k, m);
        mom(static_cast<int>(len + q.size()));
        std::vector<Rational> t(len, Rational(0));
        for (size_t a = 0; a < len; ++a)
            for (size_t b = 0; b < q.size(); ++b) t[a] += q[b] * mom_[a + b];
        auto& slot = tails_[key];
        slot = std::move(t);
        return slot;
    }
    ExactScalar norm(int n) {
        while (static_cast<int>(norms_.size()) <= n) norms_.push_back(norm_sq(cfg_, static_cast<long>(norms_.size())).sqrt());
        return norms_[static_cast<size_t>(n)];
    }
    const QuadratureRule& rule_for(int npts) {
        auto it = rules_.find(npts);
        if (it != rules_.end()) return it->second;
        return rules_.emplace(npts, gauss_jacobi_rule(cfg_.weight_a, cfg_.weight_b, npts)).first->second;
    }

    ModelConfig cfg_;
    ExactScalar prefactor_, unit_;
    Rational moment0_;
    std::mutex mu_;
    std::vector<std::vector<Rational>> jac_;
    std::vector<Rational> mom_;
    std::vector<ExactScalar> norms_;
    std::map<int, long double> norm_ld_;
    std::map<std::pair<int, int>, std::vector<Rational>> pairs_;
    std::map<std::pair<int, int>, std::vector<Rational>> tails_;
    std::map<int, QuadratureRule> rules_;
};

// Shared engine per (model, delta).
inline CoeffEngine& engine_for(const ModelConfig& cfg) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<CoeffEngine>> engines;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(static_cast<int>(cfg.model), cfg.delta);
    auto& slot = engines[key];
    if (!slot) slot = std::make_unique<CoeffEngine>(cfg);
    return *slot;
}

inline ExactScalar coeff_exact(const ModelConfig& cfg, const CoeffKey& key) { return engine_for(cfg).exact(key); }
inline double coeff_quad(const ModelConfig& cfg, const CoeffKey& key) { return engine_for(cfg).quad(key); }

namespace detail {

inline Rational factorial(long n) {
    if (n < 0) throw PoleError("factorial of a negative integer");
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(f);
}
// Gamma at a positive integer.
inline Rational gamma_int(long n) { return factorial(n - 1); }

}  // namespace detail

// Summand S_m(k) of the KG diagonal sum, k = 0..2m+1.
inline ExactScalar kg_diag_summand(long d, long m, long k) {
    auto G = [](long twice) { return gamma_exact(twice); };
    ExactScalar head = G(2 * d + 2) * G(4 * d - 3) / (ExactScalar::pi_power(4) * G(2 * d - 1));
    ExactScalar a = ExactScalar(5 - 4 * d - 4 * k) * G(2 * k + 2 * d - 2) * G(2 * k + 4 * d - 5) /
                    (G(2 * k + 2 * d - 1) * G(2 * k + 4 * d - 4) * G(2 * k + 4 * d - 2));
    ExactScalar b = G(2 * k - 1) * G(2 * k + 1) / G(2 * k + 2);
    ExactScalar c = ExactScalar(d + 2 * m) * G(-2 * k + 4 * m + 3) * G(2 * k + 4 * m + 4 * d - 2) /
                    (G(-2 * k + 4 * m + 4) * G(2 * k + 4 * m + 4 * d - 1));
    return head * a * b * c;
}

// Summand of the WM diagonal sum, k = 0..min(d-1, m).
inline Rational wm_diag_summand(long d, long m, long k, const BiPoly& V) {
    using detail::gamma_int;
    Rational g = 2 * Rational((d + 1) * (d + 2)) * gamma_int(d) * gamma_int(d) / (gamma_int(k + 1) * gamma_int(k + 3));
    g *= gamma_int(m + 1) * gamma_int(m + 2) / (gamma_int(d - k) * gamma_int(d - k + 2));
    g *= Rational(2 * d - 2 * k + 2 * m + 1) * V.eval(Rational(m), Rational(k)) / (gamma_int(m - k + 1) * gamma_int(m - k + 2));
    g *= Rational(d + 2 * m + 2) / (gamma_int(m + d + 1) * gamma_int(m + d + 2));
    g *= gamma_int(m - k + 2 * d) * gamma_int(m - k + 2 * d + 1) / gamma_int(2 * m + 2 * d + 2 - k);
    g *= gamma_int(2 * m + d - k) * gamma_int(2 * m + d - k + 2) / gamma_int(2 * m + 2 * d + 4 - k);
    return g;
}

// C_00mm by the finite closed sums.
inline ExactScalar diag_closed(const ModelConfig& cfg, long m) {
    if (m < 0) throw ValidationError("m must be nonnegative");
    long d = cfg.delta;
    if (cfg.model == Model::KG) {
        ExactScalar s;
        for (long k = 0; k <= 2 * m + 1; ++k) s += kg_diag_summand(d, m, k);
        return s;
    }
    static std::mutex mu;
    static std::map<long, BiPoly> vcache;
    BiPoly V;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = vcache.find(d);
        if (it == vcache.end()) it = vcache.emplace(d, wm_V(d)).first;
        V = it->second;
    }
    Rational s = 0;
    for (long k = 0; k <= std::min(d - 1, m); ++k) s += wm_diag_summand(d, m, k, V);
    return ExactScalar(s);
}

// Limit of C_00mm as m grows (WM).
inline ExactScalar c_infinity(long d) {
    if (d < 1) throw ValidationError("delta must be positive");
    // 3 (d+2) Gamma(d - 1/2) / (2 sqrt(pi) Gamma(d+1))
    ExactScalar v = ExactScalar(3 * (d + 2)) * gamma_exact(2 * d - 1) /
                    (ExactScalar(2) * ExactScalar::pi_power(1) * gamma_exact(2 * d + 2));
    return v;
}

// Same limit by iterating the one-step recurrence from C(1) = 9/2.
inline ExactScalar c_infinity_recurrence(long d) {
    if (d < 1) throw ValidationError("delta must be positive");
    Rational c = make_rational(9, 2);
    for (long e = 1; e < d; ++e) c *= make_rational((e + 3) * (2 * e - 1), 2 * (e + 1) * (e + 2));
    return ExactScalar(c);
}

// ---------------------------------------------------------------------------
// Tables

enum class ExactPolicy { DiagonalOnly, All, None };

inline std::string policy_name(ExactPolicy p) {
    switch (p) {
        case ExactPolicy::All: return "All";
        case ExactPolicy::None: return "None";
        default: return "DiagonalOnly";
    }
}

inline ExactPolicy parse_policy(const std::string& s) {
    if (s == "All" || s == "all") return ExactPolicy::All;
    if (s == "None" || s == "none") return ExactPolicy::None;
    if (s == "DiagonalOnly" || s == "diagonal") return ExactPolicy::DiagonalOnly;
    throw ValidationError("unknown exact policy '" + s + "'");
}

struct CoeffValue {
    std::optional<ExactScalar> exact;
    double approx = 0;
};

class CoeffTable {
public:
    ModelConfig cfg;
    int max_index = 0;
    ExactPolicy policy = ExactPolicy::DiagonalOnly;
    std::map<CoeffKey, CoeffValue> entries;  // canonical keys only

    bool covers(int n) const { return n <= max_index; }

    const CoeffValue& at(const CoeffKey& key) const {
        auto it = entries.find(key.canonical());
        if (it == entries.end())
            throw TableIncomplete("coefficient table (max index " + std::to_string(max_index) + ") lacks key " +
                                  std::to_string(key.i) + "," + std::to_string(key.j) + "," +
                                  std::to_string(key.k) + "," + std::to_string(key.m));
        return it->second;
    }
    double value(const CoeffKey& key) const { return at(key).approx; }
    double value(int i, int j, int k, int m) const { return value(CoeffKey{i, j, k, m}); }

    // Dense copy C[i][j][k][m] for inner loops.
    std::vector<double> dense() const {
        size_t n = static_cast<size_t>(max_index) + 1;
        std::vector<double> out(n * n * n * n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                for (size_t k = 0; k < n; ++k)
                    for (size_t m = 0; m < n; ++m)
                        out[((i * n + j) * n + k) * n + m] =
                            value(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k), static_cast<int>(m));
        return out;
    }
};

namespace detail {

inline bool is_diagonal_key(const CoeffKey& c) {
    std::array<int, 4> a = c.arr();
    std::sort(a.begin(), a.end());
    return a[0] == 0 && a[1] == 0 && a[2] == a[3];
}

inline CoeffValue compute_entry(const ModelConfig& cfg, const CoeffKey& key, ExactPolicy policy) {
    CoeffValue v;
    bool one_minus = resonance_class(cfg, key) == Resonance::OneMinus;
    bool want_exact = policy == ExactPolicy::All || one_minus ||
                      (policy == ExactPolicy::DiagonalOnly && is_diagonal_key(key));
    if (want_exact) {
        v.exact = coeff_exact(cfg, key);
        if (one_minus && !v.exact->is_zero())
            throw VerificationError("one-minus resonant coefficient is not zero");
        v.approx = to_float(*v.exact);
    } else {
        v.approx = coeff_quad(cfg, key);
    }
    return v;
}

}  // namespace detail

// Every canonical key with indices <= max_index. Work is split over threads by
// key, and each value depends only on its key, so the result does not depend on
// the thread count.
inline CoeffTable build_table(const ModelConfig& cfg, int max_index, ExactPolicy policy, unsigned threads = 1) {
    if (max_index < 0) throw ValidationError("max_index must be nonnegative");
    bool any_exact = policy == ExactPolicy::All;
    if (any_exact && max_index > kMaxExactIndex) throw IndexTooLarge("exact tables support max_index <= 64");
    std::vector<CoeffKey> keys;
    for (int i = 0; i <= max_index; ++i)
        for (int j = i; j <= max_index; ++j)
            for (int k = j; k <= max_index; ++k)
                for (int m = 0; m <= max_index; ++m) keys.push_back({i, j, k, m});
    std::vector<CoeffValue> vals(keys.size());
    threads = std::max(1u, threads);
    if (threads == 1) {
        for (size_t n = 0; n < keys.size(); ++n) vals[n] = detail::compute_entry(cfg, keys[n], policy);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr err;
        std::mutex err_mu;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (size_t n = t; n < keys.size(); n += threads) vals[n] = detail::compute_entry(cfg, keys[n], policy);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) err = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
    }
    CoeffTable table;
    table.cfg = cfg;
    table.max_index = max_index;
    table.policy = policy;
    for (size_t n = 0; n < keys.size(); ++n) table.entries.emplace(keys[n], std::move(vals[n]));
    return table;
}

inline nlohmann::json table_to_json(const CoeffTable& t) {
    nlohmann::json j;
    j["model"] = model_name(t.cfg.model);
    j["delta"] = t.cfg.delta;
    j["max_index"] = t.max_index;
    j["policy"] = policy_name(t.policy);
    j["schema_version"] = 1;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [key, v] : t.entries) {
        nlohmann::json e;
        e["key"] = {key.i, key.j, key.k, key.m};
        e["exact"] = v.exact ? nlohmann::json(*v.exact) : nlohmann::json(nullptr);
        e["approx"] = v.approx;
        entries.push_back(e);
    }
    j["entries"] = entries;
    return j;
}

inline CoeffTable table_from_json(const nlohmann::json& j) {
    if (j.value("schema_version", 0) != 1) throw ValidationError("unsupported table schema_version");
    CoeffTable t;
    t.cfg = ModelConfig::make(parse_model(j.at("model").get<std::string>()), j.at("delta").get<int>());
    t.max_index = j.at("max_index").get<int>();
    t.policy = parse_policy(j.at("policy").get<std::string>());
    for (const auto& e : j.at("entries")) {
        auto k = e.at("key");
        CoeffKey key{k.at(0).get<int>(), k.at(1).get<int>(), k.at(2).get<int>(), k.at(3).get<int>()};
        CoeffValue v;
        if (!e.at("exact").is_null()) v.exact = e.at("exact").get<ExactScalar>();
        v.approx = e.at("approx").get<double>();
        t.entries.emplace(key.canonical(), v);
    }
    return t;
}

inline std::string table_to_csv(const CoeffTable& t) {
    std::ostringstream os;
    os.precision(17);
    os << "i,j,k,m,approx\n";
    for (const auto& [key, v] : t.entries) os << key.i << ',' << key.j << ',' << key.k << ',' << key.m << ',' << v.approx << '\n';
    return os.str();
}

}  // namespace rf
