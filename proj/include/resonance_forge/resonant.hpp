#pragma once

// The resonant system around the 1-mode data xi = kappa0 e_0: averaged cubic
// operator, its differential, harmonic energy, linear flow, the time-averaged
// quartic energy and its second differential on the energy surface.

#include <json.hpp>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "coefficients.hpp"

namespace rf {

using ModeVector = std::vector<double>;

struct StateVector {
    ModeVector q;  // positions zeta_1^(m)
    ModeVector p;  // velocities zeta_2^(m)

    StateVector() = default;
    explicit StateVector(size_t n) : q(n, 0.0), p(n, 0.0) {}
    StateVector(ModeVector q_, ModeVector p_) : q(std::move(q_)), p(std::move(p_)) {
        if (q.size() != p.size()) throw ValidationError("state components differ in length");
    }
    size_t size() const { return q.size(); }
};

inline ExactScalar kappa0_sq(const ModelConfig& cfg) {
    long w0 = omega(cfg, 0);
    return ExactScalar(8 * w0 * w0) / (ExactScalar(3) * diag_closed(cfg, 0));
}

// Positive root. The defining relation and the closed display must agree.
inline ExactScalar kappa0(const ModelConfig& cfg) {
    ExactScalar k2 = kappa0_sq(cfg);
    if (k2 != kappa0_closed_sq(cfg.model, cfg.delta))
        throw VerificationError("kappa0 closed form disagrees with its definition for " + cfg.name());
    return k2.sqrt();
}

// C_0000/w_0^2 - 2 C_00mm/w_m^2
inline ExactScalar gap(const ModelConfig& cfg, long m) {
    if (m < 1) throw ValidationError("gap needs m >= 1");
    long w0 = omega(cfg, 0), wm = omega(cfg, m);
    return diag_closed(cfg, 0) / ExactScalar(w0 * w0) - ExactScalar(2) * diag_closed(cfg, m) / ExactScalar(wm * wm);
}

// Diagonal entry m of dM(xi).
inline ExactScalar dM_diag(const ModelConfig& cfg, long m) {
    if (m < 0) throw ValidationError("mode index must be nonnegative");
    long w0 = omega(cfg, 0);
    if (m == 0) return ExactScalar(-2 * w0 * w0);
    long wm = omega(cfg, m);
    return ExactScalar(w0 * w0 * wm * wm) / diag_closed(cfg, 0) * gap(cfg, m);
}

struct GapReport {
    ModelConfig cfg;
    long m_max = 0;
    std::vector<ExactScalar> gaps;  // gaps[m-1] = gap(m)
    bool existence_ok = false;
    bool coercive = false;
    bool increasing = false;  // strictly, checked exactly up to m_max
    std::optional<ExactScalar> c_perp;
};

// Gaps increase strictly in m, so gap(1) > 0 already settles coercivity for
// every m; the finite scan records that the monotonicity holds up to m_max.
inline GapReport stability_classify(const ModelConfig& cfg, long m_max) {
    if (m_max < 3) throw ValidationError("m_max must be at least 3");
    GapReport r;
    r.cfg = cfg;
    r.m_max = m_max;
    r.existence_ok = true;
    r.coercive = true;
    r.increasing = true;
    for (long m = 1; m <= m_max; ++m) {
        ExactScalar g = gap(cfg, m);
        if (g.is_zero()) r.existence_ok = false;
        if (g.sign() <= 0) r.coercive = false;
        if (!r.gaps.empty() && (g - r.gaps.back()).sign() <= 0) r.increasing = false;
        r.gaps.push_back(g);
    }
    if (r.coercive) r.c_perp = r.gaps.front();
    return r;
}

inline nlohmann::json gap_report_to_json(const GapReport& r) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["model"] = model_name(r.cfg.model);
    j["delta"] = r.cfg.delta;
    j["m_max"] = r.m_max;
    j["gaps"] = nlohmann::json::array();
    j["gaps_exact"] = nlohmann::json::array();
    for (const auto& g : r.gaps) {
        j["gaps"].push_back(to_float(g));
        j["gaps_exact"].push_back(g);
    }
    j["existence_ok"] = r.existence_ok;
    j["coercive"] = r.coercive;
    j["gaps_increasing"] = r.increasing;
    j["c_perp"] = r.c_perp ? nlohmann::json(*r.c_perp) : nlohmann::json(nullptr);
    return j;
}

// ---------------------------------------------------------------------------
// Phase space

inline std::vector<double> frequencies(const ModelConfig& cfg, size_t n) {
    std::vector<double> w(n);
    for (size_t m = 0; m < n; ++m) w[m] = static_cast<double>(omega(cfg, static_cast<long>(m)));
    return w;
}

// No 1/2 here; the evolver Hamiltonian carries it.
inline double harmonic_energy(const ModelConfig& cfg, const StateVector& s) {
    auto w = frequencies(cfg, s.size());
    double h = 0;
    for (size_t m = 0; m < s.size(); ++m) h += s.p[m] * s.p[m] + w[m] * w[m] * s.q[m] * s.q[m];
    return h;
}

inline StateVector linear_flow(const ModelConfig& cfg, const StateVector& s, double t) {
    auto w = frequencies(cfg, s.size());
    StateVector out(s.size());
    for (size_t m = 0; m < s.size(); ++m) {
        double c = std::cos(w[m] * t), sn = std::sin(w[m] * t);
        out.q[m] = s.q[m] * c + s.p[m] / w[m] * sn;
        out.p[m] = -w[m] * s.q[m] * sn + s.p[m] * c;
    }
    return out;
}

// xi = (kappa0 e_0, 0) in n modes.
inline StateVector one_mode_state(const ModelConfig& cfg, size_t n, double amplitude = 1.0) {
    StateVector s(n);
    s.q[0] = amplitude * to_float(kappa0(cfg));
    return s;
}

namespace detail {

// Dense table restricted to the first n modes.
class Tensor {
public:
    Tensor(const CoeffTable& t, size_t n) : n_(n), c_(n * n * n * n) {
        if (n == 0) throw ValidationError("empty mode vector");
        if (!t.covers(static_cast<int>(n) - 1))
            throw TableIncomplete("coefficient table (max index " + std::to_string(t.max_index) + ") does not cover " +
                                  std::to_string(n) + " modes");
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i; j < n; ++j)
                for (size_t k = j; k < n; ++k)
                    for (size_t m = 0; m < n; ++m) {
                        double v = t.value(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k), static_cast<int>(m));
                        size_t a[3] = {i, j, k};
                        // all orderings of (i, j, k); the table is fully symmetric
                        for (int p = 0; p < 6; ++p) {
                            static const int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
                            c_[idx(a[perm[p][0]], a[perm[p][1]], a[perm[p][2]], m)] = v;
                        }
                    }
    }
    size_t n() const { return n_; }
    double operator()(size_t i, size_t j, size_t k, size_t m) const { return c_[idx(i, j, k, m)]; }

    // -sum_ijk C_ijkm q_i q_j q_k
    ModeVector cubic(const ModeVector& q) const {
        ModeVector out(n_, 0.0);
        for (size_t m = 0; m < n_; ++m) {
            double s = 0;
            for (size_t i = 0; i < n_; ++i) {
                if (q[i] == 0) continue;
                for (size_t j = 0; j < n_; ++j) {
                    if (q[j] == 0) continue;
                    double qij = q[i] * q[j];
                    const double* row = &c_[idx(i, j, 0, m)];
                    for (size_t k = 0; k < n_; ++k) s += qij * q[k] * row[k * n_];
                }
            }
            out[m] = -s;
        }
        return out;
    }

    double quartic(const ModeVector& q) const {
        ModeVector g = cubic(q);
        double s = 0;
        for (size_t m = 0; m < n_; ++m) s -= g[m] * q[m];
        return s;
    }

private:
    size_t idx(size_t i, size_t j, size_t k, size_t m) const { return ((i * n_ + j) * n_ + k) * n_ + m; }
    size_t n_;
    std::vector<double> c_;
};

// Equidistant samples over one period; exact for trigonometric polynomials of
// degree below n.
inline int time_samples(const ModelConfig& cfg, size_t n, int degree_factor) {
    return degree_factor * static_cast<int>(omega(cfg, static_cast<long>(n) - 1)) + 8;
}

}  // namespace detail

// Velocity component of the average over t of Phi^{-t} f3(Phi^t (zeta, 0)).
inline ModeVector average_f3(const ModelConfig& cfg, const CoeffTable& table, const ModeVector& zeta) {
    detail::Tensor C(table, zeta.size());
    auto w = frequencies(cfg, zeta.size());
    int nt = detail::time_samples(cfg, zeta.size(), 8);
    ModeVector acc(zeta.size(), 0.0);
    StateVector s0(zeta, ModeVector(zeta.size(), 0.0));
    for (int l = 0; l < nt; ++l) {
        double t = 2 * M_PI * l / nt;
        ModeVector g = C.cubic(linear_flow(cfg, s0, t).q);
        for (size_t m = 0; m < zeta.size(); ++m) acc[m] += g[m] * std::cos(w[m] * t);
    }
    for (auto& a : acc) a /= nt;
    return acc;
}

// |L xi + <f3>(xi)| in the first `trunc` + 1 modes.
inline double M_residual(const ModelConfig& cfg, const CoeffTable& table, int trunc, double amplitude_scale = 1.0) {
    if (trunc < cfg.delta_star() + 1) throw ValidationError("truncation must exceed delta*");
    size_t n = static_cast<size_t>(trunc) + 1;
    ModeVector xi = one_mode_state(cfg, n, amplitude_scale).q;
    ModeVector f = average_f3(cfg, table, xi);
    auto w = frequencies(cfg, n);
    double r = 0;
    for (size_t m = 0; m < n; ++m) {
        double v = w[m] * w[m] * xi[m] + f[m];
        r += v * v;
    }
    return std::sqrt(r);
}

// ---------------------------------------------------------------------------
// Time-averaged quartic energy <f>, f = 1/4 sum C q q q q

inline double P_ijkm(const StateVector& z, const std::vector<double>& w, size_t i, size_t j, size_t k, size_t m) {
    const auto &a = z.q, &b = z.p;
    return -b[i] * b[j] * a[k] * a[m] / (w[i] * w[j]) + b[i] * a[j] * b[k] * a[m] / (w[i] * w[k]) +
           a[i] * b[j] * b[k] * a[m] / (w[j] * w[k]) + b[i] * a[j] * a[k] * b[m] / (w[i] * w[m]) +
           a[i] * b[j] * a[k] * b[m] / (w[j] * w[m]) - a[i] * a[j] * b[k] * b[m] / (w[k] * w[m]) +
           a[i] * a[j] * a[k] * a[m] + b[i] * b[j] * b[k] * b[m] / (w[i] * w[j] * w[k] * w[m]);
}

// (3/32) sum over m = i + j - k of C_ijkm P_ijkm.
inline double time_average_closed(const ModelConfig& cfg, const detail::Tensor& C, const StateVector& z) {
    const size_t n = z.size();
    auto w = frequencies(cfg, n);
    double s = 0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k) {
                long m = static_cast<long>(i + j) - static_cast<long>(k);
                if (m < 0 || m >= static_cast<long>(n)) continue;
                s += C(i, j, k, static_cast<size_t>(m)) * P_ijkm(z, w, i, j, k, static_cast<size_t>(m));
            }
    return 3.0 / 32.0 * s;
}

inline double time_average_direct(const ModelConfig& cfg, const detail::Tensor& C, const StateVector& z) {
    int nt = detail::time_samples(cfg, z.size(), 4);
    double s = 0;
    for (int l = 0; l < nt; ++l) s += 0.25 * C.quartic(linear_flow(cfg, z, 2 * M_PI * l / nt).q);
    return s / nt;
}

struct TimeAverage {
    double closed = 0;
    double direct = 0;
};

inline TimeAverage time_average_f(const ModelConfig& cfg, const CoeffTable& table, const StateVector& z) {
    detail::Tensor C(table, z.size());
    return {time_average_closed(cfg, C, z), time_average_direct(cfg, C, z)};
}

// -h/2 + <f>, the Lagrangian at multiplier -1/2.
inline double lagrangian(const ModelConfig& cfg, const detail::Tensor& C, const StateVector& z) {
    return -0.5 * harmonic_energy(cfg, z) + time_average_closed(cfg, C, z);
}

// ---------------------------------------------------------------------------
// Second differential at xi

struct GapCache {
    double w0sq_over_c0 = 0;        // w_0^2 / C_0000
    std::vector<double> gaps;       // gaps[l], l >= 1; gaps[0] unused
};

inline GapCache gap_cache(const ModelConfig& cfg, size_t n) {
    GapCache g;
    long w0 = omega(cfg, 0);
    g.w0sq_over_c0 = to_float(ExactScalar(w0 * w0) / diag_closed(cfg, 0));
    g.gaps.assign(n, 0.0);
    for (size_t l = 1; l < n; ++l) g.gaps[l] = to_float(gap(cfg, static_cast<long>(l)));
    return g;
}

// X = (V, W). The mode-0 terms are those of the closed display; off the
// tangent space of the energy surface they are not a Hessian of anything.
inline double second_diff(const ModelConfig& cfg, const StateVector& X, const GapCache& g) {
    auto w = frequencies(cfg, X.size());
    double s = 0;
    for (size_t l = 1; l < X.size(); ++l) {
        double v = w[l] * X.q[l];
        s += g.gaps[l] * (v * v + X.p[l] * X.p[l]);
    }
    return -g.w0sq_over_c0 * s + w[0] * w[0] * X.q[0] * X.q[0] - X.p[0] * X.p[0];
}

inline double second_diff(const ModelConfig& cfg, const StateVector& X) { return second_diff(cfg, X, gap_cache(cfg, X.size())); }

// Central differences of the Lagrangian along X at xi, Richardson-extrapolated
// from steps 1e-2 and 1e-3. Along a line the Lagrangian is a quartic, so the
// extrapolation is exact and larger steps only reduce rounding.
inline double second_diff_fd(const ModelConfig& cfg, const detail::Tensor& C, const StateVector& X) {
    StateVector xi = one_mode_state(cfg, X.size());
    auto along = [&](double s) {
        StateVector z = xi;
        for (size_t m = 0; m < X.size(); ++m) {
            z.q[m] += s * X.q[m];
            z.p[m] += s * X.p[m];
        }
        return lagrangian(cfg, C, z);
    };
    double f0 = along(0);
    auto d2 = [&](double h) { return (along(h) - 2 * f0 + along(-h)) / (h * h); };
    double a = d2(1e-2), b = d2(1e-3);
    return b + (b - a) / 99.0;
}

// Central-difference gradient of the Lagrangian at xi, all 2n directions.
inline double gradient_residual(const ModelConfig& cfg, const CoeffTable& table, size_t n, double h = 1e-5) {
    detail::Tensor C(table, n);
    StateVector xi = one_mode_state(cfg, n);
    double worst = 0;
    for (int comp = 0; comp < 2; ++comp)
        for (size_t m = 0; m < n; ++m) {
            StateVector a = xi, b = xi;
            (comp == 0 ? a.q : a.p)[m] += h;
            (comp == 0 ? b.q : b.p)[m] -= h;
            worst = std::max(worst, std::fabs((lagrangian(cfg, C, a) - lagrangian(cfg, C, b)) / (2 * h)));
        }
    return worst;
}

struct CoercivityReport {
    double c_tilde = 0;     // (w_0^2 / C_0000) gap(1) - 1e-12
    double min_ratio = 0;   // min over samples of -d2 / |X|^2
    int samples = 0;
};

// Random tangents with vanishing 0-mode components; norm sum (w V)^2 + W^2.
inline CoercivityReport coercivity_check(const ModelConfig& cfg, int n_modes, int samples, unsigned seed = 7) {
    if (n_modes < 2) throw ValidationError("coercivity needs at least two modes");
    if (!(gap(cfg, 1).sign() > 0)) throw ValidationError(cfg.name() + " is not coercive (gap(1) <= 0)");
    GapCache g = gap_cache(cfg, static_cast<size_t>(n_modes));
    auto w = frequencies(cfg, static_cast<size_t>(n_modes));
    CoercivityReport rep;
    rep.c_tilde = g.w0sq_over_c0 * g.gaps[1] - 1e-12;
    rep.min_ratio = INFINITY;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    for (int s = 0; s < samples; ++s) {
        StateVector X(static_cast<size_t>(n_modes));
        double norm = 0;
        for (size_t l = 1; l < X.size(); ++l) {
            X.q[l] = nd(rng) / w[l];
            X.p[l] = nd(rng);
            norm += w[l] * w[l] * X.q[l] * X.q[l] + X.p[l] * X.p[l];
        }
        double ratio = -second_diff(cfg, X, g) / norm;
        rep.min_ratio = std::min(rep.min_ratio, ratio);
        if (ratio < rep.c_tilde)
            throw CoercivityViolated("coercivity fails for sample " + std::to_string(s) + ": ratio " + std::to_string(ratio));
        ++rep.samples;
    }
    return rep;
}

}  // namespace rf
