#pragma once

// Truncated Galerkin evolution of the rescaled mode system
//   q_m'' + w_m^2 q_m = -eps^2 sum_ijk C_ijkm q_i q_j q_k
// with a kick-rotate-kick leapfrog, plus distance to the linear 1-mode orbit.

#include <json.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "resonant.hpp"

namespace rf {

// Acceleration from the coefficient table; the cubic sum runs over i <= j <= k
// with multiplicities.
inline ModeVector rhs(const ModelConfig& cfg, const CoeffTable& table, const ModeVector& q, double eps) {
    const size_t n = q.size();
    if (n == 0 || !table.covers(static_cast<int>(n) - 1)) throw TableIncomplete("coefficient table does not cover the truncation");
    auto w = frequencies(cfg, n);
    ModeVector a(n);
    for (size_t m = 0; m < n; ++m) {
        double s = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i; j < n; ++j)
                for (size_t k = j; k < n; ++k) {
                    double mult = (i == j && j == k) ? 1 : (i == j || j == k) ? 3 : 6;
                    s += mult * table.value(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k), static_cast<int>(m)) *
                         q[i] * q[j] * q[k];
                }
        a[m] = -w[m] * w[m] * q[m] - eps * eps * s;
    }
    return a;
}

// Same force by projection: psi(x_l) = sum q_m e_m(x_l) on a Gauss rule exact
// for the quartic integrand, then -eps^2 sum_l w_l psi_l^3 e_m(x_l). O(N L)
// instead of O(N^4).
class GalerkinForce {
public:
    GalerkinForce(const ModelConfig& cfg, size_t n, double eps) : cfg_(cfg), n_(n), eps_(eps), w_(frequencies(cfg, n)) {
        if (n == 0) throw ValidationError("empty truncation");
        int npts = nodes_for_degree(4 * static_cast<int>(n - 1)) + 1;
        QuadratureRule rule = gauss_jacobi_rule(cfg.weight_a, cfg.weight_b, npts);
        long double a = cfg.jacobi_a.get_d(), b = cfg.jacobi_b.get_d();
        long double pref = to_float(coupling_prefactor(cfg));
        L_ = rule.nodes_ld.size();
        basis_.assign(L_ * n_, 0.0);
        weight_.resize(L_);
        for (size_t m = 0; m < n_; ++m) {
            long double nm = std::sqrt(static_cast<long double>(to_float(norm_sq(cfg, static_cast<long>(m)))));
            for (size_t l = 0; l < L_; ++l)
                basis_[l * n_ + m] = static_cast<double>(nm * jacobi_eval(static_cast<int>(m), a, b, rule.nodes_ld[l]).p);
        }
        for (size_t l = 0; l < L_; ++l) weight_[l] = static_cast<double>(pref * rule.weights_ld[l]);
        psi_.resize(L_);
    }

    size_t size() const { return n_; }
    double eps() const { return eps_; }
    const ModelConfig& cfg() const { return cfg_; }
    const std::vector<double>& freqs() const { return w_; }

    // Nonlinear part only: -eps^2 sum C q q q.
    void kick(const ModeVector& q, ModeVector& out) {
        out.assign(n_, 0.0);
        double e2 = eps_ * eps_;
        if (e2 == 0) return;
        fill_psi(q);
        for (size_t l = 0; l < L_; ++l) {
            double c = weight_[l] * psi_[l] * psi_[l] * psi_[l];
            const double* row = &basis_[l * n_];
            for (size_t m = 0; m < n_; ++m) out[m] += c * row[m];
        }
        for (auto& x : out) x *= -e2;
    }

    void accel(const ModeVector& q, ModeVector& out) {
        kick(q, out);
        for (size_t m = 0; m < n_; ++m) out[m] -= w_[m] * w_[m] * q[m];
    }

    // 1/2 sum (p^2 + w^2 q^2) + eps^2/4 sum C q q q q
    double hamiltonian(const StateVector& s) {
        double h = 0;
        for (size_t m = 0; m < n_; ++m) h += 0.5 * (s.p[m] * s.p[m] + w_[m] * w_[m] * s.q[m] * s.q[m]);
        if (eps_ == 0) return h;
        fill_psi(s.q);
        double v = 0;
        for (size_t l = 0; l < L_; ++l) v += weight_[l] * psi_[l] * psi_[l] * psi_[l] * psi_[l];
        return h + 0.25 * eps_ * eps_ * v;
    }

private:
    void fill_psi(const ModeVector& q) {
        for (size_t l = 0; l < L_; ++l) {
            const double* row = &basis_[l * n_];
            double s = 0;
            for (size_t m = 0; m < n_; ++m) s += q[m] * row[m];
            psi_[l] = s;
        }
    }

    ModelConfig cfg_;
    size_t n_;
    double eps_;
    std::vector<double> w_;
    size_t L_ = 0;
    std::vector<double> basis_;  // basis_[l*n + m] = e_m(x_l)
    std::vector<double> weight_;
    std::vector<double> psi_;
};

// Half nonlinear kick, exact linear rotation, half kick. Symplectic,
// time-reversible, second order, and exact when eps = 0. Negative dt runs the
// same map backwards.
class Leapfrog {
public:
    explicit Leapfrog(GalerkinForce& f) : f_(f) {}

    void step(StateVector& s, double dt) {
        const auto& w = f_.freqs();
        if (dt != dt_) {
            dt_ = dt;
            cs_.resize(w.size());
            sn_.resize(w.size());
            for (size_t m = 0; m < w.size(); ++m) {
                cs_[m] = std::cos(w[m] * dt);
                sn_[m] = std::sin(w[m] * dt);
            }
        }
        if (!fresh_) f_.kick(s.q, k_);
        for (size_t m = 0; m < s.size(); ++m) s.p[m] += 0.5 * dt * k_[m];
        for (size_t m = 0; m < s.size(); ++m) {
            double q = s.q[m], p = s.p[m];
            s.q[m] = q * cs_[m] + p / w[m] * sn_[m];
            s.p[m] = -w[m] * q * sn_[m] + p * cs_[m];
        }
        f_.kick(s.q, k_);
        for (size_t m = 0; m < s.size(); ++m) s.p[m] += 0.5 * dt * k_[m];
        fresh_ = true;
    }
    // Call after modifying a state outside step().
    void reset() { fresh_ = false; }

private:
    GalerkinForce& f_;
    ModeVector k_, cs_, sn_;
    double dt_ = 0;
    bool fresh_ = false;
};

inline StateVector step(GalerkinForce& f, const StateVector& s, double dt) {
    Leapfrog v(f);
    StateVector out = s;
    v.step(out, dt);
    return out;
}

// inf over tau of |state - Phi^tau(scale xi)| in the norm (sum w^2 dq^2 + dp^2)^(1/2).
// Only mode 0 depends on tau, and there the orbit is the circle of radius
// scale kappa0 w_0 in the (w_0 q_0, p_0) plane, so the infimum is explicit.
inline double distance_to_linear_orbit(const ModelConfig& cfg, const StateVector& s, double scale) {
    auto w = frequencies(cfg, s.size());
    double rest = 0;
    for (size_t m = 1; m < s.size(); ++m) rest += w[m] * w[m] * s.q[m] * s.q[m] + s.p[m] * s.p[m];
    double radius = std::fabs(scale) * to_float(kappa0(cfg)) * w[0];
    double r = std::hypot(w[0] * s.q[0], s.p[0]);
    return std::sqrt((r - radius) * (r - radius) + rest);
}

struct EvolveConfig {
    ModelConfig cfg;
    double eps = 0.05;
    int trunc = 16;          // modes 0..trunc
    double dt = 0;           // 0: 2 pi / (64 w_N)
    double t_end = 0;        // 0: `periods` linear periods
    double periods = 10;
    int record_every = 64;

    void validate() const {
        if (!(eps >= 0)) throw ValidationError("eps must be nonnegative");
        if (trunc < cfg.delta_star() + 1) throw ValidationError("truncation must exceed delta*");
        if (dt < 0) throw ValidationError("dt must be positive");
        if (record_every < 1) throw ValidationError("record_every must be positive");
        if (!(t_end >= 0) || !(periods > 0)) throw ValidationError("time horizon must be positive");
    }
    // Steps per 2 pi; dt always divides 2 pi exactly.
    long steps_per_period() const {
        if (dt > 0) return std::max<long>(1, std::lround(2 * M_PI / dt));
        return 64 * omega(cfg, trunc);
    }
    double step_size() const { return 2 * M_PI / static_cast<double>(steps_per_period()); }
    long total_steps() const {
        double horizon = t_end > 0 ? t_end : 2 * M_PI * periods;
        return std::lround(horizon / step_size());
    }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::vector<double> energy;
    std::vector<double> h_omega;
    std::vector<double> dist_linear;  // to the orbit of xi, rescaled units

    double sup_dist() const { return dist_linear.empty() ? 0 : *std::max_element(dist_linear.begin(), dist_linear.end()); }
    // Largest deviation of H from its initial value, relative.
    double energy_band() const {
        double d = 0;
        for (double h : energy) d = std::max(d, std::fabs(h - energy.front()));
        return energy.empty() || energy.front() == 0 ? d : d / std::fabs(energy.front());
    }
    // Secular part: mean of H over the last period minus the first, relative.
    double energy_drift() const {
        if (times.size() < 2) return 0;
        const double T = 2 * M_PI, end = times.back();
        double a = 0, b = 0;
        int na = 0, nb = 0;
        for (size_t i = 0; i < times.size(); ++i) {
            if (times[i] < T) a += energy[i], ++na;
            if (times[i] > end - T) b += energy[i], ++nb;
        }
        double d = std::fabs(b / nb - a / na);
        return energy.front() == 0 ? d : d / std::fabs(energy.front());
    }
};

inline Trajectory integrate(const EvolveConfig& ec, const StateVector& initial) {
    ec.validate();
    size_t n = static_cast<size_t>(ec.trunc) + 1;
    if (initial.size() != n) throw ValidationError("initial state does not match the truncation");
    GalerkinForce f(ec.cfg, n, ec.eps);
    Leapfrog v(f);
    double dt = ec.step_size();
    long steps = ec.total_steps();
    Trajectory tr;
    StateVector s = initial;
    auto record = [&](long i) {
        tr.times.push_back(dt * static_cast<double>(i));
        tr.states.push_back(s);
        tr.energy.push_back(f.hamiltonian(s));
        tr.h_omega.push_back(harmonic_energy(ec.cfg, s));
        tr.dist_linear.push_back(distance_to_linear_orbit(ec.cfg, s, 1.0));
    };
    record(0);
    for (long i = 1; i <= steps; ++i) {
        v.step(s, dt);
        if (i % ec.record_every == 0 || i == steps) record(i);
    }
    return tr;
}

inline Trajectory integrate_one_mode(const EvolveConfig& ec) {
    return integrate(ec, one_mode_state(ec.cfg, static_cast<size_t>(ec.trunc) + 1));
}

inline std::string trajectory_to_csv(const Trajectory& tr) {
    std::ostringstream os;
    os.precision(17);
    size_t n = tr.states.empty() ? 0 : tr.states.front().size();
    os << "t,H,h_omega,dist_linear";
    for (size_t m = 0; m < n; ++m) os << ",q_" << m;
    for (size_t m = 0; m < n; ++m) os << ",p_" << m;
    os << '\n';
    for (size_t r = 0; r < tr.times.size(); ++r) {
        os << tr.times[r] << ',' << tr.energy[r] << ',' << tr.h_omega[r] << ',' << tr.dist_linear[r];
        for (double x : tr.states[r].q) os << ',' << x;
        for (double x : tr.states[r].p) os << ',' << x;
        os << '\n';
    }
    return os.str();
}

// Least-squares slope of log(sup dist) against log(eps).
inline double loglog_slope(const std::vector<double>& eps, const std::vector<double>& sup) {
    if (eps.size() != sup.size() || eps.size() < 2) throw ValidationError("slope needs at least two points");
    double mx = 0, my = 0;
    for (size_t i = 0; i < eps.size(); ++i) {
        mx += std::log(eps[i]);
        my += std::log(sup[i]);
    }
    mx /= static_cast<double>(eps.size());
    my /= static_cast<double>(eps.size());
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < eps.size(); ++i) {
        double dx = std::log(eps[i]) - mx;
        sxy += dx * (std::log(sup[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

struct ScalingStudy {
    std::vector<double> eps;
    std::vector<double> sup_dist;
    double slope = 0;
};

inline ScalingStudy eps_scaling(EvolveConfig ec, const std::vector<double>& eps_values) {
    ScalingStudy st;
    for (double e : eps_values) {
        ec.eps = e;
        st.eps.push_back(e);
        st.sup_dist.push_back(integrate_one_mode(ec).sup_dist());
    }
    st.slope = loglog_slope(st.eps, st.sup_dist);
    return st;
}

inline nlohmann::json trajectory_summary(const EvolveConfig& ec, const Trajectory& tr, const ScalingStudy* st = nullptr) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["model"] = model_name(ec.cfg.model);
    j["delta"] = ec.cfg.delta;
    j["trunc"] = ec.trunc;
    j["eps"] = ec.eps;
    j["dt"] = ec.step_size();
    j["steps"] = ec.total_steps();
    j["sup_dist"] = tr.sup_dist();
    j["energy_drift"] = tr.energy_drift();
    j["energy_band"] = tr.energy_band();
    j["slope_estimate"] = st ? nlohmann::json(st->slope) : nlohmann::json(nullptr);
    if (st) {
        j["scaling"] = {{"eps", st->eps}, {"sup_dist", st->sup_dist}};
    }
    return j;
}

}  // namespace rf
