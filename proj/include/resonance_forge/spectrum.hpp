#pragma once

// Model configuration, eigenvalues, Jacobi eigenbasis and Gauss-Jacobi rules.
// Eigenfunctions live in the variable y = cos(2x).

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>
#include <vector>

#include "exact_scalar.hpp"
#include "poly.hpp"

namespace rf {

enum class Model { KG, WM };

inline std::string model_name(Model m) { return m == Model::KG ? "kg" : "wm"; }

inline Model parse_model(const std::string& s) {
    if (s == "kg" || s == "KG") return Model::KG;
    if (s == "wm" || s == "WM") return Model::WM;
    throw ValidationError("unknown model '" + s + "' (expected kg or wm)");
}

struct ModelConfig {
    Model model = Model::KG;
    int delta = 2;
    Rational jacobi_a, jacobi_b;      // eigenbasis weight (1-y)^a (1+y)^b
    int mass_offset = 0;              // omega_n = 2n + mass_offset
    Rational weight_a, weight_b;      // exponents of the quartic coefficient integral

    static ModelConfig make(Model model, int delta) {
        ModelConfig c;
        c.model = model;
        c.delta = delta;
        if (model == Model::KG) {
            if (delta < 2) throw ValidationError("KG requires delta >= 2");
            c.jacobi_a = make_rational(1, 2);
            c.jacobi_b = make_rational(2 * delta - 3, 2);
            c.mass_offset = delta;
            c.weight_a = make_rational(1, 2);
            c.weight_b = make_rational(4 * delta - 5, 2);
        } else {
            if (delta < 1) throw ValidationError("WM requires delta >= 1");
            c.jacobi_a = delta;
            c.jacobi_b = 1;
            c.mass_offset = delta + 2;
            c.weight_a = 2 * delta - 1;
            c.weight_b = 3;
        }
        return c;
    }

    // The mode hit by the 3*omega_0 harmonic: omega_m = 3 omega_0.
    int delta_star() const { return mass_offset; }
    std::string name() const { return model_name(model) + " delta=" + std::to_string(delta); }
};

inline long omega(const ModelConfig& cfg, long n) {
    if (n < 0) throw ValidationError("mode index must be nonnegative");
    return 2 * n + cfg.mass_offset;
}

// P_n^{(a,b)} by the three-term recurrence, exact coefficients.
inline Poly jacobi_poly(int n, const Rational& a, const Rational& b) {
    if (a <= -1 || b <= -1) throw ValidationError("Jacobi parameters must exceed -1");
    if (n < 0) throw ValidationError("negative Jacobi degree");
    Poly p0(1);
    if (n == 0) return p0;
    Poly y = Poly::x();
    Poly p1 = Poly(a + 1) + Poly((a + b + 2) / 2) * (y - Poly(1));
    for (int k = 2; k <= n; ++k) {
        Rational s = 2 * k + a + b;
        Rational c0 = 2 * k * (k + a + b) * (s - 2);
        Rational c1 = (s - 1) * s * (s - 2), c2 = (s - 1) * (a * a - b * b);
        Rational c3 = 2 * (k + a - 1) * (k + b - 1) * s;
        Poly p2 = Poly(1 / c0) * ((Poly(c1) * y + Poly(c2)) * p1 - Poly(c3) * p0);
        p0 = std::move(p1);
        p1 = std::move(p2);
    }
    return p1;
}

// P_n^{(a,b)}(x) and its derivative in long double.
struct JacobiValue {
    long double p, dp;
};

inline JacobiValue jacobi_eval(int n, long double a, long double b, long double x) {
    auto value = [](int n, long double a, long double b, long double x) {
        long double p0 = 1;
        if (n == 0) return p0;
        long double p1 = (a + 1) + (a + b + 2) * (x - 1) / 2;
        for (int k = 2; k <= n; ++k) {
            long double s = 2 * k + a + b;
            long double c0 = 2 * k * (k + a + b) * (s - 2);
            long double p2 = ((s - 1) * (s * (s - 2) * x + a * a - b * b) * p1 - 2 * (k + a - 1) * (k + b - 1) * s * p0) / c0;
            p0 = p1;
            p1 = p2;
        }
        return p1;
    };
    JacobiValue v{value(n, a, b, x), 0};
    if (n > 0) v.dp = (n + a + b + 1) / 2 * value(n - 1, a + 1, b + 1, x);
    return v;
}

// N_n^2 with e_n = N_n P_n normalized against the model's measure.
inline ExactScalar norm_sq(const ModelConfig& cfg, long n) {
    if (n < 0) throw ValidationError("mode index must be nonnegative");
    if (cfg.model == Model::WM) {
        long d = cfg.delta;
        return ExactScalar(make_rational(2 * (d + n + 1) * (d + 2 * n + 2), n + 1));
    }
    long d = cfg.delta;
    return ExactScalar(2) * gamma_exact(2 * (n + 1)) / gamma_exact(2 * n + 3) * ExactScalar(2 * n + d) *
           gamma_exact(2 * (n + d)) / gamma_exact(2 * n + 2 * d - 1);
}

// The (constant) first eigenfunction.
inline ExactScalar e0(const ModelConfig& cfg) { return norm_sq(cfg, 0).sqrt(); }

// Direct transcription of the closed e_0 display, for cross-checking.
inline ExactScalar e0_closed(const ModelConfig& cfg) {
    long d = cfg.delta;
    if (cfg.model == Model::WM) return ExactScalar::sqrt_of(2 * (d + 1) * (d + 2));
    // (2 / pi^(1/4)) sqrt(d Gamma(d) / Gamma(d - 1/2)); Gamma(d - 1/2) = q sqrt(pi)
    ExactScalar g = gamma_exact(2 * d - 1);
    Rational inner = d * gamma_exact(2 * d).q() / g.q();
    // squared: 4 / sqrt(pi) * inner / sqrt(pi)
    return ExactScalar::make(2, -1, inner);
}

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int exact_degree = 0;
    // Extended-precision copies used by the integrators that need them.
    std::vector<long double> nodes_ld;
    std::vector<long double> weights_ld;
};

// Golub-Welsch for starting values, then Newton polishing and the classical
// Christoffel weight formula in long double.
inline QuadratureRule gauss_jacobi_rule(const Rational& a_q, const Rational& b_q, int npoints) {
    if (a_q <= -1 || b_q <= -1) throw ValidationError("Jacobi parameters must exceed -1");
    if (npoints < 1) throw ValidationError("npoints must be positive");
    if (npoints > 512) throw ConvergenceError("Gauss-Jacobi rule capped at 512 points");
    const long double a = a_q.get_d(), b = b_q.get_d();
    const int n = npoints;

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        long double s = 2 * i + a + b;
        long double alpha = (i == 0) ? (b - a) / (a + b + 2) : (b * b - a * a) / (s * (s + 2));
        T(i, i) = static_cast<double>(alpha);
        if (i + 1 < n) {
            int k = i + 1;
            long double sk = 2 * k + a + b;
            long double beta = (k == 1) ? 4 * (1 + a) * (1 + b) / ((2 + a + b) * (2 + a + b) * (3 + a + b))
                                        : 4 * k * (k + a) * (k + b) * (k + a + b) / (sk * sk * (sk + 1) * (sk - 1));
            T(i, k) = T(k, i) = static_cast<double>(std::sqrt(beta));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("tridiagonal eigen-solve failed");

    const long double log_c = std::lgamma(static_cast<long double>(n) + a + 1) + std::lgamma(static_cast<long double>(n) + b + 1) -
                              std::lgamma(static_cast<long double>(n) + a + b + 1) - std::lgamma(static_cast<long double>(n) + 1) +
                              (a + b + 1) * std::log(2.0L);
    QuadratureRule rule;
    rule.exact_degree = 2 * n - 1;
    for (int i = 0; i < n; ++i) {
        long double x = es.eigenvalues()(i);
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            JacobiValue v = jacobi_eval(n, a, b, x);
            long double dx = v.p / v.dp;
            x -= dx;
            if (std::fabs(dx) <= 1e-19L * std::max(1.0L, std::fabs(x))) {
                converged = true;
                break;
            }
        }
        if (!converged || !(x > -1 && x < 1)) throw ConvergenceError("Newton refinement of Jacobi node failed");
        JacobiValue v = jacobi_eval(n, a, b, x);
        long double w = std::exp(log_c) / ((1 - x * x) * v.dp * v.dp);
        rule.nodes_ld.push_back(x);
        rule.weights_ld.push_back(w);
        rule.nodes.push_back(static_cast<double>(x));
        rule.weights.push_back(static_cast<double>(w));
    }
    return rule;
}

// Quadrature size for an integrand of polynomial degree D (two-node margin).
inline int nodes_for_degree(int D) { return (D + 1) / 2 + 2; }

// |(e_n|e_m) - [n==m]| by quadrature against the eigenbasis weight.
inline double orthonormality_defect(const ModelConfig& cfg, int n, int m) {
    if (n < 0 || m < 0) throw ValidationError("mode index must be nonnegative");
    QuadratureRule q = gauss_jacobi_rule(cfg.jacobi_a, cfg.jacobi_b, n + m + 2);
    long double a = cfg.jacobi_a.get_d(), b = cfg.jacobi_b.get_d();
    long double nn = std::sqrt(static_cast<long double>(to_float(norm_sq(cfg, n))));
    long double nm = std::sqrt(static_cast<long double>(to_float(norm_sq(cfg, m))));
    // the y-measure carries 2^-(mass_offset+1)
    long double scale = std::ldexp(1.0L, -(cfg.mass_offset + 1));
    long double s = 0;
    for (size_t i = 0; i < q.nodes_ld.size(); ++i) {
        long double x = q.nodes_ld[i];
        s += q.weights_ld[i] * jacobi_eval(n, a, b, x).p * jacobi_eval(m, a, b, x).p;
    }
    long double ip = scale * nn * nm * s;
    return static_cast<double>(std::fabs(ip - (n == m ? 1.0L : 0.0L)));
}

}  // namespace rf
