// analytic.hpp — Laplace-domain solution of the reduced system: the 6x6
// transformed linear solve, the closed-form target population, the
// final-value steady state, and the ordered noiseless limits.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "platonet/reduced.hpp"
#include "platonet/types.hpp"

namespace platonet {

struct RateTriple {
    double gamma_a;   // 2*gamma + 2*Gamma_diss
    double gamma_b;   // 2*gamma + 2*Gamma_diss + Gamma
    double gamma_c;   // 2*Gamma_diss + 2*Gamma

    explicit RateTriple(const NoiseRates& r)
        : gamma_a(2 * r.gamma + 2 * r.gamma_diss),
          gamma_b(2 * r.gamma + 2 * r.gamma_diss + r.gamma_sink),
          gamma_c(2 * r.gamma_diss + 2 * r.gamma_sink) {}
};

struct LaplaceSolution {
    double lambda_n, x, y, rho_nn, rho_env, rho_target;
};

// Solve the six transformed linear equations at s > 0 directly. This is the
// ground truth for the transformed solution, independent of how the typeset
// closed form is parenthesized. General initial conditions enter through the
// right-hand side; the paper's default is (Lambda_N, x, y, rho_NN, rho_00,
// rho_target)(0) = (1, 0, 0, 0, 0, 0).
inline LaplaceSolution solve_laplace(const ReducedSpec& spec, double s) {
    if (!(s > 0)) throw SingularSystem("solve_laplace: s must be positive", 0.0);
    spec.validate();
    const double g = spec.rates.gamma;
    const double gd = spec.rates.gamma_diss;
    const double G = spec.rates.gamma_sink;
    const double J = spec.J;
    const double nc = spec.n_c;
    const RateTriple rt(spec.rates);
    const auto& i0 = spec.initial;

    Eigen::Matrix<double, 6, 6> A = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> b;
    // (s + Gamma_A) L + 2 Gamma x + 2 gamma (rho00 + rhot) = Lambda(0) + 2 gamma / s
    A(0, 0) = s + rt.gamma_a; A(0, 1) = 2 * G; A(0, 4) = 2 * g; A(0, 5) = 2 * g;
    b(0) = i0.lambda_n + 2 * g / s;
    // (s + Gamma_B) x + (Gamma - 2 gamma) rho_NN + J Nc y = x(0)
    A(1, 1) = s + rt.gamma_b; A(1, 3) = G - 2 * g; A(1, 2) = J * nc;
    b(1) = i0.x;
    // (s + Gamma_B) y - J Nc x + J L = y(0)
    A(2, 2) = s + rt.gamma_b; A(2, 1) = -J * nc; A(2, 0) = J;
    b(2) = i0.y;
    // (s + Gamma_C) rho_NN + 2 J y = rho_NN(0)
    A(3, 3) = s + rt.gamma_c; A(3, 2) = 2 * J;
    b(3) = i0.rho_nn;
    // (s + 2 Gd) rho00 + 2 Gd rhot = rho00(0) + 2 Gd / s
    A(4, 4) = s + 2 * gd; A(4, 5) = 2 * gd;
    b(4) = i0.rho_env + 2 * gd / s;
    // s rhot - 2 Gamma rho_NN = rhot(0)
    A(5, 5) = s; A(5, 3) = -2 * G;
    b(5) = i0.rho_target;

    Eigen::FullPivLU<Eigen::Matrix<double, 6, 6>> lu(A);
    if (!lu.isInvertible()) {
        const double cond = A.norm() / std::max(lu.matrixLU().diagonal().cwiseAbs().minCoeff(),
                                                1e-300);
        throw SingularSystem("solve_laplace: singular transformed system", cond);
    }
    Eigen::Matrix<double, 6, 1> v = lu.solve(b);
    return {v(0), v(1), v(2), v(3), v(4), v(5)};
}

// Delta(s) in the grouping verified against the 6x6 elimination: the
// (s + 2*Gamma_diss) factor multiplies the entire five-term bracket.
// (The typeset version leaves the bracket scope ambiguous across line
// breaks; this grouping reproduces the direct solve to full precision.)
inline double delta_of_s(const ReducedSpec& spec, double s) {
    const double g = spec.rates.gamma;
    const double gd = spec.rates.gamma_diss;
    const double G = spec.rates.gamma_sink;
    const double J = spec.J;
    const double nc = spec.n_c;
    const RateTriple rt(spec.rates);
    const double ga = rt.gamma_a + s, gb = rt.gamma_b + s, gc = rt.gamma_c + s;
    const double bracket = ga * gc * gb * gb
                         - 4.0 * G * J * J * (G - 2.0 * g)
                         - 2.0 * J * J * nc * ga * (G - 2.0 * g)
                         + 2.0 * G * J * J * nc * gc
                         + J * J * nc * nc * ga * gc;
    return 8.0 * G * J * J * g * gb + (s + 2.0 * gd) * bracket;
}

// Closed-form transformed target population,
//   rho_target(s) = 4 Gamma J^2 (Gamma_B + s)(Gamma_A + s) / (s * Delta(s)),
// valid for the paper-default initial conditions. Must agree with
// solve_laplace pointwise; the verification suite checks this on a grid.
inline double closed_form_target(const ReducedSpec& spec, double s) {
    if (!(s > 0))
        throw std::invalid_argument("closed_form_target: s must be positive (use final_value)");
    spec.validate();
    const double G = spec.rates.gamma_sink;
    const double J = spec.J;
    const RateTriple rt(spec.rates);
    return 4.0 * G * J * J * (rt.gamma_b + s) * (rt.gamma_a + s) / (s * delta_of_s(spec, s));
}

// Steady-state target population by the final value theorem:
//   rho_target(t -> inf) = lim_{s->0} s * rho_target(s) = 4 G J^2 GB GA / Delta(0).
// Indeterminate (0/0) when gamma and Gamma_diss both vanish.
inline double final_value(const ReducedSpec& spec) {
    spec.validate();
    if (!(spec.rates.gamma_sink > 0))
        throw std::invalid_argument("final_value: gamma_sink must be positive");
    const double G = spec.rates.gamma_sink;
    const double J = spec.J;
    const RateTriple rt(spec.rates);
    const double d0 = delta_of_s(spec, 0.0);
    if (d0 == 0.0 || (spec.rates.gamma == 0.0 && spec.rates.gamma_diss == 0.0))
        throw IndeterminateLimit(
            "final_value: gamma and Gamma_diss both zero (0/0); use ordered_limit");
    return 4.0 * G * J * J * rt.gamma_b * rt.gamma_a / d0;
}

// Numerical final value from the direct Laplace solve: s * rho_target(s)
// evaluated at s = {1e-4, 1e-5, 1e-6} * Gamma with Richardson extrapolation
// (the limit is approached linearly in s).
inline double final_value_small_s(const ReducedSpec& spec) {
    const double G = spec.rates.gamma_sink;
    const std::array<double, 3> ss{1e-4 * G, 1e-5 * G, 1e-6 * G};
    std::array<double, 3> v{};
    for (int i = 0; i < 3; ++i) v[i] = ss[i] * solve_laplace(spec, ss[i]).rho_target;
    // two-point linear extrapolations to s = 0, then one more level
    const double e01 = (ss[0] * v[1] - ss[1] * v[0]) / (ss[0] - ss[1]);
    const double e12 = (ss[1] * v[2] - ss[2] * v[1]) / (ss[1] - ss[2]);
    // the leading correction is O(s); the two extrapolants already agree to
    // higher order, combine them against the remaining curvature
    return e12 + (e12 - e01) * (ss[2] / (ss[0] - ss[2]));
}

// Double-computed steady state: closed form plus the small-s numerical limit.
struct FinalValueCheck {
    double closed_form;
    double extrapolated;
    double residual;   // |closed_form - extrapolated|
};

inline FinalValueCheck final_value_checked(const ReducedSpec& spec) {
    FinalValueCheck c{};
    c.closed_form = final_value(spec);
    c.extrapolated = final_value_small_s(spec);
    c.residual = std::abs(c.closed_form - c.extrapolated);
    return c;
}

enum class LimitOrder { gamma_first, diss_first };

// Ordered noiseless limit of the steady state. Tending gamma to zero first
// leaves pure dissipation: the FCN value 1/(N_c - 1). Tending Gamma_diss to
// zero first leaves pure dephasing, which funnels everything into the sink.
// Both are evaluated along epsilon = 1e-2, 1e-4, 1e-6 and extrapolated.
inline double ordered_limit(const ReducedSpec& spec, LimitOrder order) {
    const std::array<double, 3> eps{1e-2, 1e-4, 1e-6};
    std::array<double, 3> v{};
    for (int i = 0; i < 3; ++i) {
        ReducedSpec cur = spec;
        if (order == LimitOrder::gamma_first) {
            cur.rates.gamma = 0.0;           // inner limit taken exactly
            cur.rates.gamma_diss = eps[i];
        } else {
            cur.rates.gamma_diss = 0.0;
            cur.rates.gamma = eps[i];
        }
        v[i] = final_value(cur);
    }
    // Richardson on the geometric epsilon sequence (leading error O(eps))
    const double e01 = (eps[0] * v[1] - eps[1] * v[0]) / (eps[0] - eps[1]);
    const double e12 = (eps[1] * v[2] - eps[2] * v[1]) / (eps[1] - eps[2]);
    return e12 + (e12 - e01) * (eps[2] / (eps[0] - eps[2]));
}

} // namespace platonet
