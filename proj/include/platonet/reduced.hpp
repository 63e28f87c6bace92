// reduced.hpp — The closed six-variable collective ODE system of the
// equivalent FCN: variables Lambda_N, x, y (R_N = x + i y), rho_NN,
// rho_00 (environment) and rho_target.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "platonet/dynamics.hpp"
#include "platonet/integrator.hpp"
#include "platonet/symmetry.hpp"
#include "platonet/types.hpp"

namespace platonet {

struct ReducedState {
    double lambda_n{1.0};
    double x{0.0};
    double y{0.0};
    double rho_nn{0.0};
    double rho_env{0.0};
    double rho_target{0.0};
    double t{0.0};

    std::array<double, 6> as_array() const {
        return {lambda_n, x, y, rho_nn, rho_env, rho_target};
    }
};

struct ReducedSpec {
    double J{1.0};          // effective FCN coupling
    int n_c{4};
    NoiseRates rates;
    ReducedState initial;

    void validate() const {
        rates.validate();
        if (n_c < 2) throw std::invalid_argument("ReducedSpec: N_c must be >= 2");
        if (J < 0) throw std::invalid_argument("ReducedSpec: J must be >= 0");
    }
};

// Which rho_NN population decay coefficient to use. The paper's Eq. (7) and
// Eq. (14) disagree; the Lindblad form requires 2(Gamma_diss + Gamma), which
// is what Eq. (14) and the Gamma_C definition use. The rejected convention is
// kept only as a negative control for the verification suite.
enum class RhoNNDecay { lindblad, eq7_typo };

inline ReducedState reduced_derivative(const ReducedState& s, const ReducedSpec& spec,
                                       RhoNNDecay convention = RhoNNDecay::lindblad) {
    const double g = spec.rates.gamma;
    const double gd = spec.rates.gamma_diss;
    const double G = spec.rates.gamma_sink;
    const double J = spec.J;
    const double nc = spec.n_c;

    ReducedState d;
    const double trace = 1.0 - s.rho_env - s.rho_target;   // conservation substituted
    d.lambda_n = -2.0 * (gd + g) * s.lambda_n - 2.0 * G * s.x + 2.0 * g * trace;
    d.x = -(2.0 * gd + 2.0 * g + G) * s.x + (2.0 * g - G) * s.rho_nn - J * nc * s.y;
    d.y = -(2.0 * gd + 2.0 * g + G) * s.y + J * nc * s.x - J * s.lambda_n;
    const double nn_decay =
        convention == RhoNNDecay::lindblad ? 2.0 * (gd + G) : (2.0 * gd + 2.0 * g + G);
    d.rho_nn = -nn_decay * s.rho_nn - 2.0 * J * s.y;
    d.rho_env = 2.0 * gd * trace;
    d.rho_target = 2.0 * G * s.rho_nn;
    d.t = 1.0;
    return d;
}

struct ReducedTrajectory {
    std::vector<ReducedState> samples;
    const ReducedState& back() const { return samples.back(); }
};

inline ReducedTrajectory reduced_integrate(const ReducedSpec& spec, double t_end,
                                           int n_samples = 201, IntegratorOptions opt = {},
                                           RhoNNDecay convention = RhoNNDecay::lindblad) {
    if (!(t_end > 0))
        throw std::invalid_argument("reduced_integrate: t_end must be positive");
    spec.validate();

    RealVector y(6);
    {
        auto a = spec.initial.as_array();
        for (int i = 0; i < 6; ++i) y[i] = a[i];
    }
    auto rhs = [&](double, const RealVector& yv, RealVector& dy) {
        ReducedState s;
        s.lambda_n = yv[0]; s.x = yv[1]; s.y = yv[2];
        s.rho_nn = yv[3]; s.rho_env = yv[4]; s.rho_target = yv[5];
        ReducedState d = reduced_derivative(s, spec, convention);
        dy.resize(6);
        dy[0] = d.lambda_n; dy[1] = d.x; dy[2] = d.y;
        dy[3] = d.rho_nn; dy[4] = d.rho_env; dy[5] = d.rho_target;
    };

    Rk45 rk(opt);
    ReducedTrajectory out;
    out.samples.reserve(n_samples);
    double t = 0.0;
    auto push = [&](double tk) {
        ReducedState s;
        s.lambda_n = y[0]; s.x = y[1]; s.y = y[2];
        s.rho_nn = y[3]; s.rho_env = y[4]; s.rho_target = y[5];
        s.t = tk;
        out.samples.push_back(s);
    };
    push(0.0);
    for (int k = 1; k < n_samples; ++k) {
        const double tk = t_end * k / (n_samples - 1);
        rk.advance(rhs, t, y, tk);
        push(tk);
    }
    return out;
}

// Collective variables of Eq. (8) evaluated on a full-network state:
// R_i = sum over j in f(i) of rho_ij with f(i) = nearest neighbors plus self,
// Lambda_N = sum over j in f(N) of R_j. Lambda_N must come out real for the
// reduction to apply; the imaginary part is returned for the caller to check.
struct CollectiveVariables {
    Complex r_n;
    Complex lambda_n;
    double rho_nn;
};

inline CollectiveVariables collective_variables(const Matrix& rho,
                                                const PlatonicSolid& solid, int sink) {
    const int n = solid.size();
    auto row_sum = [&](int i) {
        Complex s = rho(i, i);
        for (int j = 0; j < n; ++j)
            if (solid.adjacency(i, j)) s += rho(i, j);
        return s;
    };
    CollectiveVariables cv;
    cv.r_n = row_sum(sink);
    cv.lambda_n = cv.r_n;                // f(N) includes N itself
    for (int j = 0; j < n; ++j)
        if (solid.adjacency(sink, j)) cv.lambda_n += row_sum(j);
    cv.rho_nn = rho(sink, sink).real();
    return cv;
}

// Aggregate a full-network initial condition into the reduced state via the
// Eq. (8) definitions. Flags a non-real Lambda_N (possible for coherent
// initial data) instead of silently truncating it.
inline ReducedState reduced_initial_from(const NetworkSpec& spec, const QuotientMap& map) {
    if (map.block_count() != coordination_number(spec.solid))
        throw NonUniformQuotient("reduced_initial_from: quotient block count != N_c");
    const ExcitationState s0 = spec.initial_state();
    const CollectiveVariables cv =
        collective_variables(s0.rho, spec.solid, spec.sink_site);
    if (std::abs(cv.lambda_n.imag()) > 1e-9)
        throw std::invalid_argument(
            "reduced_initial_from: Lambda_N has imaginary part " +
            std::to_string(cv.lambda_n.imag()) + "; the reduction assumes real Lambda_N");
    ReducedState r;
    r.lambda_n = cv.lambda_n.real();
    r.x = cv.r_n.real();
    r.y = cv.r_n.imag();
    r.rho_nn = cv.rho_nn;
    r.rho_env = 0.0;
    r.rho_target = 0.0;
    return r;
}

inline ReducedSpec reduced_spec_from(const NetworkSpec& spec, const QuotientMap& map) {
    ReducedSpec r;
    r.J = map.effective_J;
    r.n_c = coordination_number(spec.solid);
    r.rates = spec.rates;
    r.initial = reduced_initial_from(spec, map);
    return r;
}

} // namespace platonet
