// dynamics.hpp — Single-excitation Lindblad dynamics of an N-site network
// with homogeneous dephasing/dissipation and one dissipative sink channel.
//
// The 2^N Hilbert space is never built: the master equation closes on the
// N x N single-excitation block plus two scalar accumulators (rho_env for
// population discharged by local dissipation, rho_target for the sink).

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "platonet/geometry.hpp"
#include "platonet/integrator.hpp"
#include "platonet/types.hpp"

namespace platonet {

struct NoiseRates {
    double gamma{0.0};        // dephasing
    double gamma_diss{0.0};   // local dissipation to the environment
    double gamma_sink{1.0};   // irreversible transfer from the last site to the sink

    void validate() const {
        if (gamma < 0 || gamma_diss < 0 || gamma_sink < 0)
            throw std::invalid_argument("NoiseRates: rates must be nonnegative");
    }
};

struct ExcitationState {
    Matrix rho;               // Hermitian single-excitation block
    double rho_env{0.0};
    double rho_target{0.0};
    double t{0.0};

    int size() const { return static_cast<int>(rho.rows()); }

    double trace() const { return rho.real().trace(); }

    // |trace(rho) + rho_env + rho_target - 1|
    double conservation_error() const {
        return std::abs(trace() + rho_env + rho_target - 1.0);
    }

    static ExcitationState zero(int n) {
        ExcitationState s;
        s.rho = Matrix::Zero(n, n);
        return s;
    }
};

struct NetworkSpec {
    PlatonicSolid solid;
    CouplingMatrix coupling;
    int sink_site{0};                                   // 0-based; default N-1
    NoiseRates rates;
    std::vector<std::pair<int, double>> initial;        // (site, population)

    int size() const { return solid.size(); }

    void validate() const {
        rates.validate();
        if (sink_site < 0 || sink_site >= size())
            throw std::invalid_argument("NetworkSpec: sink_site out of range");
        double sum = 0.0;
        for (auto& [site, pop] : initial) {
            if (site < 0 || site >= size())
                throw std::invalid_argument("NetworkSpec: initial site out of range");
            if (pop < 0)
                throw std::invalid_argument("NetworkSpec: initial populations must be >= 0");
            sum += pop;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("NetworkSpec: initial populations sum to " +
                                        std::to_string(sum) + " != 1");
    }

    ExcitationState initial_state() const {
        ExcitationState s = ExcitationState::zero(size());
        for (auto& [site, pop] : initial) s.rho(site, site) += pop;
        return s;
    }
};

// The paper-default run configuration for a solid: sink on the last site,
// initial charge on site 1 (tetrahedron/octahedron/cube), quarter charges on
// sites 1-4 (icosahedron), third charges on sites 1,5,9 (dodecahedron).
inline NetworkSpec default_spec(Solid kind, CouplingMode mode, double v,
                                NoiseRates rates) {
    NetworkSpec spec;
    spec.solid = build_solid(kind);
    spec.coupling = coupling_matrix(spec.solid, mode, v);
    spec.sink_site = spec.size() - 1;
    spec.rates = rates;
    switch (kind) {
        case Solid::icosahedron:
            spec.initial = {{0, 0.25}, {1, 0.25}, {2, 0.25}, {3, 0.25}};
            break;
        case Solid::dodecahedron:
            spec.initial = {{0, 1.0 / 3}, {4, 1.0 / 3}, {8, 1.0 / 3}};
            break;
        default:
            spec.initial = {{0, 1.0}};
            break;
    }
    return spec;
}

// dstate/dt. Coherent part -i[J, rho]; dephasing -2*gamma on off-diagonals;
// local dissipation -2*Gamma_diss everywhere feeding rho_env; sink channel
// -Gamma on sink-site coherences, -2*Gamma on the sink-site population,
// feeding rho_target at 2*Gamma*rho_NN.
inline ExcitationState derivative(const ExcitationState& state, const NetworkSpec& spec) {
    const int n = state.size();
    if (n != spec.size())
        throw std::invalid_argument("derivative: state/spec dimension mismatch");
    const auto& J = spec.coupling.J;
    const double g = spec.rates.gamma;
    const double gd = spec.rates.gamma_diss;
    const double gs = spec.rates.gamma_sink;
    const int s = spec.sink_site;

    ExcitationState d = ExcitationState::zero(n);
    const Complex minus_i(0.0, -1.0);
    d.rho = minus_i * (J * state.rho - state.rho * J);
    d.rho -= 2.0 * gd * state.rho;
    if (g != 0.0) {
        d.rho -= 2.0 * g * state.rho;
        for (int i = 0; i < n; ++i) d.rho(i, i) += 2.0 * g * state.rho(i, i);
    }
    d.rho.row(s) -= gs * state.rho.row(s);
    d.rho.col(s) -= gs * state.rho.col(s);
    d.rho_env = 2.0 * gd * state.trace();
    d.rho_target = 2.0 * gs * state.rho(s, s).real();
    d.t = 1.0;
    return d;
}

namespace detail {

inline void pack(const ExcitationState& s, RealVector& y) {
    const int n = s.size();
    y.resize(2 * n * n + 2);
    int k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            y[k++] = s.rho(i, j).real();
            y[k++] = s.rho(i, j).imag();
        }
    y[k++] = s.rho_env;
    y[k] = s.rho_target;
}

inline void unpack(const RealVector& y, ExcitationState& s, int n) {
    s.rho.resize(n, n);
    int k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            s.rho(i, j) = Complex(y[k], y[k + 1]);
            k += 2;
        }
    s.rho_env = y[k++];
    s.rho_target = y[k];
}

inline void resymmetrize(Matrix& rho) { rho = 0.5 * (rho + rho.adjoint()).eval(); }

} // namespace detail

struct Trajectory {
    std::vector<ExcitationState> samples;

    const ExcitationState& back() const { return samples.back(); }

    double max_conservation_error() const {
        double m = 0.0;
        for (const auto& s : samples) m = std::max(m, s.conservation_error());
        return m;
    }
};

// Integrate the master equation to t_end, sampling every `stride`-th of
// `n_samples` evenly spaced output times (t = 0 included). Hermiticity is
// re-symmetrized after every accepted step.
inline Trajectory integrate(const NetworkSpec& spec, double t_end, int n_samples = 201,
                            IntegratorOptions opt = {}) {
    if (!(t_end > 0)) throw std::invalid_argument("integrate: t_end must be positive");
    if (n_samples < 2) throw std::invalid_argument("integrate: need >= 2 samples");
    spec.validate();
    const int n = spec.size();

    ExcitationState state = spec.initial_state();
    RealVector y;
    detail::pack(state, y);

    ExcitationState scratch = ExcitationState::zero(n);
    auto rhs = [&](double, const RealVector& yv, RealVector& dy) {
        detail::unpack(yv, scratch, n);
        ExcitationState d = derivative(scratch, spec);
        detail::pack(d, dy);
    };
    auto post = [&](RealVector& yv) {
        detail::unpack(yv, scratch, n);
        detail::resymmetrize(scratch.rho);
        detail::pack(scratch, yv);
    };

    Rk45 rk(opt);
    Trajectory out;
    out.samples.reserve(n_samples);
    double t = 0.0;
    state.t = 0.0;
    out.samples.push_back(state);
    for (int k = 1; k < n_samples; ++k) {
        const double tk = t_end * k / (n_samples - 1);
        rk.advance(rhs, t, y, tk, post);
        detail::unpack(y, state, n);
        state.t = tk;
        out.samples.push_back(state);
    }
    return out;
}

struct SteadyStateResult {
    ExcitationState final_state;
    bool converged{false};            // derivative max-norm < residual_tol reached
    double residual_norm{0.0};
    // time-averaged populations over the last decade of integration time,
    // meaningful when oscillations never die out (noiseless runs)
    RealVector avg_populations;
    double avg_rho_env{0.0};
    double avg_rho_target{0.0};
};

// Integrate until the derivative max-norm drops below 1e-10 or
// Gamma * t = horizon_gamma_t, whichever comes first.
inline SteadyStateResult steady_state(const NetworkSpec& spec,
                                      double horizon_gamma_t = 500.0,
                                      double residual_tol = 1e-10,
                                      IntegratorOptions opt = {}) {
    spec.validate();
    if (!(spec.rates.gamma_sink > 0))
        throw std::invalid_argument("steady_state: gamma_sink must be positive");
    const int n = spec.size();
    const double t_end = horizon_gamma_t / spec.rates.gamma_sink;
    const double t_avg_from = t_end / 10.0;   // last decade
    const int n_samples = 2001;

    Trajectory traj = integrate(spec, t_end, n_samples, opt);

    SteadyStateResult res;
    res.avg_populations = RealVector::Zero(n);
    int n_avg = 0;
    for (const auto& s : traj.samples) {
        if (s.t >= t_avg_from) {
            for (int i = 0; i < n; ++i) res.avg_populations[i] += s.rho(i, i).real();
            res.avg_rho_env += s.rho_env;
            res.avg_rho_target += s.rho_target;
            ++n_avg;
        }
        ExcitationState d = derivative(s, spec);
        double norm = d.rho.cwiseAbs().maxCoeff();
        norm = std::max(norm, std::abs(d.rho_env));
        norm = std::max(norm, std::abs(d.rho_target));
        res.residual_norm = norm;
        res.final_state = s;
        if (norm < residual_tol) {
            res.converged = true;
            break;
        }
    }
    if (n_avg > 0) {
        res.avg_populations /= n_avg;
        res.avg_rho_env /= n_avg;
        res.avg_rho_target /= n_avg;
    }
    return res;
}

} // namespace platonet
