// verify.hpp — Self-verification suite: one check per acceptance criterion,
// each printing a PASS/FAIL line with the measured numbers. Shared by the
// `verify` CLI subcommand and the acceptance test binary.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "platonet/analytic.hpp"
#include "platonet/design.hpp"
#include "platonet/dynamics.hpp"
#include "platonet/geometry.hpp"
#include "platonet/io.hpp"
#include "platonet/reduced.hpp"
#include "platonet/symmetry.hpp"

namespace platonet::verify {

struct CheckResult {
    std::string name;
    bool pass{false};
    std::string detail;
};

struct Report {
    std::vector<CheckResult> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

inline std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

// Exact noiseless window average of rho_target over [T1, T2] via the
// non-Hermitian effective Hamiltonian H_eff = J - i*Gamma*P_sink: for a
// single charged site the block stays pure, psi(t) = exp(-i H_eff t) psi0,
// and rho_target = 1 - ||psi||^2. Independent of the ODE integrator; used to
// cross-check the trajectory averages.
inline double spectral_window_target(const NetworkSpec& spec, double t1, double t2) {
    const int n = spec.size();
    Matrix heff = spec.coupling.J.cast<Complex>();
    heff(spec.sink_site, spec.sink_site) -= Complex(0.0, spec.rates.gamma_sink);
    Eigen::ComplexEigenSolver<Matrix> es(heff);
    const auto& lam = es.eigenvalues();
    const Matrix& V = es.eigenvectors();
    const Matrix Vinv = V.inverse();
    const Matrix G = V.adjoint() * V;

    double avg_norm2 = 0.0;
    for (auto& [site, pop] : spec.initial) {
        Vector a = Vinv.col(site);
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                const Complex w = Complex(0, 1) * (std::conj(lam(j)) - lam(k));
                const Complex A = std::conj(a(j)) * a(k) * G(j, k);
                Complex integral;
                if (std::abs(w) < 1e-14)
                    integral = std::exp(w * t1) * (t2 - t1);
                else
                    integral = (std::exp(w * t2) - std::exp(w * t1)) / w;
                acc += (A * integral).real();
            }
        }
        avg_norm2 += pop * acc / (t2 - t1);
    }
    return 1.0 - avg_norm2;
}

struct CaptionRun {
    Solid kind;
    double expected;
    Trajectory traj;
    double window_avg;     // rho_target averaged over Gamma*t in [100, 200]
};

inline double window_average_target(const Trajectory& traj, double t1, double t2) {
    double acc = 0.0;
    int n = 0;
    for (const auto& s : traj.samples) {
        if (s.t >= t1 && s.t <= t2) {
            acc += s.rho_target;
            ++n;
        }
    }
    return n ? acc / n : 0.0;
}

} // namespace detail

struct Context {
    int threads{1};
    bool negative_control{false};
    // trajectories of the caption runs, shared by checks 1-3
    std::vector<detail::CaptionRun> caption_runs;
    bool caption_runs_done{false};
    double caption_runtime_seconds{0.0};

    void ensure_caption_runs() {
        if (caption_runs_done) return;
        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<std::pair<Solid, double>> cases = {
            {Solid::octahedron, 0.25},
            {Solid::cube, 1.0 / 3.0},
            {Solid::icosahedron, 0.2},
            {Solid::dodecahedron, 1.0 / 3.0},
        };
        for (auto& [kind, expected] : cases) {
            NetworkSpec spec = default_spec(kind, CouplingMode::all_pairs, 1.0,
                                            NoiseRates{0.0, 0.0, 1.0});
            detail::CaptionRun run;
            run.kind = kind;
            run.expected = expected;
            run.traj = integrate(spec, 200.0, 1001);
            run.window_avg = detail::window_average_target(run.traj, 100.0, 200.0);
            caption_runs.push_back(std::move(run));
        }
        caption_runtime_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        caption_runs_done = true;
    }
};

// 1. Noiseless steady sink populations (all-pairs coupling, default initial
// conditions, Gamma = 1, time-averaged over Gamma*t in [100, 200]):
// 0.25, 1/3, 0.2, 1/3 within 1e-3; runtime < 5 s.
inline CheckResult check_steady_captions(Context& ctx) {
    CheckResult r{"steady-captions", true, ""};
    ctx.ensure_caption_runs();
    std::ostringstream os;
    for (const auto& run : ctx.caption_runs) {
        const double dev = std::abs(run.window_avg - run.expected);
        const bool ok = dev <= 1e-3;
        r.pass = r.pass && ok;
        os << to_string(run.kind) << "=" << detail::fmt(run.window_avg)
           << " (want " << detail::fmt(run.expected) << ", dev " << detail::fmt(dev, 2)
           << (ok ? ")" : " EXCEEDS 1e-3)") << "; ";
    }
    const bool time_ok = ctx.caption_runtime_seconds < 5.0;
    r.pass = r.pass && time_ok;
    os << "runtime<5s: " << (time_ok ? "yes" : "NO");
    if (!r.pass) {
        // the t->infinity values are exact; show the late window the slow
        // icosahedron/dodecahedron modes need (spectral route, noiseless)
        os << " | late-window [1000,2000]: ";
        for (auto kind : {Solid::icosahedron, Solid::dodecahedron}) {
            NetworkSpec spec = default_spec(kind, CouplingMode::all_pairs, 1.0,
                                            NoiseRates{0.0, 0.0, 1.0});
            os << to_string(kind) << "="
               << detail::fmt(detail::spectral_window_target(spec, 1000.0, 2000.0)) << " ";
        }
    }
    r.detail = os.str();
    return r;
}

// 2. Octahedron constant sites: populations of sites 3 and 4 hold
// 0.0625 +- 2e-3 at equilibrium. The deviation falls below 2e-3 at
// Gamma*t ~ 22.7; checked over [25, 200].
inline CheckResult check_octahedron_constant(Context& ctx) {
    CheckResult r{"octahedron-constant", true, ""};
    ctx.ensure_caption_runs();
    const auto& run = ctx.caption_runs[0];
    double dev = 0.0;
    for (const auto& s : run.traj.samples) {
        if (s.t < 25.0) continue;
        dev = std::max(dev, std::abs(s.rho(2, 2).real() - 0.0625));
        dev = std::max(dev, std::abs(s.rho(3, 3).real() - 0.0625));
    }
    r.pass = dev <= 2e-3;
    r.detail = "max |rho_33,44 - 0.0625| = " + detail::fmt(dev, 3) +
               " over Gamma*t in [25,200] (settles below tolerance at ~22.7)";
    return r;
}

// 3. Conservation: |trace + rho_env + rho_target - 1| < 1e-9 at every sample
// of every acceptance run.
inline CheckResult check_conservation(Context& ctx) {
    CheckResult r{"conservation", true, ""};
    ctx.ensure_caption_runs();
    double worst = 0.0;
    for (const auto& run : ctx.caption_runs)
        worst = std::max(worst, run.traj.max_conservation_error());
    // include a noisy run
    NetworkSpec spec = default_spec(Solid::cube, CouplingMode::nearest_neighbor, 1.0,
                                    NoiseRates{0.7, 0.3, 1.0});
    worst = std::max(worst, integrate(spec, 20.0, 201).max_conservation_error());
    r.pass = worst < 1e-9;
    r.detail = "max |trace + rho_env + rho_target - 1| = " + detail::fmt(worst, 3);
    return r;
}

// 4. Quotient equivalence (nearest-neighbor mode): block counts must be
// 5, 4, 6, 4 and the block-aggregated full dynamics is compared entrywise
// against the equivalent-FCN dynamics over Gamma*t in [0, 20] at 1e-6.
inline CheckResult check_quotient(Context&) {
    CheckResult r{"quotient", true, ""};
    std::ostringstream os;
    const std::vector<std::pair<Solid, int>> cases = {
        {Solid::octahedron, 5}, {Solid::cube, 4},
        {Solid::icosahedron, 6}, {Solid::dodecahedron, 4}};
    for (auto& [kind, want_blocks] : cases) {
        NetworkSpec spec = default_spec(kind, CouplingMode::nearest_neighbor, 1.0,
                                        NoiseRates{0.0, 0.0, 1.0});
        QuotientMap map = discover_quotient(spec);
        const bool blocks_ok = map.block_count() == want_blocks;
        EquivalenceReport rep = verify_equivalence(spec, map, 20.0, 201);
        const bool dev_ok = rep.max_entrywise < 1e-6;
        r.pass = r.pass && blocks_ok && dev_ok;
        os << to_string(kind) << ": blocks=" << map.block_count()
           << (blocks_ok ? "" : "(want " + std::to_string(want_blocks) + ")")
           << " dev=" << detail::fmt(rep.max_entrywise, 3)
           << (dev_ok ? "" : " EXCEEDS 1e-6") << "; ";
    }
    r.detail = os.str();
    return r;
}

// 5. Analytic firewall: closed_form_target vs the direct 6x6 solve to
// relative 1e-9 on (gamma, Gamma_diss, Gamma, J) in {0.1,1,10}^4,
// s in {0.01,0.1,1,10}, N_c in {4,5,6}.
inline CheckResult check_analytic_firewall(Context&) {
    CheckResult r{"analytic-firewall", true, ""};
    const std::vector<double> vals{0.1, 1.0, 10.0};
    const std::vector<double> svals{0.01, 0.1, 1.0, 10.0};
    double worst = 0.0;
    int count = 0;
    for (int nc : {4, 5, 6})
        for (double g : vals)
            for (double gd : vals)
                for (double G : vals)
                    for (double J : vals)
                        for (double s : svals) {
                            ReducedSpec spec;
                            spec.J = J;
                            spec.n_c = nc;
                            spec.rates = {g, gd, G};
                            spec.initial = ReducedState{};   // paper default
                            const double a = closed_form_target(spec, s);
                            const double b = solve_laplace(spec, s).rho_target;
                            const double rel =
                                std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
                            worst = std::max(worst, rel);
                            ++count;
                        }
    r.pass = worst < 1e-9;
    r.detail = "max relative |closed-form - direct solve| = " + detail::fmt(worst, 3) +
               " over " + std::to_string(count) + " points";
    return r;
}

namespace detail {

// Reduced trajectory value at Gamma*t = 500, with early exit once the
// derivative vanishes (the system is exponentially contracting; the state no
// longer changes at machine precision).
inline double reduced_target_at_500(const ReducedSpec& spec,
                                    RhoNNDecay convention = RhoNNDecay::lindblad) {
    const double t_end = 500.0 / spec.rates.gamma_sink;
    const int windows = 20;
    ReducedSpec cur = spec;
    double t = 0.0;
    for (int w = 0; w < windows; ++w) {
        const double tw = t_end * (w + 1) / windows;
        ReducedTrajectory seg =
            reduced_integrate(cur, tw - t, 2, IntegratorOptions{}, convention);
        cur.initial = seg.back();
        t = tw;
        const ReducedState d = reduced_derivative(cur.initial, cur, convention);
        const double dn = std::max({std::abs(d.lambda_n), std::abs(d.x), std::abs(d.y),
                                    std::abs(d.rho_nn), std::abs(d.rho_env),
                                    std::abs(d.rho_target)});
        if (dn < 1e-13) break;
    }
    return cur.initial.rho_target;
}

} // namespace detail

// 6. Time-domain vs Laplace steady state: final_value matches the reduced
// trajectory's rho_target at Gamma*t = 500 within 1e-4 across the same grid.
inline CheckResult check_steady_crosscheck(Context& ctx) {
    CheckResult r{"steady-crosscheck", true, ""};
    const std::vector<double> vals{0.1, 1.0, 10.0};
    double worst = 0.0;
    int count = 0;
    for (int nc : {4, 5, 6})
        for (double g : vals)
            for (double gd : vals)
                for (double G : vals)
                    for (double J : vals) {
                        ReducedSpec spec;
                        spec.J = J;
                        spec.n_c = nc;
                        spec.rates = {g, gd, G};
                        spec.initial = ReducedState{};
                        const double fv = final_value(spec);
                        const double td = detail::reduced_target_at_500(spec);
                        worst = std::max(worst, std::abs(fv - td));
                        ++count;
                    }
    r.pass = worst < 1e-4;
    std::ostringstream os;
    os << "max |final_value - rho_target(Gamma*t=500)| = " << detail::fmt(worst, 3)
       << " over " << count << " points";
    if (ctx.negative_control) {
        // perturbing the rho_NN decay to the rejected convention must break
        // the agreement loudly
        ReducedSpec spec;
        spec.J = 1.0;
        spec.n_c = 4;
        spec.rates = {1.0, 0.5, 1.0};
        const double bad =
            std::abs(final_value(spec) -
                     detail::reduced_target_at_500(spec, RhoNNDecay::eq7_typo));
        const bool detected = bad > 1e-4;
        r.pass = r.pass && detected;
        os << " | negative control (perturbed Gamma_C): deviation "
           << detail::fmt(bad, 3) << (detected ? " detected" : " NOT DETECTED");
    }
    r.detail = os.str();
    return r;
}

// 7. Limit ordering: gamma-first limit = 1/(N_c - 1) for N_c in {4,5,6};
// diss-first limit = 1; both within 1e-6.
inline CheckResult check_limit_ordering(Context&) {
    CheckResult r{"limit-ordering", true, ""};
    std::ostringstream os;
    for (int nc : {4, 5, 6}) {
        ReducedSpec spec;
        spec.J = 1.0;
        spec.n_c = nc;
        spec.rates = {0.0, 0.0, 1.0};
        const double gf = ordered_limit(spec, LimitOrder::gamma_first);
        const double df = ordered_limit(spec, LimitOrder::diss_first);
        const double want = 1.0 / (nc - 1);
        const bool ok = std::abs(gf - want) < 1e-6 && std::abs(df - 1.0) < 1e-6;
        r.pass = r.pass && ok;
        os << "Nc=" << nc << ": gamma-first=" << detail::fmt(gf) << " diss-first="
           << detail::fmt(df) << (ok ? "" : " MISMATCH") << "; ";
    }
    r.detail = os.str();
    return r;
}

// 8. Design trends: Gamma_diss = Gamma = 10, target = 0.999 x per-point
// maximum; J* nondecreasing in gamma over [0.1, 100] (20-point log grid),
// and J*(Nc=6) <= J*(Nc=5) <= J*(Nc=4) at fixed gamma.
inline CheckResult check_design_trends(Context& ctx) {
    CheckResult r{"design-trends", true, ""};
    std::ostringstream os;
    for (int nc : {4, 5, 6}) {
        SweepRequest req;
        req.parameter = SweepParameter::gamma;
        req.values = log_grid(0.1, 100.0, 7);   // ~20 points over 3 decades
        while (req.values.size() > 20) req.values.pop_back();
        req.fixed_rates = {0.0, 10.0, 10.0};
        req.fixed_n_c = nc;
        req.threads = ctx.threads;
        DesignCurve curve = design_sweep(req);
        r.pass = r.pass && curve.j_star_nondecreasing;
        os << "Nc=" << nc << " J* nondecreasing in gamma: "
           << (curve.j_star_nondecreasing ? "yes" : "NO") << "; ";
    }
    std::vector<double> jstar;
    for (int nc : {4, 5, 6}) {
        ScanResult scan = scan_J(NoiseRates{1.0, 10.0, 10.0}, nc);
        DesignPoint p = solve_J(NoiseRates{1.0, 10.0, 10.0}, nc, 0.999 * scan.best_value);
        jstar.push_back(p.J_solution.value_or(p.best_J));
    }
    const bool order_ok = jstar[2] <= jstar[1] && jstar[1] <= jstar[0];
    r.pass = r.pass && order_ok;
    os << "J*(Nc=4,5,6)=(" << detail::fmt(jstar[0], 5) << "," << detail::fmt(jstar[1], 5)
       << "," << detail::fmt(jstar[2], 5) << ") ordered: " << (order_ok ? "yes" : "NO");
    r.detail = os.str();
    return r;
}

// 9. Solver round-trip: 100 random draws; solve_J(target = final_value(J0))
// recovers a root with value residual < 1e-8.
inline CheckResult check_solver_roundtrip(Context&) {
    CheckResult r{"solver-roundtrip", true, ""};
    std::mt19937 rng(20250810);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) {
        return lo * std::pow(hi / lo, u(rng));
    };
    double worst = 0.0;
    int failures = 0;
    for (int k = 0; k < 100; ++k) {
        NoiseRates rates{log_uniform(0.1, 10.0), log_uniform(0.1, 10.0),
                         log_uniform(0.1, 10.0)};
        const int nc = 4 + static_cast<int>(u(rng) * 3);
        const double j0 = log_uniform(1e-2, 1e3);
        ReducedSpec spec;
        spec.J = j0;
        spec.n_c = nc;
        spec.rates = rates;
        const double target = final_value(spec);
        DesignPoint p = solve_J(rates, nc, target);
        if (!p.attainable) {
            ++failures;
            continue;
        }
        worst = std::max(worst, p.residual);
        if (p.residual >= 1e-8) ++failures;
    }
    r.pass = failures == 0;
    r.detail = "100 draws, max residual " + detail::fmt(worst, 3) + ", " +
               std::to_string(failures) + " failures";
    return r;
}

// 10. Determinism: sweeps and emitted tables are byte-identical across two
// consecutive runs (threaded sweep included).
inline CheckResult check_determinism(Context& ctx) {
    CheckResult r{"determinism", true, ""};
    auto sweep_csv = [&]() {
        SweepRequest req;
        req.parameter = SweepParameter::gamma;
        req.values = log_grid(0.1, 10.0, 4);
        req.fixed_rates = {0.0, 10.0, 10.0};
        req.fixed_n_c = 4;
        req.threads = ctx.threads;
        DesignCurve curve = design_sweep(req);
        std::ostringstream os;
        CsvWriter w(os);
        w.header({"swept_value", "J_star", "attainable", "best_value", "residual"});
        for (std::size_t i = 0; i < curve.points.size(); ++i) {
            const auto& p = curve.points[i];
            w.row({curve.swept_values[i], p.J_solution.value_or(p.best_J),
                   p.attainable ? 1.0 : 0.0, p.best_value, p.residual});
        }
        return os.str();
    };
    auto simulate_csv = [&]() {
        NetworkSpec spec = default_spec(Solid::octahedron, CouplingMode::all_pairs, 1.0,
                                        NoiseRates{0.5, 0.2, 1.0});
        Trajectory traj = integrate(spec, 5.0, 51);
        std::ostringstream os;
        CsvWriter w(os);
        for (const auto& s : traj.samples) {
            std::vector<double> row{s.t, s.rho_env, s.rho_target};
            for (int i = 0; i < s.size(); ++i) row.push_back(s.rho(i, i).real());
            w.row(row);
        }
        return os.str();
    };
    const bool sweep_ok = sweep_csv() == sweep_csv();
    const bool sim_ok = simulate_csv() == simulate_csv();
    r.pass = sweep_ok && sim_ok;
    r.detail = std::string("design sweep bytes identical: ") + (sweep_ok ? "yes" : "NO") +
               "; trajectory bytes identical: " + (sim_ok ? "yes" : "NO");
    return r;
}

inline Report run_all(const std::string& filter = "", int threads = 1,
                      bool negative_control = false) {
    Context ctx;
    ctx.threads = threads;
    ctx.negative_control = negative_control;
    using CheckFn = CheckResult (*)(Context&);
    const std::vector<std::pair<std::string, CheckFn>> checks = {
        {"steady-captions", &check_steady_captions},
        {"octahedron-constant", &check_octahedron_constant},
        {"conservation", &check_conservation},
        {"quotient", &check_quotient},
        {"analytic-firewall", &check_analytic_firewall},
        {"steady-crosscheck", &check_steady_crosscheck},
        {"limit-ordering", &check_limit_ordering},
        {"design-trends", &check_design_trends},
        {"solver-roundtrip", &check_solver_roundtrip},
        {"determinism", &check_determinism},
    };
    Report rep;
    for (auto& [name, fn] : checks) {
        if (!filter.empty() && name.find(filter) == std::string::npos) continue;
        rep.checks.push_back(fn(ctx));
    }
    return rep;
}

inline void print_report(const Report& rep, std::ostream& os) {
    int idx = 0;
    int passed = 0;
    for (const auto& c : rep.checks) {
        os << (c.pass ? "[PASS] " : "[FAIL] ") << ++idx << " " << c.name << ": "
           << c.detail << "\n";
        if (c.pass) ++passed;
    }
    os << passed << "/" << rep.checks.size() << " checks passed\n";
}

} // namespace platonet::verify
