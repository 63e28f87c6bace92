// design.hpp — Inverse problem: choose the coupling J that realizes a target
// steady sink population under given noise rates, and the parameter sweeps
// behind the optimal-design curves.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "platonet/analytic.hpp"
#include "platonet/types.hpp"

namespace platonet {

struct DesignPoint {
    NoiseRates rates;
    int n_c{4};
    double target{1.0};
    std::optional<double> J_solution;   // smallest root when attainable
    std::vector<double> roots;          // all roots found on the scan profile
    bool attainable{false};
    double best_J{0.0};                 // arg-max of final_value over the scan
    double best_value{0.0};             // the attained maximum
    double residual{0.0};               // |final_value(J_solution) - target|
};

struct DesignCurve {
    std::string swept_parameter;
    std::vector<double> swept_values;
    std::vector<DesignPoint> points;
    bool j_star_nondecreasing{true};    // monotonicity diagnostic over the sweep
};

inline std::vector<double> log_grid(double lo, double hi, int points_per_decade = 60) {
    std::vector<double> g;
    const double l0 = std::log10(lo), l1 = std::log10(hi);
    const int n = std::max(2, static_cast<int>(std::ceil((l1 - l0) * points_per_decade)) + 1);
    g.reserve(n);
    for (int i = 0; i < n; ++i) g.push_back(std::pow(10.0, l0 + (l1 - l0) * i / (n - 1)));
    return g;
}

struct ScanResult {
    std::vector<double> J;
    std::vector<double> value;
    double best_J{0.0};
    double best_value{0.0};
    std::size_t best_index{0};
};

// Evaluate the steady-state profile over a J grid; the default grid is
// logarithmic over [1e-3, 1e6] at 60 points per decade, refined around the
// arg-max. final_value is monotone saturating in J (a J^2 / (b + c J^2)), so
// the maximum typically sits at the top of the grid.
inline ScanResult scan_J(const NoiseRates& rates, int n_c,
                         std::vector<double> grid = {}) {
    if (grid.empty()) grid = log_grid(1e-3, 1e6);
    ScanResult r;
    r.J = std::move(grid);
    r.value.reserve(r.J.size());
    ReducedSpec spec;
    spec.n_c = n_c;
    spec.rates = rates;
    for (double j : r.J) {
        spec.J = j;
        r.value.push_back(final_value(spec));
    }
    r.best_index = std::distance(r.value.begin(),
                                 std::max_element(r.value.begin(), r.value.end()));
    // refine near the maximum
    for (int pass = 0; pass < 3; ++pass) {
        const std::size_t i = r.best_index;
        const double lo = r.J[i > 0 ? i - 1 : i];
        const double hi = r.J[std::min(i + 1, r.J.size() - 1)];
        if (hi <= lo) break;
        for (double j : log_grid(lo, hi, 240)) {
            spec.J = j;
            const double v = final_value(spec);
            if (v > r.value[r.best_index]) {
                r.J.push_back(j);
                r.value.push_back(v);
                r.best_index = r.J.size() - 1;
            }
        }
    }
    r.best_J = r.J[r.best_index];
    r.best_value = r.value[r.best_index];
    return r;
}

// Find J with final_value(J) = target by bracketing sign changes on the scan
// profile and bisecting each bracket to |value residual| < 1e-8 and relative
// J tolerance 1e-10. Monotone-saturating profiles yield at most one root.
inline DesignPoint solve_J(const NoiseRates& rates, int n_c, double target,
                           std::vector<double> grid = {}) {
    if (!(target > 0.0) || target > 1.0)
        throw InvalidTarget("solve_J: target must lie in (0, 1], got " +
                            std::to_string(target));
    DesignPoint p;
    p.rates = rates;
    p.n_c = n_c;
    p.target = target;

    if (grid.empty()) grid = log_grid(1e-3, 1e6);
    std::sort(grid.begin(), grid.end());
    ReducedSpec spec;
    spec.n_c = n_c;
    spec.rates = rates;
    auto f = [&](double j) {
        spec.J = j;
        return final_value(spec) - target;
    };

    std::vector<double> fv(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) fv[i] = f(grid[i]);
    std::size_t best = std::distance(fv.begin(), std::max_element(fv.begin(), fv.end()));
    p.best_J = grid[best];
    p.best_value = fv[best] + target;

    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (fv[i] == 0.0) {
            p.roots.push_back(grid[i]);
            continue;
        }
        if (fv[i] * fv[i + 1] < 0.0) {
            double lo = grid[i], hi = grid[i + 1];
            double flo = fv[i];
            while (hi - lo > 1e-10 * hi) {
                const double mid = std::sqrt(lo * hi);   // bisect in log space
                const double fm = f(mid);
                if (std::abs(fm) < 1e-12) { lo = hi = mid; break; }
                if (flo * fm <= 0.0) hi = mid;
                else { lo = mid; flo = fm; }
            }
            p.roots.push_back(0.5 * (lo + hi));
        }
    }
    if (!p.roots.empty()) {
        p.attainable = true;
        p.J_solution = p.roots.front();
        p.residual = std::abs(f(*p.J_solution));
    }
    return p;
}

enum class SweepParameter { gamma, n_c, gamma_sink, gamma_diss };

inline const char* to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::gamma: return "gamma";
        case SweepParameter::n_c: return "Nc";
        case SweepParameter::gamma_sink: return "Gamma";
        case SweepParameter::gamma_diss: return "Gamma-diss";
    }
    return "?";
}

struct SweepRequest {
    SweepParameter parameter{SweepParameter::gamma};
    std::vector<double> values;          // strictly increasing
    NoiseRates fixed_rates;
    int fixed_n_c{4};
    // target mode: absolute value, or a fraction of the per-point attainable
    // maximum (the figure sweeps use 0.999 x maximum, since exact unity is
    // unattainable whenever Gamma_diss > 0)
    std::optional<double> absolute_target;
    double target_fraction{0.999};
    int threads{1};
};

inline DesignPoint sweep_point(const SweepRequest& req, double value) {
    NoiseRates rates = req.fixed_rates;
    int n_c = req.fixed_n_c;
    switch (req.parameter) {
        case SweepParameter::gamma: rates.gamma = value; break;
        case SweepParameter::n_c: n_c = static_cast<int>(std::lround(value)); break;
        case SweepParameter::gamma_sink: rates.gamma_sink = value; break;
        case SweepParameter::gamma_diss: rates.gamma_diss = value; break;
    }
    double target;
    if (req.absolute_target) {
        target = *req.absolute_target;
    } else {
        ScanResult scan = scan_J(rates, n_c);
        target = req.target_fraction * scan.best_value;
    }
    return solve_J(rates, n_c, target);
}

// One solve per grid point; points are independent and may be evaluated
// concurrently, output order follows the input grid. Per-point errors are
// collected and the sweep continues.
DesignCurve design_sweep(const SweepRequest& req);

} // namespace platonet

#include "platonet/design_sweep_impl.hpp"
