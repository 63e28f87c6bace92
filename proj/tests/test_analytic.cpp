#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "platonet/analytic.hpp"

using namespace platonet;
using Catch::Approx;

namespace {

ReducedSpec make_spec(double J, int nc, NoiseRates rates) {
    ReducedSpec s;
    s.J = J;
    s.n_c = nc;
    s.rates = rates;
    return s;
}

} // namespace

TEST_CASE("RateTriple identities", "[analytic]") {
    const NoiseRates r{0.7, 0.3, 1.4};
    const RateTriple t(r);
    CHECK(t.gamma_b == Approx(t.gamma_a + r.gamma_sink));
    CHECK(t.gamma_c - t.gamma_a == Approx(2 * r.gamma_sink - 2 * r.gamma));
}

TEST_CASE("solve_laplace: no coupling means no transport", "[analytic]") {
    ReducedSpec spec = make_spec(0.0, 4, {0.5, 0.2, 1.0});
    for (double s : {0.01, 0.1, 1.0, 10.0}) {
        LaplaceSolution sol = solve_laplace(spec, s);
        CHECK(sol.rho_nn == Approx(0.0).margin(1e-14));
        CHECK(sol.rho_target == Approx(0.0).margin(1e-14));
    }
    CHECK_THROWS_AS(solve_laplace(spec, 0.0), SingularSystem);
    CHECK_THROWS_AS(solve_laplace(spec, -1.0), SingularSystem);
}

TEST_CASE("solve_laplace: noiseless small-s limit approaches 1/(N_c - 1)", "[analytic]") {
    for (int nc : {4, 5, 6}) {
        ReducedSpec spec = make_spec(1.0, nc, {0.0, 0.0, 1.0});
        const double s = 1e-6;
        CHECK(s * solve_laplace(spec, s).rho_target ==
              Approx(1.0 / (nc - 1)).margin(1e-4));
    }
}

TEST_CASE("closed form agrees with the direct solve on a grid", "[analytic][firewall]") {
    double worst = 0.0;
    for (int nc : {4, 5, 6})
        for (double g : {0.1, 1.0, 10.0})
            for (double gd : {0.1, 1.0, 10.0})
                for (double G : {0.1, 1.0, 10.0})
                    for (double J : {0.1, 1.0, 10.0})
                        for (double s : {0.01, 0.1, 1.0, 10.0}) {
                            ReducedSpec spec = make_spec(J, nc, {g, gd, G});
                            const double a = closed_form_target(spec, s);
                            const double b = solve_laplace(spec, s).rho_target;
                            worst = std::max(worst, std::abs(a - b) /
                                                        std::max(std::abs(a), std::abs(b)));
                        }
    CHECK(worst < 1e-9);
}

TEST_CASE("closed form: zero coupling gives zero for all s", "[analytic]") {
    ReducedSpec spec = make_spec(0.0, 5, {1.0, 1.0, 1.0});
    for (double s : {0.01, 1.0, 100.0}) CHECK(closed_form_target(spec, s) == 0.0);
    CHECK_THROWS_AS(closed_form_target(spec, 0.0), std::invalid_argument);
}

TEST_CASE("final_value limits and special cases", "[analytic]") {
    SECTION("pure dephasing delivers everything") {
        for (double g : {0.1, 1.0, 10.0}) {
            ReducedSpec spec = make_spec(0.7, 4, {g, 0.0, 1.0});
            CHECK(final_value(spec) == Approx(1.0).margin(1e-9));
        }
    }
    SECTION("pure dissipation keeps the value strictly inside (0,1)") {
        ReducedSpec spec = make_spec(1.0, 4, {0.0, 0.5, 1.0});
        const double v = final_value(spec);
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
    SECTION("both zero is indeterminate") {
        CHECK_THROWS_AS(final_value(make_spec(1.0, 4, {0.0, 0.0, 1.0})), IndeterminateLimit);
    }
}

TEST_CASE("final_value double-computation: closed form vs small-s extrapolation",
          "[analytic]") {
    for (auto rates : {NoiseRates{1.0, 0.5, 1.0}, NoiseRates{0.1, 10.0, 1.0},
                       NoiseRates{10.0, 0.1, 10.0}}) {
        FinalValueCheck c = final_value_checked(make_spec(1.0, 4, rates));
        CHECK(c.residual < 1e-6);
    }
}

TEST_CASE("ordered limits", "[analytic]") {
    for (auto [nc, expected] : {std::pair{4, 1.0 / 3.0}, std::pair{5, 0.25},
                                std::pair{6, 0.2}}) {
        ReducedSpec spec = make_spec(1.0, nc, {0.0, 0.0, 1.0});
        CHECK(ordered_limit(spec, LimitOrder::gamma_first) ==
              Approx(expected).margin(1e-6));
        CHECK(ordered_limit(spec, LimitOrder::diss_first) == Approx(1.0).margin(1e-6));
    }
}

TEST_CASE("final_value stays within [0, 1] and is scale-invariant", "[analytic]") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto log_u = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); };
    for (int rep = 0; rep < 50; ++rep) {
        const double J = log_u(1e-2, 1e2);
        NoiseRates rates{log_u(1e-2, 1e2), log_u(1e-2, 1e2), log_u(1e-2, 1e2)};
        const int nc = 4 + static_cast<int>(u(rng) * 3);
        const double v = final_value(make_spec(J, nc, rates));
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-9);
        for (double lam : {0.1, 10.0}) {
            NoiseRates scaled{lam * rates.gamma, lam * rates.gamma_diss,
                              lam * rates.gamma_sink};
            CHECK(final_value(make_spec(lam * J, nc, scaled)) == Approx(v).epsilon(1e-9));
        }
    }
}

TEST_CASE("s * rho_target(s) approaches the final value monotonically from below"
          " for small s", "[analytic]") {
    ReducedSpec spec = make_spec(1.0, 4, {1.0, 0.5, 1.0});
    const double fv = final_value(spec);
    double prev = 0.0;
    for (double s : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
        const double v = s * solve_laplace(spec, s).rho_target;
        CHECK(v >= prev - 1e-12);
        CHECK(v <= fv + 1e-9);
        prev = v;
    }
    CHECK(prev == Approx(fv).margin(1e-4));
}

TEST_CASE("Laplace identity: s rho(s) equals the transform of the trajectory",
          "[analytic][quadrature]") {
    // integral_0^inf s e^{-st} rho_target(t) dt computed by Simpson's rule on a
    // dense reduced trajectory, compared against the transformed solution
    ReducedSpec spec = make_spec(1.0, 4, {1.0, 0.5, 1.0});
    const double s = 1.0;
    const double t_end = 40.0;          // e^{-40} tail is negligible
    const int n = 4001;                 // even interval count for Simpson
    ReducedTrajectory traj = reduced_integrate(spec, t_end, n);
    const double h = t_end / (n - 1);
    double integral = 0.0;
    for (int k = 0; k < n; ++k) {
        const double w = (k == 0 || k == n - 1) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        integral += w * std::exp(-s * traj.samples[k].t) * traj.samples[k].rho_target;
    }
    integral *= s * h / 3.0;
    // the tail beyond t_end: rho_target is bounded by 1
    CHECK(integral == Approx(s * solve_laplace(spec, s).rho_target).margin(1e-5));
}
