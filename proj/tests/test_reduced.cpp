#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "platonet/analytic.hpp"
#include "platonet/reduced.hpp"

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

// complete-graph network spec matching a ReducedSpec (the oracle path runs the
// full dynamics module on it)
NetworkSpec fcn_network(const ReducedSpec& r) {
    NetworkSpec spec;
    const int m = r.n_c;
    spec.solid.kind = Solid::tetrahedron;
    spec.solid.vertices.assign(m, Eigen::Vector3d::Zero());
    spec.solid.adjacency.resize(m, m);
    spec.solid.adjacency.setConstant(true);
    for (int i = 0; i < m; ++i) spec.solid.adjacency(i, i) = false;
    spec.solid.edge_length = 1.0;
    spec.coupling.mode = CouplingMode::nearest_neighbor;
    spec.coupling.J = r.J * (RealMatrix::Ones(m, m) - RealMatrix::Identity(m, m));
    spec.sink_site = m - 1;
    spec.rates = r.rates;
    spec.initial = {{0, 1.0}};
    return spec;
}

} // namespace

TEST_CASE("reduced_derivative fixed points and first motion", "[reduced]") {
    SECTION("all rates and J zero: derivative vanishes") {
        ReducedSpec spec = make_spec(0.0, 4, {0.0, 0.0, 0.0});
        ReducedState s;
        s.lambda_n = 0.7; s.x = 0.1; s.y = -0.2; s.rho_nn = 0.3;
        ReducedState d = reduced_derivative(s, spec);
        CHECK(d.lambda_n == 0.0);
        CHECK(d.x == 0.0);
        CHECK(d.y == 0.0);
        CHECK(d.rho_nn == 0.0);
        CHECK(d.rho_env == 0.0);
        CHECK(d.rho_target == 0.0);
    }
    SECTION("default initial state: only y moves, at -J") {
        ReducedSpec spec = make_spec(1.7, 5, {0.0, 0.0, 1.0});
        ReducedState d = reduced_derivative(ReducedState{}, spec);
        CHECK(d.lambda_n == 0.0);
        CHECK(d.x == 0.0);
        CHECK(d.y == Approx(-1.7));
        CHECK(d.rho_nn == 0.0);
        CHECK(d.rho_target == 0.0);
    }
    SECTION("absorbing manifold rho_env + rho_target = 1") {
        ReducedSpec spec = make_spec(2.0, 6, {0.4, 0.3, 1.2});
        ReducedState s;
        s.lambda_n = s.x = s.y = s.rho_nn = 0.0;
        s.rho_env = 0.6;
        s.rho_target = 0.4;
        ReducedState d = reduced_derivative(s, spec);
        CHECK(std::abs(d.lambda_n) < 1e-15);
        CHECK(std::abs(d.rho_env) < 1e-15);
        CHECK(std::abs(d.rho_target) < 1e-15);
    }
}

TEST_CASE("reduced_derivative is affine in the state", "[reduced]") {
    ReducedSpec spec = make_spec(1.3, 5, {0.7, 0.2, 1.1});
    ReducedState a, b, zero;
    a.lambda_n = 0.4; a.x = 0.1; a.y = -0.3; a.rho_nn = 0.2; a.rho_env = 0.1; a.rho_target = 0.05;
    b.lambda_n = -0.2; b.x = 0.3; b.y = 0.2; b.rho_nn = 0.1; b.rho_env = 0.4; b.rho_target = 0.2;
    zero.lambda_n = zero.x = zero.y = zero.rho_nn = zero.rho_env = zero.rho_target = 0.0;
    auto arr = [](const ReducedState& s) { return s.as_array(); };
    auto da = arr(reduced_derivative(a, spec));
    auto db = arr(reduced_derivative(b, spec));
    auto d0 = arr(reduced_derivative(zero, spec));
    ReducedState sum;
    sum.lambda_n = a.lambda_n + b.lambda_n;
    sum.x = a.x + b.x;
    sum.y = a.y + b.y;
    sum.rho_nn = a.rho_nn + b.rho_nn;
    sum.rho_env = a.rho_env + b.rho_env;
    sum.rho_target = a.rho_target + b.rho_target;
    auto ds = arr(reduced_derivative(sum, spec));
    // f affine: f(a + b) + f(0) = f(a) + f(b)
    for (int i = 0; i < 6; ++i)
        CHECK(ds[i] + d0[i] == Approx(da[i] + db[i]).margin(1e-13));
}

TEST_CASE("reduced model equals a complete-graph integration", "[reduced][oracle]") {
    for (NoiseRates rates : {NoiseRates{0.0, 0.0, 1.0}, NoiseRates{0.7, 0.3, 1.0},
                             NoiseRates{2.0, 0.05, 0.5}}) {
        for (int nc : {4, 6}) {
            ReducedSpec spec = make_spec(0.8, nc, rates);
            NetworkSpec net = fcn_network(spec);
            Trajectory full = integrate(net, 20.0, 201);
            ReducedTrajectory red = reduced_integrate(spec, 20.0, 201);
            double dev = 0.0;
            for (int k = 0; k < 201; ++k) {
                const auto& f = full.samples[k];
                const auto& r = red.samples[k];
                const Complex rn = f.rho.row(net.sink_site).sum();
                const Complex lam = f.rho.sum();
                dev = std::max(dev, std::abs(lam.real() - r.lambda_n));
                dev = std::max(dev, std::abs(rn.real() - r.x));
                dev = std::max(dev, std::abs(rn.imag() - r.y));
                dev = std::max(dev,
                               std::abs(f.rho(net.sink_site, net.sink_site).real() - r.rho_nn));
                dev = std::max(dev, std::abs(f.rho_env - r.rho_env));
                dev = std::max(dev, std::abs(f.rho_target - r.rho_target));
                dev = std::max(dev, std::abs(lam.imag()));
            }
            INFO("nc=" << nc << " gamma=" << rates.gamma);
            CHECK(dev < 1e-8);
        }
    }
}

TEST_CASE("noiseless saturation values 1/(N_c - 1)", "[reduced][figures]") {
    for (auto [nc, expected] : {std::pair{4, 1.0 / 3.0}, std::pair{6, 0.2}}) {
        ReducedSpec spec = make_spec(1.0, nc, {0.0, 0.0, 1.0});
        ReducedTrajectory traj = reduced_integrate(spec, 200.0, 2001);
        double avg = 0.0;
        int n = 0;
        for (const auto& s : traj.samples)
            if (s.t >= 100.0) {
                avg += s.rho_target;
                ++n;
            }
        INFO("Nc=" << nc);
        CHECK(avg / n == Approx(expected).margin(1e-3));
    }
}

TEST_CASE("noisy trajectories agree with the closed-form final value", "[reduced]") {
    for (NoiseRates rates : {NoiseRates{1.0, 0.5, 1.0}, NoiseRates{0.2, 1.5, 2.0}}) {
        ReducedSpec spec = make_spec(1.0, 4, rates);
        ReducedTrajectory traj = reduced_integrate(spec, 500.0 / rates.gamma_sink, 501);
        CHECK(traj.back().rho_target == Approx(final_value(spec)).margin(1e-4));
    }
}

TEST_CASE("accumulators are monotone; dissipation always keeps a share", "[reduced]") {
    ReducedSpec spec = make_spec(1.0, 5, {0.3, 0.2, 1.0});
    ReducedTrajectory traj = reduced_integrate(spec, 100.0, 401);
    double env = -1.0, tar = -1.0;
    for (const auto& s : traj.samples) {
        CHECK(s.rho_env >= env - 1e-12);
        CHECK(s.rho_target >= tar - 1e-12);
        env = s.rho_env;
        tar = s.rho_target;
    }
    CHECK(traj.back().rho_env > 0.0);
    // noiseless: rho_target nondecreasing and bounded by 1
    ReducedSpec clean = make_spec(1.0, 4, {0.0, 0.0, 1.0});
    ReducedTrajectory t2 = reduced_integrate(clean, 50.0, 201);
    CHECK(t2.back().rho_target <= 1.0 + 1e-9);
}

TEST_CASE("reduced_initial_from reproduces the paper's starting values", "[reduced]") {
    SECTION("cube: charge on site 1, sink on site 8") {
        NetworkSpec spec = default_spec(Solid::cube, CouplingMode::nearest_neighbor, 1.0,
                                        NoiseRates{0.0, 0.0, 1.0});
        QuotientMap map = discover_quotient(spec);
        ReducedState s = reduced_initial_from(spec, map);
        CHECK(s.lambda_n == Approx(1.0));
        CHECK(s.x == Approx(0.0).margin(1e-15));
        CHECK(s.y == Approx(0.0).margin(1e-15));
        CHECK(s.rho_nn == Approx(0.0).margin(1e-15));
    }
    SECTION("charge entirely on the sink site") {
        NetworkSpec spec = default_spec(Solid::tetrahedron, CouplingMode::nearest_neighbor,
                                        1.0, NoiseRates{0.0, 0.0, 1.0});
        spec.initial = {{3, 1.0}};
        QuotientMap map = discover_quotient(spec);
        ReducedState s = reduced_initial_from(spec, map);
        CHECK(s.rho_nn == Approx(1.0));
        CHECK(s.x == Approx(1.0));     // R_N includes the self term
        CHECK(s.y == Approx(0.0).margin(1e-15));
    }
    SECTION("icosahedron: quarter charges on sites 1-4") {
        NetworkSpec spec = default_spec(Solid::icosahedron, CouplingMode::nearest_neighbor,
                                        1.0, NoiseRates{0.0, 0.0, 1.0});
        QuotientMap map = discover_quotient(spec);
        ReducedState s = reduced_initial_from(spec, map);
        CHECK(s.lambda_n == Approx(1.0));
        CHECK(s.rho_nn == Approx(0.0).margin(1e-15));
    }
}

TEST_CASE("the rejected rho_NN decay convention diverges measurably",
          "[reduced][negative-control]") {
    ReducedSpec spec = make_spec(1.0, 4, {1.0, 0.5, 1.0});
    ReducedTrajectory good = reduced_integrate(spec, 50.0, 101);
    ReducedTrajectory bad =
        reduced_integrate(spec, 50.0, 101, IntegratorOptions{}, RhoNNDecay::eq7_typo);
    double dev = 0.0;
    for (int k = 0; k < 101; ++k)
        dev = std::max(dev, std::abs(good.samples[k].rho_target - bad.samples[k].rho_target));
    CHECK(dev > 1e-3);
}
