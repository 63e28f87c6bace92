// oracle_lindblad.hpp — Test-only oracles, independent of the element-wise
// implementation under test:
//   * an (N+2)-level Lindblad integration built from explicit jump operators
//     (sink transfer |sink><N|, local decay |vac><i|, dephasing n_i);
//   * the spectral steady value of the noiseless problem via the dark
//     subspace of H_eff = J - i*Gamma*P_sink.

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "platonet/dynamics.hpp"
#include "platonet/integrator.hpp"

namespace oracle {

using platonet::Complex;
using platonet::Matrix;
using platonet::NetworkSpec;
using platonet::RealVector;

struct OracleSample {
    double t;
    Matrix block;        // N x N single-excitation block
    double sink;
    double vacuum;
};

// Integrates d rho / dt = -i[H, rho] + sum_k D[L_k] rho on the (N+2)-level
// space with L_sink = sqrt(2 Gamma) |N><sink_site|, L_diss,i = sqrt(2 Gd)
// |N+1><i|, L_deph,i = sqrt(2 g) |i><i|. Rates carry the factor-2 convention
// of the element equations, so D[L] uses the standard 1/2 anticommutator.
inline std::vector<OracleSample> integrate_jump_form(const NetworkSpec& spec, double t_end,
                                                     int n_samples) {
    const int n = spec.size();
    const int d = n + 2;                       // sites, sink level, vacuum level
    Matrix H = Matrix::Zero(d, d);
    H.topLeftCorner(n, n) = spec.coupling.J.cast<Complex>();

    std::vector<Matrix> jumps;
    {
        Matrix L = Matrix::Zero(d, d);
        L(n, spec.sink_site) = std::sqrt(2.0 * spec.rates.gamma_sink);
        jumps.push_back(L);
        for (int i = 0; i < n; ++i) {
            Matrix Ld = Matrix::Zero(d, d);
            Ld(n + 1, i) = std::sqrt(2.0 * spec.rates.gamma_diss);
            jumps.push_back(Ld);
            Matrix Lp = Matrix::Zero(d, d);
            Lp(i, i) = std::sqrt(2.0 * spec.rates.gamma);
            jumps.push_back(Lp);
        }
    }
    std::vector<Matrix> jdagj;
    for (const auto& L : jumps) jdagj.push_back(L.adjoint() * L);

    Matrix rho = Matrix::Zero(d, d);
    for (auto& [site, pop] : spec.initial) rho(site, site) += pop;

    auto pack = [&](const Matrix& m, RealVector& y) {
        y.resize(2 * d * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                y[2 * (i * d + j)] = m(i, j).real();
                y[2 * (i * d + j) + 1] = m(i, j).imag();
            }
    };
    auto unpack = [&](const RealVector& y, Matrix& m) {
        m.resize(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                m(i, j) = Complex(y[2 * (i * d + j)], y[2 * (i * d + j) + 1]);
    };

    Matrix scratch(d, d), drho(d, d);
    auto rhs = [&](double, const RealVector& y, RealVector& dy) {
        unpack(y, scratch);
        drho = Complex(0, -1) * (H * scratch - scratch * H);
        for (std::size_t k = 0; k < jumps.size(); ++k) {
            drho += jumps[k] * scratch * jumps[k].adjoint();
            drho -= 0.5 * (jdagj[k] * scratch + scratch * jdagj[k]);
        }
        pack(drho, dy);
    };

    platonet::IntegratorOptions opt;
    opt.rel_tol = 1e-10;
    opt.abs_tol = 1e-13;
    platonet::Rk45 rk(opt);
    RealVector y;
    pack(rho, y);
    double t = 0.0;
    std::vector<OracleSample> out;
    for (int k = 0; k < n_samples; ++k) {
        const double tk = t_end * k / (n_samples - 1);
        if (k > 0) rk.advance(rhs, t, y, tk);
        unpack(y, scratch);
        out.push_back({tk, scratch.topLeftCorner(n, n), scratch(n, n).real(),
                       scratch(n + 1, n + 1).real()});
    }
    return out;
}

// Exact noiseless t->infinity sink population: 1 - the weight of the initial
// mixture inside the dark subspace (eigenvectors of the coupling matrix with
// zero sink-site amplitude, resolved per eigenvalue group).
inline double dark_space_steady_value(const NetworkSpec& spec) {
    const int n = spec.size();
    Eigen::SelfAdjointEigenSolver<platonet::RealMatrix> es(spec.coupling.J);
    const auto& w = es.eigenvalues();
    const auto& V = es.eigenvectors();

    platonet::RealMatrix P = platonet::RealMatrix::Zero(n, n);
    int a = 0;
    while (a < n) {
        int b = a + 1;
        while (b < n && std::abs(w[b] - w[a]) < 1e-8 * std::max(1.0, std::abs(w[a]))) ++b;
        const auto Vg = V.middleCols(a, b - a);
        Eigen::RowVectorXd row = Vg.row(spec.sink_site);
        // orthonormal basis of the null space of `row` within the eigenspace
        Eigen::JacobiSVD<platonet::RealMatrix> svd(row, Eigen::ComputeFullV);
        const int rank = (row.norm() > 1e-10) ? 1 : 0;
        const auto null_basis = svd.matrixV().rightCols(b - a - rank);
        const auto D = Vg * null_basis;
        P += D * D.transpose();
        a = b;
    }
    double trapped = 0.0;
    for (auto& [site, pop] : spec.initial) trapped += pop * P(site, site);
    return 1.0 - trapped;
}

} // namespace oracle
