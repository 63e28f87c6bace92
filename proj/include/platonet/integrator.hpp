// integrator.hpp — Embedded Dormand–Prince RK45 with adaptive steps,
// plus a fixed-step RK4 for reproducibility runs. State = Eigen vector.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "platonet/types.hpp"

namespace platonet {

struct IntegratorOptions {
    double rel_tol{1e-9};
    double abs_tol{1e-12};
    double initial_step{1e-3};
    double max_step{0.0};          // 0 = unlimited
    bool fixed_rk4{false};         // reproducibility fallback
    double fixed_step{1e-3};
};

namespace detail {

// Dormand-Prince 5(4) tableau
struct DP45 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // embedded 4th-order weights
    static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                            e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;
};

} // namespace detail

// Integrates y' = f(t, y) from t0 to t1, invoking on_sample(t, y) at every
// accepted step boundary requested through `sample_times` (strictly
// increasing, within [t0, t1]). `post_step` (optional) may re-normalize the
// state after each accepted step (e.g. Hermitian re-symmetrization).
class Rk45 {
public:
    using Rhs = std::function<void(double, const RealVector&, RealVector&)>;
    using PostStep = std::function<void(RealVector&)>;

    explicit Rk45(IntegratorOptions opt = {}) : opt_(opt) {}

    // advance the state in place to exactly t_target
    void advance(const Rhs& f, double& t, RealVector& y, double t_target,
                 const PostStep& post = nullptr) const {
        if (opt_.fixed_rk4) {
            advance_rk4(f, t, y, t_target, post);
            return;
        }
        const int n = static_cast<int>(y.size());
        RealVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y5(n), tmp(n);
        double h = std::min(opt_.initial_step, t_target - t);
        f(t, y, k1);  // FSAL seed
        while (t < t_target) {
            h = std::min(h, t_target - t);
            if (opt_.max_step > 0) h = std::min(h, opt_.max_step);
            if (!(h > std::abs(t) * 1e-15 + 1e-300))
                throw StepSizeUnderflow("rk45: step size underflow", t);
            using T = detail::DP45;
            tmp = y + h * (T::a21 * k1);
            f(t + T::c2 * h, tmp, k2);
            tmp = y + h * (T::a31 * k1 + T::a32 * k2);
            f(t + T::c3 * h, tmp, k3);
            tmp = y + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3);
            f(t + T::c4 * h, tmp, k4);
            tmp = y + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4);
            f(t + T::c5 * h, tmp, k5);
            tmp = y + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 +
                           T::a65 * k5);
            f(t + h, tmp, k6);
            y5 = y + h * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
            f(t + h, y5, k7);
            tmp = y + h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 +
                           T::e6 * k6 + T::e7 * k7);  // 4th-order solution

            double err = 0.0;
            for (int i = 0; i < n; ++i) {
                const double sc =
                    opt_.abs_tol + opt_.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
                err = std::max(err, std::abs(y5[i] - tmp[i]) / sc);
            }
            if (err <= 1.0) {
                t += h;
                y = y5;
                if (post) {
                    post(y);
                    f(t, y, k1);
                } else {
                    k1 = k7;  // FSAL
                }
            }
            const double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(fac, 0.2, 5.0);
        }
    }

    void advance_rk4(const Rhs& f, double& t, RealVector& y, double t_target,
                     const PostStep& post = nullptr) const {
        const int n = static_cast<int>(y.size());
        RealVector k1(n), k2(n), k3(n), k4(n), tmp(n);
        while (t < t_target - 1e-15 * std::max(1.0, std::abs(t_target))) {
            const double h = std::min(opt_.fixed_step, t_target - t);
            f(t, y, k1);
            tmp = y + 0.5 * h * k1;
            f(t + 0.5 * h, tmp, k2);
            tmp = y + 0.5 * h * k2;
            f(t + 0.5 * h, tmp, k3);
            tmp = y + h * k3;
            f(t + h, tmp, k4);
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += h;
            if (post) post(y);
        }
        t = t_target;
    }

private:
    IntegratorOptions opt_;
};

} // namespace platonet
