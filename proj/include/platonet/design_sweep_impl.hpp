// design_sweep_impl.hpp — Threaded sweep executor (included by design.hpp).

#pragma once

#include <atomic>
#include <stdexcept>
#include <thread>
#include <vector>

namespace platonet {

inline DesignCurve design_sweep(const SweepRequest& req) {
    if (req.values.empty())
        throw std::invalid_argument("design_sweep: empty sweep grid");
    for (std::size_t i = 0; i + 1 < req.values.size(); ++i)
        if (!(req.values[i] < req.values[i + 1]))
            throw std::invalid_argument("design_sweep: sweep values must be strictly increasing");

    DesignCurve curve;
    curve.swept_parameter = to_string(req.parameter);
    curve.swept_values = req.values;
    curve.points.resize(req.values.size());

    const int n_threads =
        std::max(1, std::min<int>(req.threads, static_cast<int>(req.values.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::string> errors(req.values.size());
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= req.values.size()) return;
            try {
                curve.points[i] = sweep_point(req, req.values[i]);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    double prev = -1.0;
    for (const auto& pt : curve.points) {
        const double j = pt.J_solution.value_or(pt.best_J);
        if (j < prev - 1e-12) curve.j_star_nondecreasing = false;
        prev = j;
    }
    return curve;
}

} // namespace platonet
