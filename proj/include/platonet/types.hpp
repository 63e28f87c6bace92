// types.hpp — Shared aliases and error types for the platonet library

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace platonet {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Raised when a site grouping cannot be mapped onto an equivalent FCN:
// the chosen initial condition / sink placement breaks the symmetry the
// reduction relies on.
class NonUniformQuotient : public std::runtime_error {
public:
    explicit NonUniformQuotient(const std::string& what) : std::runtime_error(what) {}
};

// Raised when the Laplace-domain linear system is not solvable (s <= 0 or
// degenerate rates).
class SingularSystem : public std::runtime_error {
public:
    SingularSystem(const std::string& what, double condition_estimate)
        : std::runtime_error(what + " (condition estimate " +
                             std::to_string(condition_estimate) + ")"),
          condition(condition_estimate) {}
    double condition;
};

// Raised by final_value when gamma -> 0 and Gamma_diss -> 0 simultaneously
// (0/0); callers must pick a limit order via ordered_limit.
class IndeterminateLimit : public std::runtime_error {
public:
    explicit IndeterminateLimit(const std::string& what) : std::runtime_error(what) {}
};

// Raised by the design solver for targets outside (0, 1].
class InvalidTarget : public std::invalid_argument {
public:
    explicit InvalidTarget(const std::string& what) : std::invalid_argument(what) {}
};

// Raised by the adaptive integrator when the step size underflows.
class StepSizeUnderflow : public std::runtime_error {
public:
    StepSizeUnderflow(const std::string& what, double at_time)
        : std::runtime_error(what + " at t = " + std::to_string(at_time)), t(at_time) {}
    double t;
};

} // namespace platonet
