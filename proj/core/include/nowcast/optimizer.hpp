#pragma once

#include "nowcast/state_space.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace nowcast {

/// Function to minimize. Non-finite return values are treated as +infinity.
using Objective = std::function<double(const Vector&)>;

struct OptimizerOptions {
    int max_iterations = 2000;
    /// Stop when the relative improvement falls below this.
    double tolerance = 1e-8;
    std::uint64_t seed = 0;
    /// Simplex restarts after the first convergence (simplex method only).
    int max_restarts = 4;
    double initial_step = 0.5;
};

struct TracePoint {
    Vector x;
    double value;
};

struct OptimizerResult {
    Vector x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::vector<TracePoint> trace;  // best point after each iteration
};

/// Adaptive-coefficient Nelder-Mead with restarts from the incumbent. Restart
/// simplices use seeded random step signs.
OptimizerResult nelder_mead(const Objective& f, const Vector& x0, const OptimizerOptions& options);

/// BFGS with central finite-difference gradients and backtracking line search.
OptimizerResult quasi_newton(const Objective& f, const Vector& x0, const OptimizerOptions& options);

Vector numerical_gradient(const Objective& f, const Vector& x, double relative_step = 1e-5);

/// Central-difference Hessian with steps h_i = relative_step * max(1, |x_i|).
Matrix numerical_hessian(const Objective& f, const Vector& x, double relative_step = 1e-3);

}  // namespace nowcast
