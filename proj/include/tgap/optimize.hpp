#pragma once

// Small self-contained minimizers: Brent's parabolic-interpolation method
// for one scalar variable, and dense BFGS with Armijo backtracking for a
// handful of variables (the 3D inner rotation problem).  The large-scale
// nodal minimization lives in solvers.hpp and uses limited-memory updates
// instead.

#include <array>
#include <functional>

#include "tgap/algebra.hpp"

namespace tgap {

struct ScalarMinResult {
    double x = 0.0;
    double value = 0.0;
    int evaluations = 0;
};

// Minimize f on [a, b] to the given x-tolerance.  Standard Brent scheme:
// golden-section fallback, parabolic step when it is safe.
ScalarMinResult brent_minimize(const std::function<double(double)>& f,
                               double a, double b, double xtol, int max_iter = 200);

struct VecMinResult {
    Vec3 x{};
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Dense BFGS for f: R^3 -> R with analytic gradient, Armijo backtracking
// line search.  Deterministic for a given start.
VecMinResult bfgs3_minimize(const std::function<double(const Vec3&)>& f,
                            const std::function<Vec3(const Vec3&)>& grad,
                            const Vec3& start, double grad_tol, int max_iter = 500);

}  // namespace tgap
