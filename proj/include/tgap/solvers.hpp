#pragma once

// Discrete solvers.
//
// The pure-traction linearized problem K v = l is singular exactly on the
// rigid modes, so the conjugate-gradient solver deflates them: right-hand
// side and iterates are kept l2-orthogonal to an orthonormal rigid basis
// instead of pinning nodes or adding Lagrange multipliers.  On top of the
// linear solver sit the two outer loops: alternating minimization for the
// gap functional (exact coordinate descent: the spin update is closed-form,
// the displacement update a linear solve) and limited-memory BFGS with
// determinant-guarded backtracking for the rescaled nonlinear energy.
//
// Fixed numeric policy, shared by all routines:
//   gradient tolerance   1e-9 * (1 + |load vector|)
//   iteration cap        10000
//   backtracking factor  0.5, Armijo constant 1e-4
//   determinant guard    det(I + h grad v) > 1e-8 on every element
//   divergence guard     objective below -1e4 * (|f|_L2^2 + |g|_L2^2)

#include <cstdint>
#include <string>
#include <vector>

#include "tgap/functionals.hpp"
#include "tgap/loads.hpp"
#include "tgap/mesh_fem.hpp"
#include "tgap/rigid.hpp"

namespace tgap {

enum class SolveStatus { converged, max_iterations, diverged, stalled };
const char* to_string(SolveStatus s);

struct SolveReport {
    SolveStatus status = SolveStatus::converged;
    int iterations = 0;
    double residual = 0.0;  // solver-dependent: CG residual or gradient norm
    std::string message;
};

// Compressed sparse row matrix (square).
struct Csr {
    int n = 0;
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;
};

// y = A x; rows are independent, so both execution policies agree bitwise.
void spmv(const Csr& a, const std::vector<double>& x, std::vector<double>& y,
          Exec exec = Exec::parallel);

// Deterministic blocked dot product.
double dot_vec(const std::vector<double>& x, const std::vector<double>& y,
               Exec exec = Exec::parallel);

// Stiffness of the linearized energy: K_(i,a),(j,b) = int <DV0 sym(e_a (x)
// grad phi_i), sym(e_b (x) grad phi_j)>, interleaved (x,y) node ordering.
Csr assemble_stiffness(const Mesh& mesh, const Material& m);

struct LinearSolveResult {
    DisplacementField u;   // rigid-free representative
    SolveReport report;
    double energy = 0.0;   // E(u)
};

// Minimize E over P1 fields: deflated CG on K v = l, then L2-purge of the
// rigid component.  Requires an equilibrated load.  `spin_offset` shifts the
// density to V0(E(v) - spin_offset) for the alternating scheme; pass zero
// for plain linearized elasticity.
LinearSolveResult solve_linear_elasticity(const Mesh& mesh, const Material& m,
                                          const LoadSystem& load,
                                          const Mat2& spin_offset = Mat2{},
                                          Exec exec = Exec::parallel);

struct MinimizeFResult {
    DisplacementField u;
    EnergyBreakdown breakdown;
    SolveReport report;
    CompatibilityReport<2> compatibility;
    std::vector<double> objective_trace;  // value after each outer step
};

// Global minimization of F by alternating the closed-form spin update with
// the linear displacement solve.  Violated loads are rejected up front with
// status diverged and the witness direction in the report message.
MinimizeFResult minimize_F(const Mesh& mesh, const Material& m, const LoadSystem& load,
                           Exec exec = Exec::parallel);

struct MinimizeFhResult {
    DisplacementField u;   // rigid-free representative
    FhEval eval;           // F_h at u
    SolveReport report;
};

// Local minimization of F_h by limited-memory BFGS (memory 10) with
// backtracking; trial states must keep det(I + h grad v) above the guard.
// Starts from `start` if given, else from the linearized solution.
MinimizeFhResult minimize_Fh(const Mesh& mesh, const Material& m, const LoadSystem& load,
                             double h, const DisplacementField* start = nullptr,
                             Exec exec = Exec::parallel);

struct GammaSweepStep {
    double h = 0.0;
    double value = 0.0;          // F_h(w_h)
    double gap = 0.0;            // |F_h(w_h) - min E|
    double rel_gap = 0.0;        // gap / |min E| (gap itself if min E = 0)
    double sqrt_h_h1 = 0.0;      // sqrt(h) |grad w_h|_L2
    double strain_err_l2 = 0.0;  // |E(w_h) - E(v_lin)|_L2
    int iterations = 0;
    SolveStatus status = SolveStatus::converged;
};

struct GammaSweepResult {
    double min_E = 0.0;              // linearized minimum value
    DisplacementField v_lin;         // linearized minimizer
    std::vector<GammaSweepStep> steps;
};

// Minimize F_h for each h against the linearized minimum.  Requires an
// equilibrated, strictly compatible load; weak or violated classifications
// are rejected (the sweep premise fails there).
GammaSweepResult gamma_sweep(const Mesh& mesh, const Material& m, const LoadSystem& load,
                             const std::vector<double>& h_list,
                             Exec exec = Exec::parallel);

// Numeric policy constants (see header comment).
namespace solver_policy {
inline constexpr double grad_tol = 1e-9;
inline constexpr int max_iterations = 10000;
inline constexpr double backtrack_factor = 0.5;
inline constexpr double armijo_c = 1e-4;
inline constexpr double det_guard = 1e-8;
inline constexpr double divergence_guard = 1e4;  // 10 * K_guard, K_guard = 1e3
inline constexpr double cg_rel_tol = 1e-13;
inline constexpr int lbfgs_memory = 10;
}  // namespace solver_policy

}  // namespace tgap
