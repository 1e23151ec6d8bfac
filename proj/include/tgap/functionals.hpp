#pragma once

// The energy functionals under study.
//
//   E(v)   = int V0(E(v)) dx - L(v)                 linearized energy
//   F(v)   = min over skew W of
//            int V0(E(v) - W^2/2) dx - L(v)         gap functional
//   F_eps  = smoothed F (C^2 in v), F_eps <= F, monotone up to F as eps -> 0
//   F_h(v) = int h^-2 W(I + h grad v) dx - L(v)     rescaled nonlinear energy
//
// In 2D the inner minimization has the closed form
//   F(v) = E(v) + correction,
//   correction = -1/4 * (t^-)^2 / c,   t = int <DV0(I), E(v)>,  c = int V0(I),
// with the optimal spin w_opt^2 = max(0, -t/c).  eval_F uses the closed
// form; eval_F_inner_min redoes the minimization numerically (bracketing
// plus Brent on s = w^2) as an independent cross-check.  In 3D the inner
// problem is a genuinely nonconvex 3-variable minimization over rotation
// axes; it is solved by multistart BFGS with a grid fallback.

#include <optional>
#include <vector>

#include "tgap/algebra.hpp"
#include "tgap/constitutive.hpp"
#include "tgap/loads.hpp"
#include "tgap/mesh_fem.hpp"
#include "tgap/parallel.hpp"

namespace tgap {

struct EnergyBreakdown {
    double total = 0.0;           // functional value
    double elastic = 0.0;         // integral of the density at the optimum
    double load_work = 0.0;       // L(v)
    double correction = 0.0;      // total - (linearized energy), always <= 0
    double w_opt = 0.0;           // optimal spin magnitude (2D)
    double trace_integral = 0.0;  // t = int <DV0(I), E(v)>
    int inner_evaluations = 0;    // inner-solver cost (0 for closed form)
};

// Linearized energy E(v).
double eval_E(const Mesh& mesh, const Material& m, const LoadSystem& load,
              const DisplacementField& u, Exec exec = Exec::parallel);

// Gap functional via the 2D closed form.
EnergyBreakdown eval_F(const Mesh& mesh, const Material& m, const LoadSystem& load,
                       const DisplacementField& u, Exec exec = Exec::parallel);

// Gap functional via numerical inner minimization over s = w^2 >= 0
// (bracket expansion + Brent).  Independent of the closed form; agrees with
// eval_F to solver tolerance.
EnergyBreakdown eval_F_inner_min(const Mesh& mesh, const Material& m,
                                 const LoadSystem& load, const DisplacementField& u,
                                 Exec exec = Exec::parallel);

// Optimal spin magnitude for this material class:
// a*^2 = max(0, -(int div v) / |domain|).  Cross-check for eval_F's w_opt.
double eval_a_star(const Mesh& mesh, const DisplacementField& u);

// C^2 smoothing of t -> (t^-)^2:
//   phi_eps(t) = t^2 - eps t + eps^2/3   for t <= 0
//              = (eps - t)^3 / (3 eps)   for 0 <= t <= eps
//              = 0                       for t >= eps.
// phi_eps >= (t^-)^2 and decreases pointwise to it as eps -> 0.
double phi_eps(double t, double eps);

// Smoothed gap functional F_eps(v) = E(v) - 1/4 phi_eps(t)/c.
EnergyBreakdown eval_F_eps(const Mesh& mesh, const Material& m, const LoadSystem& load,
                           const DisplacementField& u, double eps,
                           Exec exec = Exec::parallel);

// First variations at u in direction phi.
double first_variation_E(const Mesh& mesh, const Material& m, const LoadSystem& load,
                         const DisplacementField& u, const DisplacementField& phi,
                         Exec exec = Exec::parallel);
// delta F = delta E + 1/2 * t(u)^- * t(phi) / c  (differentiable wherever
// t(u) != 0; at t(u) = 0 this is the one-sided variation from t > 0).
double first_variation_F(const Mesh& mesh, const Material& m, const LoadSystem& load,
                         const DisplacementField& u, const DisplacementField& phi,
                         Exec exec = Exec::parallel);

// Rescaled nonlinear energy.  value is +inf (sentinel) when some element
// has det(I + h grad v) <= 0; min_det is reported either way.
struct FhEval {
    ExtReal value;
    double elastic = 0.0;   // integral of V_h, valid on the finite branch
    double load_work = 0.0;
    double min_det = 0.0;   // min over elements of det(I + h grad v)
};
FhEval eval_Fh(const Mesh& mesh, const Material& m, const LoadSystem& load, double h,
               const DisplacementField& u, Exec exec = Exec::parallel);

// Nodal gradient of F_h.  Throws std::domain_error off the finite branch.
// At v = 0 with any load this returns minus the load vector.
std::vector<Vec2> grad_Fh(const Mesh& mesh, const Material& m, const LoadSystem& load,
                          double h, const DisplacementField& u,
                          Exec exec = Exec::parallel);

// Gap functional restricted to a sub-collection of triangles (body load
// restricted likewise; traction kept on boundary edges whose endpoints all
// lie in the subset).  Used to demonstrate that F is not additive over
// domain splittings: F_subset(A) + F_subset(B) can be strictly below
// F_subset(A union B).
EnergyBreakdown eval_F_subset(const Mesh& mesh, const Material& m,
                              const LoadSystem& load, const DisplacementField& u,
                              const std::vector<std::uint8_t>& tri_mask,
                              Exec exec = Exec::parallel);

// ---------------------------------------------------------------------------
// 3D path: affine trial fields on a box domain, exact integrals.

// Traction c * n on the box boundary (equilibrated for every c; resultant
// c |domain| I).
struct BoxLoad {
    double normal_coefficient = 0.0;
};

double eval_load_work(const BoxDomain3& box, const BoxLoad& load, const AffineField3& u);
Mat3 resultant_matrix(const BoxDomain3& box, const BoxLoad& load);

double eval_E(const BoxDomain3& box, const Material& m, const BoxLoad& load,
              const AffineField3& u);

// min over axes a of V0(strain - (a (x) a - |a|^2 I)/2) for a constant
// symmetric strain.  Multistart BFGS (origin plus 26 lattice directions at
// 3 radii inside the coercivity ball); a 21^3 grid refined once provides an
// independent value that is also used as a fallback start if it beats the
// multistart result.
struct InnerMin3Result {
    double value = 0.0;
    SkewParam<3> axis{};    // optimal rotation axis
    double grid_value = 0.0;  // best value seen by the grid oracle
    bool grid_rescued = false;  // true if the grid start improved on multistart
    int starts = 0;
};
InnerMin3Result min_quadratic_over_skew(const Material& m, const Mat3& strain);

// Gap functional on affine fields over the box.
EnergyBreakdown eval_F(const BoxDomain3& box, const Material& m, const BoxLoad& load,
                       const AffineField3& u);

}  // namespace tgap
