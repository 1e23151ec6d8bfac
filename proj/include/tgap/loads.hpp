#pragma once

// Boundary traction and body force systems, the work functional
// L(v) = int_bdry f.v dH + int_dom g.v dx, its resultant matrix
// T = int f (x) x + int g (x) x, the equilibration check (L vanishes on
// rigid fields), and the sign classification of T that decides whether the
// gap functional stays bounded below.

#include <string>
#include <vector>

#include "tgap/algebra.hpp"
#include "tgap/mesh_fem.hpp"

namespace tgap {

enum class TractionKind { zero, normal_scaled, per_edge };
enum class BodyKind { zero, linear, per_cell };

struct LoadSystem {
    TractionKind traction_kind = TractionKind::zero;
    double traction_coefficient = 0.0;      // normal_scaled: f = coeff * n
    std::vector<Vec2> traction_per_edge;    // per_edge: one vector per boundary
                                            // edge, or a single broadcast value
    BodyKind body_kind = BodyKind::zero;
    Mat2 body_matrix;                       // linear: g(x) = body_matrix x
    std::vector<Vec2> body_per_cell;        // per_cell: one vector per triangle,
                                            // or a single broadcast value
};

// Throws if per-entity value counts do not match the mesh.
void validate(const Mesh& mesh, const LoadSystem& load);

// Constant traction vector on boundary edge e (per kind).
Vec2 traction_on_edge(const Mesh& mesh, const LoadSystem& load, std::size_t e);

// L(v) for a nodal field; all quadrature exact (edge trapezoid for degree-1
// integrands, triangle midpoint rule for the degree-2 linear-body case).
double eval_load_work(const Mesh& mesh, const LoadSystem& load, const DisplacementField& u);
double eval_load_work(const Mesh& mesh, const LoadSystem& load, const AffineField2& u);

// T = int_bdry f (x) x dH + int_dom g (x) x dx, exact.
Mat2 resultant_matrix(const Mesh& mesh, const LoadSystem& load);

// Nodal load vector l with sum_i l_i . u_i = eval_load_work(mesh, load, u)
// for every P1 field u.
std::vector<Vec2> assemble_load_vector(const Mesh& mesh, const LoadSystem& load);

// L2 norms of the load data, |f|_L2(bdry) and |g|_L2(dom); used for solver
// scale factors and the divergence guard.
struct LoadNorms {
    double traction_l2 = 0.0;
    double body_l2 = 0.0;
};
LoadNorms load_l2_norms(const Mesh& mesh, const LoadSystem& load);

// Work of the load on the rigid fields: force residual is the work on unit
// translations, moment residual the work on the unit-rate rotation field.
// Equilibrated means both vanish relative to the load magnitude (moment
// scaled by the domain radius).
struct EquilibrationReport {
    bool equilibrated = true;
    double force_residual = 0.0;   // |(L(e1), L(e2))|
    double moment_residual = 0.0;  // |L(Wx)|, w = 1
    double force_scale = 1.0;
    double moment_scale = 1.0;
};
EquilibrationReport check_equilibrated(const Mesh& mesh, const LoadSystem& load);

// Sign classification of c(W) = L(W^2 x) = <W^2, sym T> over skew W:
//   strictly_compatible: c < 0 for every W != 0 (F bounded, gap inactive at
//     large rotations),
//   weakly_compatible:   c <= 0 with equality for some W != 0,
//   violated:            c > 0 for some W (F unbounded below along the
//     witness direction).
// In 2D the test quantity is Tr T; in 3D it is the smallest pairwise sum of
// eigenvalues of sym T.  Values within 1e-10 * |T| of zero count as zero.
enum class Compatibility { strictly_compatible, weakly_compatible, violated };

const char* to_string(Compatibility c);

template <int N>
struct CompatibilityReport {
    Compatibility verdict = Compatibility::weakly_compatible;
    double margin = 0.0;            // the signed test quantity
    double zero_band = 0.0;         // threshold used for the weak verdict
    SkewParam<N> witness{};         // maximizer direction when violated
    std::array<double, N> spectrum{};  // eigenvalues of sym T, ascending
};

CompatibilityReport<2> classify_compatibility(const Mat2& resultant);
CompatibilityReport<3> classify_compatibility(const Mat3& resultant);

// Whether inf F is finite; minus_infinity exactly when the classification
// is violated, in which case the witness skew direction drives F to -inf
// along v_t(x) = t * W_witness^2 x.
enum class InfFStatus { finite, minus_infinity };

template <int N>
inline InfFStatus inf_F_status(const CompatibilityReport<N>& report)
{
    return report.verdict == Compatibility::violated ? InfFStatus::minus_infinity
                                                     : InfFStatus::finite;
}

const char* to_string(InfFStatus s);

}  // namespace tgap
