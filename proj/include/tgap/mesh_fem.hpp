#pragma once

// Planar P1 finite elements on structured triangulations with crossed
// (alternating) diagonals, plus the exact-integration box domain used for
// affine trial fields in 3D.  Quadrature rules are exact for the degrees
// that actually occur: products of element-constant data with P1 fields
// (degree 1 on triangles), quadratics for second moments and L2 norms
// (3-midpoint rule, degree 2), and 2-point Gauss on boundary edges
// (degree 3).

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "tgap/algebra.hpp"
#include "tgap/constitutive.hpp"
#include "tgap/parallel.hpp"

namespace tgap {

struct Mesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> tris;            // CCW vertex triples
    std::vector<std::array<int, 2>> boundary_edges;  // CCW traversal of the boundary

    // Derived per-element data, filled by finalize().
    std::vector<double> area;                       // triangle areas, all > 0
    std::vector<std::array<Vec2, 3>> grad_phi;      // P1 shape gradients
    std::vector<double> edge_len;
    std::vector<Vec2> edge_normal;                  // outward unit normals

    void finalize();  // computes derived data, throws on degenerate input

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_tris() const { return static_cast<int>(tris.size()); }
    int num_boundary_edges() const { return static_cast<int>(boundary_edges.size()); }
};

// n x n grid of cells on [-w/2,w/2] x [-h/2,h/2], two triangles per cell
// with the diagonal direction alternating by cell parity.  2 n^2 triangles,
// 4 n boundary edges, centered at the origin.
Mesh make_rectangle_mesh(double width, double height, int n);

inline Mesh make_unit_square_mesh(int n) { return make_rectangle_mesh(1.0, 1.0, n); }

// Nodal P1 vector field on a Mesh.
struct DisplacementField {
    std::vector<Vec2> v;
};

// Closed-form affine field x -> grad x + shift.
struct AffineField2 {
    Mat2 grad;
    Vec2 shift;
};

inline Vec2 eval(const AffineField2& f, const Vec2& x) { return f.grad * x + f.shift; }

DisplacementField nodal_from_affine(const Mesh& mesh, const AffineField2& f);

// Element-wise displacement gradient of a P1 field (constant per triangle).
std::vector<Mat2> gradient_field(const Mesh& mesh, const DisplacementField& u);

// Element-wise linearized strains E(u) = sym grad u.
std::vector<Mat2> strain_field(const Mesh& mesh, const DisplacementField& u);

double domain_area(const Mesh& mesh);

// Integral of div u over the domain (exact for P1).
double divergence_integral(const Mesh& mesh, const DisplacementField& u);

// Mean of u over the domain (exact for P1).
Vec2 mean_value(const Mesh& mesh, const DisplacementField& u);

// sqrt of the exact integral of |u|^2.
double l2_norm(const Mesh& mesh, const DisplacementField& u);

// sqrt of the exact integral of |grad u|^2.
double h1_seminorm(const Mesh& mesh, const DisplacementField& u);

// Integral of V0(grad u - offset) over the domain; element loop runs under
// the requested execution policy with the ordered blocked reduction, so the
// serial and parallel paths agree bitwise.
double integrate_quadratic_energy(const Mesh& mesh, const Material& m,
                                  const DisplacementField& u, const Mat2& offset,
                                  Exec exec = Exec::parallel);

// Frame normalization: returned mesh has integral of x equal to zero and a
// diagonal second-moment matrix.  `rotation` and `shift` give the applied
// map x_new = rotation^T (x_old - shift).
struct FrameTransform {
    Vec2 shift;
    Mat2 rotation;
};
Mesh normalize_frame(const Mesh& mesh, FrameTransform* transform = nullptr);

// Second moments integral of x (x) x over the domain.
Mat2 second_moment(const Mesh& mesh);

// Plain-text mesh format, one entity per line, 0-based indices:
//   node <x> <y>
//   tri <i> <j> <k>
//   bedge <i> <j>
// Floating-point values are written with 17 significant digits so a
// write/read round trip is exact.
void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is);
void write_mesh_file(const std::string& path, const Mesh& mesh);
Mesh read_mesh_file(const std::string& path);

// Axis-aligned box [-a1,a1] x [-a2,a2] x [-a3,a3] carrying the exact
// integrals needed for affine trial fields; no 3D volume mesh is built.
struct BoxDomain3 {
    Vec3 half{{0.5, 0.5, 0.5}};

    double volume() const { return 8.0 * half[0] * half[1] * half[2]; }
    // Diagonal of the second-moment matrix: integral of x_k^2.
    double moment2(int k) const { return volume() * half[k] * half[k] / 3.0; }
    double face_area(int k) const { return volume() / (2.0 * half[k]); }
};

struct AffineField3 {
    Mat3 grad;
    Vec3 shift;
};

inline Vec3 eval(const AffineField3& f, const Vec3& x) { return f.grad * x + f.shift; }

}  // namespace tgap
