#pragma once

// Rigid displacement fields (translations plus infinitesimal rotations),
// the L2-orthogonal projection onto them, and an l2-orthonormal nodal basis
// of the discrete rigid space used to deflate the singular Neumann systems.
//
// The projection decouples exactly when the rotation is taken about the
// area centroid: translations are L2-orthogonal to x -> rot90(x - c), and
// the rotation coefficient is the angular momentum divided by the polar
// second moment.  In 3D 'about the centroid' plus diagonal second moments
// (which the box domain has) diagonalize the rotation Gram matrix with
// entries int(|x|^2 - x_k^2).

#include <vector>

#include "tgap/algebra.hpp"
#include "tgap/mesh_fem.hpp"

namespace tgap {

// u(x) = translation + rotation * rot90(x - center).
struct RigidField2 {
    Vec2 translation{};
    double rotation = 0.0;
    Vec2 center{};
};

RigidField2 project_rigid(const Mesh& mesh, const DisplacementField& u);
DisplacementField to_nodal(const Mesh& mesh, const RigidField2& r);

// u - (projection of u): the rigid-free representative of u.
DisplacementField purge_rigid(const Mesh& mesh, const DisplacementField& u);

// u(x) = translation + rotation x x.
struct RigidField3 {
    Vec3 translation{};
    Vec3 rotation{};
};

RigidField3 project_rigid(const BoxDomain3& box, const AffineField3& u);

// l2-orthonormal basis of the nodal rigid space (3 vectors of length
// 2 * num_nodes, interleaved (x,y) per node), for CG deflation.
struct RigidBasis {
    std::vector<std::vector<double>> q;
};

RigidBasis rigid_basis(const Mesh& mesh);

}  // namespace tgap
