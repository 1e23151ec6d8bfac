#include "tgap/rigid.hpp"

#include <cmath>
#include <stdexcept>

namespace tgap {

namespace {

Vec2 rot90(const Vec2& v) { return Vec2{{-v[1], v[0]}}; }

Vec2 centroid(const Mesh& mesh)
{
    Vec2 c{};
    for (std::size_t t = 0; t < mesh.tris.size(); ++t) {
        Vec2 s{};
        for (int i = 0; i < 3; ++i)
            s = s + mesh.nodes[static_cast<std::size_t>(mesh.tris[t][static_cast<std::size_t>(i)])];
        c = c + (mesh.area[t] / 3.0) * s;
    }
    return (1.0 / domain_area(mesh)) * c;
}

}  // namespace

RigidField2 project_rigid(const Mesh& mesh, const DisplacementField& u)
{
    if (u.v.size() != mesh.nodes.size())
        throw std::invalid_argument("project_rigid: field size does not match mesh");

    RigidField2 r;
    r.center = centroid(mesh);
    r.translation = mean_value(mesh, u);

    // Angular momentum int u . rot90(x-c) and polar moment int |x-c|^2,
    // both quadratic per element: edge-midpoint rule is exact.
    double ang = 0.0, polar = 0.0;
    for (std::size_t t = 0; t < mesh.tris.size(); ++t) {
        const auto& tri = mesh.tris[t];
        for (int i = 0; i < 3; ++i) {
            const std::size_t a = static_cast<std::size_t>(tri[static_cast<std::size_t>(i)]);
            const std::size_t b = static_cast<std::size_t>(tri[static_cast<std::size_t>((i + 1) % 3)]);
            const Vec2 xm = 0.5 * (mesh.nodes[a] + mesh.nodes[b]) - r.center;
            const Vec2 um = 0.5 * (u.v[a] + u.v[b]);
            ang += mesh.area[t] / 3.0 * dot(um, rot90(xm));
            polar += mesh.area[t] / 3.0 * dot(xm, xm);
        }
    }
    r.rotation = (polar > 0.0) ? ang / polar : 0.0;
    return r;
}

DisplacementField to_nodal(const Mesh& mesh, const RigidField2& r)
{
    DisplacementField u;
    u.v.reserve(mesh.nodes.size());
    for (const Vec2& x : mesh.nodes)
        u.v.push_back(r.translation + r.rotation * rot90(x - r.center));
    return u;
}

DisplacementField purge_rigid(const Mesh& mesh, const DisplacementField& u)
{
    const RigidField2 r = project_rigid(mesh, u);
    DisplacementField w = u;
    for (std::size_t i = 0; i < w.v.size(); ++i)
        w.v[i] = w.v[i] - (r.translation + r.rotation * rot90(mesh.nodes[i] - r.center));
    return w;
}

RigidField3 project_rigid(const BoxDomain3& box, const AffineField3& u)
{
    // Box is centered with diagonal second moments m_k = int x_k^2, so
    // <Gx, W_k x> = sum_ij G_ij (W_k)_ij m_j and |W_k x|^2 = sum_{j!=k} m_j.
    RigidField3 r;
    r.translation = u.shift;
    const double m0 = box.moment2(0), m1 = box.moment2(1), m2 = box.moment2(2);
    const Mat3& g = u.grad;
    r.rotation[0] = (g(2, 1) * m1 - g(1, 2) * m2) / (m1 + m2);
    r.rotation[1] = (g(0, 2) * m2 - g(2, 0) * m0) / (m2 + m0);
    r.rotation[2] = (g(1, 0) * m0 - g(0, 1) * m1) / (m0 + m1);
    return r;
}

RigidBasis rigid_basis(const Mesh& mesh)
{
    const std::size_t nn = mesh.nodes.size();
    const Vec2 c = centroid(mesh);
    RigidBasis basis;
    basis.q.assign(3, std::vector<double>(2 * nn, 0.0));
    for (std::size_t i = 0; i < nn; ++i) {
        basis.q[0][2 * i] = 1.0;
        basis.q[1][2 * i + 1] = 1.0;
        const Vec2 rx = rot90(mesh.nodes[i] - c);
        basis.q[2][2 * i] = rx[0];
        basis.q[2][2 * i + 1] = rx[1];
    }
    // Modified Gram-Schmidt in l2.
    for (std::size_t k = 0; k < basis.q.size(); ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            double d = 0.0;
            for (std::size_t i = 0; i < basis.q[k].size(); ++i)
                d += basis.q[j][i] * basis.q[k][i];
            for (std::size_t i = 0; i < basis.q[k].size(); ++i)
                basis.q[k][i] -= d * basis.q[j][i];
        }
        double n2 = 0.0;
        for (double x : basis.q[k]) n2 += x * x;
        const double inv = 1.0 / std::sqrt(n2);
        for (double& x : basis.q[k]) x *= inv;
    }
    return basis;
}

}  // namespace tgap
