#include "tgap/loads.hpp"

#include <cmath>
#include <stdexcept>

namespace tgap {

void validate(const Mesh& mesh, const LoadSystem& load)
{
    if (load.traction_kind == TractionKind::per_edge) {
        const std::size_t n = load.traction_per_edge.size();
        if (n != 1 && n != mesh.boundary_edges.size())
            throw std::invalid_argument(
                "load: per_edge traction needs one value or one per boundary edge");
    }
    if (load.body_kind == BodyKind::per_cell) {
        const std::size_t n = load.body_per_cell.size();
        if (n != 1 && n != mesh.tris.size())
            throw std::invalid_argument(
                "load: per_cell body force needs one value or one per triangle");
    }
}

Vec2 traction_on_edge(const Mesh& mesh, const LoadSystem& load, std::size_t e)
{
    switch (load.traction_kind) {
        case TractionKind::zero: return Vec2{};
        case TractionKind::normal_scaled:
            return load.traction_coefficient * mesh.edge_normal[e];
        case TractionKind::per_edge:
            return load.traction_per_edge.size() == 1 ? load.traction_per_edge[0]
                                                      : load.traction_per_edge[e];
    }
    return Vec2{};
}

namespace {

Vec2 body_on_cell(const LoadSystem& load, std::size_t t)
{
    if (load.body_kind != BodyKind::per_cell) return Vec2{};
    return load.body_per_cell.size() == 1 ? load.body_per_cell[0] : load.body_per_cell[t];
}

// Value of the P1 field at the midpoint of local edge (i, i+1) of tri t.
Vec2 midpoint_value(const Mesh& mesh, const DisplacementField& u, std::size_t t, int i)
{
    const auto& tri = mesh.tris[t];
    return 0.5 * (u.v[static_cast<std::size_t>(tri[static_cast<std::size_t>(i)])]
                  + u.v[static_cast<std::size_t>(tri[static_cast<std::size_t>((i + 1) % 3)])]);
}

Vec2 midpoint_coord(const Mesh& mesh, std::size_t t, int i)
{
    const auto& tri = mesh.tris[t];
    return 0.5 * (mesh.nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>(i)])]
                  + mesh.nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>((i + 1) % 3)])]);
}

}  // namespace

double eval_load_work(const Mesh& mesh, const LoadSystem& load, const DisplacementField& u)
{
    validate(mesh, load);
    if (u.v.size() != mesh.nodes.size())
        throw std::invalid_argument("eval_load_work: field size does not match mesh");

    double work = 0.0;
    if (load.traction_kind != TractionKind::zero) {
        for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
            const Vec2 f = traction_on_edge(mesh, load, e);
            const Vec2& ua = u.v[static_cast<std::size_t>(mesh.boundary_edges[e][0])];
            const Vec2& ub = u.v[static_cast<std::size_t>(mesh.boundary_edges[e][1])];
            work += 0.5 * mesh.edge_len[e] * dot(f, ua + ub);
        }
    }
    switch (load.body_kind) {
        case BodyKind::zero: break;
        case BodyKind::per_cell:
            for (std::size_t t = 0; t < mesh.tris.size(); ++t) {
                Vec2 c{};
                for (int i = 0; i < 3; ++i)
                    c = c + u.v[static_cast<std::size_t>(mesh.tris[t][static_cast<std::size_t>(i)])];
                work += mesh.area[t] / 3.0 * dot(body_on_cell(load, t), c);
            }
            break;
        case BodyKind::linear:
            // (Mx).u is quadratic; edge-midpoint rule is exact.
            for (std::size_t t = 0; t < mesh.tris.size(); ++t) {
                double q = 0.0;
                for (int i = 0; i < 3; ++i)
                    q += dot(load.body_matrix * midpoint_coord(mesh, t, i),
                             midpoint_value(mesh, u, t, i));
                work += mesh.area[t] / 3.0 * q;
            }
            break;
    }
    return work;
}

double eval_load_work(const Mesh& mesh, const LoadSystem& load, const AffineField2& u)
{
    // P1 interpolation reproduces affine fields exactly.
    return eval_load_work(mesh, load, nodal_from_affine(mesh, u));
}

Mat2 resultant_matrix(const Mesh& mesh, const LoadSystem& load)
{
    validate(mesh, load);
    Mat2 t_mat;
    if (load.traction_kind != TractionKind::zero) {
        for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
            const Vec2 f = traction_on_edge(mesh, load, e);
            const Vec2 mid = 0.5 * (mesh.nodes[static_cast<std::size_t>(mesh.boundary_edges[e][0])]
                                    + mesh.nodes[static_cast<std::size_t>(mesh.boundary_edges[e][1])]);
            t_mat = t_mat + mesh.edge_len[e] * outer(f, mid);
        }
    }
    switch (load.body_kind) {
        case BodyKind::zero: break;
        case BodyKind::per_cell:
            for (std::size_t t = 0; t < mesh.tris.size(); ++t) {
                Vec2 c{};
                for (int i = 0; i < 3; ++i) c = c + midpoint_coord(mesh, t, i);
                t_mat = t_mat + mesh.area[t] / 3.0 * outer(body_on_cell(load, t), c);
            }
            break;
        case BodyKind::linear:
            for (std::size_t t = 0; t < mesh.tris.size(); ++t)
                for (int i = 0; i < 3; ++i) {
                    const Vec2 xm = midpoint_coord(mesh, t, i);
                    t_mat = t_mat + mesh.area[t] / 3.0 * outer(load.body_matrix * xm, xm);
                }
            break;
    }
    return t_mat;
}

std::vector<Vec2> assemble_load_vector(const Mesh& mesh, const LoadSystem& load)
{
    validate(mesh, load);
    std::vector<Vec2> l(mesh.nodes.size(), Vec2{});
    if (load.traction_kind != TractionKind::zero) {
        for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
            const Vec2 half = (0.5 * mesh.edge_len[e]) * traction_on_edge(mesh, load, e);
            l[static_cast<std::size_t>(mesh.boundary_edges[e][0])] =
                l[static_cast<std::size_t>(mesh.boundary_edges[e][0])] + half;
            l[static_cast<std::size_t>(mesh.boundary_edges[e][1])] =
                l[static_cast<std::size_t>(mesh.boundary_edges[e][1])] + half;
        }
    }
    switch (load.body_kind) {
        case BodyKind::zero: break;
        case BodyKind::per_cell:
            for (std::size_t t = 0; t < mesh.tris.size(); ++t) {
                const Vec2 share = (mesh.area[t] / 3.0) * body_on_cell(load, t);
                for (int i = 0; i < 3; ++i) {
                    const std::size_t n =
                        static_cast<std::size_t>(mesh.tris[t][static_cast<std::size_t>(i)]);
                    l[n] = l[n] + share;
                }
            }
            break;
        case BodyKind::linear:
            // Midpoint-rule weights: each midpoint contributes A/3 times the
            // body force there, split evenly between the two incident nodes.
            for (std::size_t t = 0; t < mesh.tris.size(); ++t)
                for (int i = 0; i < 3; ++i) {
                    const Vec2 gm = load.body_matrix * midpoint_coord(mesh, t, i);
                    const Vec2 half = (mesh.area[t] / 6.0) * gm;
                    const auto& tri = mesh.tris[t];
                    const std::size_t a = static_cast<std::size_t>(tri[static_cast<std::size_t>(i)]);
                    const std::size_t b =
                        static_cast<std::size_t>(tri[static_cast<std::size_t>((i + 1) % 3)]);
                    l[a] = l[a] + half;
                    l[b] = l[b] + half;
                }
            break;
    }
    return l;
}

LoadNorms load_l2_norms(const Mesh& mesh, const LoadSystem& load)
{
    validate(mesh, load);
    LoadNorms n;
    double f2 = 0.0;
    if (load.traction_kind != TractionKind::zero)
        for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
            const Vec2 f = traction_on_edge(mesh, load, e);
            f2 += mesh.edge_len[e] * dot(f, f);
        }
    double g2 = 0.0;
    switch (load.body_kind) {
        case BodyKind::zero: break;
        case BodyKind::per_cell:
            for (std::size_t t = 0; t < mesh.tris.size(); ++t) {
                const Vec2 g = body_on_cell(load, t);
                g2 += mesh.area[t] * dot(g, g);
            }
            break;
        case BodyKind::linear:
            for (std::size_t t = 0; t < mesh.tris.size(); ++t)
                for (int i = 0; i < 3; ++i) {
                    const Vec2 gm = load.body_matrix * midpoint_coord(mesh, t, i);
                    g2 += mesh.area[t] / 3.0 * dot(gm, gm);
                }
            break;
    }
    n.traction_l2 = std::sqrt(f2);
    n.body_l2 = std::sqrt(g2);
    return n;
}

EquilibrationReport check_equilibrated(const Mesh& mesh, const LoadSystem& load)
{
    EquilibrationReport rep;

    Vec2 force{};
    for (int k = 0; k < 2; ++k) {
        AffineField2 ek;
        ek.shift[k] = 1.0;
        force[k] = eval_load_work(mesh, load, ek);
    }
    AffineField2 rot;
    rot.grad = skew_from_params(SkewParam<2>{1.0});
    const double moment = eval_load_work(mesh, load, rot);

    // Load magnitude: L1 norms of the data; the moment scale carries the
    // extra length unit via the domain radius.
    double mag = 0.0;
    if (load.traction_kind != TractionKind::zero)
        for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e)
            mag += mesh.edge_len[e] * norm(traction_on_edge(mesh, load, e));
    switch (load.body_kind) {
        case BodyKind::zero: break;
        case BodyKind::per_cell:
            for (std::size_t t = 0; t < mesh.tris.size(); ++t)
                mag += mesh.area[t] * norm(body_on_cell(load, t));
            break;
        case BodyKind::linear:
            for (std::size_t t = 0; t < mesh.tris.size(); ++t)
                for (int i = 0; i < 3; ++i)
                    mag += mesh.area[t] / 3.0
                         * norm(load.body_matrix * midpoint_coord(mesh, t, i));
            break;
    }
    double radius = 0.0;
    for (const Vec2& p : mesh.nodes) radius = std::max(radius, norm(p));

    rep.force_residual = norm(force);
    rep.moment_residual = std::abs(moment);
    rep.force_scale = mag;
    rep.moment_scale = mag * radius;
    constexpr double rel = 1e-12;
    rep.equilibrated = (mag == 0.0)
                    || (rep.force_residual <= rel * rep.force_scale
                        && rep.moment_residual <= rel * rep.moment_scale);
    return rep;
}

const char* to_string(Compatibility c)
{
    switch (c) {
        case Compatibility::strictly_compatible: return "strictly_compatible";
        case Compatibility::weakly_compatible: return "weakly_compatible";
        case Compatibility::violated: return "violated";
    }
    return "?";
}

const char* to_string(InfFStatus s)
{
    return s == InfFStatus::finite ? "finite" : "minus_infinity";
}

CompatibilityReport<2> classify_compatibility(const Mat2& resultant)
{
    // In 2D, W^2 = -w^2 I, so c(W) = -w^2 Tr T: the sign of Tr T decides.
    CompatibilityReport<2> rep;
    const SymEigen<2> eig = sym_eigen(sym(resultant));
    rep.spectrum = eig.eigenvalues;
    rep.margin = trace(resultant);
    rep.zero_band = 1e-10 * frobenius_norm(resultant);
    if (rep.margin > rep.zero_band) {
        rep.verdict = Compatibility::strictly_compatible;
    } else if (rep.margin < -rep.zero_band) {
        rep.verdict = Compatibility::violated;
        rep.witness = SkewParam<2>{1.0};
    } else {
        rep.verdict = Compatibility::weakly_compatible;
    }
    return rep;
}

CompatibilityReport<3> classify_compatibility(const Mat3& resultant)
{
    // With W x = a x x, c(a) = <W^2, sym T> = -sum_k a_k^2 (Tr T - t_k) in
    // the eigenframe of sym T (eigenvalues t_1 <= t_2 <= t_3).  The largest
    // value over unit axes is -(Tr T - t_3) = -(t_1 + t_2): the smallest
    // pairwise eigenvalue sum is the test quantity, the eigenvector of t_3
    // the extremal axis.
    CompatibilityReport<3> rep;
    const SymEigen<3> eig = sym_eigen(sym(resultant));
    rep.spectrum = eig.eigenvalues;
    rep.margin = eig.eigenvalues[0] + eig.eigenvalues[1];
    rep.zero_band = 1e-10 * frobenius_norm(resultant);
    if (rep.margin > rep.zero_band) {
        rep.verdict = Compatibility::strictly_compatible;
    } else if (rep.margin < -rep.zero_band) {
        rep.verdict = Compatibility::violated;
        rep.witness = SkewParam<3>{eig.eigenvectors[2]};
    } else {
        rep.verdict = Compatibility::weakly_compatible;
    }
    return rep;
}

}  // namespace tgap
