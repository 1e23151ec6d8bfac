#include "tgap/mesh_fem.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tgap {

namespace {

// CCW quarter turn; maps the CCW boundary tangent to the outward normal's
// negative, see finalize().
Vec2 rot90(const Vec2& v) { return Vec2{{-v[1], v[0]}}; }

double signed_area2(const Vec2& p0, const Vec2& p1, const Vec2& p2)
{
    const Vec2 a = p1 - p0;
    const Vec2 b = p2 - p0;
    return a[0] * b[1] - a[1] * b[0];
}

}  // namespace

void Mesh::finalize()
{
    const int nn = num_nodes();
    area.assign(tris.size(), 0.0);
    grad_phi.assign(tris.size(), {});
    for (std::size_t t = 0; t < tris.size(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const int v = tris[t][static_cast<std::size_t>(k)];
            if (v < 0 || v >= nn)
                throw std::runtime_error("mesh: triangle vertex index out of range");
        }
        const Vec2& p0 = nodes[static_cast<std::size_t>(tris[t][0])];
        const Vec2& p1 = nodes[static_cast<std::size_t>(tris[t][1])];
        const Vec2& p2 = nodes[static_cast<std::size_t>(tris[t][2])];
        const double a2 = signed_area2(p0, p1, p2);
        if (!(a2 > 0.0))
            throw std::runtime_error("mesh: triangle not counterclockwise or degenerate");
        area[t] = 0.5 * a2;
        // grad phi_i = rot90(p_{i+2} - p_{i+1}) / (2 A)
        const std::array<const Vec2*, 3> p = {&p0, &p1, &p2};
        for (int i = 0; i < 3; ++i)
            grad_phi[t][static_cast<std::size_t>(i)] =
                (1.0 / a2) * rot90(*p[static_cast<std::size_t>((i + 2) % 3)]
                                   - *p[static_cast<std::size_t>((i + 1) % 3)]);
    }
    edge_len.assign(boundary_edges.size(), 0.0);
    edge_normal.assign(boundary_edges.size(), Vec2{});
    for (std::size_t e = 0; e < boundary_edges.size(); ++e) {
        for (int k = 0; k < 2; ++k) {
            const int v = boundary_edges[e][static_cast<std::size_t>(k)];
            if (v < 0 || v >= nn)
                throw std::runtime_error("mesh: boundary edge index out of range");
        }
        const Vec2& p0 = nodes[static_cast<std::size_t>(boundary_edges[e][0])];
        const Vec2& p1 = nodes[static_cast<std::size_t>(boundary_edges[e][1])];
        const Vec2 t = p1 - p0;
        const double len = norm(t);
        if (!(len > 0.0)) throw std::runtime_error("mesh: zero-length boundary edge");
        edge_len[e] = len;
        // Boundary is traversed CCW, so the outward normal is the tangent
        // rotated clockwise.
        edge_normal[e] = (-1.0 / len) * rot90(t);
    }
}

Mesh make_rectangle_mesh(double width, double height, int n)
{
    if (!(width > 0.0) || !(height > 0.0))
        throw std::invalid_argument("mesh: width and height must be > 0");
    if (n < 1) throw std::invalid_argument("mesh: n must be >= 1");

    Mesh mesh;
    const auto idx = [n](int i, int j) { return j * (n + 1) + i; };
    mesh.nodes.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            mesh.nodes.push_back(Vec2{{width * (static_cast<double>(i) / n - 0.5),
                                       height * (static_cast<double>(j) / n - 0.5)}});

    mesh.tris.reserve(static_cast<std::size_t>(2 * n * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int p00 = idx(i, j), p10 = idx(i + 1, j);
            const int p01 = idx(i, j + 1), p11 = idx(i + 1, j + 1);
            if ((i + j) % 2 == 0) {
                mesh.tris.push_back({p00, p10, p11});
                mesh.tris.push_back({p00, p11, p01});
            } else {
                mesh.tris.push_back({p00, p10, p01});
                mesh.tris.push_back({p10, p11, p01});
            }
        }
    }

    mesh.boundary_edges.reserve(static_cast<std::size_t>(4 * n));
    for (int i = 0; i < n; ++i) mesh.boundary_edges.push_back({idx(i, 0), idx(i + 1, 0)});
    for (int j = 0; j < n; ++j) mesh.boundary_edges.push_back({idx(n, j), idx(n, j + 1)});
    for (int i = n; i > 0; --i) mesh.boundary_edges.push_back({idx(i, n), idx(i - 1, n)});
    for (int j = n; j > 0; --j) mesh.boundary_edges.push_back({idx(0, j), idx(0, j - 1)});

    mesh.finalize();
    return mesh;
}

DisplacementField nodal_from_affine(const Mesh& mesh, const AffineField2& f)
{
    DisplacementField u;
    u.v.reserve(mesh.nodes.size());
    for (const Vec2& x : mesh.nodes) u.v.push_back(eval(f, x));
    return u;
}

std::vector<Mat2> gradient_field(const Mesh& mesh, const DisplacementField& u)
{
    if (u.v.size() != mesh.nodes.size())
        throw std::invalid_argument("gradient_field: field size does not match mesh");
    std::vector<Mat2> g(mesh.tris.size());
    for (std::size_t t = 0; t < mesh.tris.size(); ++t) {
        Mat2 b;
        for (int i = 0; i < 3; ++i) {
            const Vec2& vi = u.v[static_cast<std::size_t>(mesh.tris[t][static_cast<std::size_t>(i)])];
            const Vec2& gi = mesh.grad_phi[t][static_cast<std::size_t>(i)];
            b = b + outer(vi, gi);
        }
        g[t] = b;
    }
    return g;
}

std::vector<Mat2> strain_field(const Mesh& mesh, const DisplacementField& u)
{
    std::vector<Mat2> g = gradient_field(mesh, u);
    for (Mat2& b : g) b = sym(b);
    return g;
}

double domain_area(const Mesh& mesh)
{
    double a = 0.0;
    for (double t : mesh.area) a += t;
    return a;
}

double divergence_integral(const Mesh& mesh, const DisplacementField& u)
{
    const std::vector<Mat2> g = gradient_field(mesh, u);
    double s = 0.0;
    for (std::size_t t = 0; t < g.size(); ++t) s += mesh.area[t] * trace(g[t]);
    return s;
}

Vec2 mean_value(const Mesh& mesh, const DisplacementField& u)
{
    Vec2 s{};
    for (std::size_t t = 0; t < mesh.tris.size(); ++t) {
        Vec2 c{};
        for (int i = 0; i < 3; ++i)
            c = c + u.v[static_cast<std::size_t>(mesh.tris[t][static_cast<std::size_t>(i)])];
        s = s + (mesh.area[t] / 3.0) * c;
    }
    return (1.0 / domain_area(mesh)) * s;
}

double l2_norm(const Mesh& mesh, const DisplacementField& u)
{
    // |u|^2 is quadratic on each triangle; the edge-midpoint rule is exact.
    double s = 0.0;
    for (std::size_t t = 0; t < mesh.tris.size(); ++t) {
        const auto& tri = mesh.tris[t];
        double q = 0.0;
        for (int i = 0; i < 3; ++i) {
            const Vec2 m = 0.5 * (u.v[static_cast<std::size_t>(tri[static_cast<std::size_t>(i)])]
                                  + u.v[static_cast<std::size_t>(tri[static_cast<std::size_t>((i + 1) % 3)])]);
            q += dot(m, m);
        }
        s += mesh.area[t] / 3.0 * q;
    }
    return std::sqrt(s);
}

double h1_seminorm(const Mesh& mesh, const DisplacementField& u)
{
    const std::vector<Mat2> g = gradient_field(mesh, u);
    double s = 0.0;
    for (std::size_t t = 0; t < g.size(); ++t) s += mesh.area[t] * inner(g[t], g[t]);
    return std::sqrt(s);
}

double integrate_quadratic_energy(const Mesh& mesh, const Material& m,
                                  const DisplacementField& u, const Mat2& offset,
                                  Exec exec)
{
    if (u.v.size() != mesh.nodes.size())
        throw std::invalid_argument("integrate_quadratic_energy: field size does not match mesh");
    const std::size_t nt = mesh.tris.size();
    return blocked_sum(nt, exec, [&](std::size_t t) {
        Mat2 b;
        for (int i = 0; i < 3; ++i) {
            const Vec2& vi = u.v[static_cast<std::size_t>(mesh.tris[t][static_cast<std::size_t>(i)])];
            b = b + outer(vi, mesh.grad_phi[t][static_cast<std::size_t>(i)]);
        }
        return mesh.area[t] * v0_quadratic(m, b - offset);
    });
}

Mat2 second_moment(const Mesh& mesh)
{
    // x (x) x is quadratic; edge-midpoint rule is exact.
    Mat2 s;
    for (std::size_t t = 0; t < mesh.tris.size(); ++t) {
        const auto& tri = mesh.tris[t];
        for (int i = 0; i < 3; ++i) {
            const Vec2 m = 0.5 * (mesh.nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>(i)])]
                                  + mesh.nodes[static_cast<std::size_t>(tri[static_cast<std::size_t>((i + 1) % 3)])]);
            s = s + (mesh.area[t] / 3.0) * outer(m, m);
        }
    }
    return s;
}

Mesh normalize_frame(const Mesh& mesh, FrameTransform* transform)
{
    // Centroid via the vertex rule (exact for the affine integrand x).
    const double total = domain_area(mesh);
    Vec2 centroid{};
    for (std::size_t t = 0; t < mesh.tris.size(); ++t) {
        Vec2 c{};
        for (int i = 0; i < 3; ++i)
            c = c + mesh.nodes[static_cast<std::size_t>(mesh.tris[t][static_cast<std::size_t>(i)])];
        centroid = centroid + (mesh.area[t] / 3.0) * c;
    }
    centroid = (1.0 / total) * centroid;

    Mesh shifted = mesh;
    for (Vec2& p : shifted.nodes) p = p - centroid;
    shifted.finalize();

    // Rotate into the eigenframe of the second-moment matrix.
    const SymEigen<2> eig = sym_eigen(second_moment(shifted));
    Mat2 r;
    for (int i = 0; i < 2; ++i) {
        r(i, 0) = eig.eigenvectors[0][i];
        r(i, 1) = eig.eigenvectors[1][i];
    }
    if (det(r) < 0.0) {
        r(0, 1) = -r(0, 1);
        r(1, 1) = -r(1, 1);
    }
    const Mat2 rt = transpose(r);
    for (Vec2& p : shifted.nodes) p = rt * p;
    shifted.finalize();

    if (transform) *transform = FrameTransform{centroid, r};
    return shifted;
}

void write_mesh(std::ostream& os, const Mesh& mesh)
{
    char buf[80];
    for (const Vec2& p : mesh.nodes) {
        std::snprintf(buf, sizeof buf, "node %.17g %.17g\n", p[0], p[1]);
        os << buf;
    }
    for (const auto& t : mesh.tris)
        os << "tri " << t[0] << " " << t[1] << " " << t[2] << "\n";
    for (const auto& e : mesh.boundary_edges)
        os << "bedge " << e[0] << " " << e[1] << "\n";
}

Mesh read_mesh(std::istream& is)
{
    Mesh mesh;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind.empty()) continue;
        const auto fail = [lineno](const std::string& what) {
            throw std::runtime_error("mesh line " + std::to_string(lineno) + ": " + what);
        };
        if (kind == "node") {
            Vec2 p;
            if (!(ls >> p[0] >> p[1])) fail("expected two coordinates");
            mesh.nodes.push_back(p);
        } else if (kind == "tri") {
            std::array<int, 3> t{};
            if (!(ls >> t[0] >> t[1] >> t[2])) fail("expected three vertex indices");
            mesh.tris.push_back(t);
        } else if (kind == "bedge") {
            std::array<int, 2> e{};
            if (!(ls >> e[0] >> e[1])) fail("expected two vertex indices");
            mesh.boundary_edges.push_back(e);
        } else {
            fail("unknown record '" + kind + "'");
        }
    }
    if (mesh.nodes.empty() || mesh.tris.empty())
        throw std::runtime_error("mesh: no nodes or no triangles");
    mesh.finalize();
    return mesh;
}

void write_mesh_file(const std::string& path, const Mesh& mesh)
{
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open mesh file for writing: " + path);
    write_mesh(os, mesh);
}

Mesh read_mesh_file(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open mesh file: " + path);
    return read_mesh(is);
}

}  // namespace tgap
