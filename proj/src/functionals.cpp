#include "tgap/functionals.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tgap/optimize.hpp"

namespace tgap {

namespace {

// t = int <DV0(I), E(u)> and c = int V0(I): the two integrals steering the
// inner minimization in 2D.
double trace_integral_2d(const Mesh& mesh, const Material& m, const DisplacementField& u)
{
    const Mat2 di = dv0(m, Mat2::identity());
    const std::vector<Mat2> g = gradient_field(mesh, u);
    double t = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) t += mesh.area[k] * inner(di, sym(g[k]));
    return t;
}

double neg_part(double t) { return t < 0.0 ? -t : 0.0; }

}  // namespace

double eval_E(const Mesh& mesh, const Material& m, const LoadSystem& load,
              const DisplacementField& u, Exec exec)
{
    return integrate_quadratic_energy(mesh, m, u, Mat2{}, exec)
         - eval_load_work(mesh, load, u);
}

EnergyBreakdown eval_F(const Mesh& mesh, const Material& m, const LoadSystem& load,
                       const DisplacementField& u, Exec exec)
{
    EnergyBreakdown b;
    const double elastic0 = integrate_quadratic_energy(mesh, m, u, Mat2{}, exec);
    b.load_work = eval_load_work(mesh, load, u);
    b.trace_integral = trace_integral_2d(mesh, m, u);
    const double c = v0_quadratic(m, Mat2::identity()) * domain_area(mesh);
    const double tneg = neg_part(b.trace_integral);
    b.correction = -0.25 * tneg * tneg / c;
    b.w_opt = std::sqrt(std::max(0.0, -b.trace_integral / c));
    b.elastic = elastic0 + b.correction;  // V0 is quadratic: the optimal-spin
                                          // integrand integrates to this exactly
    b.total = b.elastic - b.load_work;
    return b;
}

EnergyBreakdown eval_F_inner_min(const Mesh& mesh, const Material& m,
                                 const LoadSystem& load, const DisplacementField& u,
                                 Exec exec)
{
    // Minimize s -> int V0(E(u) + (s/2) I) over s = w^2 >= 0.  The map is a
    // convex quadratic in s, so bracket expansion plus Brent is exact to
    // solver tolerance without using the closed form.
    EnergyBreakdown b;
    b.load_work = eval_load_work(mesh, load, u);
    b.trace_integral = trace_integral_2d(mesh, m, u);

    int evals = 0;
    const auto phi = [&](double s) {
        ++evals;
        const Mat2 offset = (-0.5 * s) * Mat2::identity();
        return integrate_quadratic_energy(mesh, m, u, offset, exec);
    };

    const double f0 = phi(0.0);
    double hi = 1.0;
    double fhi = phi(hi);
    double fmid = phi(0.5 * hi);
    // Expand until the midpoint is no worse than the right end (convexity
    // then guarantees the minimizer lies in [0, hi]).
    while (fhi < fmid && hi < 1e12) {
        hi *= 2.0;
        fmid = fhi;
        fhi = phi(hi);
    }
    const ScalarMinResult inner = brent_minimize(phi, 0.0, hi, 1e-13);
    evals += inner.evaluations;

    if (inner.value <= f0) {
        b.w_opt = std::sqrt(std::max(0.0, inner.x));
        b.elastic = inner.value;
    } else {
        b.w_opt = 0.0;
        b.elastic = f0;
    }
    b.correction = b.elastic - f0;
    b.total = b.elastic - b.load_work;
    b.inner_evaluations = evals;
    return b;
}

double eval_a_star(const Mesh& mesh, const DisplacementField& u)
{
    return std::sqrt(neg_part(divergence_integral(mesh, u)) / domain_area(mesh));
}

double phi_eps(double t, double eps)
{
    if (!(eps > 0.0)) throw std::invalid_argument("phi_eps: eps must be > 0");
    if (t <= 0.0) return t * t - eps * t + eps * eps / 3.0;
    if (t >= eps) return 0.0;
    const double d = eps - t;
    return d * d * d / (3.0 * eps);
}

EnergyBreakdown eval_F_eps(const Mesh& mesh, const Material& m, const LoadSystem& load,
                           const DisplacementField& u, double eps, Exec exec)
{
    EnergyBreakdown b;
    const double elastic0 = integrate_quadratic_energy(mesh, m, u, Mat2{}, exec);
    b.load_work = eval_load_work(mesh, load, u);
    b.trace_integral = trace_integral_2d(mesh, m, u);
    const double c = v0_quadratic(m, Mat2::identity()) * domain_area(mesh);
    b.correction = -0.25 * phi_eps(b.trace_integral, eps) / c;
    b.elastic = elastic0 + b.correction;
    b.total = b.elastic - b.load_work;
    b.w_opt = std::sqrt(std::max(0.0, -b.trace_integral / c));
    return b;
}

double first_variation_E(const Mesh& mesh, const Material& m, const LoadSystem& load,
                         const DisplacementField& u, const DisplacementField& phi,
                         Exec exec)
{
    if (phi.v.size() != mesh.nodes.size())
        throw std::invalid_argument("first_variation_E: field size does not match mesh");
    const std::vector<Mat2> gu = gradient_field(mesh, u);
    const std::vector<Mat2> gp = gradient_field(mesh, phi);
    const double bilinear = blocked_sum(mesh.tris.size(), exec, [&](std::size_t t) {
        return mesh.area[t] * inner(dv0(m, sym(gu[t])), sym(gp[t]));
    });
    return bilinear - eval_load_work(mesh, load, phi);
}

double first_variation_F(const Mesh& mesh, const Material& m, const LoadSystem& load,
                         const DisplacementField& u, const DisplacementField& phi,
                         Exec exec)
{
    const double de = first_variation_E(mesh, m, load, u, phi, exec);
    const double tu = trace_integral_2d(mesh, m, u);
    const double tphi = trace_integral_2d(mesh, m, phi);
    const double c = v0_quadratic(m, Mat2::identity()) * domain_area(mesh);
    // d/ds (s^-)^2 = -2 s^-, so the correction contributes with a plus sign.
    return de + 0.5 * neg_part(tu) * tphi / c;
}

FhEval eval_Fh(const Mesh& mesh, const Material& m, const LoadSystem& load, double h,
               const DisplacementField& u, Exec exec)
{
    if (!(h > 0.0)) throw std::invalid_argument("eval_Fh: h must be > 0");
    if (u.v.size() != mesh.nodes.size())
        throw std::invalid_argument("eval_Fh: field size does not match mesh");

    struct Partial {
        bool finite = true;
        double sum = 0.0;
        double min_det = std::numeric_limits<double>::max();
    };
    const Partial acc = blocked_reduce<Partial>(
        mesh.tris.size(), exec, Partial{},
        [&](Partial& p, std::size_t t) {
            Mat2 b;
            for (int i = 0; i < 3; ++i) {
                const Vec2& vi =
                    u.v[static_cast<std::size_t>(mesh.tris[t][static_cast<std::size_t>(i)])];
                b = b + outer(vi, mesh.grad_phi[t][static_cast<std::size_t>(i)]);
            }
            const double d = det(Mat2::identity() + h * b);
            p.min_det = std::min(p.min_det, d);
            if (d > 0.0)
                p.sum += mesh.area[t] * v0_quadratic(m, vh_strain(h, b));
            else
                p.finite = false;
        },
        [](Partial& a, const Partial& q) {
            a.finite = a.finite && q.finite;
            a.sum += q.sum;
            a.min_det = std::min(a.min_det, q.min_det);
        });

    FhEval r;
    r.load_work = eval_load_work(mesh, load, u);
    r.min_det = acc.min_det;
    r.elastic = acc.sum;
    r.value = acc.finite ? ExtReal::of(acc.sum - r.load_work) : ExtReal::infinity();
    return r;
}

std::vector<Vec2> grad_Fh(const Mesh& mesh, const Material& m, const LoadSystem& load,
                          double h, const DisplacementField& u, Exec exec)
{
    if (!(h > 0.0)) throw std::invalid_argument("grad_Fh: h must be > 0");
    if (u.v.size() != mesh.nodes.size())
        throw std::invalid_argument("grad_Fh: field size does not match mesh");

    // Per-element stress scaled by area, computed concurrently; the nodal
    // scatter below runs serially in element order so the result does not
    // depend on the execution policy.
    const std::size_t nt = mesh.tris.size();
    std::vector<Mat2> stress(nt);
    std::vector<std::uint8_t> bad(nt, 0);
    parallel_for(nt, exec, [&](std::size_t t) {
        Mat2 b;
        for (int i = 0; i < 3; ++i) {
            const Vec2& vi =
                u.v[static_cast<std::size_t>(mesh.tris[t][static_cast<std::size_t>(i)])];
            b = b + outer(vi, mesh.grad_phi[t][static_cast<std::size_t>(i)]);
        }
        if (!(det(Mat2::identity() + h * b) > 0.0)) {
            bad[t] = 1;
            return;
        }
        stress[t] = mesh.area[t] * vh_stress(m, h, b);
    });
    for (std::size_t t = 0; t < nt; ++t)
        if (bad[t])
            throw std::domain_error("grad_Fh: det(I + h grad v) <= 0 on some element");

    std::vector<Vec2> g(mesh.nodes.size(), Vec2{});
    for (std::size_t t = 0; t < nt; ++t)
        for (int i = 0; i < 3; ++i) {
            const std::size_t n =
                static_cast<std::size_t>(mesh.tris[t][static_cast<std::size_t>(i)]);
            g[n] = g[n] + stress[t] * mesh.grad_phi[t][static_cast<std::size_t>(i)];
        }
    const std::vector<Vec2> l = assemble_load_vector(mesh, load);
    for (std::size_t n = 0; n < g.size(); ++n) g[n] = g[n] - l[n];
    return g;
}

EnergyBreakdown eval_F_subset(const Mesh& mesh, const Material& m,
                              const LoadSystem& load, const DisplacementField& u,
                              const std::vector<std::uint8_t>& tri_mask, Exec exec)
{
    if (tri_mask.size() != mesh.tris.size())
        throw std::invalid_argument("eval_F_subset: mask size does not match mesh");
    validate(mesh, load);

    // Restrict the load: body forces by triangle, tractions to boundary
    // edges whose endpoints all belong to subset triangles.
    std::vector<std::uint8_t> node_in(mesh.nodes.size(), 0);
    for (std::size_t t = 0; t < mesh.tris.size(); ++t)
        if (tri_mask[t])
            for (int i = 0; i < 3; ++i)
                node_in[static_cast<std::size_t>(mesh.tris[t][static_cast<std::size_t>(i)])] = 1;

    const std::vector<Mat2> g = gradient_field(mesh, u);
    double area = 0.0, elastic0 = 0.0, t_int = 0.0;
    const Mat2 di = dv0(m, Mat2::identity());
    const double e0 = blocked_sum(mesh.tris.size(), exec, [&](std::size_t t) {
        return tri_mask[t] ? mesh.area[t] * v0_quadratic(m, g[t]) : 0.0;
    });
    elastic0 = e0;
    for (std::size_t t = 0; t < mesh.tris.size(); ++t) {
        if (!tri_mask[t]) continue;
        area += mesh.area[t];
        t_int += mesh.area[t] * inner(di, sym(g[t]));
    }
    if (!(area > 0.0)) throw std::invalid_argument("eval_F_subset: empty subset");

    double work = 0.0;
    if (load.traction_kind != TractionKind::zero)
        for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
            const std::size_t a = static_cast<std::size_t>(mesh.boundary_edges[e][0]);
            const std::size_t bnode = static_cast<std::size_t>(mesh.boundary_edges[e][1]);
            if (!node_in[a] || !node_in[bnode]) continue;
            work += 0.5 * mesh.edge_len[e]
                  * dot(traction_on_edge(mesh, load, e), u.v[a] + u.v[bnode]);
        }
    if (load.body_kind != BodyKind::zero) {
        double body_work = 0.0;
        for (std::size_t t = 0; t < mesh.tris.size(); ++t) {
            if (!tri_mask[t]) continue;
            switch (load.body_kind) {
                case BodyKind::per_cell: {
                    Vec2 c{};
                    for (int i = 0; i < 3; ++i)
                        c = c + u.v[static_cast<std::size_t>(
                            mesh.tris[t][static_cast<std::size_t>(i)])];
                    const Vec2 gb = load.body_per_cell.size() == 1 ? load.body_per_cell[0]
                                                                   : load.body_per_cell[t];
                    body_work += mesh.area[t] / 3.0 * dot(gb, c);
                    break;
                }
                case BodyKind::linear: {
                    const auto& tri = mesh.tris[t];
                    for (int i = 0; i < 3; ++i) {
                        const std::size_t a =
                            static_cast<std::size_t>(tri[static_cast<std::size_t>(i)]);
                        const std::size_t bnode =
                            static_cast<std::size_t>(tri[static_cast<std::size_t>((i + 1) % 3)]);
                        const Vec2 xm = 0.5 * (mesh.nodes[a] + mesh.nodes[bnode]);
                        const Vec2 um = 0.5 * (u.v[a] + u.v[bnode]);
                        body_work += mesh.area[t] / 3.0 * dot(load.body_matrix * xm, um);
                    }
                    break;
                }
                default: break;
            }
        }
        work += body_work;
    }

    EnergyBreakdown b;
    b.load_work = work;
    b.trace_integral = t_int;
    const double c = v0_quadratic(m, Mat2::identity()) * area;
    const double tneg = neg_part(t_int);
    b.correction = -0.25 * tneg * tneg / c;
    b.w_opt = std::sqrt(std::max(0.0, -t_int / c));
    b.elastic = elastic0 + b.correction;
    b.total = b.elastic - b.load_work;
    return b;
}

// ---------------------------------------------------------------------------
// 3D affine path.

double eval_load_work(const BoxDomain3& box, const BoxLoad& load, const AffineField3& u)
{
    // c int_bdry n.u dH = c int div u dx = c |box| Tr(grad u).
    return load.normal_coefficient * box.volume() * trace(u.grad);
}

Mat3 resultant_matrix(const BoxDomain3& box, const BoxLoad& load)
{
    return (load.normal_coefficient * box.volume()) * Mat3::identity();
}

double eval_E(const BoxDomain3& box, const Material& m, const BoxLoad& load,
              const AffineField3& u)
{
    return box.volume() * v0_quadratic(m, u.grad) - eval_load_work(box, load, u);
}

InnerMin3Result min_quadratic_over_skew(const Material& m, const Mat3& strain)
{
    const Mat3 e = sym(strain);
    const auto spin_strain = [&](const Vec3& a) {
        // S(a) = E - (a (x) a - |a|^2 I)/2
        return e - 0.5 * (outer(a, a) - dot(a, a) * Mat3::identity());
    };
    const auto q = [&](const Vec3& a) { return v0_quadratic(m, spin_strain(a)); };
    const auto grad_q = [&](const Vec3& a) {
        // dq/da = (Tr Sigma) a - Sigma a with Sigma = DV0(S(a)).
        const Mat3 sig = dv0(m, spin_strain(a));
        return trace(sig) * a - sig * a;
    };

    // Any minimizer obeys 4 mu |S(a)|^2 <= q(a) <= q(0), so
    // |a|^2 = sqrt(2) |(a(x)a - |a|^2 I)/2| <= sqrt(2) (|E| + sqrt(q0/4mu)).
    const double q0 = q(Vec3{});
    const double reach = std::sqrt(2.0)
                       * (frobenius_norm(e) + std::sqrt(q0 / (4.0 * m.mu)));
    const double r_max = std::sqrt(reach);

    InnerMin3Result best;
    best.value = q0;
    best.axis.axis = Vec3{};

    const double gtol = 1e-12 * (1.0 + q0);
    const auto try_start = [&](const Vec3& s) {
        const VecMinResult r = bfgs3_minimize(q, grad_q, s, gtol);
        ++best.starts;
        if (r.value < best.value) {
            best.value = r.value;
            best.axis.axis = r.x;
        }
    };

    try_start(Vec3{});
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            for (int k = -1; k <= 1; ++k) {
                if (i == 0 && j == 0 && k == 0) continue;
                Vec3 dir{{static_cast<double>(i), static_cast<double>(j),
                          static_cast<double>(k)}};
                dir = (1.0 / norm(dir)) * dir;
                for (double frac : {0.25, 0.5, 1.0}) try_start((frac * r_max) * dir);
            }

    // Independent 21^3 grid scan, re-centered and shrunk around the best
    // point over several levels so the grid value itself resolves the
    // minimum to far better than the 1e-6 cross-check tolerance.
    const auto grid_scan = [&](const Vec3& center, double half_width) {
        Vec3 arg{};
        double val = std::numeric_limits<double>::max();
        const int n = 21;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const Vec3 a{{center[0] + half_width * (2.0 * i / (n - 1) - 1.0),
                                  center[1] + half_width * (2.0 * j / (n - 1) - 1.0),
                                  center[2] + half_width * (2.0 * k / (n - 1) - 1.0)}};
                    const double v = q(a);
                    if (v < val) {
                        val = v;
                        arg = a;
                    }
                }
        return std::pair<Vec3, double>(arg, val);
    };
    auto [grid_arg, grid_val] = grid_scan(Vec3{}, r_max);
    double half_width = r_max;
    for (int level = 0; level < 8; ++level) {
        half_width /= 5.0;
        const auto [a2, v2] = grid_scan(grid_arg, half_width);
        if (v2 < grid_val) {
            grid_val = v2;
            grid_arg = a2;
        }
    }
    best.grid_value = grid_val;

    if (best.grid_value < best.value - 1e-12 * (1.0 + std::abs(best.value))) {
        const VecMinResult r = bfgs3_minimize(q, grad_q, grid_arg, gtol);
        ++best.starts;
        best.grid_rescued = true;
        if (r.value < best.value) {
            best.value = r.value;
            best.axis.axis = r.x;
        }
    }
    return best;
}

EnergyBreakdown eval_F(const BoxDomain3& box, const Material& m, const BoxLoad& load,
                       const AffineField3& u)
{
    EnergyBreakdown b;
    const Mat3 e = sym(u.grad);
    const double vol = box.volume();
    const InnerMin3Result im = min_quadratic_over_skew(m, e);
    b.load_work = eval_load_work(box, load, u);
    b.elastic = vol * im.value;
    b.total = b.elastic - b.load_work;
    b.correction = vol * (im.value - v0_quadratic(m, e));
    b.w_opt = norm(im.axis.axis);
    b.trace_integral = vol * inner(dv0(m, Mat3::identity()), e);
    b.inner_evaluations = im.starts;
    return b;
}

}  // namespace tgap
