#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "tgap/functionals.hpp"

#include "doctest.h"

using namespace tgap;

namespace {

std::mt19937 rng_for(const char* tag)
{
    std::seed_seq seq(tag, tag + std::char_traits<char>::length(tag));
    return std::mt19937(seq);
}

DisplacementField random_field(const Mesh& mesh, std::mt19937& rng, double scale = 1.0)
{
    std::uniform_real_distribution<double> d(-scale, scale);
    DisplacementField u;
    u.v.resize(mesh.nodes.size());
    for (auto& v : u.v) v = Vec2{{d(rng), d(rng)}};
    return u;
}

DisplacementField axpy(const DisplacementField& a, double beta, const DisplacementField& b)
{
    DisplacementField r;
    r.v.resize(a.v.size());
    for (std::size_t i = 0; i < a.v.size(); ++i) r.v[i] = a.v[i] + beta * b.v[i];
    return r;
}

// nodal field x -> s * x (dilation), used to push the trace integral to
// either sign
DisplacementField dilation_field(const Mesh& mesh, double s)
{
    DisplacementField u;
    u.v.resize(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) u.v[i] = s * mesh.nodes[i];
    return u;
}

LoadSystem pressure_load(double coeff)
{
    LoadSystem load;
    load.traction_kind = TractionKind::normal_scaled;
    load.traction_coefficient = coeff;
    return load;
}

}  // namespace

TEST_CASE("linearized energy of an affine field matches the density")
{
    const Mesh mesh = make_unit_square_mesh(4);
    const Material m{1.0, 1.0};
    const LoadSystem load = pressure_load(1.0);

    AffineField2 f;
    f.grad(0, 0) = -1.0;
    f.grad(1, 1) = -1.0;
    const DisplacementField u = nodal_from_affine(mesh, f);

    const double work = eval_load_work(mesh, load, u);
    CHECK(work == doctest::Approx(-2.0).epsilon(1e-13));
    CHECK(eval_E(mesh, m, load, u) == doctest::Approx(18.0).epsilon(1e-13));

    const EnergyBreakdown fb = eval_F(mesh, m, load, u);
    CHECK(fb.total == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(fb.correction == doctest::Approx(-16.0).epsilon(1e-12));
    CHECK(fb.elastic == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(fb.load_work == doctest::Approx(-2.0).epsilon(1e-13));
    CHECK(fb.w_opt * fb.w_opt == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fb.trace_integral == doctest::Approx(-32.0).epsilon(1e-12));
}

TEST_CASE("gap functional never exceeds the linearized energy")
{
    const Mesh mesh = make_rectangle_mesh(1.5, 1.0, 4);
    const Material m{0.8, 1.3};
    const LoadSystem load = pressure_load(-0.5);
    auto rng = rng_for("fle");
    for (int rep = 0; rep < 50; ++rep) {
        const DisplacementField u = random_field(mesh, rng, 2.0);
        const double e = eval_E(mesh, m, load, u);
        const EnergyBreakdown f = eval_F(mesh, m, load, u);
        const double scale = 1.0 + std::abs(e);
        CHECK(f.total <= e + 1e-12 * scale);
        CHECK(f.correction <= 1e-14 * scale);
        CHECK(f.total == doctest::Approx(e + f.correction).epsilon(1e-12));
    }
}

TEST_CASE("closed form, numerical inner minimum, and the spin formula agree")
{
    const Mesh mesh = make_unit_square_mesh(5);
    const Material m{1.4, 0.6};
    const LoadSystem load = pressure_load(1.0);
    auto rng = rng_for("closedform");
    for (int rep = 0; rep < 30; ++rep) {
        // mix signs of the divergence so both branches are exercised
        DisplacementField u = random_field(mesh, rng);
        if (rep % 2 == 0) u = axpy(u, -1.5, dilation_field(mesh, 1.0));

        const EnergyBreakdown closed = eval_F(mesh, m, load, u);
        const EnergyBreakdown inner = eval_F_inner_min(mesh, m, load, u);
        const double scale = 1.0 + std::abs(closed.total);
        CHECK(std::abs(closed.total - inner.total) <= 1e-10 * scale);
        CHECK(inner.inner_evaluations > 0);
        CHECK(closed.inner_evaluations == 0);

        // the optimal spin magnitude is material-independent
        const double astar = eval_a_star(mesh, u);
        CHECK(closed.w_opt == doctest::Approx(astar).epsilon(1e-10).scale(1.0));
        CHECK(inner.w_opt == doctest::Approx(astar).epsilon(1e-5).scale(1.0));
    }
}

TEST_CASE("negative-part smoothing values and bounds")
{
    CHECK(phi_eps(0.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(phi_eps(0.5, 1.0) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
    CHECK(phi_eps(2.0, 1.0) == 0.0);
    CHECK(phi_eps(-1.0, 0.5) == doctest::Approx(1.0 + 0.5 + 0.25 / 3.0).epsilon(1e-15));

    for (double t = -3.0; t <= 3.0; t += 0.125) {
        const double neg = t < 0.0 ? t * t : 0.0;
        double prev = phi_eps(t, 1e-8);
        CHECK(prev >= neg - 1e-12);
        CHECK(prev <= neg + 1e-7 * (1.0 + std::abs(t)));
        for (double eps : {1e-4, 1e-2, 1.0, 4.0}) {
            const double cur = phi_eps(t, eps);
            CHECK(cur >= prev - 1e-15);  // pointwise nondecreasing in eps
            prev = cur;
        }
    }
}

TEST_CASE("smoothed gap functional increases monotonically to the gap functional")
{
    const Mesh mesh = make_unit_square_mesh(4);
    const Material m{1.0, 1.0};
    const LoadSystem load = pressure_load(1.0);
    auto rng = rng_for("feps");
    for (int rep = 0; rep < 10; ++rep) {
        DisplacementField u = random_field(mesh, rng, 0.5);
        if (rep % 2 == 0) u = axpy(u, -2.0, dilation_field(mesh, 1.0));
        const double f = eval_F(mesh, m, load, u).total;
        const double scale = 1.0 + std::abs(f);
        double prev = -1e300;
        for (double eps : {1.0, 0.3, 0.1, 0.01, 1e-4}) {
            const double fe = eval_F_eps(mesh, m, load, u, eps).total;
            CHECK(fe <= f + 1e-12 * scale);
            CHECK(fe >= prev - 1e-12 * scale);
            prev = fe;
        }
        CHECK(f - prev <= 1e-3 * scale);  // eps = 1e-4 is already close
    }
}

TEST_CASE("first variations match central finite differences")
{
    const Mesh mesh = make_unit_square_mesh(4);
    const Material m{1.0, 1.0};
    const LoadSystem load = pressure_load(1.0);
    auto rng = rng_for("variation");
    const double delta = 1e-6;
    for (int rep = 0; rep < 10; ++rep) {
        // push the trace integral well away from the kink at zero
        const double beta = (rep % 2 == 0) ? -2.0 : 2.0;
        const DisplacementField u =
            axpy(random_field(mesh, rng, 0.3), beta, dilation_field(mesh, 1.0));
        const DisplacementField phi = random_field(mesh, rng, 1.0);

        const double de = first_variation_E(mesh, m, load, u, phi);
        const double fd_e = (eval_E(mesh, m, load, axpy(u, delta, phi))
                             - eval_E(mesh, m, load, axpy(u, -delta, phi)))
                            / (2.0 * delta);
        CHECK(de == doctest::Approx(fd_e).epsilon(1e-6).scale(1.0 + std::abs(de)));

        const double df = first_variation_F(mesh, m, load, u, phi);
        const double fd_f = (eval_F(mesh, m, load, axpy(u, delta, phi)).total
                             - eval_F(mesh, m, load, axpy(u, -delta, phi)).total)
                            / (2.0 * delta);
        CHECK(df == doctest::Approx(fd_f).epsilon(1e-6).scale(1.0 + std::abs(df)));

        if (beta > 0.0) CHECK(df == doctest::Approx(de).epsilon(1e-12));  // inactive gap
    }
}

TEST_CASE("rescaled nonlinear energy on affine fields")
{
    const Mesh mesh = make_unit_square_mesh(4);
    const Material m{1.0, 1.0};
    const LoadSystem load = pressure_load(1.0);

    AffineField2 f;
    f.grad(0, 0) = 0.1;
    f.grad(0, 1) = -0.2;
    f.grad(1, 0) = 0.3;
    f.grad(1, 1) = 0.05;
    const DisplacementField u = nodal_from_affine(mesh, f);
    const double h = 0.25;

    const FhEval ev = eval_Fh(mesh, m, load, h, u);
    REQUIRE(ev.value.finite);
    Mat2 def = Mat2::identity() + h * f.grad;
    const ExtReal w = gsv_density(m, def);
    REQUIRE(w.finite);
    CHECK(ev.elastic == doctest::Approx(w.value / (h * h)).epsilon(1e-12));
    CHECK(ev.load_work == doctest::Approx(eval_load_work(mesh, load, u)).epsilon(1e-12));
    CHECK(ev.value.value == doctest::Approx(ev.elastic - ev.load_work).epsilon(1e-12));
    CHECK(ev.min_det == doctest::Approx(det(def)).epsilon(1e-12));
}

TEST_CASE("orientation loss puts the nonlinear energy on the infinite branch")
{
    const Mesh mesh = make_unit_square_mesh(2);
    const Material m{1.0, 1.0};
    const LoadSystem load = pressure_load(1.0);
    const double h = 0.5;

    AffineField2 f;
    f.grad(0, 0) = -2.0 / h;  // I + h grad = diag(-1, 1), det = -1
    const DisplacementField u = nodal_from_affine(mesh, f);
    const FhEval ev = eval_Fh(mesh, m, load, h, u);
    CHECK_FALSE(ev.value.finite);
    CHECK(ev.min_det == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK_THROWS_AS(grad_Fh(mesh, m, load, h, u), std::domain_error);
}

TEST_CASE("nonlinear energy gradient at rest equals minus the load vector")
{
    const Mesh mesh = make_rectangle_mesh(1.2, 0.9, 3);
    const Material m{1.1, 0.7};
    LoadSystem load = pressure_load(-0.8);
    load.body_kind = BodyKind::linear;
    load.body_matrix(0, 1) = 0.4;
    load.body_matrix(1, 0) = 0.4;

    DisplacementField zero;
    zero.v.assign(mesh.nodes.size(), Vec2{});
    const std::vector<Vec2> g = grad_Fh(mesh, m, load, 0.1, zero);
    const std::vector<Vec2> l = assemble_load_vector(mesh, load);
    REQUIRE(g.size() == l.size());
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(norm(g[i] + l[i]) <= 1e-14);
}

TEST_CASE("nonlinear energy gradient matches finite differences")
{
    const Mesh mesh = make_unit_square_mesh(3);
    const Material m{1.0, 1.0};
    const LoadSystem load = pressure_load(1.0);
    const double h = 0.01;
    auto rng = rng_for("gradfh");
    const DisplacementField u = random_field(mesh, rng, 0.2);
    const std::vector<Vec2> g = grad_Fh(mesh, m, load, h, u);

    const double delta = 1e-6;
    std::uniform_int_distribution<std::size_t> pick(0, mesh.nodes.size() - 1);
    for (int rep = 0; rep < 8; ++rep) {
        const std::size_t i = pick(rng);
        const int c = rep % 2;
        DisplacementField up = u, dn = u;
        up.v[i][c] += delta;
        dn.v[i][c] -= delta;
        const FhEval ep = eval_Fh(mesh, m, load, h, up);
        const FhEval en = eval_Fh(mesh, m, load, h, dn);
        REQUIRE(ep.value.finite);
        REQUIRE(en.value.finite);
        const double fd = (ep.value.value - en.value.value) / (2.0 * delta);
        CHECK(g[i][static_cast<std::size_t>(c)]
              == doctest::Approx(fd).epsilon(1e-5).scale(1.0 + std::abs(fd)));
    }
}

TEST_CASE("restricting the gap functional shows its nonlocality")
{
    const int n = 4;
    const Mesh mesh = make_unit_square_mesh(n);
    const Material m{1.0, 1.0};
    LoadSystem zero_load;

    std::vector<std::uint8_t> left(mesh.tris.size(), 0), right(mesh.tris.size(), 0),
        full(mesh.tris.size(), 1);
    for (std::size_t t = 0; t < mesh.tris.size(); ++t) {
        const auto& tri = mesh.tris[t];
        const double cx = (mesh.nodes[static_cast<std::size_t>(tri[0])][0]
                           + mesh.nodes[static_cast<std::size_t>(tri[1])][0]
                           + mesh.nodes[static_cast<std::size_t>(tri[2])][0])
                          / 3.0;
        (cx < 0.0 ? left : right)[t] = 1;
    }

    // witness: uniaxial compression confined to the left half
    DisplacementField u;
    u.v.resize(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        u.v[i] = Vec2{{std::max(-mesh.nodes[i][0], 0.0), 0.0}};

    const double f_full = eval_F_subset(mesh, m, zero_load, u, full).total;
    const double f_left = eval_F_subset(mesh, m, zero_load, u, left).total;
    const double f_right = eval_F_subset(mesh, m, zero_load, u, right).total;
    CHECK(f_full == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f_left == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(f_right) <= 1e-13);
    CHECK(f_left + f_right < f_full - 0.5);  // strictly subadditive here

    // full mask agrees with the unrestricted evaluation
    const double f_plain = eval_F(mesh, m, zero_load, u).total;
    CHECK(f_full == doctest::Approx(f_plain).epsilon(1e-13));

    // the uniform dilation v = -x splits additively instead
    const DisplacementField v = dilation_field(mesh, -1.0);
    const double a_full = eval_F_subset(mesh, m, zero_load, v, full).total;
    const double a_left = eval_F_subset(mesh, m, zero_load, v, left).total;
    const double a_right = eval_F_subset(mesh, m, zero_load, v, right).total;
    CHECK(std::abs(a_full) <= 1e-12);
    CHECK(std::abs(a_left + a_right - a_full) <= 1e-12);

    // degenerate masks are rejected
    std::vector<std::uint8_t> empty(mesh.tris.size(), 0);
    CHECK_THROWS_AS(eval_F_subset(mesh, m, zero_load, u, empty), std::invalid_argument);
    std::vector<std::uint8_t> short_mask(3, 1);
    CHECK_THROWS_AS(eval_F_subset(mesh, m, zero_load, u, short_mask), std::invalid_argument);
}

TEST_CASE("spatial inner minimization recovers exact rotations")
{
    const Material m{1.0, 1.0};

    // strain of v(x) = W^2 x with unit axis e1: the spin sqrt(2) e1 cancels it
    Mat3 a;
    a(1, 1) = -1.0;
    a(2, 2) = -1.0;
    const InnerMin3Result r = min_quadratic_over_skew(m, a);
    CHECK(std::abs(r.value) <= 1e-10);
    const Vec3 ax = r.axis.axis;
    CHECK(dot(ax, ax) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(ax[0] * ax[0] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(std::abs(ax[1]) <= 1e-5);
    CHECK(std::abs(ax[2]) <= 1e-5);
    CHECK(std::abs(r.value - r.grid_value) <= 1e-6 * (1.0 + std::abs(r.value)));

    // zero strain: the only optimal spin is zero
    const InnerMin3Result z = min_quadratic_over_skew(m, Mat3{});
    CHECK(std::abs(z.value) <= 1e-12);
    CHECK(norm(z.axis.axis) <= 1e-6);
}

TEST_CASE("spatial inner minimization at the nonconvexity midpoint")
{
    // strain diag(-1/2, -1, -1/2): restricted to axes with a2 = 0 and
    // s = |a|^2 the density is mu (2 s^2 - 6 s + 6) + 2 lambda (s - 2)^2,
    // minimized at s = (6 mu + 8 lambda) / (4 mu + 4 lambda); out-of-plane
    // components only increase it.  The minimizing axis is degenerate in the
    // (a1, a3) split, so only |a|^2 and a2 are pinned.
    Mat3 mid;
    mid(0, 0) = -0.5;
    mid(1, 1) = -1.0;
    mid(2, 2) = -0.5;

    for (const Material m : {Material{1.0, 1.0}, Material{0.7, 1.3}}) {
        const double s = (6.0 * m.mu + 8.0 * m.lambda) / (4.0 * m.mu + 4.0 * m.lambda);
        const double expect =
            m.mu * (2.0 * s * s - 6.0 * s + 6.0) + 2.0 * m.lambda * (s - 2.0) * (s - 2.0);
        const InnerMin3Result r = min_quadratic_over_skew(m, mid);
        CHECK(r.value == doctest::Approx(expect).epsilon(1e-8));
        CHECK(dot(r.axis.axis, r.axis.axis) == doctest::Approx(s).epsilon(1e-4));
        CHECK(std::abs(r.axis.axis[1]) <= 1e-4);
        CHECK(std::abs(r.value - r.grid_value) <= 1e-6 * (1.0 + std::abs(r.value)));
    }

    // frozen reference at mu = lambda = 1
    const InnerMin3Result unit = min_quadratic_over_skew(Material{1.0, 1.0}, mid);
    CHECK(unit.value == doctest::Approx(1.75).epsilon(1e-8));
}

TEST_CASE("box load work, resultant, and energies")
{
    BoxDomain3 box;  // unit cube
    const Material m{1.0, 1.0};
    BoxLoad load;
    load.normal_coefficient = 2.0;

    AffineField3 u;
    u.grad(0, 0) = 0.5;
    u.grad(1, 1) = -0.25;
    u.grad(0, 1) = 3.0;  // off-diagonal does no work against c * n
    u.shift = Vec3{{4.0, -1.0, 2.0}};  // translations do no work either

    CHECK(eval_load_work(box, load, u)
          == doctest::Approx(2.0 * box.volume() * trace(u.grad)).epsilon(1e-13));
    const Mat3 t = resultant_matrix(box, load);
    CHECK(frobenius_norm(t - 2.0 * box.volume() * Mat3::identity()) <= 1e-13);

    const double e = eval_E(box, m, load, u);
    const double expect = v0_quadratic(m, sym(u.grad)) * box.volume()
                          - 2.0 * box.volume() * trace(u.grad);
    CHECK(e == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("box gap functional vanishes on exact rotation strains")
{
    BoxDomain3 box;
    const Material m{1.0, 1.0};
    BoxLoad zero;

    AffineField3 v1;  // v = W^2 x, axis e1
    v1.grad(1, 1) = -1.0;
    v1.grad(2, 2) = -1.0;
    AffineField3 v2;  // axis e3
    v2.grad(0, 0) = -1.0;
    v2.grad(1, 1) = -1.0;

    const EnergyBreakdown f1 = eval_F(box, m, zero, v1);
    const EnergyBreakdown f2 = eval_F(box, m, zero, v2);
    CHECK(std::abs(f1.total) <= 1e-10);
    CHECK(std::abs(f2.total) <= 1e-10);

    // the midpoint keeps a positive gap: the functional is not convex
    AffineField3 midf;
    midf.grad = 0.5 * (v1.grad + v2.grad);
    const EnergyBreakdown fm = eval_F(box, m, zero, midf);
    CHECK(fm.total == doctest::Approx(1.75 * box.volume()).epsilon(1e-8));
    const double e_mid = eval_E(box, m, zero, midf);
    CHECK(e_mid == doctest::Approx(14.0 * box.volume()).epsilon(1e-12));
    CHECK(fm.total > 0.5 * (f1.total + f2.total) + 1.0);
}
