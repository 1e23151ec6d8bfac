#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "tgap/solvers.hpp"

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

LoadSystem pressure_load(double coeff)
{
    LoadSystem load;
    load.traction_kind = TractionKind::normal_scaled;
    load.traction_coefficient = coeff;
    return load;
}

std::vector<double> flatten(const DisplacementField& u)
{
    std::vector<double> x(2 * u.v.size());
    for (std::size_t i = 0; i < u.v.size(); ++i) {
        x[2 * i] = u.v[i][0];
        x[2 * i + 1] = u.v[i][1];
    }
    return x;
}

}  // namespace

TEST_CASE("stiffness matrix is symmetric and reproduces the quadratic energy")
{
    const Mesh mesh = make_rectangle_mesh(1.3, 0.9, 4);
    const Material m{1.2, 0.7};
    const Csr k = assemble_stiffness(mesh, m);
    REQUIRE(k.n == 2 * mesh.num_nodes());

    // symmetry: compare <Kx, y> with <x, Ky> on random vectors
    auto rng = rng_for("stiff");
    for (int rep = 0; rep < 5; ++rep) {
        const DisplacementField a = random_field(mesh, rng);
        const DisplacementField b = random_field(mesh, rng);
        const std::vector<double> x = flatten(a), y = flatten(b);
        std::vector<double> kx(x.size()), ky(y.size());
        spmv(k, x, kx);
        spmv(k, y, ky);
        CHECK(dot_vec(kx, y) == doctest::Approx(dot_vec(x, ky)).epsilon(1e-12));

        // 1/2 x.Kx is the elastic part of the linearized energy
        const double quad = 0.5 * dot_vec(kx, x);
        const double direct = integrate_quadratic_energy(mesh, m, a, Mat2{});
        CHECK(quad == doctest::Approx(direct).epsilon(1e-12));
    }

    // rigid fields are in the kernel
    const RigidBasis basis = rigid_basis(mesh);
    for (const auto& q : basis.q) {
        std::vector<double> kq(q.size());
        spmv(k, q, kq);
        CHECK(std::sqrt(dot_vec(kq, kq)) <= 1e-11 * std::sqrt(dot_vec(q, q) + 1.0));
    }
}

TEST_CASE("linear solve reaches the homogeneous tension state")
{
    const Mesh mesh = make_unit_square_mesh(6);
    const Material m{1.0, 1.0};
    const LoadSystem load = pressure_load(1.0);

    const LinearSolveResult r = solve_linear_elasticity(mesh, m, load);
    CHECK(r.report.status == SolveStatus::converged);

    // min E = -|domain| f0^2 / (8 (mu + lambda)), here -1/16
    CHECK(r.energy == doctest::Approx(-1.0 / 16.0).epsilon(1e-10));
    CHECK(eval_E(mesh, m, load, r.u) == doctest::Approx(r.energy).epsilon(1e-12));

    // strain is exactly f0 / (8 (mu + lambda)) I in every element
    const double e_ref = 1.0 / 16.0;
    for (const Mat2& s : strain_field(mesh, r.u)) {
        CHECK(s(0, 0) == doctest::Approx(e_ref).epsilon(1e-9));
        CHECK(s(1, 1) == doctest::Approx(e_ref).epsilon(1e-9));
        CHECK(std::abs(s(0, 1)) <= 1e-11);
    }

    // rigid-free representative
    const RigidField2 p = project_rigid(mesh, r.u);
    CHECK(norm(p.translation) <= 1e-12);
    CHECK(std::abs(p.rotation) <= 1e-12);

    // stationarity: the first variation vanishes against random directions
    auto rng = rng_for("linstat");
    for (int rep = 0; rep < 5; ++rep) {
        const DisplacementField phi = random_field(mesh, rng);
        CHECK(std::abs(first_variation_E(mesh, m, load, r.u, phi)) <= 1e-9);
    }
}

TEST_CASE("spin offset shifts the optimal strain")
{
    const Mesh mesh = make_unit_square_mesh(4);
    const Material m{1.0, 1.0};
    const LoadSystem load = pressure_load(1.0);

    const LinearSolveResult base = solve_linear_elasticity(mesh, m, load);
    Mat2 offset;
    offset(0, 0) = 0.3;
    offset(1, 1) = 0.3;
    const LinearSolveResult shifted = solve_linear_elasticity(mesh, m, load, offset);
    CHECK(shifted.report.status == SolveStatus::converged);

    const auto s0 = strain_field(mesh, base.u);
    const auto s1 = strain_field(mesh, shifted.u);
    for (std::size_t t = 0; t < s0.size(); ++t)
        CHECK(frobenius_norm(s1[t] - (s0[t] + offset)) <= 1e-9);
}

TEST_CASE("unbalanced loads are rejected by the linear solver")
{
    const Mesh mesh = make_unit_square_mesh(2);
    LoadSystem pull;
    pull.traction_kind = TractionKind::per_edge;
    pull.traction_per_edge.assign(1, Vec2{{1.0, 0.0}});
    CHECK_THROWS_AS(solve_linear_elasticity(mesh, Material{1.0, 1.0}, pull),
                    std::invalid_argument);
}

TEST_CASE("alternating minimization of the gap functional under tension")
{
    const Mesh mesh = make_unit_square_mesh(6);
    const Material m{1.0, 1.0};
    const LoadSystem load = pressure_load(1.0);

    const MinimizeFResult r = minimize_F(mesh, m, load);
    CHECK(r.report.status == SolveStatus::converged);
    CHECK(r.compatibility.verdict == Compatibility::strictly_compatible);

    // under tension the gap is inactive: min F = min E with zero spin
    CHECK(r.breakdown.total == doctest::Approx(-1.0 / 16.0).epsilon(1e-8));
    CHECK(r.breakdown.w_opt == doctest::Approx(0.0).epsilon(1e-8));

    // the trace never increases
    REQUIRE(!r.objective_trace.empty());
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
        CHECK(r.objective_trace[i] <= r.objective_trace[i - 1] + 1e-12);
    CHECK(r.objective_trace.back() == doctest::Approx(r.breakdown.total).epsilon(1e-12));

    // the reported value is really F at the reported field
    CHECK(eval_F(mesh, m, load, r.u).total
          == doctest::Approx(r.breakdown.total).epsilon(1e-12));
}

TEST_CASE("gap minimization under a weakly compatible load")
{
    const Mesh mesh = make_unit_square_mesh(4);
    const Material m{1.0, 1.0};
    LoadSystem load;  // g = diag(1, -1) x, trace of the resultant is zero
    load.body_kind = BodyKind::linear;
    load.body_matrix(0, 0) = 1.0;
    load.body_matrix(1, 1) = -1.0;

    const MinimizeFResult r = minimize_F(mesh, m, load);
    CHECK(r.report.status == SolveStatus::converged);
    CHECK(r.compatibility.verdict == Compatibility::weakly_compatible);

    // min F = min E, and F is invariant under adding dilations t * (-x)
    const LinearSolveResult lin = solve_linear_elasticity(mesh, m, load);
    CHECK(r.breakdown.total == doctest::Approx(lin.energy).epsilon(1e-9));
    for (double t : {1.0, 5.0}) {
        DisplacementField shifted = r.u;
        for (std::size_t i = 0; i < shifted.v.size(); ++i)
            shifted.v[i] = shifted.v[i] - t * mesh.nodes[i];
        CHECK(eval_F(mesh, m, load, shifted).total
              == doctest::Approx(r.breakdown.total).epsilon(1e-9));
    }
}

TEST_CASE("violated loads are rejected with the witness direction")
{
    const Mesh mesh = make_unit_square_mesh(4);
    const MinimizeFResult r = minimize_F(mesh, Material{1.0, 1.0}, pressure_load(-1.0));
    CHECK(r.report.status == SolveStatus::diverged);
    CHECK(r.compatibility.verdict == Compatibility::violated);
    CHECK(!r.report.message.empty());
}

TEST_CASE("nonlinear minimization stays near the linearized state for small h")
{
    const Mesh mesh = make_unit_square_mesh(4);
    const Material m{1.0, 1.0};
    const LoadSystem load = pressure_load(1.0);
    const double h = 1e-3;

    const MinimizeFhResult r = minimize_Fh(mesh, m, load, h);
    CHECK(r.report.status == SolveStatus::converged);
    REQUIRE(r.eval.value.finite);
    CHECK(r.eval.value.value == doctest::Approx(-1.0 / 16.0).epsilon(1e-3));
    CHECK(r.eval.min_det > solver_policy::det_guard);

    // rigid-free representative and small gradient
    const RigidField2 p = project_rigid(mesh, r.u);
    CHECK(norm(p.translation) <= 1e-10);
    CHECK(std::abs(p.rotation) <= 1e-10);
    const std::vector<Vec2> g = grad_Fh(mesh, m, load, h, r.u);
    double gn = 0.0;
    for (const Vec2& v : g) gn += dot(v, v);
    const LoadNorms ln = load_l2_norms(mesh, load);
    CHECK(std::sqrt(gn) <= 10.0 * solver_policy::grad_tol * (1.0 + ln.traction_l2));
}

TEST_CASE("gamma sweep converges to the linearized minimum under tension")
{
    const Mesh mesh = make_unit_square_mesh(4);
    const Material m{1.0, 1.0};
    const LoadSystem load = pressure_load(1.0);

    const GammaSweepResult sweep = gamma_sweep(mesh, m, load, {1e-1, 1e-2, 1e-3});
    CHECK(sweep.min_E == doctest::Approx(-1.0 / 16.0).epsilon(1e-8));
    REQUIRE(sweep.steps.size() == 3);
    for (const GammaSweepStep& s : sweep.steps) {
        CHECK(s.status == SolveStatus::converged);
        CHECK(s.iterations > 0);
        CHECK(s.rel_gap == doctest::Approx(s.gap / std::abs(sweep.min_E)).epsilon(1e-12));
    }
    CHECK(sweep.steps[1].gap < sweep.steps[0].gap);
    CHECK(sweep.steps[2].gap < sweep.steps[1].gap);
    CHECK(sweep.steps[2].rel_gap < 1e-2);
}

TEST_CASE("gamma sweep rejects loads that break its premise")
{
    const Mesh mesh = make_unit_square_mesh(2);
    const Material m{1.0, 1.0};

    CHECK_THROWS_AS(gamma_sweep(mesh, m, pressure_load(-1.0), {1e-2}),
                    std::invalid_argument);

    LoadSystem weak;
    weak.body_kind = BodyKind::linear;
    weak.body_matrix(0, 0) = 1.0;
    weak.body_matrix(1, 1) = -1.0;
    CHECK_THROWS_AS(gamma_sweep(mesh, m, weak, {1e-2}), std::invalid_argument);
}
