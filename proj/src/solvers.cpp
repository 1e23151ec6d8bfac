#include "tgap/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tgap {

const char* to_string(SolveStatus s)
{
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::max_iterations: return "max_iterations";
        case SolveStatus::diverged: return "diverged";
        case SolveStatus::stalled: return "stalled";
    }
    return "?";
}

void spmv(const Csr& a, const std::vector<double>& x, std::vector<double>& y, Exec exec)
{
    if (x.size() != static_cast<std::size_t>(a.n))
        throw std::invalid_argument("spmv: size mismatch");
    y.assign(static_cast<std::size_t>(a.n), 0.0);
    parallel_for(static_cast<std::size_t>(a.n), exec, [&](std::size_t i) {
        double s = 0.0;
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
            s += a.val[static_cast<std::size_t>(k)]
               * x[static_cast<std::size_t>(a.col[static_cast<std::size_t>(k)])];
        y[i] = s;
    });
}

double dot_vec(const std::vector<double>& x, const std::vector<double>& y, Exec exec)
{
    if (x.size() != y.size()) throw std::invalid_argument("dot_vec: size mismatch");
    return blocked_sum(x.size(), exec, [&](std::size_t i) { return x[i] * y[i]; });
}

Csr assemble_stiffness(const Mesh& mesh, const Material& m)
{
    const int n = 2 * mesh.num_nodes();
    std::vector<std::map<int, double>> rows(static_cast<std::size_t>(n));
    for (std::size_t t = 0; t < mesh.tris.size(); ++t) {
        const double area = mesh.area[t];
        for (int i = 0; i < 3; ++i) {
            const Vec2& gi = mesh.grad_phi[t][static_cast<std::size_t>(i)];
            const int ni = mesh.tris[t][static_cast<std::size_t>(i)];
            for (int j = 0; j < 3; ++j) {
                const Vec2& gj = mesh.grad_phi[t][static_cast<std::size_t>(j)];
                const int nj = mesh.tris[t][static_cast<std::size_t>(j)];
                const double gg = dot(gi, gj);
                for (int alpha = 0; alpha < 2; ++alpha)
                    for (int beta = 0; beta < 2; ++beta) {
                        // <DV0 sym(e_a (x) gi), sym(e_b (x) gj)> =
                        //   4 mu (delta_ab gi.gj + gi_b gj_a) + 4 lambda gi_a gj_b
                        const double k =
                            area * (4.0 * m.mu * ((alpha == beta ? gg : 0.0)
                                                  + gi[beta] * gj[alpha])
                                    + 4.0 * m.lambda * gi[alpha] * gj[beta]);
                        rows[static_cast<std::size_t>(2 * ni + alpha)][2 * nj + beta] += k;
                    }
            }
        }
    }
    Csr a;
    a.n = n;
    a.row_ptr.reserve(static_cast<std::size_t>(n) + 1);
    a.row_ptr.push_back(0);
    for (const auto& row : rows) {
        for (const auto& [c, v] : row) {
            a.col.push_back(c);
            a.val.push_back(v);
        }
        a.row_ptr.push_back(static_cast<int>(a.col.size()));
    }
    return a;
}

namespace {

std::vector<double> flatten(const DisplacementField& u)
{
    std::vector<double> x(2 * u.v.size());
    for (std::size_t i = 0; i < u.v.size(); ++i) {
        x[2 * i] = u.v[i][0];
        x[2 * i + 1] = u.v[i][1];
    }
    return x;
}

DisplacementField unflatten(const std::vector<double>& x)
{
    DisplacementField u;
    u.v.resize(x.size() / 2);
    for (std::size_t i = 0; i < u.v.size(); ++i) u.v[i] = Vec2{{x[2 * i], x[2 * i + 1]}};
    return u;
}

// Remove the l2-rigid component: x -= sum_k <q_k, x> q_k.
void deflate(const RigidBasis& basis, std::vector<double>& x, Exec exec)
{
    for (const auto& q : basis.q) {
        const double d = dot_vec(q, x, exec);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= d * q[i];
    }
}

struct CgOutcome {
    std::vector<double> x;
    int iterations = 0;
    double residual = 0.0;  // |r| / |b|
    bool converged = false;
};

// Plain CG on the deflated subspace, where K is positive definite.
CgOutcome deflated_cg(const Csr& a, const RigidBasis& basis, std::vector<double> b,
                      Exec exec)
{
    deflate(basis, b, exec);
    const double bnorm = std::sqrt(dot_vec(b, b, exec));
    CgOutcome out;
    out.x.assign(b.size(), 0.0);
    if (bnorm == 0.0) {
        out.converged = true;
        return out;
    }
    std::vector<double> r = b;
    std::vector<double> p = r;
    std::vector<double> ap(b.size());
    double rr = dot_vec(r, r, exec);
    const int max_it = std::max(1000, 10 * a.n);
    for (int it = 0; it < max_it; ++it) {
        out.iterations = it;
        if (std::sqrt(rr) <= solver_policy::cg_rel_tol * bnorm) {
            out.converged = true;
            break;
        }
        spmv(a, p, ap, exec);
        deflate(basis, ap, exec);  // kills roundoff drift along the kernel
        const double pap = dot_vec(p, ap, exec);
        if (!(pap > 0.0)) break;  // kernel leakage: bail out, report residual
        const double alpha = rr / pap;
        for (std::size_t i = 0; i < out.x.size(); ++i) out.x[i] += alpha * p[i];
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= alpha * ap[i];
        const double rr_new = dot_vec(r, r, exec);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
    }
    out.residual = std::sqrt(rr) / bnorm;
    if (std::sqrt(rr) <= solver_policy::cg_rel_tol * bnorm) out.converged = true;
    return out;
}

// Right-hand side of the shifted problem: l_i + int <DV0(spin_offset),
// sym(e_a (x) grad phi_i)>.
std::vector<double> shifted_rhs(const Mesh& mesh, const Material& m,
                                const LoadSystem& load, const Mat2& spin_offset)
{
    const std::vector<Vec2> l = assemble_load_vector(mesh, load);
    std::vector<double> b(2 * l.size());
    for (std::size_t i = 0; i < l.size(); ++i) {
        b[2 * i] = l[i][0];
        b[2 * i + 1] = l[i][1];
    }
    const Mat2 s = dv0(m, spin_offset);
    if (frobenius_norm(s) > 0.0) {
        for (std::size_t t = 0; t < mesh.tris.size(); ++t)
            for (int i = 0; i < 3; ++i) {
                const Vec2 c = s * mesh.grad_phi[t][static_cast<std::size_t>(i)];
                const std::size_t n =
                    static_cast<std::size_t>(mesh.tris[t][static_cast<std::size_t>(i)]);
                b[2 * n] += mesh.area[t] * c[0];
                b[2 * n + 1] += mesh.area[t] * c[1];
            }
    }
    return b;
}

}  // namespace

LinearSolveResult solve_linear_elasticity(const Mesh& mesh, const Material& m,
                                          const LoadSystem& load, const Mat2& spin_offset,
                                          Exec exec)
{
    validate(m);
    const EquilibrationReport eq = check_equilibrated(mesh, load);
    if (!eq.equilibrated)
        throw std::invalid_argument("solve_linear_elasticity: load is not equilibrated");

    const Csr k = assemble_stiffness(mesh, m);
    const RigidBasis basis = rigid_basis(mesh);
    const std::vector<double> b = shifted_rhs(mesh, m, load, spin_offset);
    const CgOutcome cg = deflated_cg(k, basis, b, exec);

    LinearSolveResult res;
    res.u = purge_rigid(mesh, unflatten(cg.x));
    res.report.status = cg.converged ? SolveStatus::converged : SolveStatus::max_iterations;
    res.report.iterations = cg.iterations;
    res.report.residual = cg.residual;
    res.energy = integrate_quadratic_energy(mesh, m, res.u, spin_offset, exec)
               - eval_load_work(mesh, load, res.u);
    return res;
}

MinimizeFResult minimize_F(const Mesh& mesh, const Material& m, const LoadSystem& load,
                           Exec exec)
{
    MinimizeFResult res;
    res.compatibility = classify_compatibility(resultant_matrix(mesh, load));
    if (res.compatibility.verdict == Compatibility::violated) {
        res.report.status = SolveStatus::diverged;
        std::ostringstream msg;
        msg << "unbounded below: F(t z) -> -inf along z(x) = W^2 x, w = "
            << res.compatibility.witness.w;
        res.report.message = msg.str();
        return res;
    }

    LinearSolveResult lin = solve_linear_elasticity(mesh, m, load, Mat2{}, exec);
    res.u = lin.u;
    res.breakdown = eval_F(mesh, m, load, res.u, exec);
    res.objective_trace.push_back(res.breakdown.total);

    for (int it = 0; it < 100; ++it) {
        res.report.iterations = it + 1;
        // Spin update is embedded in eval_F's closed form; displacement
        // update re-solves at the current optimal spin offset.
        const double s = res.breakdown.w_opt * res.breakdown.w_opt;
        const Mat2 offset = (-0.5 * s) * Mat2::identity();
        lin = solve_linear_elasticity(mesh, m, load, offset, exec);
        const EnergyBreakdown next = eval_F(mesh, m, load, lin.u, exec);
        res.u = lin.u;
        const double prev = res.breakdown.total;
        res.breakdown = next;
        res.objective_trace.push_back(next.total);
        if (std::abs(prev - next.total) <= 1e-12 * (1.0 + std::abs(next.total))) {
            res.report.status = SolveStatus::converged;
            res.report.residual = std::abs(prev - next.total);
            return res;
        }
    }
    res.report.status = SolveStatus::max_iterations;
    return res;
}

MinimizeFhResult minimize_Fh(const Mesh& mesh, const Material& m, const LoadSystem& load,
                             double h, const DisplacementField* start, Exec exec)
{
    validate(m);
    if (!(h > 0.0)) throw std::invalid_argument("minimize_Fh: h must be > 0");

    DisplacementField u0;
    if (start) {
        u0 = *start;
    } else {
        u0 = solve_linear_elasticity(mesh, m, load, Mat2{}, exec).u;
        // The linearized minimizer can violate the determinant guard for
        // large h; shrink toward zero until admissible (zero always is).
        for (int k = 0; k < 60; ++k) {
            if (eval_Fh(mesh, m, load, h, u0, exec).min_det > solver_policy::det_guard) break;
            for (Vec2& v : u0.v) v = 0.5 * v;
        }
    }

    std::vector<double> x = flatten(u0);
    const std::vector<Vec2> lvec = assemble_load_vector(mesh, load);
    double l2 = 0.0;
    for (const Vec2& v : lvec) l2 += dot(v, v);
    const double tol = solver_policy::grad_tol * (1.0 + std::sqrt(l2));
    const LoadNorms ln = load_l2_norms(mesh, load);
    const double floor_value = -solver_policy::divergence_guard
                             * (ln.traction_l2 * ln.traction_l2 + ln.body_l2 * ln.body_l2);

    const auto f_at = [&](const std::vector<double>& xx) {
        return eval_Fh(mesh, m, load, h, unflatten(xx), exec);
    };
    const auto g_at = [&](const std::vector<double>& xx) {
        return flatten(DisplacementField{grad_Fh(mesh, m, load, h, unflatten(xx), exec)});
    };

    MinimizeFhResult res;
    FhEval fe = f_at(x);
    if (!fe.value.finite || fe.min_det <= solver_policy::det_guard)
        throw std::invalid_argument("minimize_Fh: start violates the determinant guard");
    std::vector<double> g = g_at(x);

    // Quasi-Newton metric: the small-strain stiffness is the exact Hessian
    // of the h -> 0 limit, so inverting it on the rigid-free complement
    // gives near-Newton steps.  Rigid components pass through unchanged to
    // keep the metric positive definite on the whole space.
    const Csr k = assemble_stiffness(mesh, m);
    const RigidBasis basis = rigid_basis(mesh);
    const auto precondition = [&](const std::vector<double>& r) {
        CgOutcome cg = deflated_cg(k, basis, r, exec);
        for (const auto& q : basis.q) {
            const double c = dot_vec(q, r, exec);
            for (std::size_t i = 0; i < cg.x.size(); ++i) cg.x[i] += c * q[i];
        }
        return std::move(cg.x);
    };

    std::deque<std::pair<std::vector<double>, std::vector<double>>> history;  // (s, y)
    const std::size_t nv = x.size();
    std::vector<double> d(nv);
    int flat_steps = 0;

    for (int it = 0; it < solver_policy::max_iterations; ++it) {
        res.report.iterations = it;
        const double gnorm = std::sqrt(dot_vec(g, g, exec));
        res.report.residual = gnorm;
        if (gnorm <= tol) {
            res.report.status = SolveStatus::converged;
            break;
        }
        if (fe.value.finite && fe.value.value < floor_value && floor_value < 0.0) {
            res.report.status = SolveStatus::diverged;
            res.report.message = "objective fell below the divergence guard";
            break;
        }

        // Two-loop recursion.
        for (std::size_t i = 0; i < nv; ++i) d[i] = -g[i];
        std::vector<double> alpha(history.size());
        for (std::size_t hidx = history.size(); hidx-- > 0;) {
            const auto& [s, y] = history[hidx];
            const double rho = 1.0 / dot_vec(s, y, exec);
            alpha[hidx] = rho * dot_vec(s, d, exec);
            for (std::size_t i = 0; i < nv; ++i) d[i] -= alpha[hidx] * y[i];
        }
        d = precondition(d);
        for (std::size_t hidx = 0; hidx < history.size(); ++hidx) {
            const auto& [s, y] = history[hidx];
            const double rho = 1.0 / dot_vec(s, y, exec);
            const double beta = rho * dot_vec(y, d, exec);
            for (std::size_t i = 0; i < nv; ++i) d[i] += (alpha[hidx] - beta) * s[i];
        }
        double slope = dot_vec(g, d, exec);
        if (slope >= 0.0) {
            history.clear();
            for (std::size_t i = 0; i < nv; ++i) d[i] = -g[i];
            d = precondition(d);
            slope = dot_vec(g, d, exec);
        }

        // Backtracking with the determinant guard.
        double t = 1.0;
        std::vector<double> xn(nv);
        FhEval fn;
        bool accepted = false;
        while (t > 1e-20) {
            for (std::size_t i = 0; i < nv; ++i) xn[i] = x[i] + t * d[i];
            fn = f_at(xn);
            if (fn.value.finite && fn.min_det > solver_policy::det_guard
                && fn.value.value <= fe.value.value + solver_policy::armijo_c * t * slope) {
                accepted = true;
                break;
            }
            t *= solver_policy::backtrack_factor;
        }
        // An accepted step counts as progress only if it moves the iterate
        // and, within a short grace budget, changes the objective.  Near
        // the minimum the backtracking can "accept" a point bitwise equal
        // to the current one (every candidate with a representable decrease
        // was rejected by rounding), which would otherwise loop forever.
        bool no_progress = !accepted;
        std::vector<double> s(nv);
        double sn = 0.0;
        if (accepted) {
            for (std::size_t i = 0; i < nv; ++i) s[i] = xn[i] - x[i];
            sn = std::sqrt(dot_vec(s, s, exec));
            if (sn == 0.0) {
                no_progress = true;
            } else if (fn.value.value == fe.value.value) {
                if (++flat_steps >= 3) no_progress = true;
            } else {
                flat_steps = 0;
            }
        }
        if (no_progress) {
            if (!history.empty()) {
                // A stale curvature history can propose directions the line
                // search rejects once objective differences shrink to
                // rounding level; retry from the preconditioned gradient.
                history.clear();
                continue;
            }
            // With an empty history d is the preconditioned gradient, so
            // |slope| bounds the decrease a step along it can predict, and
            // gnorm^2 bounds it for the raw steepest direction.  When both
            // are below one ulp of the objective, no function-comparison
            // line search can certify further descent: the iterate is
            // stationary to working precision.
            const double f_ulp = std::numeric_limits<double>::epsilon()
                               * (1.0 + std::abs(fe.value.value));
            if (std::abs(slope) <= f_ulp && gnorm * gnorm <= f_ulp) {
                res.report.status = SolveStatus::converged;
                res.report.message = "stationary to working precision";
                break;
            }
            res.report.status = SolveStatus::stalled;
            res.report.message = "line search made no progress";
            break;
        }
        std::vector<double> gn = g_at(xn);
        std::vector<double> y(nv);
        for (std::size_t i = 0; i < nv; ++i) y[i] = gn[i] - g[i];
        const double sy = dot_vec(s, y, exec);
        const double yn = std::sqrt(dot_vec(y, y, exec));
        if (sy > 1e-14 * sn * yn) {
            history.emplace_back(std::move(s), std::move(y));
            if (static_cast<int>(history.size()) > solver_policy::lbfgs_memory)
                history.pop_front();
        }
        x.swap(xn);
        fe = fn;
        g.swap(gn);

        if (it + 1 == solver_policy::max_iterations)
            res.report.status = SolveStatus::max_iterations;
    }

    res.u = purge_rigid(mesh, unflatten(x));
    res.eval = eval_Fh(mesh, m, load, h, res.u, exec);
    return res;
}

GammaSweepResult gamma_sweep(const Mesh& mesh, const Material& m, const LoadSystem& load,
                             const std::vector<double>& h_list, Exec exec)
{
    const EquilibrationReport eq = check_equilibrated(mesh, load);
    if (!eq.equilibrated)
        throw std::invalid_argument("gamma_sweep: load is not equilibrated");
    const CompatibilityReport<2> comp = classify_compatibility(resultant_matrix(mesh, load));
    if (comp.verdict != Compatibility::strictly_compatible)
        throw std::invalid_argument(
            "gamma_sweep: load must be strictly compatible (got "
            + std::string(to_string(comp.verdict)) + ")");

    GammaSweepResult res;
    const LinearSolveResult lin = solve_linear_elasticity(mesh, m, load, Mat2{}, exec);
    res.v_lin = lin.u;
    res.min_E = lin.energy;
    const std::vector<Mat2> strain_lin = strain_field(mesh, res.v_lin);

    for (double h : h_list) {
        const MinimizeFhResult mh = minimize_Fh(mesh, m, load, h, &res.v_lin, exec);
        GammaSweepStep step;
        step.h = h;
        step.iterations = mh.report.iterations;
        step.status = mh.report.status;
        step.value = mh.eval.value.finite ? mh.eval.value.value : 0.0;
        step.gap = std::abs(step.value - res.min_E);
        step.rel_gap = (res.min_E != 0.0) ? step.gap / std::abs(res.min_E) : step.gap;
        step.sqrt_h_h1 = std::sqrt(h) * h1_seminorm(mesh, mh.u);
        const std::vector<Mat2> strain_h = strain_field(mesh, mh.u);
        double err2 = 0.0;
        for (std::size_t t = 0; t < strain_h.size(); ++t) {
            const Mat2 d = strain_h[t] - strain_lin[t];
            err2 += mesh.area[t] * inner(d, d);
        }
        step.strain_err_l2 = std::sqrt(err2);
        res.steps.push_back(step);
    }
    return res;
}

}  // namespace tgap
