// Kernel benchmark: serial reference path versus the OpenMP path on a large
// mesh, checking that the two produce bitwise-identical results (block-order
// reductions make the parallel sums deterministic).
//
// Usage: bench-kernels [n]   (mesh resolution, default 192)

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>
#include <vector>

#include "tgap/functionals.hpp"
#include "tgap/loads.hpp"
#include "tgap/mesh_fem.hpp"
#include "tgap/solvers.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double best_of(int reps, F&& fn)
{
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        fn();
        const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
        best = std::min(best, dt);
    }
    return best;
}

bool bits_equal(const double* a, const double* b, std::size_t n)
{
    return std::memcmp(a, b, n * sizeof(double)) == 0;
}

void print_row(const char* name, double serial_s, double parallel_s, bool match)
{
    std::printf("%-28s %10.3f ms %10.3f ms %8.2fx   %s\n", name, serial_s * 1e3,
                parallel_s * 1e3, serial_s / parallel_s, match ? "bitwise" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv)
{
    const int n = argc > 1 ? std::atoi(argv[1]) : 192;
    if (n < 1) {
        std::fprintf(stderr, "bad mesh resolution\n");
        return 1;
    }
    const int reps = 5;

    std::printf("mesh n=%d ... ", n);
    std::fflush(stdout);
    const tgap::Mesh mesh = tgap::make_unit_square_mesh(n);
    std::printf("%zu nodes, %zu triangles\n", mesh.nodes.size(), mesh.tris.size());

    const tgap::Material m{1.0, 1.0};
    tgap::LoadSystem load;
    load.traction_kind = tgap::TractionKind::normal_scaled;
    load.traction_coefficient = 1.0;

    std::mt19937 rng(1);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    tgap::DisplacementField u;
    u.v.resize(mesh.nodes.size());
    for (auto& v : u.v) v = tgap::Vec2{{dist(rng), dist(rng)}};

    std::printf("%-28s %13s %13s %9s   %s\n", "kernel", "serial", "parallel", "speedup",
                "results");

    {
        double rs = 0.0, rp = 0.0;
        const double ts = best_of(reps, [&] {
            rs = tgap::integrate_quadratic_energy(mesh, m, u, tgap::Mat2{},
                                                  tgap::Exec::serial);
        });
        const double tp = best_of(reps, [&] {
            rp = tgap::integrate_quadratic_energy(mesh, m, u, tgap::Mat2{},
                                                  tgap::Exec::parallel);
        });
        print_row("quadratic energy", ts, tp, bits_equal(&rs, &rp, 1));
    }

    const double h = 1e-2;
    {
        tgap::FhEval rs, rp;
        const double ts =
            best_of(reps, [&] { rs = tgap::eval_Fh(mesh, m, load, h, u, tgap::Exec::serial); });
        const double tp = best_of(
            reps, [&] { rp = tgap::eval_Fh(mesh, m, load, h, u, tgap::Exec::parallel); });
        print_row("rescaled energy", ts, tp, bits_equal(&rs.value.value, &rp.value.value, 1));
    }

    {
        std::vector<tgap::Vec2> gs, gp;
        const double ts =
            best_of(reps, [&] { gs = tgap::grad_Fh(mesh, m, load, h, u, tgap::Exec::serial); });
        const double tp = best_of(
            reps, [&] { gp = tgap::grad_Fh(mesh, m, load, h, u, tgap::Exec::parallel); });
        const bool match = gs.size() == gp.size()
                           && bits_equal(&gs[0][0], &gp[0][0], 2 * gs.size());
        print_row("rescaled gradient", ts, tp, match);
    }

    {
        const tgap::Csr k = tgap::assemble_stiffness(mesh, m);
        std::vector<double> x(static_cast<std::size_t>(k.n)), ys(x.size()), yp(x.size());
        for (auto& v : x) v = dist(rng);
        const double ts = best_of(reps, [&] { tgap::spmv(k, x, ys, tgap::Exec::serial); });
        const double tp = best_of(reps, [&] { tgap::spmv(k, x, yp, tgap::Exec::parallel); });
        print_row("stiffness spmv", ts, tp, bits_equal(ys.data(), yp.data(), ys.size()));
    }

    {
        std::vector<double> a(2 * mesh.nodes.size()), b(a.size());
        for (auto& v : a) v = dist(rng);
        for (auto& v : b) v = dist(rng);
        double rs = 0.0, rp = 0.0;
        const double ts = best_of(reps, [&] { rs = tgap::dot_vec(a, b, tgap::Exec::serial); });
        const double tp =
            best_of(reps, [&] { rp = tgap::dot_vec(a, b, tgap::Exec::parallel); });
        print_row("blocked dot", ts, tp, bits_equal(&rs, &rp, 1));
    }

    return 0;
}
