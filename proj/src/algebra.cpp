#include "tgap/algebra.hpp"

#include <algorithm>
#include <utility>

namespace tgap {

SymEigen<2> sym_eigen(const Mat2& m)
{
    // Closed form for [[a,b],[b,c]].
    const double a = m(0, 0), b = 0.5 * (m(0, 1) + m(1, 0)), c = m(1, 1);
    const double mean = 0.5 * (a + c);
    const double r = std::hypot(0.5 * (a - c), b);
    SymEigen<2> e;
    e.eigenvalues = {mean - r, mean + r};
    if (r == 0.0) {
        e.eigenvectors = {Vec2{{1.0, 0.0}}, Vec2{{0.0, 1.0}}};
        return e;
    }
    // Eigenvector for mean + r; pick the better-conditioned column of
    // (M - (mean - r) I).
    Vec2 v1{{b, (mean + r) - a}};
    Vec2 v2{{(mean + r) - c, b}};
    Vec2 hi = (dot(v1, v1) >= dot(v2, v2)) ? v1 : v2;
    hi = (1.0 / norm(hi)) * hi;
    e.eigenvectors[1] = hi;
    e.eigenvectors[0] = Vec2{{-hi[1], hi[0]}};
    return e;
}

SymEigen<3> sym_eigen(const Mat3& m)
{
    // Cyclic Jacobi on the symmetrized input.  Deterministic sweep order,
    // converges to machine precision in a handful of sweeps for 3x3.
    Mat3 a = sym(m);
    Mat3 v = Mat3::identity();
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 3; ++p)
            for (int q = p + 1; q < 3; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30 * (1.0 + inner(a, a))) break;
        for (int p = 0; p < 3; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0)
                               / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * cs;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = cs * akp - sn * akq;
                    a(k, q) = sn * akp + cs * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = cs * apk - sn * aqk;
                    a(q, k) = sn * apk + cs * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = cs * vkp - sn * vkq;
                    v(k, q) = sn * vkp + cs * vkq;
                }
            }
        }
    }
    SymEigen<3> e;
    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a(i, i) < a(j, j); });
    for (int k = 0; k < 3; ++k) {
        e.eigenvalues[static_cast<std::size_t>(k)] = a(order[static_cast<std::size_t>(k)],
                                                       order[static_cast<std::size_t>(k)]);
        for (int i = 0; i < 3; ++i)
            e.eigenvectors[static_cast<std::size_t>(k)][i] = v(i, order[static_cast<std::size_t>(k)]);
    }
    return e;
}

}  // namespace tgap
