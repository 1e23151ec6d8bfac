#include "tgap/optimize.hpp"

#include <cmath>

namespace tgap {

ScalarMinResult brent_minimize(const std::function<double(double)>& f,
                               double a, double b, double xtol, int max_iter)
{
    // Brent's method, cf. the classical formulation: track the best point x,
    // second best w, previous second best v; try a parabolic step through
    // (x, w, v), fall back to golden section when it is not trustworthy.
    const double gold = 0.3819660112501051;
    ScalarMinResult res;
    double x = a + gold * (b - a);
    double w = x, v = x;
    double fx = f(x);
    res.evaluations = 1;
    double fw = fx, fv = fx;
    double d = 0.0, e = 0.0;

    for (int iter = 0; iter < max_iter; ++iter) {
        const double xm = 0.5 * (a + b);
        const double tol1 = xtol * std::abs(x) + 1e-300;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;

        bool parabolic = false;
        if (std::abs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_old = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_old) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (xm > x) ? tol1 : -tol1;
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x >= xm) ? a - x : b - x;
            d = gold * e;
        }
        const double u = (std::abs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
        const double fu = f(u);
        ++res.evaluations;
        if (fu <= fx) {
            if (u >= x) a = x; else b = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    res.x = x;
    res.value = fx;
    return res;
}

VecMinResult bfgs3_minimize(const std::function<double(const Vec3&)>& f,
                            const std::function<Vec3(const Vec3&)>& grad,
                            const Vec3& start, double grad_tol, int max_iter)
{
    VecMinResult res;
    Vec3 x = start;
    double fx = f(x);
    Vec3 g = grad(x);
    Mat3 h_inv = Mat3::identity();

    for (int iter = 0; iter < max_iter; ++iter) {
        res.iterations = iter;
        if (norm(g) <= grad_tol) {
            res.converged = true;
            break;
        }
        Vec3 p = -(h_inv * g);
        double slope = dot(p, g);
        if (slope >= 0.0) {  // reset on loss of descent
            h_inv = Mat3::identity();
            p = -g;
            slope = dot(p, g);
        }
        // Armijo backtracking.
        double t = 1.0;
        double fn = fx;
        Vec3 xn = x;
        bool ok = false;
        for (int ls = 0; ls < 60; ++ls) {
            xn = x + t * p;
            fn = f(xn);
            if (fn <= fx + 1e-4 * t * slope) {
                ok = true;
                break;
            }
            t *= 0.5;
        }
        if (!ok) break;
        const Vec3 gn = grad(xn);
        const Vec3 s = xn - x;
        const Vec3 y = gn - g;
        const double sy = dot(s, y);
        if (sy > 1e-14 * norm(s) * norm(y)) {
            // BFGS inverse update: H += (sy + yHy)/(sy)^2 ss^T - (Hy s^T + s y^T H)/sy
            const Vec3 hy = h_inv * y;
            const double yhy = dot(y, hy);
            const Mat3 ss = outer(s, s);
            const Mat3 hys = outer(hy, s);
            const Mat3 shy = outer(s, hy);
            h_inv = h_inv + ((sy + yhy) / (sy * sy)) * ss - (1.0 / sy) * (hys + shy);
        }
        x = xn; fx = fn; g = gn;
    }
    res.x = x;
    res.value = fx;
    if (norm(g) <= grad_tol) res.converged = true;
    return res;
}

}  // namespace tgap
