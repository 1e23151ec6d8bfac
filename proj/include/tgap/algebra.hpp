#pragma once

// Small dense linear algebra for spatial dimension N in {2,3}:
// fixed-size vectors and matrices, the one-parameter (N=2) / axis (N=3)
// parametrization of skew-symmetric matrices, and closed forms for W^2
// and for rotations about a fixed axis.

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>

namespace tgap {

template <int N>
struct Vec {
    std::array<double, N> a{};

    double& operator[](int i) { return a[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return a[static_cast<std::size_t>(i)]; }
};

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

template <int N>
inline Vec<N> operator+(Vec<N> u, const Vec<N>& v)
{
    for (int i = 0; i < N; ++i) u[i] += v[i];
    return u;
}

template <int N>
inline Vec<N> operator-(Vec<N> u, const Vec<N>& v)
{
    for (int i = 0; i < N; ++i) u[i] -= v[i];
    return u;
}

template <int N>
inline Vec<N> operator*(double s, Vec<N> v)
{
    for (int i = 0; i < N; ++i) v[i] *= s;
    return v;
}

template <int N>
inline Vec<N> operator-(Vec<N> v)
{
    for (int i = 0; i < N; ++i) v[i] = -v[i];
    return v;
}

template <int N>
inline double dot(const Vec<N>& u, const Vec<N>& v)
{
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += u[i] * v[i];
    return s;
}

template <int N>
inline double norm(const Vec<N>& v)
{
    return std::sqrt(dot(v, v));
}

inline Vec3 cross(const Vec3& u, const Vec3& v)
{
    return Vec3{{u[1] * v[2] - u[2] * v[1],
                 u[2] * v[0] - u[0] * v[2],
                 u[0] * v[1] - u[1] * v[0]}};
}

// Row-major N x N matrix.
template <int N>
struct Mat {
    std::array<double, static_cast<std::size_t>(N) * N> a{};

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i * N + j)]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i * N + j)]; }

    static Mat identity()
    {
        Mat m;
        for (int i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }
};

using Mat2 = Mat<2>;
using Mat3 = Mat<3>;

template <int N>
inline Mat<N> operator+(Mat<N> m, const Mat<N>& b)
{
    for (std::size_t k = 0; k < m.a.size(); ++k) m.a[k] += b.a[k];
    return m;
}

template <int N>
inline Mat<N> operator-(Mat<N> m, const Mat<N>& b)
{
    for (std::size_t k = 0; k < m.a.size(); ++k) m.a[k] -= b.a[k];
    return m;
}

template <int N>
inline Mat<N> operator*(double s, Mat<N> m)
{
    for (double& x : m.a) x *= s;
    return m;
}

template <int N>
inline Mat<N> operator*(const Mat<N>& m, const Mat<N>& b)
{
    Mat<N> r;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double s = 0.0;
            for (int k = 0; k < N; ++k) s += m(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

template <int N>
inline Vec<N> operator*(const Mat<N>& m, const Vec<N>& v)
{
    Vec<N> r;
    for (int i = 0; i < N; ++i) {
        double s = 0.0;
        for (int j = 0; j < N; ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

template <int N>
inline Mat<N> transpose(const Mat<N>& m)
{
    Mat<N> r;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) r(i, j) = m(j, i);
    return r;
}

template <int N>
inline Mat<N> sym(const Mat<N>& m)
{
    Mat<N> r;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) r(i, j) = 0.5 * (m(i, j) + m(j, i));
    return r;
}

template <int N>
inline double trace(const Mat<N>& m)
{
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += m(i, i);
    return s;
}

// Frobenius inner product <A,B> = sum_ij A_ij B_ij.
template <int N>
inline double inner(const Mat<N>& m, const Mat<N>& b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < m.a.size(); ++k) s += m.a[k] * b.a[k];
    return s;
}

template <int N>
inline double frobenius_norm(const Mat<N>& m)
{
    return std::sqrt(inner(m, m));
}

template <int N>
inline Mat<N> outer(const Vec<N>& u, const Vec<N>& v)
{
    Mat<N> r;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) r(i, j) = u[i] * v[j];
    return r;
}

inline double det(const Mat2& m)
{
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

inline double det(const Mat3& m)
{
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
         - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
         + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

// Minimal parametrization of Skew(N): one scalar in 2D, the rotation axis
// vector in 3D.  Every skew matrix in the code is produced from one of
// these; raw antisymmetric Mat values are never passed around.
template <int N>
struct SkewParam;

template <>
struct SkewParam<2> {
    double w = 0.0;  // W = [[0,-w],[w,0]]
};

template <>
struct SkewParam<3> {
    Vec3 axis{};  // W x = axis x x
};

inline Mat2 skew_from_params(const SkewParam<2>& p)
{
    Mat2 m;
    m(0, 1) = -p.w;
    m(1, 0) = p.w;
    return m;
}

inline Mat3 skew_from_params(const SkewParam<3>& p)
{
    const Vec3& a = p.axis;
    Mat3 m;
    m(0, 1) = -a[2];
    m(0, 2) = a[1];
    m(1, 0) = a[2];
    m(1, 2) = -a[0];
    m(2, 0) = -a[1];
    m(2, 1) = a[0];
    return m;
}

// W^2 in closed form: -w^2 I in 2D, a (x) a - |a|^2 I in 3D.
inline Mat2 skew_square(const SkewParam<2>& p)
{
    return (-p.w * p.w) * Mat2::identity();
}

inline Mat3 skew_square(const SkewParam<3>& p)
{
    return outer(p.axis, p.axis) - dot(p.axis, p.axis) * Mat3::identity();
}

// Rotation by angle theta about the (unit) axis encoded by p:
// R = I + sin(theta) W + (1 - cos(theta)) W^2.  Requires |p| = 1
// (w = +-1 in 2D, |axis| = 1 in 3D); then R in SO(N).
template <int N>
inline Mat<N> euler_rodrigues(const SkewParam<N>& p, double theta)
{
    const Mat<N> w = skew_from_params(p);
    const Mat<N> w2 = skew_square(p);
    return Mat<N>::identity() + std::sin(theta) * w + (1.0 - std::cos(theta)) * w2;
}

// Eigen-decomposition of a symmetric matrix.  Eigenvalues ascending;
// eigenvectors[k] is the unit eigenvector for eigenvalues[k].
template <int N>
struct SymEigen {
    std::array<double, N> eigenvalues{};
    std::array<Vec<N>, N> eigenvectors{};
};

SymEigen<2> sym_eigen(const Mat2& m);
SymEigen<3> sym_eigen(const Mat3& m);

template <int N>
std::ostream& operator<<(std::ostream& os, const Vec<N>& v)
{
    os << "(";
    for (int i = 0; i < N; ++i) os << (i ? ", " : "") << v[i];
    return os << ")";
}

template <int N>
std::ostream& operator<<(std::ostream& os, const Mat<N>& m)
{
    os << "[";
    for (int i = 0; i < N; ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < N; ++j) os << (j ? " " : "") << m(i, j);
    }
    return os << "]";
}

}  // namespace tgap
