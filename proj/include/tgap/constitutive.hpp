#pragma once

// Stored-energy densities.  W is the Green-St.Venant density with a +inf
// sentinel on non-orientation-preserving deformations; V0 is its quadratic
// small-strain limit; V_h is the h-rescaled density V_h(B) = h^-2 W(I+hB).

#include <stdexcept>

#include "tgap/algebra.hpp"

namespace tgap {

// Lame parameters of the quadratic form.  mu > 0, lambda >= 0.
struct Material {
    double mu = 1.0;
    double lambda = 1.0;
};

inline void validate(const Material& m)
{
    if (!(m.mu > 0.0)) throw std::invalid_argument("material: mu must be > 0");
    if (!(m.lambda >= 0.0)) throw std::invalid_argument("material: lambda must be >= 0");
}

// Extended real value.  The infinite state is an explicit flag, never a
// floating-point inf, so it survives sums and comparisons unambiguously.
struct ExtReal {
    bool finite = true;
    double value = 0.0;  // meaningful only when finite

    static ExtReal of(double v) { return {true, v}; }
    static ExtReal infinity() { return {false, 0.0}; }
};

inline ExtReal operator+(ExtReal a, const ExtReal& b)
{
    if (!a.finite || !b.finite) return ExtReal::infinity();
    a.value += b.value;
    return a;
}

// W(F) = mu |F^T F - I|^2 + (lambda/2) Tr(F^T F - I)^2 when det F > 0,
// +inf otherwise.
template <int N>
inline ExtReal gsv_density(const Material& m, const Mat<N>& f)
{
    if (!(det(f) > 0.0)) return ExtReal::infinity();
    const Mat<N> c_minus_i = transpose(f) * f - Mat<N>::identity();
    const double tr = trace(c_minus_i);
    return ExtReal::of(m.mu * inner(c_minus_i, c_minus_i) + 0.5 * m.lambda * tr * tr);
}

// DW(F) = F [ 4 mu (C - I) + 2 lambda Tr(C - I) I ], C = F^T F.
// Defined on the finite branch only (det F > 0 is the caller's contract).
template <int N>
inline Mat<N> gsv_stress(const Material& m, const Mat<N>& f)
{
    const Mat<N> c_minus_i = transpose(f) * f - Mat<N>::identity();
    const Mat<N> s = 4.0 * m.mu * c_minus_i
                   + (2.0 * m.lambda * trace(c_minus_i)) * Mat<N>::identity();
    return f * s;
}

// Quadratic limit density acting on the symmetric part of B:
// V0(B) = 4 mu |sym B|^2 + 2 lambda (Tr B)^2.
template <int N>
inline double v0_quadratic(const Material& m, const Mat<N>& b)
{
    const Mat<N> e = sym(b);
    const double tr = trace(e);
    return 4.0 * m.mu * inner(e, e) + 2.0 * m.lambda * tr * tr;
}

// Derivative of V0: DV0(B) = 8 mu sym B + 4 lambda (Tr B) I, so that
// V0(B + tC) = V0(B) + t <DV0(B), C> + t^2 V0(C) for symmetric B, C.
template <int N>
inline Mat<N> dv0(const Material& m, const Mat<N>& b)
{
    return 8.0 * m.mu * sym(b) + (4.0 * m.lambda * trace(b)) * Mat<N>::identity();
}

// sym B + (h/2) B^T B: the exact argument for which
// h^-2 W(I + hB) = V0(sym B + (h/2) B^T B) on the finite branch.
template <int N>
inline Mat<N> vh_strain(double h, const Mat<N>& b)
{
    return sym(b) + (0.5 * h) * (transpose(b) * b);
}

// V_h(B) = h^-2 W(I + hB).  Evaluated through vh_strain rather than by
// forming F^T F - I, which would cancel against I and lose ~5 digits for
// h ~ 1e-4; the rearranged form is exact to machine precision.
template <int N>
inline ExtReal vh_density(const Material& m, double h, const Mat<N>& b)
{
    if (!(h > 0.0)) throw std::invalid_argument("vh_density: h must be > 0");
    if (!(det(Mat<N>::identity() + h * b) > 0.0)) return ExtReal::infinity();
    return ExtReal::of(v0_quadratic(m, vh_strain(h, b)));
}

// dV_h/dB = h^-1 DW(I + hB) = (I + hB) [ 4 mu Y + 2 lambda Tr(Y) I ] with
// Y = 2 sym B + h B^T B; the 1/h cancels exactly, so this stays accurate
// for small h.  Finite-branch contract as for gsv_stress.
template <int N>
inline Mat<N> vh_stress(const Material& m, double h, const Mat<N>& b)
{
    const Mat<N> y = 2.0 * vh_strain(h, b);
    const Mat<N> s = 4.0 * m.mu * y + (2.0 * m.lambda * trace(y)) * Mat<N>::identity();
    return (Mat<N>::identity() + h * b) * s;
}

}  // namespace tgap
