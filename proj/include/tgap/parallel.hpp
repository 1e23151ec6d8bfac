#pragma once

// Execution policy shared by all element-loop kernels.  Each kernel has a
// serial reference path and an OpenMP path; both accumulate through the
// same fixed-block-size ordered reduction, so the two paths return bitwise
// identical results for any thread count.  The serial path is kept as the
// testing reference and for the kernel benchmark.

#include <cstddef>
#include <vector>

namespace tgap {

enum class Exec { serial, parallel };

namespace detail {
// Block size of the ordered reduction.  Fixed (not thread-count dependent)
// so the summation tree never changes.
inline constexpr std::size_t reduce_block = 512;
}  // namespace detail

// Generic ordered blocked reduction.  A block value starts from `init` and
// absorbs term(i) for each index of its block via `absorb`; block values
// are then folded left-to-right via `combine`.  The block partials may be
// computed concurrently, the fold is always sequential in block order.
template <class R, class Absorb, class Combine>
R blocked_reduce(std::size_t n, Exec exec, R init, Absorb&& absorb, Combine&& combine)
{
    const std::size_t nblocks = (n + detail::reduce_block - 1) / detail::reduce_block;
    if (nblocks <= 1) {
        R r = init;
        for (std::size_t i = 0; i < n; ++i) absorb(r, i);
        return r;
    }
    std::vector<R> partial(nblocks, init);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
            const std::size_t lo = static_cast<std::size_t>(b) * detail::reduce_block;
            const std::size_t hi = std::min(n, lo + detail::reduce_block);
            R r = init;
            for (std::size_t i = lo; i < hi; ++i) absorb(r, i);
            partial[static_cast<std::size_t>(b)] = r;
        }
    } else {
        for (std::size_t b = 0; b < nblocks; ++b) {
            const std::size_t lo = b * detail::reduce_block;
            const std::size_t hi = std::min(n, lo + detail::reduce_block);
            R r = init;
            for (std::size_t i = lo; i < hi; ++i) absorb(r, i);
            partial[b] = r;
        }
    }
    R total = partial[0];
    for (std::size_t b = 1; b < nblocks; ++b) combine(total, partial[b]);
    return total;
}

// Sum of term(i) over i in [0,n), ordered blocked accumulation.
template <class Term>
double blocked_sum(std::size_t n, Exec exec, Term&& term)
{
    return blocked_reduce<double>(
        n, exec, 0.0,
        [&](double& acc, std::size_t i) { acc += term(i); },
        [](double& acc, const double& p) { acc += p; });
}

// Independent-iteration loop: body(i) must write only to locations owned
// by index i, so thread scheduling cannot change the result.
template <class Body>
void parallel_for(std::size_t n, Exec exec, Body&& body)
{
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            body(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) body(i);
    }
}

}  // namespace tgap
