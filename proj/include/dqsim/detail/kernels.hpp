// Copyright 2026 The dqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Bit-indexed statevector kernels. Amplitude pairs/quadruples are selected
// by bit masks; every pair/quadruple is touched by exactly one loop
// iteration, so the group loops are safe to parallelize or reorder.
//
// The term-specialized kernels (x rotation, XY mixing, ZZ phase) operate
// on contiguous runs of amplitudes and carry AVX2+FMA bodies with scalar
// tails; the dense 1q/2q kernels stay scalar, they only back validation
// paths and arbitrary-matrix gates.
//
// Each kernel accepts an IndexRange so the executor can drive it either
// over the full index space or over a column tile (low `split_bits` bits
// restricted to [col0, col1)). Tiled iteration requires every target bit
// to be >= split_bits.

#include <cassert>
#include <complex>
#include <cstddef>
#include <cstdint>

#if defined(__AVX2__) && defined(__FMA__)
#define DQSIM_HAVE_AVX2 1
#include <immintrin.h>
#endif

namespace dqsim::detail {

using c64 = std::complex<double>;

struct IndexRange {
    std::size_t col0 = 0;
    std::size_t col1 = 0;
    int split_bits = -1;  // < 0: plain full-range iteration

    static constexpr IndexRange full() { return {}; }
    [[nodiscard]] constexpr bool tiled() const { return split_bits >= 0; }
};

// Inserts a zero bit at position p: bits [p, ...) of x shift up by one.
inline std::size_t insert_zero_bit(std::size_t x, int p) {
    const std::size_t low = (std::size_t{1} << p) - 1;
    return ((x & ~low) << 1) | (x & low);
}

// ---------------------------------------------------------------------------
// Contiguous-run primitives
// ---------------------------------------------------------------------------

// x[k] <- c*x[k] + s*swap(y[k]), y[k] <- c*y[k] + s*swap(x[k]) where
// swap(z) = (im, re) and s acts as (s_re, s_im) on the swapped parts:
//   x'[k] = { c*x.re + s_re*y.im , c*x.im + s_im*y.re }.
inline void mix_swapped_streams(c64* x, c64* y, std::size_t count, double c, double s_re,
                                double s_im) {
    std::size_t k = 0;
#if DQSIM_HAVE_AVX2
    const __m256d cv = _mm256_set1_pd(c);
    const __m256d sv = _mm256_setr_pd(s_re, s_im, s_re, s_im);
    double* xd = reinterpret_cast<double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    for (; k + 2 <= count; k += 2) {
        const __m256d v0 = _mm256_loadu_pd(xd + 2 * k);
        const __m256d v1 = _mm256_loadu_pd(yd + 2 * k);
        const __m256d w0 = _mm256_permute_pd(v0, 0x5);
        const __m256d w1 = _mm256_permute_pd(v1, 0x5);
        _mm256_storeu_pd(xd + 2 * k, _mm256_fmadd_pd(cv, v0, _mm256_mul_pd(sv, w1)));
        _mm256_storeu_pd(yd + 2 * k, _mm256_fmadd_pd(cv, v1, _mm256_mul_pd(sv, w0)));
    }
#endif
    for (; k < count; ++k) {
        const c64 t0 = x[k];
        const c64 t1 = y[k];
        x[k] = c64{c * t0.real() + s_re * t1.imag(), c * t0.imag() + s_im * t1.real()};
        y[k] = c64{c * t1.real() + s_re * t0.imag(), c * t1.imag() + s_im * t0.real()};
    }
}

// Same mixing for interleaved neighbor pairs (a[2k], a[2k+1]).
inline void mix_adjacent_pairs(c64* a, std::size_t pairs, double c, double s_re, double s_im) {
    std::size_t k = 0;
#if DQSIM_HAVE_AVX2
    const __m256d cv = _mm256_set1_pd(c);
    const __m256d sv = _mm256_setr_pd(s_re, s_im, s_re, s_im);
    double* ad = reinterpret_cast<double*>(a);
    for (; k < pairs; ++k) {
        const __m256d v = _mm256_loadu_pd(ad + 4 * k);
        const __m256d w = _mm256_permute4x64_pd(v, 0x1B);  // lanes reversed
        _mm256_storeu_pd(ad + 4 * k, _mm256_fmadd_pd(cv, v, _mm256_mul_pd(sv, w)));
    }
#endif
    for (; k < pairs; ++k) {
        const c64 t0 = a[2 * k];
        const c64 t1 = a[2 * k + 1];
        a[2 * k] = c64{c * t0.real() + s_re * t1.imag(), c * t0.imag() + s_im * t1.real()};
        a[2 * k + 1] = c64{c * t1.real() + s_re * t0.imag(), c * t1.imag() + s_im * t0.real()};
    }
}

// a[k] *= (pr + i*spi) for a contiguous run.
inline void phase_run(c64* a, std::size_t count, double pr, double spi) {
    std::size_t k = 0;
#if DQSIM_HAVE_AVX2
    const __m256d prv = _mm256_set1_pd(pr);
    const __m256d piv = _mm256_setr_pd(-spi, spi, -spi, spi);
    double* ad = reinterpret_cast<double*>(a);
    for (; k + 2 <= count; k += 2) {
        const __m256d v = _mm256_loadu_pd(ad + 2 * k);
        const __m256d w = _mm256_permute_pd(v, 0x5);
        _mm256_storeu_pd(ad + 2 * k, _mm256_fmadd_pd(prv, v, _mm256_mul_pd(piv, w)));
    }
#endif
    for (; k < count; ++k) {
        const double re = a[k].real();
        const double im = a[k].imag();
        a[k] = c64{re * pr - im * spi, im * pr + re * spi};
    }
}

// ---------------------------------------------------------------------------
// Base-index enumeration (dense kernels and tests)
// ---------------------------------------------------------------------------

// Enumerates base indices with bit p cleared, innermost run contiguous.
template <class F>
inline void for_bases_1q(std::size_t dim, int p, const IndexRange& r, F&& f) {
    const std::size_t mask = std::size_t{1} << p;
    if (!r.tiled()) {
        for (std::size_t hi = 0; hi < dim; hi += mask << 1) {
            for (std::size_t lo = 0; lo < mask; ++lo) {
                f(hi | lo);
            }
        }
        return;
    }
    assert(p >= r.split_bits);
    const int b = r.split_bits;
    const std::size_t hi_groups = dim >> (b + 1);
    for (std::size_t hg = 0; hg < hi_groups; ++hg) {
        const std::size_t hi = insert_zero_bit(hg, p - b) << b;
        for (std::size_t c = r.col0; c < r.col1; ++c) {
            f(hi | c);
        }
    }
}

// Enumerates base indices with bits pa and pb cleared.
template <class F>
inline void for_bases_2q(std::size_t dim, int pa, int pb, const IndexRange& r, F&& f) {
    const int lo = pa < pb ? pa : pb;
    const int hi = pa < pb ? pb : pa;
    const std::size_t ml = std::size_t{1} << lo;
    const std::size_t mh = std::size_t{1} << hi;
    if (!r.tiled()) {
        for (std::size_t top = 0; top < dim; top += mh << 1) {
            for (std::size_t mid = 0; mid < mh; mid += ml << 1) {
                for (std::size_t low = 0; low < ml; ++low) {
                    f(top | mid | low);
                }
            }
        }
        return;
    }
    assert(lo >= r.split_bits);
    const int b = r.split_bits;
    const std::size_t hi_groups = dim >> (b + 2);
    for (std::size_t hg = 0; hg < hi_groups; ++hg) {
        const std::size_t top = insert_zero_bit(insert_zero_bit(hg, lo - b), hi - b) << b;
        for (std::size_t c = r.col0; c < r.col1; ++c) {
            f(top | c);
        }
    }
}

// ---------------------------------------------------------------------------
// Dense kernels
// ---------------------------------------------------------------------------

// Dense 2x2, row-major u[r*2 + c], on bit p.
inline void apply_1q_dense(c64* a, std::size_t dim, int p, const c64* u,
                           const IndexRange& r = IndexRange::full()) {
    const std::size_t mask = std::size_t{1} << p;
    const c64 u00 = u[0], u01 = u[1], u10 = u[2], u11 = u[3];
    for_bases_1q(dim, p, r, [&](std::size_t i0) {
        const std::size_t i1 = i0 | mask;
        const c64 t0 = a[i0];
        const c64 t1 = a[i1];
        a[i0] = u00 * t0 + u01 * t1;
        a[i1] = u10 * t0 + u11 * t1;
    });
}

// Dense 4x4, row-major u[r*4 + c], basis order (bit_b, bit_a) with pa the
// low-order index bit.
inline void apply_2q_dense(c64* a, std::size_t dim, int pa, int pb, const c64* u,
                           const IndexRange& r = IndexRange::full()) {
    const std::size_t ma = std::size_t{1} << pa;
    const std::size_t mb = std::size_t{1} << pb;
    for_bases_2q(dim, pa, pb, r, [&](std::size_t i00) {
        const std::size_t i01 = i00 | ma;
        const std::size_t i10 = i00 | mb;
        const std::size_t i11 = i01 | mb;
        const c64 t0 = a[i00];
        const c64 t1 = a[i01];
        const c64 t2 = a[i10];
        const c64 t3 = a[i11];
        a[i00] = u[0] * t0 + u[1] * t1 + u[2] * t2 + u[3] * t3;
        a[i01] = u[4] * t0 + u[5] * t1 + u[6] * t2 + u[7] * t3;
        a[i10] = u[8] * t0 + u[9] * t1 + u[10] * t2 + u[11] * t3;
        a[i11] = u[12] * t0 + u[13] * t1 + u[14] * t2 + u[15] * t3;
    });
}

// ---------------------------------------------------------------------------
// Term-specialized kernels
// ---------------------------------------------------------------------------

// exp(-i h X t) = [[cos, -i sin], [-i sin, cos]] with angle ht on bit p.
inline void apply_x_rot(c64* a, std::size_t dim, int p, double cos_th, double sin_th,
                        const IndexRange& r = IndexRange::full()) {
    const std::size_t mask = std::size_t{1} << p;
    if (!r.tiled()) {
        if (p == 0) {
            mix_adjacent_pairs(a, dim >> 1, cos_th, sin_th, -sin_th);
            return;
        }
        for (std::size_t hi = 0; hi < dim; hi += mask << 1) {
            mix_swapped_streams(a + hi, a + (hi | mask), mask, cos_th, sin_th, -sin_th);
        }
        return;
    }
    assert(p >= r.split_bits);
    const int b = r.split_bits;
    const std::size_t hi_groups = dim >> (b + 1);
    const std::size_t len = r.col1 - r.col0;
    for (std::size_t hg = 0; hg < hi_groups; ++hg) {
        const std::size_t hi = (insert_zero_bit(hg, p - b) << b) | r.col0;
        mix_swapped_streams(a + hi, a + (hi | mask), len, cos_th, sin_th, -sin_th);
    }
}

// exp(-i * (-J)(XX + YY) * t): identity on {|00>,|11>}, and
// [[cos, i sin], [i sin, cos]] with angle 2Jt on {|01>,|10>}.
inline void apply_xy(c64* a, std::size_t dim, int pa, int pb, double cos_th, double sin_th,
                     const IndexRange& r = IndexRange::full()) {
    const std::size_t ma = std::size_t{1} << pa;
    const std::size_t mb = std::size_t{1} << pb;
    if (!r.tiled()) {
        const std::size_t ml = ma < mb ? ma : mb;
        const std::size_t mh = ma < mb ? mb : ma;
        for (std::size_t top = 0; top < dim; top += mh << 1) {
            for (std::size_t mid = 0; mid < mh; mid += ml << 1) {
                const std::size_t base = top | mid;
                mix_swapped_streams(a + (base | ma), a + (base | mb), ml, cos_th, -sin_th,
                                    sin_th);
            }
        }
        return;
    }
    const int b = r.split_bits;
    assert(pa >= b && pb >= b);
    const int lo = pa < pb ? pa : pb;
    const int hi = pa < pb ? pb : pa;
    const std::size_t hi_groups = dim >> (b + 2);
    const std::size_t len = r.col1 - r.col0;
    for (std::size_t hg = 0; hg < hi_groups; ++hg) {
        const std::size_t top =
            (insert_zero_bit(insert_zero_bit(hg, lo - b), hi - b) << b) | r.col0;
        mix_swapped_streams(a + (top | ma), a + (top | mb), len, cos_th, -sin_th, sin_th);
    }
}

// exp(-i * (-J) ZZ * t) = diag(e^{iJt}, e^{-iJt}, e^{-iJt}, e^{iJt}):
// phase_eq on aligned bit pairs, conj(phase_eq) on anti-aligned ones.
inline void apply_zz(c64* a, std::size_t dim, int pa, int pb, c64 phase_eq,
                     const IndexRange& r = IndexRange::full()) {
    const double pr = phase_eq.real();
    const double pi = phase_eq.imag();
    if (!r.tiled()) {
        const int lo = pa < pb ? pa : pb;
        const int hi = pa < pb ? pb : pa;
        const std::size_t ml = std::size_t{1} << lo;
        const std::size_t mh = std::size_t{1} << hi;
        for (std::size_t top = 0; top < dim; top += mh << 1) {
            for (std::size_t mid = 0; mid < mh; mid += ml << 1) {
                const std::size_t base = top | mid;
                phase_run(a + base, ml, pr, pi);
                phase_run(a + (base | ml), ml, pr, -pi);
                phase_run(a + (base | mh), ml, pr, -pi);
                phase_run(a + (base | ml | mh), ml, pr, pi);
            }
        }
        return;
    }
    const int b = r.split_bits;
    assert(pa >= b && pb >= b);
    const std::size_t rows = dim >> b;
    const std::size_t len = r.col1 - r.col0;
    for (std::size_t h = 0; h < rows; ++h) {
        const double sign = 1.0 - 2.0 * static_cast<double>(((h >> (pa - b)) ^ (h >> (pb - b))) & 1U);
        phase_run(a + ((h << b) | r.col0), len, pr, sign * pi);
    }
}

}  // namespace dqsim::detail
