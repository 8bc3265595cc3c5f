#include "rcf/simd/kernels.hpp"

#if defined(RCF_BUILD_AVX2) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace rcf::simd {
namespace {

// Two complex doubles per __m256d, interleaved [re0, im0, re1, im1].
// Product of packed complex pairs: fmaddsub computes
//   even lanes: a*b_re - a_swapped*b_im  -> re*re' - im*im'
//   odd lanes:  a*b_re + a_swapped*b_im  -> im*re' + re*im'
inline __m256d cmul(__m256d a, __m256d b) {
    __m256d b_re = _mm256_movedup_pd(b);
    __m256d b_im = _mm256_permute_pd(b, 0xF);
    __m256d a_sw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

inline cx reduce_pairs(__m256d acc) {
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s = _mm_add_pd(lo, hi);
    alignas(16) double out[2];
    _mm_store_pd(out, s);
    return {out[0], out[1]};
}

cx dotu_avx2(const cx* a, const cx* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(pa + 2 * i);
        __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        acc = _mm256_add_pd(acc, cmul(va, vb));
    }
    cx sum = reduce_pairs(acc);
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        sum += cx{ar * br - ai * bi, ar * bi + ai * br};
    }
    return sum;
}

cx dotc_avx2(const cx* a, const cx* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    const __m256d conj_mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_xor_pd(_mm256_loadu_pd(pa + 2 * i), conj_mask);
        __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        acc = _mm256_add_pd(acc, cmul(va, vb));
    }
    cx sum = reduce_pairs(acc);
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = -a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        sum += cx{ar * br - ai * bi, ar * bi + ai * br};
    }
    return sum;
}

void axpy_avx2(cx alpha, const cx* x, cx* y, std::size_t n) {
    const double* px = reinterpret_cast<const double*>(x);
    double* py = reinterpret_cast<double*>(y);
    const __m256d a_re = _mm256_set1_pd(alpha.real());
    const __m256d a_im = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d vx = _mm256_loadu_pd(px + 2 * i);
        __m256d vx_sw = _mm256_permute_pd(vx, 0x5);
        __m256d prod = _mm256_fmaddsub_pd(vx, a_re, _mm256_mul_pd(vx_sw, a_im));
        __m256d vy = _mm256_loadu_pd(py + 2 * i);
        _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(vy, prod));
    }
    const double ar = alpha.real(), ai = alpha.imag();
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cx{ar * xr - ai * xi, ar * xi + ai * xr};
    }
}

double sum_abs2_avx2(const cx* x, std::size_t n) {
    const double* px = reinterpret_cast<const double*>(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d vx = _mm256_loadu_pd(px + 2 * i);
        acc = _mm256_fmadd_pd(vx, vx, acc);
    }
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s = _mm_add_pd(lo, hi);
    double sum = _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
    for (; i < n; ++i) {
        sum += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    }
    return sum;
}

}  // namespace

bool avx2_compiled() { return true; }

const Kernels& avx2_kernels() {
    static const Kernels k{dotu_avx2, dotc_avx2, axpy_avx2, sum_abs2_avx2,
                           "avx2"};
    return k;
}

}  // namespace rcf::simd

#else

namespace rcf::simd {

bool avx2_compiled() { return false; }

const Kernels& avx2_kernels() { return scalar_kernels(); }

}  // namespace rcf::simd

#endif
