#pragma once

#include <complex>
#include <cstddef>

// Complex double-precision inner-loop kernels with a scalar reference
// implementation and an AVX2 variant selected at runtime. All higher-level
// linear algebra is built on these four primitives so that the two lanes can
// be equivalence-tested in isolation.

namespace rcf::simd {

using cx = std::complex<double>;

struct Kernels {
    // sum_i a[i] * b[i]
    cx (*dotu)(const cx* a, const cx* b, std::size_t n);
    // sum_i conj(a[i]) * b[i]
    cx (*dotc)(const cx* a, const cx* b, std::size_t n);
    // y[i] += alpha * x[i]
    void (*axpy)(cx alpha, const cx* x, cx* y, std::size_t n);
    // sum_i |x[i]|^2
    double (*sum_abs2)(const cx* x, std::size_t n);
    const char* name;
};

const Kernels& scalar_kernels();

// True when the AVX2+FMA lane was compiled in and the CPU reports support.
bool avx2_supported();
const Kernels& avx2_kernels();

// Active table. Selection order: explicit select() call, then the EEM_SIMD
// environment variable ("scalar" | "avx2" | "auto"), then CPU detection.
const Kernels& active();
void select(const char* name);
const char* active_name();

}  // namespace rcf::simd
