#include "rcf/simd/kernels.hpp"

namespace rcf::simd {
namespace {

cx dotu_scalar(const cx* a, const cx* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br - ai * bi;
        im += ar * bi + ai * br;
    }
    return {re, im};
}

cx dotc_scalar(const cx* a, const cx* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

void axpy_scalar(cx alpha, const cx* x, cx* y, std::size_t n) {
    const double ar = alpha.real(), ai = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cx{ar * xr - ai * xi, ar * xi + ai * xr};
    }
}

double sum_abs2_scalar(const cx* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    }
    return acc;
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k{dotu_scalar, dotc_scalar, axpy_scalar,
                           sum_abs2_scalar, "scalar"};
    return k;
}

}  // namespace rcf::simd
