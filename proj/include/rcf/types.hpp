#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "rcf/simd/kernels.hpp"

namespace rcf {

using cx = std::complex<double>;

// Dense row-major complex matrix. Deliberately minimal: only what the
// beamforming and channel code needs, all reductions routed through the
// dispatched kernels.
class CMat {
public:
    CMat() = default;
    CMat(int rows, int cols)
        : rows_(rows), cols_(cols),
          d_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {}

    static CMat identity(int n) {
        CMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = cx{1.0, 0.0};
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cx& at(int i, int j) { return d_[static_cast<std::size_t>(i) * cols_ + j]; }
    const cx& at(int i, int j) const {
        return d_[static_cast<std::size_t>(i) * cols_ + j];
    }

    cx* row(int i) { return d_.data() + static_cast<std::size_t>(i) * cols_; }
    const cx* row(int i) const {
        return d_.data() + static_cast<std::size_t>(i) * cols_;
    }

    std::vector<cx>& data() { return d_; }
    const std::vector<cx>& data() const { return d_; }

    bool all_finite() const {
        for (const cx& v : d_) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                return false;
            }
        }
        return true;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cx> d_;
};

inline double max_abs(const CMat& m) {
    double mx = 0.0;
    for (const cx& v : m.data()) mx = std::max(mx, std::abs(v));
    return mx;
}

// C = A * B
inline CMat matmul(const CMat& a, const CMat& b) {
    CMat c(a.rows(), b.cols());
    const auto& k = simd::active();
    for (int i = 0; i < a.rows(); ++i) {
        for (int t = 0; t < a.cols(); ++t) {
            const cx w = a.at(i, t);
            if (w.real() != 0.0 || w.imag() != 0.0) {
                k.axpy(w, b.row(t), c.row(i), static_cast<std::size_t>(b.cols()));
            }
        }
    }
    return c;
}

inline CMat adjoint(const CMat& a) {
    CMat c(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            c.at(j, i) = std::conj(a.at(i, j));
        }
    }
    return c;
}

// H * H^H, Hermitian by construction (upper triangle computed, mirrored).
inline CMat gram(const CMat& h) {
    const auto& k = simd::active();
    CMat g(h.rows(), h.rows());
    for (int i = 0; i < h.rows(); ++i) {
        for (int j = i; j < h.rows(); ++j) {
            // sum_t H[i,t] conj(H[j,t])
            cx v = k.dotc(h.row(j), h.row(i), static_cast<std::size_t>(h.cols()));
            g.at(i, j) = v;
            if (j != i) g.at(j, i) = std::conj(v);
        }
    }
    for (int i = 0; i < h.rows(); ++i) g.at(i, i) = cx{g.at(i, i).real(), 0.0};
    return g;
}

// y = A * x
inline std::vector<cx> matvec(const CMat& a, const cx* x) {
    const auto& k = simd::active();
    std::vector<cx> y(static_cast<std::size_t>(a.rows()));
    for (int i = 0; i < a.rows(); ++i) {
        y[static_cast<std::size_t>(i)] =
            k.dotu(a.row(i), x, static_cast<std::size_t>(a.cols()));
    }
    return y;
}

}  // namespace rcf
