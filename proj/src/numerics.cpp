#include "rcf/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace rcf {

namespace {

// Lower Cholesky factor of a Hermitian PD matrix, pivot-checked.
CMat cholesky(const CMat& a) {
    const int n = a.rows();
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, a.at(i, i).real());
    const double pivot_floor = 1e-14 * max_diag;

    CMat l(n, n);
    for (int j = 0; j < n; ++j) {
        double d = a.at(j, j).real();
        for (int t = 0; t < j; ++t) d -= std::norm(l.at(j, t));
        if (!(d > pivot_floor) || !std::isfinite(d)) {
            throw SingularMatrix("hermitian factorization pivot below threshold");
        }
        const double ljj = std::sqrt(d);
        l.at(j, j) = cx{ljj, 0.0};
        for (int i = j + 1; i < n; ++i) {
            cx s = a.at(i, j);
            for (int t = 0; t < j; ++t) s -= l.at(i, t) * std::conj(l.at(j, t));
            l.at(i, j) = s / ljj;
        }
    }
    return l;
}

// Solves L L^H X = I given the lower factor L.
CMat cholesky_inverse(const CMat& l) {
    const int n = l.rows();
    CMat inv(n, n);
    std::vector<cx> y(static_cast<std::size_t>(n));
    for (int col = 0; col < n; ++col) {
        // forward: L y = e_col
        for (int i = 0; i < n; ++i) {
            cx s = (i == col) ? cx{1.0, 0.0} : cx{0.0, 0.0};
            for (int t = 0; t < i; ++t) s -= l.at(i, t) * y[static_cast<std::size_t>(t)];
            y[static_cast<std::size_t>(i)] = s / l.at(i, i);
        }
        // backward: L^H x = y
        for (int i = n - 1; i >= 0; --i) {
            cx s = y[static_cast<std::size_t>(i)];
            for (int t = i + 1; t < n; ++t) s -= std::conj(l.at(t, i)) * inv.at(t, col);
            inv.at(i, col) = s / std::conj(l.at(i, i));
        }
    }
    // Symmetrize: the exact inverse is Hermitian; averaging removes the
    // column-by-column rounding skew.
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            cx v = 0.5 * (inv.at(i, j) + std::conj(inv.at(j, i)));
            inv.at(i, j) = v;
            inv.at(j, i) = std::conj(v);
        }
        inv.at(i, i) = cx{inv.at(i, i).real(), 0.0};
    }
    return inv;
}

}  // namespace

CMat hermitian_inverse(const CMat& a) {
    if (a.rows() != a.cols()) {
        throw NotHermitian("matrix is not square");
    }
    double asym = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = i; j < a.cols(); ++j) {
            asym = std::max(asym, std::abs(a.at(i, j) - std::conj(a.at(j, i))));
        }
    }
    if (asym > 1e-10) {
        throw NotHermitian("matrix deviates from Hermitian symmetry");
    }
    return cholesky_inverse(cholesky(a));
}

CMat rank_one_inverse_update(const CMat& ainv, std::span<const cx> u,
                             std::span<const cx> v) {
    CMat out = ainv;
    rank_one_inverse_update_inplace(out, u, v);
    return out;
}

void rank_one_inverse_update_inplace(CMat& ainv, std::span<const cx> u,
                                     std::span<const cx> v) {
    const int n = ainv.rows();
    const auto& k = simd::active();

    // b = Ainv u ; t = v^H Ainv (as a row vector)
    std::vector<cx> b(static_cast<std::size_t>(n));
    std::vector<cx> t(static_cast<std::size_t>(n), cx{0.0, 0.0});
    for (int i = 0; i < n; ++i) {
        b[static_cast<std::size_t>(i)] =
            k.dotu(ainv.row(i), u.data(), static_cast<std::size_t>(n));
        k.axpy(std::conj(v[static_cast<std::size_t>(i)]), ainv.row(i), t.data(),
               static_cast<std::size_t>(n));
    }
    const cx vhb =
        k.dotc(v.data(), b.data(), static_cast<std::size_t>(n));
    const cx denom = cx{1.0, 0.0} + vhb;
    if (std::abs(denom) <= 1e-12) {
        throw DegenerateUpdate("rank-one update denominator vanishes");
    }
    const cx scale = -1.0 / denom;
    for (int i = 0; i < n; ++i) {
        k.axpy(scale * b[static_cast<std::size_t>(i)], t.data(), ainv.row(i),
               static_cast<std::size_t>(n));
    }
}

double weighted_inverse_trace(const CMat& h, std::span<const double> p) {
    if (h.rows() > h.cols()) {
        throw SingularMatrix("wide orientation required: rows must not exceed cols");
    }
    const CMat ginv = hermitian_inverse(gram(h));
    return weighted_trace_from_inverse(ginv, p);
}

double weighted_trace_from_inverse(const CMat& gram_inv,
                                   std::span<const double> p) {
    double acc = 0.0;
    for (int i = 0; i < gram_inv.rows(); ++i) {
        acc += p[static_cast<std::size_t>(i)] * gram_inv.at(i, i).real();
    }
    return acc;
}

}  // namespace rcf
