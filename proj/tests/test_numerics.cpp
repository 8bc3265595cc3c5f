#include "doctest.h"

#include <cmath>
#include <vector>

#include "rcf/numerics.hpp"
#include "rcf/rng.hpp"

using namespace rcf;

namespace {

CMat random_cmat(std::uint64_t seed, int rows, int cols) {
    SubstreamRng rng(seed, SubstreamRng::Generic,
                     static_cast<std::uint64_t>(rows),
                     static_cast<std::uint64_t>(cols));
    CMat m(rows, cols);
    for (auto& v : m.data()) v = rng.next_cnormal();
    return m;
}

// X X^H + I, guaranteed Hermitian positive definite.
CMat random_hpd(std::uint64_t seed, int n) {
    const CMat x = random_cmat(seed, n, n);
    CMat g = gram(x);
    for (int i = 0; i < n; ++i) g.at(i, i) += 1.0;
    return g;
}

double residual_vs_identity(const CMat& a, const CMat& ainv) {
    const CMat prod = matmul(a, ainv);
    double worst = 0.0;
    for (int i = 0; i < prod.rows(); ++i) {
        for (int j = 0; j < prod.cols(); ++j) {
            const cx want = (i == j) ? cx{1.0, 0.0} : cx{0.0, 0.0};
            worst = std::max(worst, std::abs(prod.at(i, j) - want));
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("hermitian_inverse: scalar and identity cases") {
    CMat a(1, 1);
    a.at(0, 0) = cx{4.0, 0.0};
    const CMat inv = hermitian_inverse(a);
    CHECK(inv.at(0, 0).real() == doctest::Approx(0.25).epsilon(1e-14));

    const CMat eye = CMat::identity(3);
    const CMat inv3 = hermitian_inverse(eye);
    CHECK(residual_vs_identity(eye, inv3) < 1e-14);
}

TEST_CASE("hermitian_inverse: residual bound on random HPD matrices") {
    for (int trial = 0; trial < 50; ++trial) {
        const CMat g = random_hpd(100 + trial, 6);
        const CMat inv = hermitian_inverse(g);
        CHECK(residual_vs_identity(g, inv) <= 1e-8 * (1.0 + max_abs(g)));
    }
}

TEST_CASE("hermitian_inverse: error paths") {
    CMat skew(2, 2);
    skew.at(0, 0) = cx{1.0, 0.0};
    skew.at(1, 1) = cx{1.0, 0.0};
    skew.at(0, 1) = cx{1.0, 0.0};
    skew.at(1, 0) = cx{0.5, 0.0};  // not the conjugate of (0,1)
    CHECK_THROWS_AS(hermitian_inverse(skew), NotHermitian);

    CMat sing(2, 2);
    sing.at(0, 0) = cx{1.0, 0.0};
    sing.at(0, 1) = cx{1.0, 0.0};
    sing.at(1, 0) = cx{1.0, 0.0};
    sing.at(1, 1) = cx{1.0, 0.0};  // rank one
    CHECK_THROWS_AS(hermitian_inverse(sing), SingularMatrix);
}

TEST_CASE("rank_one_inverse_update: zero vector leaves the inverse unchanged") {
    const CMat a = random_hpd(7, 4);
    const CMat ainv = hermitian_inverse(a);
    const std::vector<cx> zero(4, cx{0.0, 0.0});
    const std::vector<cx> v{{1, 0}, {0, 1}, {2, 0}, {0, 0}};
    const CMat out = rank_one_inverse_update(ainv, zero, v);
    for (std::size_t i = 0; i < out.data().size(); ++i) {
        CHECK(out.data()[i] == ainv.data()[i]);
    }
}

TEST_CASE("rank_one_inverse_update: diagonal case") {
    // I + e1 e1^H = diag(2, 1); inverse diag(0.5, 1).
    const CMat eye = CMat::identity(2);
    const std::vector<cx> e1{{1, 0}, {0, 0}};
    const CMat out = rank_one_inverse_update(eye, e1, e1);
    CHECK(out.at(0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(out.at(1, 1).real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(out.at(0, 1)) < 1e-14);
}

TEST_CASE("rank_one_inverse_update agrees with dense re-inversion") {
    // Includes the 1000-instance sweep over dimensions 3..8.
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 3 + trial % 6;
        const CMat a = random_hpd(2000 + trial, n);
        const CMat ainv = hermitian_inverse(a);
        SubstreamRng rng(3000 + trial, SubstreamRng::Generic);
        std::vector<cx> u(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n));
        for (auto& x : u) x = rng.next_cnormal();
        for (auto& x : v) x = rng.next_cnormal();

        CMat updated = a;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                updated.at(i, j) += u[static_cast<std::size_t>(i)] *
                                    std::conj(v[static_cast<std::size_t>(j)]);
            }
        }
        CMat direct;
        try {
            // The perturbed matrix is not Hermitian; compare through solves:
            // Sherman-Morrison output times (A + u v^H) must be the identity.
            const CMat fast = rank_one_inverse_update(ainv, u, v);
            direct = matmul(updated, fast);
        } catch (const DegenerateUpdate&) {
            continue;  // genuinely singular update; the caller re-inverts
        }
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const cx want = (i == j) ? cx{1.0, 0.0} : cx{0.0, 0.0};
                worst = std::max(worst, std::abs(direct.at(i, j) - want));
            }
        }
        CHECK(worst < 1e-8 * (1.0 + max_abs(updated)));
        ++checked;
    }
    CHECK(checked >= 990);
}

TEST_CASE("weighted_inverse_trace: closed forms") {
    // Single row with |H|^2 = 4 and p = 4 gives p / |H|^2 = 1.
    CMat h(1, 2);
    h.at(0, 0) = cx{2.0, 0.0};
    h.at(0, 1) = cx{0.0, 0.0};
    const std::vector<double> p{4.0};
    CHECK(weighted_inverse_trace(h, p) == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<double> zero{0.0};
    CHECK(weighted_inverse_trace(h, zero) == 0.0);
}

TEST_CASE("weighted_inverse_trace matches the explicit beamformer trace") {
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 3, t = 6;
        const CMat h = random_cmat(4000 + trial, k, t);
        SubstreamRng rng(4100 + trial, SubstreamRng::Generic);
        std::vector<double> p(k);
        for (auto& x : p) x = 0.2 + 2.0 * rng.next_uniform();

        // Direct construction: V = H^H (H H^H)^{-1} P^{1/2}; Tr(V^H V).
        const CMat ginv = hermitian_inverse(gram(h));
        CMat v = matmul(adjoint(h), ginv);
        for (int i = 0; i < v.rows(); ++i) {
            for (int j = 0; j < v.cols(); ++j) {
                v.at(i, j) *= std::sqrt(p[static_cast<std::size_t>(j)]);
            }
        }
        double trace = 0.0;
        for (const cx& x : v.data()) trace += std::norm(x);

        const double fast = weighted_inverse_trace(h, p);
        CHECK(std::abs(fast - trace) <= 1e-9 * std::abs(trace));
    }
}

TEST_CASE("weighted_inverse_trace is monotone in each power weight") {
    for (int trial = 0; trial < 30; ++trial) {
        const int k = 4, t = 7;
        const CMat h = random_cmat(4200 + trial, k, t);
        SubstreamRng rng(4300 + trial, SubstreamRng::Generic);
        std::vector<double> p(k);
        for (auto& x : p) x = rng.next_uniform();
        const double base = weighted_inverse_trace(h, p);
        const int bump = static_cast<int>(rng.next_u64() % k);
        p[static_cast<std::size_t>(bump)] += 0.5;
        CHECK(weighted_inverse_trace(h, p) >= base - 1e-12);
    }
}
