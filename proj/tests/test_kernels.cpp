#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "rcf/rng.hpp"
#include "rcf/simd/kernels.hpp"

using rcf::cx;
namespace simd = rcf::simd;

namespace {

std::vector<cx> random_vec(std::uint64_t seed, std::size_t n) {
    rcf::SubstreamRng rng(seed, rcf::SubstreamRng::Generic, n);
    std::vector<cx> v(n);
    for (auto& x : v) x = rng.next_cnormal();
    return v;
}

double rel_err(cx a, cx b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1.0});
    return std::abs(a - b) / scale;
}

}  // namespace

TEST_CASE("scalar kernels: hand-checked values") {
    const std::vector<cx> a{{1.0, 2.0}, {3.0, -1.0}};
    const std::vector<cx> b{{0.5, 0.0}, {2.0, 2.0}};
    const auto& k = simd::scalar_kernels();

    // (1+2i)(0.5) + (3-i)(2+2i) = 0.5+i + 8+4i
    CHECK(k.dotu(a.data(), b.data(), 2) == cx{8.5, 5.0});
    // conj(1+2i)(0.5) + conj(3-i)(2+2i) = 0.5-i + 4+8i
    CHECK(k.dotc(a.data(), b.data(), 2) == cx{4.5, 7.0});
    CHECK(k.sum_abs2(a.data(), 2) == doctest::Approx(1 + 4 + 9 + 1));

    std::vector<cx> y{{1.0, 0.0}, {0.0, 0.0}};
    k.axpy(cx{0.0, 1.0}, a.data(), y.data(), 2);  // y += i*a
    CHECK(y[0] == cx{-1.0, 1.0});
    CHECK(y[1] == cx{1.0, 3.0});
}

TEST_CASE("AVX2 lane matches scalar lane on random arrays") {
    if (!simd::avx2_supported()) {
        MESSAGE("AVX2 not available on this host; lane equivalence skipped");
        return;
    }
    const auto& ks = simd::scalar_kernels();
    const auto& kv = simd::avx2_kernels();
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{2},
                          std::size_t{3}, std::size_t{7}, std::size_t{16},
                          std::size_t{33}, std::size_t{1000}}) {
        const auto a = random_vec(10 + n, n);
        const auto b = random_vec(20 + n, n);
        CHECK(rel_err(ks.dotu(a.data(), b.data(), n),
                      kv.dotu(a.data(), b.data(), n)) < 1e-12);
        CHECK(rel_err(ks.dotc(a.data(), b.data(), n),
                      kv.dotc(a.data(), b.data(), n)) < 1e-12);
        const double s1 = ks.sum_abs2(a.data(), n);
        const double s2 = kv.sum_abs2(a.data(), n);
        CHECK(std::abs(s1 - s2) <= 1e-12 * std::max(1.0, s1));

        auto y1 = random_vec(30 + n, n);
        auto y2 = y1;
        const cx alpha{0.7, -1.3};
        ks.axpy(alpha, a.data(), y1.data(), n);
        kv.axpy(alpha, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(rel_err(y1[i], y2[i]) < 1e-12);
        }
    }
}

TEST_CASE("kernel selection honors explicit requests") {
    simd::select("scalar");
    CHECK(std::string(simd::active_name()) == "scalar");
    simd::select("auto");
    if (simd::avx2_supported()) {
        CHECK(std::string(simd::active_name()) == "avx2");
    } else {
        CHECK(std::string(simd::active_name()) == "scalar");
    }
}
