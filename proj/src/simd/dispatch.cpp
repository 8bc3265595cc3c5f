#include "rcf/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace rcf::simd {

bool avx2_compiled();  // defined in kernels_avx2.cpp

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
    return avx2_compiled() && __builtin_cpu_supports("avx2") &&
           __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

std::atomic<const Kernels*> g_active{nullptr};

const Kernels* resolve(const char* name) {
    if (name != nullptr && std::strcmp(name, "scalar") == 0) {
        return &scalar_kernels();
    }
    if (name != nullptr && std::strcmp(name, "avx2") == 0) {
        return avx2_supported() ? &avx2_kernels() : &scalar_kernels();
    }
    return avx2_supported() ? &avx2_kernels() : &scalar_kernels();
}

const Kernels* initial() {
    return resolve(std::getenv("EEM_SIMD"));
}

}  // namespace

const Kernels& active() {
    const Kernels* k = g_active.load(std::memory_order_acquire);
    if (k == nullptr) {
        k = initial();
        g_active.store(k, std::memory_order_release);
    }
    return *k;
}

void select(const char* name) {
    g_active.store(resolve(name), std::memory_order_release);
}

const char* active_name() { return active().name; }

}  // namespace rcf::simd
