#include <cstdlib>
#include <string_view>

#include "rns/kernels.hpp"

namespace rns::kernels {

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {

const KernelTable& select() noexcept {
    const KernelTable* avx2 = avx2_table();
    const char* env = std::getenv("RNSLAB_SIMD");
    const std::string_view request = env ? env : "";
    if (request == "scalar") return scalar_table();
    if (avx2 && cpu_has_avx2()) return *avx2;
    return scalar_table();
}

}  // namespace

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

}  // namespace rns::kernels
