#include "scatter/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace scatter::kernels {

namespace {

const KernelTable& select() {
    const char* force = std::getenv("SCATTER_KERNELS");
    if (force && std::strcmp(force, "scalar") == 0) return scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
    if (force && std::strcmp(force, "avx2") == 0) return avx2_table;
    if (!force && avx2_supported()) return avx2_table;
#endif
    return scalar_table;
}

}  // namespace

const KernelTable& active() {
    static const KernelTable& table = select();
    return table;
}

}  // namespace scatter::kernels
