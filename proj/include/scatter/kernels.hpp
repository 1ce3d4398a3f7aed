#pragma once

// Low-level complex vector kernels used by the operator-evolution core.
// Each kernel has a scalar reference implementation and, where the CPU
// supports it, an AVX2 variant; the active set is chosen once at startup.
// Arrays are std::complex<double> buffers (interleaved re/im), no aliasing.

#include <complex>
#include <cstddef>
#include <string_view>

namespace scatter::kernels {

using cplx = std::complex<double>;

struct KernelTable {
    // y[i] += a * x[i]
    void (*zaxpy)(std::size_t n, cplx a, const cplx* x, cplx* y);
    // out[i] += a[i] * b[i]
    void (*zmuladd)(std::size_t n, const cplx* a, const cplx* b, cplx* out);
    // x[i] *= a[i]  (diagonal scaling)
    void (*zdiagscale)(std::size_t n, const cplx* a, cplx* x);
    // sum_i x[i] * y[i]  (unconjugated dot)
    cplx (*zdotu)(std::size_t n, const cplx* x, const cplx* y);
    std::string_view name;
};

// Scalar reference kernels (always available; ground truth for tests).
extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
bool avx2_supported();
#endif

// Table selected at load time from CPU capabilities (overridable with
// SCATTER_KERNELS=scalar|avx2 for debugging).
const KernelTable& active();

inline void zaxpy(std::size_t n, cplx a, const cplx* x, cplx* y) { active().zaxpy(n, a, x, y); }
inline void zmuladd(std::size_t n, const cplx* a, const cplx* b, cplx* out) { active().zmuladd(n, a, b, out); }
inline void zdiagscale(std::size_t n, const cplx* a, cplx* x) { active().zdiagscale(n, a, x); }
inline cplx zdotu(std::size_t n, const cplx* x, const cplx* y) { return active().zdotu(n, x, y); }

}  // namespace scatter::kernels
