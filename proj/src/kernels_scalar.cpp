#include "scatter/kernels.hpp"

namespace scatter::kernels {

namespace {

void zaxpy_scalar(std::size_t n, cplx a, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void zmuladd_scalar(std::size_t n, const cplx* a, const cplx* b, cplx* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] += a[i] * b[i];
}

void zdiagscale_scalar(std::size_t n, const cplx* a, cplx* x) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a[i];
}

cplx zdotu_scalar(std::size_t n, const cplx* x, const cplx* y) {
    // two partial sums to break the dependency chain
    cplx s0{0.0, 0.0}, s1{0.0, 0.0};
    std::size_t i = 0;
    for (; i + 1 < n; i += 2) {
        s0 += x[i] * y[i];
        s1 += x[i + 1] * y[i + 1];
    }
    if (i < n) s0 += x[i] * y[i];
    return s0 + s1;
}

}  // namespace

const KernelTable scalar_table{zaxpy_scalar, zmuladd_scalar, zdiagscale_scalar,
                               zdotu_scalar, "scalar"};

}  // namespace scatter::kernels
