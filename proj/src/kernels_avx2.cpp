#include "scatter/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace scatter::kernels {

namespace {

// Two packed complex<double> per __m256d: [re0 im0 re1 im1].
inline __m256d cmul(__m256d a, __m256d b) {
    __m256d b_re = _mm256_movedup_pd(b);          // [br0 br0 br1 br1]
    __m256d b_im = _mm256_permute_pd(b, 0xF);     // [bi0 bi0 bi1 bi1]
    __m256d a_sw = _mm256_permute_pd(a, 0x5);     // [ai0 ar0 ai1 ar1]
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

__attribute__((target("avx2,fma")))
void zaxpy_avx2(std::size_t n, cplx a, const cplx* x, cplx* y) {
    const __m256d av = _mm256_setr_pd(a.real(), a.imag(), a.real(), a.imag());
    std::size_t i = 0;
    auto* xd = reinterpret_cast<const double*>(x);
    auto* yd = reinterpret_cast<double*>(y);
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul(xv, av)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

__attribute__((target("avx2,fma")))
void zmuladd_avx2(std::size_t n, const cplx* a, const cplx* b, cplx* out) {
    std::size_t i = 0;
    auto* ad = reinterpret_cast<const double*>(a);
    auto* bd = reinterpret_cast<const double*>(b);
    auto* od = reinterpret_cast<double*>(out);
    for (; i + 2 <= n; i += 2) {
        __m256d av = _mm256_loadu_pd(ad + 2 * i);
        __m256d bv = _mm256_loadu_pd(bd + 2 * i);
        __m256d ov = _mm256_loadu_pd(od + 2 * i);
        _mm256_storeu_pd(od + 2 * i, _mm256_add_pd(ov, cmul(av, bv)));
    }
    for (; i < n; ++i) out[i] += a[i] * b[i];
}

__attribute__((target("avx2,fma")))
void zdiagscale_avx2(std::size_t n, const cplx* a, cplx* x) {
    std::size_t i = 0;
    auto* ad = reinterpret_cast<const double*>(a);
    auto* xd = reinterpret_cast<double*>(x);
    for (; i + 2 <= n; i += 2) {
        __m256d av = _mm256_loadu_pd(ad + 2 * i);
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        _mm256_storeu_pd(xd + 2 * i, cmul(xv, av));
    }
    for (; i < n; ++i) x[i] *= a[i];
}

__attribute__((target("avx2,fma")))
cplx zdotu_avx2(std::size_t n, const cplx* x, const cplx* y) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    auto* xd = reinterpret_cast<const double*>(x);
    auto* yd = reinterpret_cast<const double*>(y);
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_add_pd(acc0, cmul(_mm256_loadu_pd(xd + 2 * i),
                                        _mm256_loadu_pd(yd + 2 * i)));
        acc1 = _mm256_add_pd(acc1, cmul(_mm256_loadu_pd(xd + 2 * i + 4),
                                        _mm256_loadu_pd(yd + 2 * i + 4)));
    }
    __m256d acc = _mm256_add_pd(acc0, acc1);
    alignas(32) double buf[4];
    _mm256_store_pd(buf, acc);
    cplx s{buf[0] + buf[2], buf[1] + buf[3]};
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

}  // namespace

bool avx2_supported() { return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"); }

const KernelTable avx2_table{zaxpy_avx2, zmuladd_avx2, zdiagscale_avx2,
                             zdotu_avx2, "avx2"};

}  // namespace scatter::kernels

#endif  // x86_64
