// Built with -mavx2 -mfma; only reached after a runtime CPU check.
#include "qtmsim/kernels.hpp"

#include <immintrin.h>

namespace qtm::kernels::detail {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double norm_sq_avx2(const double *re, const double *im, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d r = _mm256_loadu_pd(re + k);
        __m256d i = _mm256_loadu_pd(im + k);
        acc0 = _mm256_fmadd_pd(r, r, acc0);
        acc1 = _mm256_fmadd_pd(i, i, acc1);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; k < n; ++k) {
        acc += re[k] * re[k] + im[k] * im[k];
    }
    return acc;
}

void inner_avx2(const double *a_re, const double *a_im, const double *b_re, const double *b_im,
                std::size_t n, double *out_re, double *out_im) {
    __m256d sr = _mm256_setzero_pd();
    __m256d si = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d ar = _mm256_loadu_pd(a_re + k);
        __m256d ai = _mm256_loadu_pd(a_im + k);
        __m256d br = _mm256_loadu_pd(b_re + k);
        __m256d bi = _mm256_loadu_pd(b_im + k);
        sr = _mm256_fmadd_pd(ar, br, sr);
        sr = _mm256_fmadd_pd(ai, bi, sr);
        si = _mm256_fmadd_pd(ar, bi, si);
        si = _mm256_fnmadd_pd(ai, br, si);
    }
    double r = hsum(sr);
    double i = hsum(si);
    for (; k < n; ++k) {
        r += a_re[k] * b_re[k] + a_im[k] * b_im[k];
        i += a_re[k] * b_im[k] - a_im[k] * b_re[k];
    }
    *out_re = r;
    *out_im = i;
}

void scale_avx2(double *re, double *im, std::size_t n, double factor) {
    const __m256d f = _mm256_set1_pd(factor);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        _mm256_storeu_pd(re + k, _mm256_mul_pd(_mm256_loadu_pd(re + k), f));
        _mm256_storeu_pd(im + k, _mm256_mul_pd(_mm256_loadu_pd(im + k), f));
    }
    for (; k < n; ++k) {
        re[k] *= factor;
        im[k] *= factor;
    }
}

void abs_sq_avx2(const double *re, const double *im, double *out, std::size_t n) {
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d r = _mm256_loadu_pd(re + k);
        __m256d i = _mm256_loadu_pd(im + k);
        _mm256_storeu_pd(out + k, _mm256_fmadd_pd(i, i, _mm256_mul_pd(r, r)));
    }
    for (; k < n; ++k) {
        out[k] = re[k] * re[k] + im[k] * im[k];
    }
}

}  // namespace

const KernelTable &avx2_table() {
    static const KernelTable t{norm_sq_avx2, inner_avx2, scale_avx2, abs_sq_avx2};
    return t;
}

}  // namespace qtm::kernels::detail
