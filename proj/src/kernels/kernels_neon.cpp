#include "qtmsim/kernels.hpp"

#include <arm_neon.h>

namespace qtm::kernels::detail {
namespace {

double norm_sq_neon(const double *re, const double *im, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        float64x2_t r = vld1q_f64(re + k);
        float64x2_t i = vld1q_f64(im + k);
        acc = vfmaq_f64(acc, r, r);
        acc = vfmaq_f64(acc, i, i);
    }
    double s = vaddvq_f64(acc);
    for (; k < n; ++k) {
        s += re[k] * re[k] + im[k] * im[k];
    }
    return s;
}

void inner_neon(const double *a_re, const double *a_im, const double *b_re, const double *b_im,
                std::size_t n, double *out_re, double *out_im) {
    float64x2_t sr = vdupq_n_f64(0.0);
    float64x2_t si = vdupq_n_f64(0.0);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        float64x2_t ar = vld1q_f64(a_re + k);
        float64x2_t ai = vld1q_f64(a_im + k);
        float64x2_t br = vld1q_f64(b_re + k);
        float64x2_t bi = vld1q_f64(b_im + k);
        sr = vfmaq_f64(sr, ar, br);
        sr = vfmaq_f64(sr, ai, bi);
        si = vfmaq_f64(si, ar, bi);
        si = vfmsq_f64(si, ai, br);
    }
    double r = vaddvq_f64(sr);
    double i = vaddvq_f64(si);
    for (; k < n; ++k) {
        r += a_re[k] * b_re[k] + a_im[k] * b_im[k];
        i += a_re[k] * b_im[k] - a_im[k] * b_re[k];
    }
    *out_re = r;
    *out_im = i;
}

void scale_neon(double *re, double *im, std::size_t n, double factor) {
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        vst1q_f64(re + k, vmulq_n_f64(vld1q_f64(re + k), factor));
        vst1q_f64(im + k, vmulq_n_f64(vld1q_f64(im + k), factor));
    }
    for (; k < n; ++k) {
        re[k] *= factor;
        im[k] *= factor;
    }
}

void abs_sq_neon(const double *re, const double *im, double *out, std::size_t n) {
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        float64x2_t r = vld1q_f64(re + k);
        float64x2_t i = vld1q_f64(im + k);
        vst1q_f64(out + k, vfmaq_f64(vmulq_f64(r, r), i, i));
    }
    for (; k < n; ++k) {
        out[k] = re[k] * re[k] + im[k] * im[k];
    }
}

}  // namespace

const KernelTable &neon_table() {
    static const KernelTable t{norm_sq_neon, inner_neon, scale_neon, abs_sq_neon};
    return t;
}

}  // namespace qtm::kernels::detail
