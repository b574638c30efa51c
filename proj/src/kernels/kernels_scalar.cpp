#include "qtmsim/kernels.hpp"

namespace qtm::kernels::detail {
namespace {

double norm_sq_scalar(const double *re, const double *im, std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        acc += re[k] * re[k] + im[k] * im[k];
    }
    return acc;
}

void inner_scalar(const double *a_re, const double *a_im, const double *b_re, const double *b_im,
                  std::size_t n, double *out_re, double *out_im) {
    double sr = 0.0;
    double si = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sr += a_re[k] * b_re[k] + a_im[k] * b_im[k];
        si += a_re[k] * b_im[k] - a_im[k] * b_re[k];
    }
    *out_re = sr;
    *out_im = si;
}

void scale_scalar(double *re, double *im, std::size_t n, double factor) {
    for (std::size_t k = 0; k < n; ++k) {
        re[k] *= factor;
        im[k] *= factor;
    }
}

void abs_sq_scalar(const double *re, const double *im, double *out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = re[k] * re[k] + im[k] * im[k];
    }
}

}  // namespace

const KernelTable &scalar_table() {
    static const KernelTable t{norm_sq_scalar, inner_scalar, scale_scalar, abs_sq_scalar};
    return t;
}

}  // namespace qtm::kernels::detail
