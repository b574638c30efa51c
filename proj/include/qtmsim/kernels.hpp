#pragma once

// Dense amplitude reductions used by Superposition and the unitarity checks.
//
// Every kernel has a scalar reference implementation. SIMD variants (AVX2 on
// x86-64, NEON on aarch64) are compiled in when the target supports them and
// selected at runtime. Set QTMSIM_SIMD=scalar in the environment to force the
// reference path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace qtm::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
    double (*norm_sq)(const double *re, const double *im, std::size_t n);
    // out = sum_k conj(a_k) * b_k
    void (*inner)(const double *a_re, const double *a_im, const double *b_re, const double *b_im,
                  std::size_t n, double *out_re, double *out_im);
    void (*scale)(double *re, double *im, std::size_t n, double factor);
    void (*abs_sq)(const double *re, const double *im, double *out, std::size_t n);
};

/// True when the ISA's kernels are compiled in and the running CPU supports them.
bool available(Isa isa);

/// Kernel table for a specific ISA. Throws std::invalid_argument if unavailable.
const KernelTable &table(Isa isa);

/// The ISA chosen for this process (best available, unless overridden by QTMSIM_SIMD).
Isa active_isa();

double norm_sq(std::span<const double> re, std::span<const double> im);
std::complex<double> inner_product(std::span<const double> a_re, std::span<const double> a_im,
                                   std::span<const double> b_re, std::span<const double> b_im);
void scale(std::span<double> re, std::span<double> im, double factor);
void abs_sq(std::span<const double> re, std::span<const double> im, std::span<double> out);

namespace detail {
const KernelTable &scalar_table();
#if defined(QTMSIM_HAVE_AVX2)
const KernelTable &avx2_table();
#endif
#if defined(QTMSIM_HAVE_NEON)
const KernelTable &neon_table();
#endif
}  // namespace detail

}  // namespace qtm::kernels
