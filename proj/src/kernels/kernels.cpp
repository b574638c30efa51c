#include "qtmsim/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qtm::kernels {

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return "scalar";
        case Isa::avx2:
            return "avx2";
        case Isa::neon:
            return "neon";
    }
    return "unknown";
}

bool available(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(QTMSIM_HAVE_AVX2)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Isa::neon:
#if defined(QTMSIM_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable &table(Isa isa) {
    if (!available(isa)) {
        throw std::invalid_argument("SIMD kernels not available: " + std::string(isa_name(isa)));
    }
    switch (isa) {
#if defined(QTMSIM_HAVE_AVX2)
        case Isa::avx2:
            return detail::avx2_table();
#endif
#if defined(QTMSIM_HAVE_NEON)
        case Isa::neon:
            return detail::neon_table();
#endif
        default:
            return detail::scalar_table();
    }
}

namespace {

Isa select_isa() {
    if (const char *env = std::getenv("QTMSIM_SIMD")) {
        std::string_view v(env);
        if (v == "scalar") {
            return Isa::scalar;
        }
        if (v == "avx2" && available(Isa::avx2)) {
            return Isa::avx2;
        }
        if (v == "neon" && available(Isa::neon)) {
            return Isa::neon;
        }
    }
    if (available(Isa::avx2)) {
        return Isa::avx2;
    }
    if (available(Isa::neon)) {
        return Isa::neon;
    }
    return Isa::scalar;
}

const KernelTable &active_table() {
    static const KernelTable &t = table(active_isa());
    return t;
}

void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) {
        throw std::invalid_argument("kernel operands differ in length");
    }
}

}  // namespace

Isa active_isa() {
    static const Isa isa = select_isa();
    return isa;
}

double norm_sq(std::span<const double> re, std::span<const double> im) {
    require_same_size(re.size(), im.size());
    return active_table().norm_sq(re.data(), im.data(), re.size());
}

std::complex<double> inner_product(std::span<const double> a_re, std::span<const double> a_im,
                                   std::span<const double> b_re, std::span<const double> b_im) {
    require_same_size(a_re.size(), a_im.size());
    require_same_size(a_re.size(), b_re.size());
    require_same_size(a_re.size(), b_im.size());
    double r = 0.0;
    double i = 0.0;
    active_table().inner(a_re.data(), a_im.data(), b_re.data(), b_im.data(), a_re.size(), &r, &i);
    return {r, i};
}

void scale(std::span<double> re, std::span<double> im, double factor) {
    require_same_size(re.size(), im.size());
    active_table().scale(re.data(), im.data(), re.size(), factor);
}

void abs_sq(std::span<const double> re, std::span<const double> im, std::span<double> out) {
    require_same_size(re.size(), im.size());
    require_same_size(re.size(), out.size());
    active_table().abs_sq(re.data(), im.data(), out.data(), re.size());
}

}  // namespace qtm::kernels
