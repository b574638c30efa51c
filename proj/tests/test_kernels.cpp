#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "qtmsim/kernels.hpp"

using namespace qtm::kernels;

namespace {

struct Data {
    std::vector<double> are, aim, bre, bim;
};

Data make_data(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Data d;
    for (std::size_t k = 0; k < n; ++k) {
        d.are.push_back(g(rng));
        d.aim.push_back(g(rng));
        d.bre.push_back(g(rng));
        d.bim.push_back(g(rng));
    }
    return d;
}

// Long-double reference, independent of every table.
std::complex<long double> oracle_inner(const Data &d) {
    std::complex<long double> acc = 0;
    for (std::size_t k = 0; k < d.are.size(); ++k) {
        std::complex<long double> a(d.are[k], d.aim[k]);
        std::complex<long double> b(d.bre[k], d.bim[k]);
        acc += std::conj(a) * b;
    }
    return acc;
}

std::vector<Isa> compiled() {
    std::vector<Isa> out{Isa::scalar};
    for (Isa isa : {Isa::avx2, Isa::neon}) {
        if (available(isa)) {
            out.push_back(isa);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("every available kernel table agrees with the long-double oracle") {
    // Odd lengths hit the remainder loops.
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u, 1000u, 1003u}) {
        Data d = make_data(n, 1000 + n);
        auto ref = oracle_inner(d);
        long double ref_norm = 0;
        for (std::size_t k = 0; k < n; ++k) {
            ref_norm += (long double)d.are[k] * d.are[k] + (long double)d.aim[k] * d.aim[k];
        }
        const double tol = 1e-12 * (1.0 + static_cast<double>(n));
        for (Isa isa : compiled()) {
            CAPTURE(isa_name(isa));
            CAPTURE(n);
            const auto &t = table(isa);
            CHECK(std::abs(t.norm_sq(d.are.data(), d.aim.data(), n) - (double)ref_norm) < tol);
            double re = 0, im = 0;
            t.inner(d.are.data(), d.aim.data(), d.bre.data(), d.bim.data(), n, &re, &im);
            CHECK(std::abs(re - (double)ref.real()) < tol);
            CHECK(std::abs(im - (double)ref.imag()) < tol);

            std::vector<double> out(n, -1.0);
            t.abs_sq(d.are.data(), d.aim.data(), out.data(), n);
            for (std::size_t k = 0; k < n; ++k) {
                CHECK(out[k] == doctest::Approx(d.are[k] * d.are[k] + d.aim[k] * d.aim[k]).epsilon(1e-15));
            }
            auto re2 = d.are;
            auto im2 = d.aim;
            t.scale(re2.data(), im2.data(), n, 0.375);
            for (std::size_t k = 0; k < n; ++k) {
                CHECK(re2[k] == d.are[k] * 0.375);
                CHECK(im2[k] == d.aim[k] * 0.375);
            }
        }
    }
}

TEST_CASE("SIMD elementwise kernels stay within 2 ulp of scalar (FMA may round differently)") {
    Data d = make_data(517, 7);
    const auto &s = table(Isa::scalar);
    for (Isa isa : compiled()) {
        const auto &t = table(isa);
        std::vector<double> a(517), b(517);
        s.abs_sq(d.are.data(), d.aim.data(), a.data(), a.size());
        t.abs_sq(d.are.data(), d.aim.data(), b.data(), b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(std::abs(a[k] - b[k]) <= 2 * std::numeric_limits<double>::epsilon() * a[k]);
        }
    }
}

TEST_CASE("dispatch") {
    CHECK(available(Isa::scalar));
    CHECK(available(active_isa()));
    CHECK_THROWS_AS(table(available(Isa::neon) ? Isa::avx2 : Isa::neon), std::invalid_argument);
    std::vector<double> re{3.0}, im{4.0};
    CHECK(norm_sq(re, im) == 25.0);
    auto z = qtm::kernels::inner_product(re, im, re, im);
    CHECK(z.real() == 25.0);
    CHECK(z.imag() == 0.0);
}
