#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "qtmsim/ensemble.hpp"
#include "qtmsim/machine.hpp"
#include "qtmsim/rng.hpp"
#include "qtmsim/superposition.hpp"

using namespace qtm;

namespace {
std::string mdir(const std::string &f) { return std::string(QTMSIM_MACHINES_DIR) + "/" + f; }
}  // namespace

TEST_CASE("stream seeds are fixed and distinct") {
    CHECK(derive_stream_seed(1, 0) == derive_stream_seed(1, 0));
    CHECK(derive_stream_seed(1, 0) != derive_stream_seed(1, 1));
    CHECK(derive_stream_seed(1, 0) != derive_stream_seed(2, 0));
    // SplitMix64 reference value for input 0.
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("sample_count_plus is deterministic and exact on eigenstates") {
    CHECK(sample_count_plus(0.3, 1000, 5, 4) == sample_count_plus(0.3, 1000, 5, 4));
    CHECK(sample_count_plus(1.0, 777, 5, 3) == 777);
    CHECK(sample_count_plus(0.0, 777, 5, 3) == 0);
    CHECK(sample_count_plus(1.0 - 1e-12, 777, 5, 3) == 777);
    for (std::int64_t parts : {1, 2, 3, 8}) {
        auto k = sample_count_plus(0.5, 100, 9, parts);
        CHECK(k >= 0);
        CHECK(k <= 100);
    }
}

TEST_CASE("fast path reports the exact marginal") {
    Machine m = load_machine(mdir("bqp-demo.mqt"));
    EnsembleConfig cfg{4096, 3, 2, false};
    auto r = ensemble_measure(m, "0", 1, 0, cfg, 1.0 / 32);
    CHECK(r.exact_p1 == doctest::Approx(0.75));
    CHECK(r.count_plus + r.count_minus == 4096);
    CHECK(r.average == doctest::Approx((r.count_plus - r.count_minus) / 4096.0));
    CHECK(r.partitions == 2);
    auto again = ensemble_measure(m, "0", 1, 0, cfg, 1.0 / 32);
    CHECK(again.count_plus == r.count_plus);
}

TEST_CASE("slow path is independent of the partition count") {
    Machine m = load_machine(mdir("hadamard.mqt"));
    EnsembleConfig a{200, 21, 1, true};
    EnsembleConfig b{200, 21, 7, true};
    CHECK(ensemble_measure(m, "0", 1, 0, a).count_plus == ensemble_measure(m, "0", 1, 0, b).count_plus);
}

TEST_CASE("slow and fast paths agree in distribution (chi-square)") {
    Machine m = load_machine(mdir("bqp-demo.mqt"));
    const std::int64_t n = 64;
    const int reps = 1000;
    // Bins of count_plus; tails pooled so every expected count is large.
    auto bin = [](std::int64_t k) { return std::clamp<std::int64_t>(k, 40, 56) - 40; };
    std::vector<double> slow(17, 0), fast(17, 0);
    for (int r = 0; r < reps; ++r) {
        slow[bin(ensemble_measure(m, "0", 1, 0, {n, std::uint64_t(r), 1, true}).count_plus)] += 1;
        fast[bin(ensemble_measure(m, "0", 1, 0, {n, std::uint64_t(r) + 100000, 1, false}).count_plus)] += 1;
    }
    // Two-sample chi-square homogeneity test over non-empty bins.
    double stat = 0;
    int dof = -1;
    for (std::size_t i = 0; i < slow.size(); ++i) {
        double total = slow[i] + fast[i];
        if (total == 0) {
            continue;
        }
        double e = total / 2;
        stat += (slow[i] - e) * (slow[i] - e) / e + (fast[i] - e) * (fast[i] - e) / e;
        ++dof;
    }
    REQUIRE(dof > 0);
    boost::math::chi_squared dist(dof);
    double pvalue = boost::math::cdf(boost::math::complement(dist, stat));
    CAPTURE(stat);
    CHECK(pvalue > 0.001);
}

TEST_CASE("realize_mbqtm uses the required n") {
    CHECK(realize_mbqtm(1.0 / 32, 0.0455) == 1024);
    CHECK(realize_mbqtm(1.0 / 32, 0.01, TailConvention::paper_cols23) == 2018);
}

TEST_CASE("empirical error rate") {
    EnsembleConfig cfg{1, 42, 4, false};
    auto r = empirical_error_rate(0.5, 1024, 1.0 / 32, EstimateScale::probability, 100000, cfg);
    CHECK(r.trials == 100000);
    CHECK(std::abs(r.rate - 0.0455) < 0.005);
    CHECK(r.mc_sigma == doctest::Approx(std::sqrt(r.rate * (1 - r.rate) / 100000)));
    auto again = empirical_error_rate(0.5, 1024, 1.0 / 32, EstimateScale::probability, 100000, cfg);
    CHECK(again.exceedances == r.exceedances);
    CHECK(empirical_error_rate(1.0, 10, 0.1, EstimateScale::plusminus, 100, cfg).rate == 0.0);
}
