#include <doctest.h>

#include <cmath>
#include <map>
#include <string>

#include "qtmsim/errors.hpp"
#include "qtmsim/machine.hpp"
#include "qtmsim/measurement.hpp"
#include "qtmsim/superposition.hpp"

using namespace qtm;

namespace {
std::string mdir(const std::string &f) { return std::string(QTMSIM_MACHINES_DIR) + "/" + f; }
}  // namespace

TEST_CASE("qubit marginal of the hadamard output") {
    Machine m = load_machine(mdir("hadamard.mqt"));
    auto q = qubit_marginal(m, run(m, "0", 1), 0);
    CHECK(q.p1 == doctest::Approx(0.5));
    CHECK(q.p0 == doctest::Approx(0.5));
    CHECK(std::abs(q.expectation()) < 1e-15);
    CHECK_FALSE(q.eigenstate());
    // cell 5 is blank: not a qubit
    CHECK_THROWS_AS(qubit_marginal(m, run(m, "0", 1), 5), std::domain_error);
}

TEST_CASE("full observation frequencies follow |amplitude|^2") {
    Machine m = load_machine(mdir("bqp-demo.mqt"));
    auto s = run(m, "0", 1);
    Rng rng = make_rng(17);
    int ones = 0;
    const int N = 20000;
    for (int i = 0; i < N; ++i) {
        auto [c, after] = observe_full(s, rng);
        CHECK(after.size() == 1);
        ones += c.read(0) == m.symbol("1");
    }
    // p = 3/4, sigma = sqrt(3/16/N)
    CHECK(std::abs(ones / double(N) - 0.75) < 5 * std::sqrt(0.1875 / N));
}

TEST_CASE("partial observation is QTM-only") {
    Machine m = load_machine(mdir("hadamard.mqt"));
    auto s = run(m, "0", 1);
    Rng rng = make_rng(1);
    auto [sym, after] = observe_cell(m, s, 0, rng);
    CHECK(after.size() == 1);
    CHECK(marginal(m, after, 0)[sym] == doctest::Approx(1.0));
    CHECK_THROWS_AS(observe_cell(m, s, 0, rng, MachineModel::bqtm), ModelViolation);
    CHECK_THROWS_AS(observe_cell(m, s, 0, rng, MachineModel::mbqtm), ModelViolation);
}

TEST_CASE("harness enforces the machine model") {
    Machine m = load_machine(mdir("hadamard.mqt"));
    auto s = run(m, "0", 1);
    Rng rng = make_rng(2);
    NoiseModel noise(NoiseKind::uniform, 0.01);
    Harness b(m, s, MachineModel::bqtm);
    CHECK_THROWS_AS(b.observe_full(rng), ModelViolation);
    CHECK_THROWS_AS(b.observe_cell(0, rng), ModelViolation);
    CHECK_THROWS_AS(b.et_measure(0, 0.05, 0.01, rng), ModelViolation);
    // bulk measurement does not collapse: repeatable
    auto o1 = b.bulk_measure(0, noise, rng);
    auto o2 = b.bulk_measure(0, noise, rng);
    CHECK_FALSE(o1.collapsed);
    CHECK(std::abs(o1.value) < 0.01);
    CHECK(std::abs(o2.value) < 0.01);
    CHECK(b.state().size() == 2);

    Harness e(m, s, MachineModel::mbqtm);
    CHECK_THROWS_AS(e.bulk_measure(0, noise, rng), ModelViolation);
    auto r = e.et_measure(0, 0.05, 0.01, rng);
    CHECK(r.collapsed);
    CHECK(r.model == MeasurementKind::mbqtm_et);
    CHECK_THROWS_AS(e.et_measure(0, 0.05, 0.01, rng), ConsumedError);

    Harness q(m, s, MachineModel::qtm);
    CHECK_THROWS_AS(q.bulk_measure(0, noise, rng), ModelViolation);
    q.observe_cell(0, rng);
    CHECK(q.state().size() == 1);
}

TEST_CASE("bulk measurement stays strictly inside the band") {
    Rng rng = make_rng(9);
    QubitMarginal q{0.7, 0.3};
    for (NoiseKind k : {NoiseKind::uniform, NoiseKind::adversarial_edge}) {
        NoiseModel noise(k, 0.05);
        for (int i = 0; i < 10000; ++i) {
            auto o = bulk_measure(q, noise, rng);
            CHECK(std::abs(o.value - 0.4) < 0.05);
        }
    }
    QubitMarginal top{1.0, 0.0};
    NoiseModel noise(NoiseKind::adversarial_edge, 0.05);
    auto o = bulk_measure(top, noise, rng);
    CHECK(o.value == 1.0);
    CHECK(o.value_unclamped > 1.0);
}

TEST_CASE("adversarial noise alternates at the band edge") {
    Rng rng = make_rng(0);
    NoiseModel n(NoiseKind::adversarial_edge, 0.25);
    double a = n.draw(rng), b = n.draw(rng), c = n.draw(rng);
    CHECK(a > 0);
    CHECK(b < 0);
    CHECK(c > 0);
    CHECK(a < 0.25);
    CHECK(a > 0.25 - 1e-11);
    CHECK(parse_noise("adversarial-edge") == NoiseKind::adversarial_edge);
    CHECK_THROWS(parse_noise("gaussian"));
}

TEST_CASE("eigenstates measure exactly") {
    Rng rng = make_rng(4);
    for (int i = 0; i < 1000; ++i) {
        CHECK(et_measure({1.0, 0.0}, 0.4, 0.4, rng).value == 1.0);
        CHECK(et_measure({0.0, 1.0}, 0.4, 0.4, rng).value == -1.0);
    }
}

TEST_CASE("et_measure fault rate is epsilon and faults leave the band") {
    Rng rng = make_rng(5);
    QubitMarginal q{0.6, 0.4};
    const double eps = 0.1, theta = 0.05;
    const int N = 200000;
    int faults = 0;
    for (int i = 0; i < N; ++i) {
        auto o = et_measure(q, eps, theta, rng);
        if (o.fault) {
            ++faults;
            CHECK(std::abs(o.value - 0.2) >= theta);
        } else {
            CHECK(std::abs(o.value - 0.2) < theta);
        }
        CHECK(o.value >= -1.0);
        CHECK(o.value <= 1.0);
    }
    CHECK(std::abs(faults / double(N) - eps) < 5 * std::sqrt(eps * (1 - eps) / N));
}

TEST_CASE("et_measure parameter ranges") {
    Rng rng = make_rng(6);
    QubitMarginal q{0.5, 0.5};
    CHECK_THROWS_AS(et_measure(q, 0.0, 0.1, rng), std::invalid_argument);
    CHECK_THROWS_AS(et_measure(q, 0.5, 0.1, rng), std::invalid_argument);
    CHECK_THROWS_AS(et_measure(q, 0.1, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(et_measure(q, 0.1, 0.5, rng), std::invalid_argument);
}

TEST_CASE("names") {
    CHECK(kind_name(MeasurementKind::mbqtm_et) == "mbqtm-et");
    CHECK(model_name(MachineModel::bqtm) == "bqtm");
    CHECK(noise_name(NoiseKind::uniform) == "uniform");
}
