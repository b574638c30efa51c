#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "qtmsim/complexity.hpp"
#include "qtmsim/errors.hpp"
#include "qtmsim/instance.hpp"
#include "qtmsim/machine_ir.hpp"
#include "qtmsim/superposition.hpp"
#include "qtmsim/wellformed.hpp"

using namespace qtm;

namespace {
std::string mdir(const std::string &f) { return std::string(QTMSIM_MACHINES_DIR) + "/" + f; }
std::string idir(const std::string &f) { return std::string(QTMSIM_INSTANCES_DIR) + "/" + f; }

DecisionProblemInstance with_input(DecisionProblemInstance inst, std::string input) {
    inst.input = std::move(input);
    return inst;
}

bool odd(const std::string &s) {
    int ones = 0;
    for (char c : s) {
        ones += c == '1';
    }
    return ones % 2 == 1;
}

std::vector<std::string> all_words(int len) {
    std::vector<std::string> out;
    for (int bits = 0; bits < (1 << len); ++bits) {
        std::string w;
        for (int i = 0; i < len; ++i) {
            w += (bits >> i) & 1 ? '1' : '0';
        }
        out.push_back(w);
    }
    return out;
}
}  // namespace

TEST_CASE("IR parse and print round trip") {
    MachineIR ir = load_ir(mdir("zqp-demo.mqir"));
    CHECK(ir.name == "zqp-demo");
    CHECK(ir.cell("halt") == -2);
    CHECK(ir.cell("decision") == -3);
    CHECK(ir.has_init_phase);
    CHECK(ir.write == std::vector<std::string>{"decision"});
    MachineIR again = parse_ir(ir_to_text(ir));
    CHECK(ir_to_text(again) == ir_to_text(ir));
}

TEST_CASE("IR errors") {
    CHECK_THROWS_AS(parse_ir("ir x\nalphabet # 0 1\nphase WRITE\nend\nphase INIT\nend\n"), ParseError);
    CHECK_THROWS_AS(parse_ir("ir x\nalphabet # 0 1\nphase COMPUTE\n"), ParseError);
    CHECK_THROWS_AS(parse_ir("ir x\nbogus\n"), ParseError);
}

TEST_CASE("lowering yields well-formed machines with the documented step count") {
    for (const char *f : {"zqp-demo.mqir", "zqp-noinit.mqir", "zqp-half.mqir"}) {
        CAPTURE(f);
        LoweringInfo info;
        Machine m = lower(load_ir(mdir(f)), &info);
        CHECK(validate_wellformed(m).pass);
        CHECK(check_unitarity_window(m, 4, 3, 16, 1).pass);
    }
    Machine m = lower(load_ir(mdir("zqp-demo.mqir")));
    for (int len = 1; len <= 8; ++len) {
        std::string in(static_cast<std::size_t>(len), '1');
        CHECK(halting_time(m, encode_input(m, in), 1000) == 2 * len + 15);
    }
}

TEST_CASE("lowering rejects bad layouts") {
    MachineIR ir = load_ir(mdir("zqp-demo.mqir"));
    ir.cells["decision"] = -1;
    CHECK_THROWS(lower(ir));
    ir = load_ir(mdir("zqp-demo.mqir"));
    ir.cells["decision"] = -2;
    CHECK_THROWS(lower(ir));
}

TEST_CASE("instances") {
    auto inst = load_instance(idir("parity-eqp.inst"));
    CHECK(inst.cls == ClassId::EQP);
    CHECK(inst.steps() == 6);
    CHECK(inst.cell("acceptance") == 4);
    auto z = load_instance(idir("zqp-demo.inst"));
    CHECK(z.cell("halt") == -2);
    CHECK(z.steps() == 23);
    CHECK(StepBudget::poly({1, 0, 1}).evaluate(3) == 10);
    CHECK(StepBudget::fixed(7).plus(3).evaluate(100) == 10);
    CHECK_THROWS_AS(StepBudget::poly({-5, 1}).evaluate(2), std::invalid_argument);
    CHECK_THROWS_AS(parse_instance("class EQP\nmachine nope.mqt\n", "."), std::exception);
    CHECK(parse_class("ZBQP*") == ClassId::ZBQP_star);
    CHECK(class_name(ClassId::EBQP_star) == "EBQP*");
}

TEST_CASE("EQP on the parity machine, all inputs up to length 6") {
    auto base = load_instance(idir("parity-eqp.inst"));
    for (int len = 1; len <= 6; ++len) {
        for (const auto &w : all_words(len)) {
            auto inst = with_input(base, w);
            inst.cells["acceptance"] = len;
            auto v = check_eqp(inst);
            CHECK(v.in_class_evidence);
            CHECK(v.label == (odd(w) ? "accept" : "reject"));
        }
    }
}

TEST_CASE("hadamard is not EQP and not EBQP*") {
    auto h = load_instance(idir("hadamard-eqp.inst"));
    CHECK_FALSE(check_eqp(h).in_class_evidence);
    CheckOptions opt;
    CHECK_FALSE(check_ebqp_star(h, opt).in_class_evidence);
    CHECK_THROWS_AS(transform_eqp_to_ebqp_star(h), std::domain_error);
}

TEST_CASE("EQP and EBQP* agree on eigenstate machines") {
    for (const char *f : {"parity-eqp.inst", "identity-accept.inst", "identity-reject.inst"}) {
        auto inst = load_instance(idir(f));
        for (auto [eps, theta] : {std::pair{0.0455, 1.0 / 32}, std::pair{0.01, 1.0 / 64}}) {
            CheckOptions opt;
            opt.epsilon = eps;
            opt.theta = theta;
            auto a = check_eqp(inst);
            auto b = check_ebqp_star(transform_eqp_to_ebqp_star(inst), opt);
            CHECK(a.in_class_evidence == b.in_class_evidence);
            CHECK(a.label == b.label);
            opt.mode = CheckMode::empirical;
            opt.trials = 200;
            opt.seed = 3;
            auto c = check_ebqp_star(inst, opt);
            CHECK(c.label == a.label);
        }
    }
}

TEST_CASE("BBQP* on the rotation machine") {
    auto inst = load_instance(idir("bqp-demo.inst"));
    CheckOptions opt;
    opt.theta = 1.0 / 24;
    auto v = check_bbqp_star(inst, opt);
    CHECK(v.in_class_evidence);
    CHECK(v.label == "accept");
    CHECK(v.margin("p1") == doctest::Approx(0.75));
    auto r = check_bbqp_star(load_instance(idir("bqp-demo-reject.inst")), opt);
    CHECK(r.label == "reject");
    opt.mode = CheckMode::empirical;
    opt.noise = NoiseKind::adversarial_edge;
    opt.trials = 1000;
    opt.seed = 8;
    CHECK(check_bbqp_star(inst, opt).label == "accept");
    opt.source = MeasureSource::ensemble;
    CHECK(check_bbqp_star(inst, opt).label == "accept");
    CHECK(check_bqp(inst).label == "accept");
}

TEST_CASE("derive_bbqp_params certifies across (2/3, 1]") {
    for (int i = 1; i <= 100; ++i) {
        double p = 2.0 / 3.0 + (1.0 / 3.0) * i / 100.0;
        auto b = derive_bbqp_params(p, 6);
        CAPTURE(p);
        CHECK(b.certified);
        CHECK(b.theta == doctest::Approx((p - 2.0 / 3.0) * (1 - 1e-6)).epsilon(1e-12));
        CHECK(b.theta < b.theta_max);
    }
    CHECK_THROWS_AS(derive_bbqp_params(0.6), std::invalid_argument);
    CHECK_THROWS_AS(derive_bbqp_params(1.1), std::invalid_argument);
}

TEST_CASE("ZQP checker") {
    CHECK(check_zqp(load_instance(idir("zqp-demo.inst"))).label == "accept");
    CHECK(check_zqp(load_instance(idir("zqp-demo-out.inst"))).label == "reject");
    CHECK(check_zqp(load_instance(idir("zqp-noinit.inst"))).label == "accept");
    CHECK_FALSE(check_zqp(load_instance(idir("zqp-half.inst"))).in_class_evidence);
    auto bad = check_zqp(load_instance(idir("zqp-baddecision.inst")));
    CHECK_FALSE(bad.in_class_evidence);
    CheckOptions opt;
    opt.mode = CheckMode::empirical;
    opt.trials = 500;
    opt.seed = 4;
    CHECK(check_zqp(load_instance(idir("zqp-demo.inst")), opt).label == "accept");
}

TEST_CASE("ZQP to ZBQP* transform") {
    MachineIR src = load_ir(mdir("zqp-demo.mqir"));
    MachineIR out = transform_zqp_to_zbqp_star(src);
    CHECK(out.cell("accept") == src.cell("decision"));
    CHECK(out.cell("reject") < out.cell("accept"));
    CHECK(out.k > 0);
    Machine before = lower(src);
    Machine after = lower(out);
    CHECK(validate_wellformed(after).pass);
    std::vector<std::string> inputs;
    for (int len = 1; len <= 8; ++len) {
        for (const auto &w : all_words(len)) {
            if (len <= 4 || w.back() == '1') {
                inputs.push_back(w);
            }
        }
    }
    for (auto d : step_overhead(before, after, inputs)) {
        CHECK(d == out.k);
    }
    // The transform without an INIT phase inserts one.
    MachineIR noinit = transform_zqp_to_zbqp_star(load_ir(mdir("zqp-noinit.mqir")));
    CHECK(noinit.has_init_phase);
    CHECK(validate_wellformed(lower(noinit)).pass);
}

TEST_CASE("ZBQP* verdicts on the transformed instance") {
    auto z = transform_zqp_instance(load_instance(idir("zqp-demo.inst")));
    CHECK(z.cls == ClassId::ZBQP_star);
    CheckOptions opt;
    for (int len = 1; len <= 6; ++len) {
        for (const auto &w : all_words(len)) {
            auto v = check_zbqp_star(with_input(z, w), opt);
            CAPTURE(w);
            CHECK(v.in_class_evidence);
            CHECK(v.label == (odd(w) ? "accept" : "reject"));
        }
    }
    auto out = check_zbqp_star(with_input(z, "11"), opt);
    CHECK(out.margin("reject_p1") == 0.0);
    CHECK(out.margin("accept_p1") > 0.0);
    CHECK(out.margin("accept_p1") < 1.0);
    opt.mode = CheckMode::empirical;
    opt.trials = 300;
    opt.seed = 77;
    CHECK(check_zbqp_star(with_input(z, "1101"), opt).label == "accept");
    CHECK(check_zbqp_star(with_input(z, "11"), opt).label == "reject");
}

TEST_CASE("non-starred noisy checkers") {
    CheckOptions opt;
    opt.theta = 0.05;
    CHECK(check_ebqp(load_instance(idir("identity-accept.inst")), opt).label == "accept");
    CHECK(check_bbqp(load_instance(idir("bqp-demo.inst")), opt).label == "accept");
    auto z = transform_zqp_instance(load_instance(idir("zqp-demo.inst")));
    CHECK(check_zbqp(z, opt).label == "accept");
}

TEST_CASE("checker option validation") {
    auto inst = load_instance(idir("bqp-demo.inst"));
    CheckOptions opt;
    opt.epsilon = 0.5;
    CHECK_THROWS_AS(check_bbqp_star(inst, opt), std::invalid_argument);
    CHECK_THROWS_AS(check_zqp(inst), std::invalid_argument);
}
