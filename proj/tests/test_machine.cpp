#include <doctest.h>

#include <cmath>
#include <string>

#include "qtmsim/amplitude.hpp"
#include "qtmsim/errors.hpp"
#include "qtmsim/machine.hpp"
#include "qtmsim/superposition.hpp"

using namespace qtm;

namespace {
std::string mdir(const std::string &f) { return std::string(QTMSIM_MACHINES_DIR) + "/" + f; }
}  // namespace

TEST_CASE("amplitude expressions") {
    auto v = [](const char *s) { return parse_amplitude(s).value; };
    CHECK(v("1") == std::complex<double>(1, 0));
    CHECK(v("-1/2") == std::complex<double>(-0.5, 0));
    CHECK(v("1/sqrt(2)").real() == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(v("sqrt(3)/2").real() == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-15));
    CHECK(v("3/5*sqrt(2)").real() == doctest::Approx(0.6 * std::sqrt(2.0)).epsilon(1e-15));
    auto z = v("-1/2 + (sqrt(3)/2)i");
    CHECK(z.real() == -0.5);
    CHECK(z.imag() == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-15));
    CHECK(v("i") == std::complex<double>(0, 1));
    CHECK(v(" - i ") == std::complex<double>(0, -1));
    CHECK(parse_amplitude("1/sqrt(2)").source == "1/sqrt(2)");
}

TEST_CASE("amplitude errors carry a position") {
    for (const char *bad : {"", "1/0", "sqrt(", "1 +", "abc", "99999999999999999999999", "1/sqrt(0)"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_amplitude(bad), ParseError);
    }
    try {
        parse_amplitude("1 + x");
        FAIL("no throw");
    } catch (const ParseError &e) {
        CHECK(e.position() == 4);
    }
}

TEST_CASE("machine file round trip") {
    Machine m = load_machine(mdir("hadamard.mqt"));
    CHECK(m.name() == "hadamard");
    CHECK(m.symbol_count() == 3);
    CHECK(m.state_count() == 2);
    CHECK(m.entry_count() == 5);
    CHECK(m.column(m.state("q0"), m.symbol("0")).size() == 2);
    Machine again = parse_machine(m.to_text());
    CHECK(again.to_text() == m.to_text());
    CHECK(again.entry_count() == m.entry_count());
}

TEST_CASE("identity self-loops on the final state are accepted but not stored") {
    Machine m = load_machine(mdir("identity.mqt"));
    CHECK(m.entry_count() == 3);
}

TEST_CASE("machine parse errors name the line") {
    CHECK_THROWS_AS(load_machine(mdir("fixtures/no-final.mqt")), ParseError);
    const char *dup =
        "machine d\nalphabet # 0 1\nstates q0 qf\ninitial q0\nfinal qf\ndirections LR\n"
        "rule q0 0 -> 1 0 qf R ; 1 0 qf R\n";
    try {
        parse_machine(dup);
        FAIL("no throw");
    } catch (const ParseError &e) {
        CHECK(e.line() == 7);
    }
    const char *bad_dir =
        "machine d\nalphabet # 0 1\nstates q0 qf\ninitial q0\nfinal qf\ndirections LR\n"
        "rule q0 0 -> 1 0 qf N\n";
    CHECK_THROWS_AS(parse_machine(bad_dir), ParseError);
    const char *from_final =
        "machine d\nalphabet # 0 1\nstates q0 qf\ninitial q0\nfinal qf\ndirections LNR\n"
        "rule qf 0 -> 1 1 qf N\n";
    CHECK_THROWS_AS(parse_machine(from_final), ParseError);
    CHECK_THROWS(load_machine(mdir("does-not-exist.mqt")));
}

TEST_CASE("configurations keep a canonical tape") {
    Configuration c;
    c.write(3, 1);
    c.write(-2, 2);
    c.write(3, kBlank);
    CHECK(c.tape.size() == 1);
    CHECK(c.read(-2) == 2);
    CHECK(c.read(3) == kBlank);
    Configuration d;
    d.write(-2, 2);
    CHECK(c == d);
}

TEST_CASE("hadamard step matches hand-computed amplitudes") {
    Machine m = load_machine(mdir("hadamard.mqt"));
    const double r = 1 / std::sqrt(2.0);
    for (const char *in : {"0", "1"}) {
        auto s = run(m, in, 1);
        REQUIRE(s.size() == 2);
        CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-15));
        Configuration c0 = Configuration::initial(m, encode_input(m, "0"));
        c0.state = m.final_state();
        Configuration c1 = c0;
        c1.write(0, m.symbol("1"));
        CHECK(std::abs(s.amplitude_of(c0) - std::complex<double>(r, 0)) < 1e-15);
        double sign = std::string(in) == "0" ? 1.0 : -1.0;
        CHECK(std::abs(s.amplitude_of(c1) - std::complex<double>(sign * r, 0)) < 1e-15);
        auto p = marginal(m, s, 0);
        CHECK(p[m.symbol("1")] == doctest::Approx(0.5));
        CHECK(halted_mass(m, s) == doctest::Approx(1.0));
    }
}

TEST_CASE("two hadamard inputs interfere to an orthogonal pair") {
    Machine m = load_machine(mdir("hadamard.mqt"));
    auto a = run(m, "0", 1);
    auto b = run(m, "1", 1);
    CHECK(std::abs(a.inner(b)) < 1e-15);
    auto sum = a.combine(1.0, b, 1.0).scaled(1 / std::sqrt(2.0));
    // (H|0> + H|1>)/sqrt2 = |0>
    REQUIRE(sum.size() == 1);
    CHECK(std::abs(sum.amplitude(0)) == doctest::Approx(1.0));
}

TEST_CASE("final state is stationary and halting time is exact") {
    Machine m = load_machine(mdir("parity.mqt"));
    for (std::string in : {"1", "10", "1101", "11111111"}) {
        auto ids = encode_input(m, in);
        CHECK(halting_time(m, ids, 100) == static_cast<std::int64_t>(in.size()) + 1);
        auto s = run(m, in, static_cast<std::int64_t>(in.size()) + 1);
        auto later = run(m, in, static_cast<std::int64_t>(in.size()) + 20);
        REQUIRE(s.size() == 1);
        CHECK(s.config(0) == later.config(0));
        int ones = 0;
        for (char ch : in) {
            ones += ch == '1';
        }
        CHECK(marginal(m, s, static_cast<std::int64_t>(in.size()))[m.symbol(ones % 2 ? "1" : "0")] == 1.0);
    }
    CHECK(halting_time(m, encode_input(m, "111"), 2) == -1);
}

TEST_CASE("condition renormalises and refuses empty outcomes") {
    Machine m = load_machine(mdir("hadamard.mqt"));
    auto s = run(m, "0", 1);
    auto c = condition(s, 0, m.symbol("1"));
    CHECK(c.size() == 1);
    CHECK(c.norm_sq() == doctest::Approx(1.0));
    CHECK_THROWS_AS(condition(s, 0, kBlank), std::domain_error);
}

TEST_CASE("consumed superpositions refuse further use") {
    Superposition s = Superposition::basis(Configuration{});
    s.require_live("x");
    s.consume();
    CHECK_THROWS_AS(s.require_live("x"), ConsumedError);
}

TEST_CASE("input encoding") {
    Machine m = load_machine(mdir("parity.mqt"));
    CHECK(encode_input(m, "101").size() == 3);
    CHECK(encode_input(m, "").empty());
    CHECK_THROWS(encode_input(m, "102"));
}
