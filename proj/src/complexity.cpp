#include "qtmsim/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "qtmsim/ensemble.hpp"
#include "qtmsim/rng.hpp"
#include "qtmsim/statistics.hpp"
#include "qtmsim/superposition.hpp"

namespace qtm {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

cpp_rational exact_rational(double x) {
    if (x == 0.0) {
        return cpp_rational(0);
    }
    int e = 0;
    double frac = std::frexp(x, &e);
    auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
    e -= 53;
    cpp_rational r(mant);
    cpp_int scale = cpp_int(1) << std::abs(e);
    if (e >= 0) {
        return r * scale;
    }
    return r / scale;
}

Verdict start(const DecisionProblemInstance &inst, const CheckOptions &opt) {
    Verdict v;
    v.cls = inst.cls;
    v.mode = opt.mode;
    if (opt.mode == CheckMode::empirical) {
        if (opt.trials < 1) {
            throw std::invalid_argument("empirical mode needs trials >= 1");
        }
        v.trials = opt.trials;
        v.seed = opt.seed;
    }
    return v;
}

void require_class(const DecisionProblemInstance &inst, std::initializer_list<ClassId> allowed, const char *op) {
    if (std::find(allowed.begin(), allowed.end(), inst.cls) == allowed.end()) {
        throw std::invalid_argument(std::string(op) + " does not apply to a " + std::string(class_name(inst.cls)) +
                                    " instance");
    }
    inst.require_cells();
}

void require_et_params(const CheckOptions &opt) {
    if (!(opt.theta > 0.0 && opt.theta < 0.5)) {
        throw std::invalid_argument("θ must lie in (0, 1/2)");
    }
    if (!(opt.epsilon > 0.0 && opt.epsilon < 0.5)) {
        throw std::invalid_argument("ε must lie in (0, 1/2)");
    }
}

Superposition evolve(const DecisionProblemInstance &inst) { return run(*inst.machine, inst.input, inst.steps()); }

bool is_one(const QubitMarginal &q) { return std::abs(q.p1 - 1.0) <= kNormTolerance; }
bool is_zero(const QubitMarginal &q) { return std::abs(q.p1) <= kNormTolerance; }

std::string eigen_label(const QubitMarginal &q) { return is_one(q) ? "accept" : "reject"; }

double failure_bound(double epsilon, std::int64_t trials) {
    return epsilon + 3.0 * std::sqrt(epsilon / static_cast<double>(trials));
}

std::int64_t ensemble_size(const CheckOptions &opt) { return opt.n ? *opt.n : realize_mbqtm(opt.theta, opt.epsilon); }

// One (ε,θ) reading of `cell` from a fresh copy of the evolved state.
double starred_reading(const DecisionProblemInstance &inst, const Superposition &s, std::int64_t cell,
                       const CheckOptions &opt, std::int64_t trial, NoiseModel &noise, bool *fault = nullptr) {
    if (opt.source == MeasureSource::ensemble) {
        auto q = qubit_marginal(*inst.machine, s, cell);
        std::int64_t n = ensemble_size(opt);
        std::int64_t plus = sample_count_plus(q.p1, n, derive_stream_seed(opt.seed, trial), 1);
        return static_cast<double>(2 * plus - n) / static_cast<double>(n);
    }
    Rng rng = make_stream(opt.seed, static_cast<std::uint64_t>(trial));
    Harness h(*inst.machine, s, MachineModel::mbqtm);
    auto o = h.et_measure(cell, opt.epsilon, opt.theta, rng, &noise);
    if (fault) {
        *fault = o.fault;
    }
    return o.value;
}

}  // namespace

std::string_view mode_name(CheckMode m) { return m == CheckMode::exact ? "exact" : "empirical"; }

CheckMode parse_mode(std::string_view name) {
    if (name == "exact") {
        return CheckMode::exact;
    }
    if (name == "empirical") {
        return CheckMode::empirical;
    }
    throw std::invalid_argument("unknown mode '" + std::string(name) + "' (exact|empirical)");
}

std::string_view source_name(MeasureSource s) { return s == MeasureSource::abstract ? "abstract" : "ensemble"; }

MeasureSource parse_source(std::string_view name) {
    if (name == "abstract") {
        return MeasureSource::abstract;
    }
    if (name == "ensemble") {
        return MeasureSource::ensemble;
    }
    throw std::invalid_argument("unknown measurement source '" + std::string(name) + "' (abstract|ensemble)");
}

double Verdict::margin(std::string_view name) const {
    for (const auto &[k, v] : margins) {
        if (k == name) {
            return v;
        }
    }
    throw std::out_of_range("verdict has no margin '" + std::string(name) + "'");
}

Verdict check_eqp(const DecisionProblemInstance &inst, const CheckOptions &opt) {
    require_class(inst, {ClassId::EQP, ClassId::EBQP, ClassId::EBQP_star}, "check_eqp");
    Verdict v = start(inst, opt);
    v.cls = ClassId::EQP;
    const auto s = evolve(inst);
    const auto cell = inst.cell("acceptance");
    const auto q = qubit_marginal(*inst.machine, s, cell);
    v.margins = {{"p1", q.p1}, {"p0", q.p0}, {"distance_to_eigenstate", std::min(q.p1, q.p0)}};
    if (opt.mode == CheckMode::exact) {
        v.in_class_evidence = q.eigenstate();
        v.label = v.in_class_evidence ? eigen_label(q) : "none";
        if (!v.in_class_evidence) {
            v.notes.push_back("acceptance cell is not in an eigenstate; no outcome has probability 1");
        }
        return v;
    }
    const SymbolId one = inst.machine->symbol("1");
    std::int64_t ones = 0;
    for (std::int64_t t = 0; t < opt.trials; ++t) {
        Rng rng = make_stream(opt.seed, static_cast<std::uint64_t>(t));
        Harness h(*inst.machine, s, MachineModel::qtm);
        ones += h.observe_cell(cell, rng) == one ? 1 : 0;
    }
    v.margins.emplace_back("frequency_1", static_cast<double>(ones) / static_cast<double>(opt.trials));
    v.in_class_evidence = ones == 0 || ones == opt.trials;
    v.label = !v.in_class_evidence ? "none" : (ones == opt.trials ? "accept" : "reject");
    return v;
}

Verdict check_ebqp_star(const DecisionProblemInstance &inst, const CheckOptions &opt) {
    require_class(inst, {ClassId::EBQP_star, ClassId::EQP, ClassId::EBQP}, "check_ebqp_star");
    require_et_params(opt);
    Verdict v = start(inst, opt);
    v.cls = ClassId::EBQP_star;
    const auto s = evolve(inst);
    const auto cell = inst.cell("acceptance");
    const auto q = qubit_marginal(*inst.machine, s, cell);
    v.margins = {{"p1", q.p1}, {"theta", opt.theta}, {"epsilon", opt.epsilon}};
    if (opt.mode == CheckMode::exact) {
        if (q.eigenstate()) {
            double value = is_one(q) ? 1.0 : -1.0;
            v.margins.emplace_back("value", value);
            v.margins.emplace_back("threshold", value > 0 ? 1.0 - opt.theta : -1.0 + opt.theta);
            v.in_class_evidence = true;
            v.label = eigen_label(q);
        } else {
            v.notes.push_back("non-eigenstate: no (ε,θ)-measurement outcome has probability 1");
        }
        return v;
    }
    NoiseModel noise(opt.noise, opt.theta);
    double lo = 1.0;
    double hi = -1.0;
    std::int64_t above = 0;
    std::int64_t below = 0;
    std::int64_t faults = 0;
    for (std::int64_t t = 0; t < opt.trials; ++t) {
        bool fault = false;
        double x = starred_reading(inst, s, cell, opt, t, noise, &fault);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        above += x > 1.0 - opt.theta ? 1 : 0;
        below += x < -1.0 + opt.theta ? 1 : 0;
        faults += fault ? 1 : 0;
    }
    v.margins.emplace_back("min_value", lo);
    v.margins.emplace_back("max_value", hi);
    v.margins.emplace_back("faults", static_cast<double>(faults));
    if (above == opt.trials) {
        v.in_class_evidence = true;
        v.label = "accept";
    } else if (below == opt.trials) {
        v.in_class_evidence = true;
        v.label = "reject";
    }
    return v;
}

Verdict check_ebqp(const DecisionProblemInstance &inst, const CheckOptions &opt) {
    require_class(inst, {ClassId::EBQP, ClassId::EQP, ClassId::EBQP_star}, "check_ebqp");
    if (!(opt.theta > 0.0 && opt.theta < 0.5)) {
        throw std::invalid_argument("θ must lie in (0, 1/2)");
    }
    Verdict v = start(inst, opt);
    v.cls = ClassId::EBQP;
    const auto s = evolve(inst);
    const auto cell = inst.cell("acceptance");
    const auto q = qubit_marginal(*inst.machine, s, cell);
    v.margins = {{"p1", q.p1}, {"value", q.expectation()}, {"theta", opt.theta}};
    if (opt.mode == CheckMode::exact) {
        // |α|²-|β|² + e with |e| < θ clears ±(1-θ) for every e only at ±1.
        v.in_class_evidence = q.eigenstate();
        v.label = v.in_class_evidence ? eigen_label(q) : "none";
        return v;
    }
    NoiseModel noise(opt.noise, opt.theta);
    Harness h(*inst.machine, s, MachineModel::bqtm);
    std::int64_t above = 0;
    std::int64_t below = 0;
    for (std::int64_t t = 0; t < opt.trials; ++t) {
        Rng rng = make_stream(opt.seed, static_cast<std::uint64_t>(t));
        double x = h.bulk_measure(cell, noise, rng).value;
        above += x > 1.0 - opt.theta ? 1 : 0;
        below += x < -1.0 + opt.theta ? 1 : 0;
    }
    if (above == opt.trials) {
        v.in_class_evidence = true;
        v.label = "accept";
    } else if (below == opt.trials) {
        v.in_class_evidence = true;
        v.label = "reject";
    }
    return v;
}

Verdict check_bqp(const DecisionProblemInstance &inst, const CheckOptions &opt) {
    require_class(inst, {ClassId::BQP, ClassId::BBQP, ClassId::BBQP_star}, "check_bqp");
    Verdict v = start(inst, opt);
    v.cls = ClassId::BQP;
    const auto s = evolve(inst);
    const auto cell = inst.cell("acceptance");
    const auto q = qubit_marginal(*inst.machine, s, cell);
    v.margins = {{"p1", q.p1}, {"accept_slack", q.p1 - 2.0 / 3.0}, {"reject_slack", 1.0 / 3.0 - q.p1}};
    double freq = q.p1;
    if (opt.mode == CheckMode::empirical) {
        const SymbolId one = inst.machine->symbol("1");
        std::int64_t ones = 0;
        for (std::int64_t t = 0; t < opt.trials; ++t) {
            Rng rng = make_stream(opt.seed, static_cast<std::uint64_t>(t));
            Harness h(*inst.machine, s, MachineModel::qtm);
            ones += h.observe_cell(cell, rng) == one ? 1 : 0;
        }
        freq = static_cast<double>(ones) / static_cast<double>(opt.trials);
        v.margins.emplace_back("frequency_1", freq);
    }
    if (freq > 2.0 / 3.0 + kStrictGuard) {
        v.in_class_evidence = true;
        v.label = "accept";
    } else if (freq < 1.0 / 3.0 - kStrictGuard) {
        v.in_class_evidence = true;
        v.label = "reject";
    } else {
        v.notes.push_back("acceptance probability inside [1/3, 2/3]");
    }
    return v;
}

Verdict check_bbqp_star(const DecisionProblemInstance &inst, const CheckOptions &opt) {
    require_class(inst, {ClassId::BBQP_star, ClassId::BQP, ClassId::BBQP}, "check_bbqp_star");
    require_et_params(opt);
    Verdict v = start(inst, opt);
    v.cls = ClassId::BBQP_star;
    const auto s = evolve(inst);
    const auto cell = inst.cell("acceptance");
    const auto q = qubit_marginal(*inst.machine, s, cell);
    const double value = q.expectation();
    const double lower = value - opt.theta;
    const double upper = value + opt.theta;
    v.margins = {{"p1", q.p1},     {"value", value},  {"lower", lower},           {"upper", upper},
                 {"theta", opt.theta}, {"epsilon", opt.epsilon}, {"threshold", 1.0 / 3.0}};
    if (opt.mode == CheckMode::exact) {
        if (lower > 1.0 / 3.0 + kStrictGuard) {
            v.in_class_evidence = true;
            v.label = "accept";
            v.margins.emplace_back("slack", lower - 1.0 / 3.0);
        } else if (upper < -1.0 / 3.0 - kStrictGuard) {
            v.in_class_evidence = true;
            v.label = "reject";
            v.margins.emplace_back("slack", -1.0 / 3.0 - upper);
        } else {
            v.margins.emplace_back("slack", std::max(lower - 1.0 / 3.0, -1.0 / 3.0 - upper));
            v.notes.push_back("θ band crosses ±1/3; exact check inconclusive, use empirical mode");
        }
        return v;
    }
    NoiseModel noise(opt.noise, opt.theta);
    std::int64_t above = 0;
    std::int64_t below = 0;
    for (std::int64_t t = 0; t < opt.trials; ++t) {
        double x = starred_reading(inst, s, cell, opt, t, noise);
        above += x > 1.0 / 3.0 ? 1 : 0;
        below += x < -1.0 / 3.0 ? 1 : 0;
    }
    const double n_trials = static_cast<double>(opt.trials);
    const double bound = failure_bound(opt.epsilon, opt.trials);
    const double fail_accept = 1.0 - static_cast<double>(above) / n_trials;
    const double fail_reject = 1.0 - static_cast<double>(below) / n_trials;
    v.margins.emplace_back("above_fraction", static_cast<double>(above) / n_trials);
    v.margins.emplace_back("below_fraction", static_cast<double>(below) / n_trials);
    v.margins.emplace_back("failure_bound", bound);
    if (opt.source == MeasureSource::ensemble) {
        v.margins.emplace_back("n", static_cast<double>(ensemble_size(opt)));
    }
    if (fail_accept <= bound) {
        v.in_class_evidence = true;
        v.label = "accept";
    } else if (fail_reject <= bound) {
        v.in_class_evidence = true;
        v.label = "reject";
    }
    return v;
}

Verdict check_bbqp(const DecisionProblemInstance &inst, const CheckOptions &opt) {
    require_class(inst, {ClassId::BBQP, ClassId::BQP, ClassId::BBQP_star}, "check_bbqp");
    if (!(opt.theta > 0.0 && opt.theta < 0.5)) {
        throw std::invalid_argument("θ must lie in (0, 1/2)");
    }
    Verdict v = start(inst, opt);
    v.cls = ClassId::BBQP;
    const auto s = evolve(inst);
    const auto cell = inst.cell("acceptance");
    const auto q = qubit_marginal(*inst.machine, s, cell);
    const double value = q.expectation();
    v.margins = {{"p1", q.p1}, {"value", value}, {"theta", opt.theta}};
    if (opt.mode == CheckMode::exact) {
        // value + e > 1/3 - θ for every |e| < θ exactly when value >= 1/3.
        if (value >= 1.0 / 3.0 - kStrictGuard) {
            v.in_class_evidence = true;
            v.label = "accept";
        } else if (value <= -1.0 / 3.0 + kStrictGuard) {
            v.in_class_evidence = true;
            v.label = "reject";
        }
        return v;
    }
    NoiseModel noise(opt.noise, opt.theta);
    Harness h(*inst.machine, s, MachineModel::bqtm);
    std::int64_t above = 0;
    std::int64_t below = 0;
    for (std::int64_t t = 0; t < opt.trials; ++t) {
        Rng rng = make_stream(opt.seed, static_cast<std::uint64_t>(t));
        double x = h.bulk_measure(cell, noise, rng).value;
        above += x > 1.0 / 3.0 - opt.theta ? 1 : 0;
        below += x < -1.0 / 3.0 + opt.theta ? 1 : 0;
    }
    if (above == opt.trials) {
        v.in_class_evidence = true;
        v.label = "accept";
    } else if (below == opt.trials) {
        v.in_class_evidence = true;
        v.label = "reject";
    }
    return v;
}

Verdict check_zqp(const DecisionProblemInstance &inst, const CheckOptions &opt) {
    require_class(inst, {ClassId::ZQP}, "check_zqp");
    Verdict v = start(inst, opt);
    const auto s = evolve(inst);
    const auto halt = inst.cell("halt");
    const auto decision = inst.cell("decision");
    const auto qh = qubit_marginal(*inst.machine, s, halt);
    v.margins = {{"p_halt", qh.p1}, {"halt_slack", qh.p1 - 0.5}};
    if (opt.mode == CheckMode::exact) {
        if (qh.p1 <= kNormTolerance) {
            v.notes.push_back("halt cell never reads 1");
            return v;
        }
        const auto conditioned = condition(s, halt, inst.machine->symbol("1"));
        const auto qd = qubit_marginal(*inst.machine, conditioned, decision);
        v.margins.emplace_back("decision_p1", qd.p1);
        bool halts = qh.p1 > 0.5 + kStrictGuard;
        if (!halts) {
            v.notes.push_back("P(halt = 1) is not more than 1/2");
        }
        if (!qd.eigenstate()) {
            v.notes.push_back("decision cell is not in an eigenstate given halt = 1");
        }
        v.in_class_evidence = halts && qd.eigenstate();
        v.label = v.in_class_evidence ? eigen_label(qd) : "none";
        return v;
    }
    const SymbolId one = inst.machine->symbol("1");
    std::int64_t halted = 0;
    std::int64_t ones = 0;
    for (std::int64_t t = 0; t < opt.trials; ++t) {
        Rng rng = make_stream(opt.seed, static_cast<std::uint64_t>(t));
        Harness h(*inst.machine, s, MachineModel::qtm);
        if (h.observe_cell(halt, rng) == one) {
            ++halted;
            ones += h.observe_cell(decision, rng) == one ? 1 : 0;
        }
    }
    double freq = static_cast<double>(halted) / static_cast<double>(opt.trials);
    v.margins.emplace_back("halt_frequency", freq);
    v.margins.emplace_back("decision_frequency_1",
                           halted ? static_cast<double>(ones) / static_cast<double>(halted) : 0.0);
    bool agree = halted > 0 && (ones == 0 || ones == halted);
    v.in_class_evidence = freq > 0.5 && agree;
    v.label = v.in_class_evidence ? (ones == halted ? "accept" : "reject") : "none";
    return v;
}

Verdict check_zbqp_star(const DecisionProblemInstance &inst, const CheckOptions &opt) {
    require_class(inst, {ClassId::ZBQP_star, ClassId::ZBQP}, "check_zbqp_star");
    require_et_params(opt);
    Verdict v = start(inst, opt);
    v.cls = ClassId::ZBQP_star;
    const auto s = evolve(inst);
    const auto halt = inst.cell("halt");
    const auto accept = inst.cell("accept");
    const auto reject = inst.cell("reject");
    const auto qh = qubit_marginal(*inst.machine, s, halt);
    const auto qa = qubit_marginal(*inst.machine, s, accept);
    const auto qr = qubit_marginal(*inst.machine, s, reject);
    const std::int64_t n = ensemble_size(opt);
    const double achieved = achieved_epsilon(opt.theta, n);
    v.margins = {{"p_halt", qh.p1},
                 {"halt_value", qh.expectation()},
                 {"halt_slack", qh.expectation() - opt.theta},
                 {"n", static_cast<double>(n)},
                 {"epsilon_achieved", achieved},
                 {"accept_p1", qa.p1},
                 {"reject_p1", qr.p1}};
    const bool accept_eigen = is_one(qa);
    const bool reject_eigen = is_zero(qr);
    if (accept_eigen && reject_eigen) {
        v.notes.push_back("accept and reject cells both read as eigenstates; no decision");
    }
    if (opt.mode == CheckMode::exact) {
        bool halt_ok = qh.expectation() - opt.theta > kStrictGuard && achieved <= opt.epsilon * (1.0 + 1e-5);
        if (!halt_ok) {
            v.notes.push_back("halt average is not more than 0 with confidence 1-ε at this n");
        }
        v.in_class_evidence = halt_ok && (accept_eigen != reject_eigen);
        v.label = !v.in_class_evidence ? "none" : (accept_eigen ? "accept" : "reject");
        return v;
    }
    NoiseModel noise(opt.noise, opt.theta);
    std::int64_t halt_pass = 0;
    std::int64_t accept_plus = 0;
    std::int64_t reject_minus = 0;
    for (std::int64_t t = 0; t < opt.trials; ++t) {
        // Each (ε,θ)-measurement consumes its run, so every cell is read from its own run.
        halt_pass += starred_reading(inst, s, halt, opt, 3 * t, noise) > 0.0 ? 1 : 0;
        accept_plus += starred_reading(inst, s, accept, opt, 3 * t + 1, noise) == 1.0 ? 1 : 0;
        reject_minus += starred_reading(inst, s, reject, opt, 3 * t + 2, noise) == -1.0 ? 1 : 0;
    }
    const double n_trials = static_cast<double>(opt.trials);
    const double bound = failure_bound(opt.epsilon, opt.trials);
    v.margins.emplace_back("halt_failure_fraction", 1.0 - static_cast<double>(halt_pass) / n_trials);
    v.margins.emplace_back("failure_bound", bound);
    v.margins.emplace_back("accept_plus_fraction", static_cast<double>(accept_plus) / n_trials);
    v.margins.emplace_back("reject_minus_fraction", static_cast<double>(reject_minus) / n_trials);
    bool halt_ok = 1.0 - static_cast<double>(halt_pass) / n_trials <= bound;
    bool acc = accept_plus == opt.trials;
    bool rej = reject_minus == opt.trials;
    v.in_class_evidence = halt_ok && (acc != rej);
    v.label = !v.in_class_evidence ? "none" : (acc ? "accept" : "reject");
    return v;
}

Verdict check_zbqp(const DecisionProblemInstance &inst, const CheckOptions &opt) {
    require_class(inst, {ClassId::ZBQP, ClassId::ZBQP_star}, "check_zbqp");
    if (!(opt.theta > 0.0 && opt.theta < 0.5)) {
        throw std::invalid_argument("θ must lie in (0, 1/2)");
    }
    Verdict v = start(inst, opt);
    v.cls = ClassId::ZBQP;
    const auto s = evolve(inst);
    const auto halt = inst.cell("halt");
    const auto accept = inst.cell("accept");
    const auto reject = inst.cell("reject");
    const auto qh = qubit_marginal(*inst.machine, s, halt);
    const auto qa = qubit_marginal(*inst.machine, s, accept);
    const auto qr = qubit_marginal(*inst.machine, s, reject);
    v.margins = {{"p_halt", qh.p1},
                 {"halt_value", qh.expectation()},
                 {"halt_slack", qh.expectation() - opt.theta},
                 {"accept_p1", qa.p1},
                 {"reject_p1", qr.p1}};
    if (opt.mode == CheckMode::exact) {
        // value + e > 0 for every |e| < θ exactly when value >= θ.
        bool halt_ok = qh.expectation() - opt.theta >= -kStrictGuard;
        bool acc = is_one(qa);
        bool rej = is_zero(qr);
        v.in_class_evidence = halt_ok && (acc != rej);
        v.label = !v.in_class_evidence ? "none" : (acc ? "accept" : "reject");
        return v;
    }
    NoiseModel noise(opt.noise, opt.theta);
    Harness h(*inst.machine, s, MachineModel::bqtm);
    std::int64_t halt_pass = 0;
    std::int64_t acc = 0;
    std::int64_t rej = 0;
    for (std::int64_t t = 0; t < opt.trials; ++t) {
        Rng rng = make_stream(opt.seed, static_cast<std::uint64_t>(t));
        halt_pass += h.bulk_measure(halt, noise, rng).value > 0.0 ? 1 : 0;
        acc += h.bulk_measure(accept, noise, rng).value > 1.0 - opt.theta ? 1 : 0;
        rej += h.bulk_measure(reject, noise, rng).value < -1.0 + opt.theta ? 1 : 0;
    }
    bool all_acc = acc == opt.trials;
    bool all_rej = rej == opt.trials;
    v.in_class_evidence = halt_pass == opt.trials && (all_acc != all_rej);
    v.label = !v.in_class_evidence ? "none" : (all_acc ? "accept" : "reject");
    return v;
}

Verdict check(const DecisionProblemInstance &inst, const CheckOptions &opt) {
    switch (inst.cls) {
        case ClassId::EQP:
            return check_eqp(inst, opt);
        case ClassId::EBQP:
            return check_ebqp(inst, opt);
        case ClassId::EBQP_star:
            return check_ebqp_star(inst, opt);
        case ClassId::BQP:
            return check_bqp(inst, opt);
        case ClassId::BBQP:
            return check_bbqp(inst, opt);
        case ClassId::BBQP_star:
            return check_bbqp_star(inst, opt);
        case ClassId::ZQP:
            return check_zqp(inst, opt);
        case ClassId::ZBQP:
            return check_zbqp(inst, opt);
        case ClassId::ZBQP_star:
            return check_zbqp_star(inst, opt);
    }
    throw std::logic_error("unhandled class");
}

BbqpParams derive_bbqp_params(double p_bound, int shrink_digits) {
    const cpp_rational p = exact_rational(p_bound);
    const cpp_rational two_thirds(2, 3);
    const cpp_rational third(1, 3);
    if (!(p > two_thirds) || p > 1) {
        throw std::invalid_argument("derive_bbqp_params needs 2/3 < p <= 1");
    }
    if (shrink_digits < 1 || shrink_digits > 30) {
        throw std::invalid_argument("shrink_digits must lie in [1, 30]");
    }
    const cpp_rational theta_max = p - two_thirds;
    const cpp_rational shrink = cpp_rational(1) - cpp_rational(cpp_int(1), boost::multiprecision::pow(cpp_int(10), shrink_digits));
    const cpp_rational theta = theta_max * shrink;
    const cpp_rational lhs = 2 * p - 1 - theta;     // |α|²-|β|²-θ
    const cpp_rational mid = 2 * p - 1 - p + two_thirds;  // = p - 1/3

    BbqpParams out;
    out.p = p_bound;
    out.theta_max = static_cast<double>(theta_max);
    out.theta = static_cast<double>(theta);
    out.trace = {{"2p-1-theta", static_cast<double>(lhs)},
                 {"2p-1-p+2/3", static_cast<double>(mid)},
                 {"1/3", 1.0 / 3.0},
                 {"step1_gap", static_cast<double>(lhs - mid)},
                 {"step2_gap", static_cast<double>(mid - third)}};
    out.certified = lhs > mid && mid > third;
    return out;
}

DecisionProblemInstance transform_eqp_to_ebqp_star(const DecisionProblemInstance &inst) {
    if (inst.cls != ClassId::EQP) {
        throw std::invalid_argument("transform_eqp_to_ebqp_star needs an EQP instance");
    }
    Verdict v = check_eqp(inst);
    if (!v.in_class_evidence) {
        throw std::domain_error("eigenstate precondition unmet: acceptance cell has p1 = " +
                                std::to_string(v.margin("p1")));
    }
    DecisionProblemInstance out = inst;
    out.cls = ClassId::EBQP_star;
    return out;
}

MachineIR transform_zqp_to_zbqp_star(const MachineIR &ir) {
    const std::int64_t decision = ir.cell("decision");
    ir.cell("halt");
    if (std::find(ir.write.begin(), ir.write.end(), "decision") == ir.write.end()) {
        throw std::invalid_argument("IR '" + ir.name + "' has no WRITE step for the decision cell");
    }
    std::int64_t lowest = 0;
    for (const auto &[role, idx] : ir.cells) {
        lowest = std::min(lowest, idx);
    }
    MachineIR out = ir;
    out.name = ir.name + "-zbqp-star";
    out.cells.erase("decision");
    out.cells["accept"] = decision;
    out.cells["reject"] = lowest - 1;

    std::vector<std::pair<std::string, std::string>> init = {{"accept", "1"}, {"reject", "0"}};
    for (const auto &entry : ir.init) {
        if (entry.first != "decision") {
            init.push_back(entry);
        }
    }
    out.init = std::move(init);
    out.has_init_phase = true;

    std::vector<std::string> write;
    for (const auto &role : ir.write) {
        if (role == "decision") {
            write.push_back("accept");
            write.push_back("reject");
        } else {
            write.push_back(role);
        }
    }
    out.write = std::move(write);

    LoweringInfo before;
    LoweringInfo after;
    lower(ir, &before);
    lower(out, &after);
    out.k = (after.init_steps + after.write_steps) - (before.init_steps + before.write_steps);
    return out;
}

DecisionProblemInstance transform_zqp_instance(const DecisionProblemInstance &inst) {
    if (inst.cls != ClassId::ZQP || !inst.ir) {
        throw std::invalid_argument("transform_zqp_instance needs a ZQP instance built from an IR");
    }
    DecisionProblemInstance out = inst;
    out.ir = transform_zqp_to_zbqp_star(*inst.ir);
    out.machine = std::make_shared<const Machine>(lower(*out.ir));
    out.machine_path.clear();
    out.cls = ClassId::ZBQP_star;
    out.cells = out.ir->cells;
    out.budget = inst.budget.plus(out.ir->k);
    return out;
}

std::vector<std::int64_t> step_overhead(const Machine &original, const Machine &transformed,
                                        const std::vector<std::string> &inputs, std::int64_t max_steps) {
    std::vector<std::int64_t> out;
    for (const auto &x : inputs) {
        auto a = halting_time(original, encode_input(original, x), max_steps);
        auto b = halting_time(transformed, encode_input(transformed, x), max_steps);
        if (a < 0 || b < 0) {
            throw std::runtime_error("machine does not halt on input '" + x + "' within " +
                                     std::to_string(max_steps) + " steps");
        }
        out.push_back(b - a);
    }
    return out;
}

}  // namespace qtm
