#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtmsim/instance.hpp"
#include "qtmsim/machine_ir.hpp"
#include "qtmsim/measurement.hpp"

namespace qtm {

/// Guard band for strict inequalities on computed marginals.
inline constexpr double kStrictGuard = 1e-9;

enum class CheckMode { exact, empirical };
std::string_view mode_name(CheckMode m);
CheckMode parse_mode(std::string_view name);

/// Where an empirical starred checker gets its readings: the abstract
/// (ε,θ)-measurement, or an n-member ensemble average.
enum class MeasureSource { abstract, ensemble };
std::string_view source_name(MeasureSource s);
MeasureSource parse_source(std::string_view name);

struct CheckOptions {
    CheckMode mode = CheckMode::exact;
    double epsilon = 0.0455;
    double theta = 1.0 / 32;
    std::optional<std::int64_t> n;  // ensemble size; default realize_mbqtm(θ, ε)
    std::int64_t trials = 1000;
    std::uint64_t seed = 0;
    NoiseKind noise = NoiseKind::uniform;
    MeasureSource source = MeasureSource::abstract;
};

/// Evidence on one input. A checker never certifies language membership.
struct Verdict {
    ClassId cls = ClassId::EQP;
    bool in_class_evidence = false;
    std::string label = "none";  // accept | reject | none
    std::vector<std::pair<std::string, double>> margins;
    CheckMode mode = CheckMode::exact;
    std::optional<std::int64_t> trials;  // empirical only
    std::optional<std::uint64_t> seed;   // empirical only
    std::optional<std::int64_t> k;       // transforms only
    std::vector<std::string> notes;

    double margin(std::string_view name) const;  // throws std::out_of_range
};

Verdict check_eqp(const DecisionProblemInstance &inst, const CheckOptions &opt = {});
Verdict check_ebqp(const DecisionProblemInstance &inst, const CheckOptions &opt);
Verdict check_ebqp_star(const DecisionProblemInstance &inst, const CheckOptions &opt);
Verdict check_bqp(const DecisionProblemInstance &inst, const CheckOptions &opt = {});
Verdict check_bbqp(const DecisionProblemInstance &inst, const CheckOptions &opt);
Verdict check_bbqp_star(const DecisionProblemInstance &inst, const CheckOptions &opt);
Verdict check_zqp(const DecisionProblemInstance &inst, const CheckOptions &opt = {});
Verdict check_zbqp(const DecisionProblemInstance &inst, const CheckOptions &opt);
Verdict check_zbqp_star(const DecisionProblemInstance &inst, const CheckOptions &opt);

/// Dispatches on inst.cls.
Verdict check(const DecisionProblemInstance &inst, const CheckOptions &opt);

/// θ bound for a BQP machine with acceptance probability p > 2/3, with the
/// chain 2p-1-θ > 2p-1-p+2/3 = p-1/3 > 1/3 verified in exact rational
/// arithmetic at θ = θ_max·(1 - 10^-shrink_digits).
struct BbqpParams {
    double p = 0.0;
    double theta_max = 0.0;
    double theta = 0.0;  // evaluation point
    std::vector<std::pair<std::string, double>> trace;
    bool certified = false;
};

/// Throws std::invalid_argument unless 2/3 < p_bound <= 1.
BbqpParams derive_bbqp_params(double p_bound, int shrink_digits = 9);

/// Same machine re-tagged EBQP*. Throws std::domain_error when the
/// acceptance cell is not in an eigenstate after the budget.
DecisionProblemInstance transform_eqp_to_ebqp_star(const DecisionProblemInstance &inst);

/// Initialise accept←1, reject←0 in place of the decision cell's INIT
/// (inserting INIT if absent) and write the result to both cells. The
/// accept cell takes the decision cell's index; the reject cell is placed
/// just below the lowest special cell. Records k, the static step overhead,
/// and checks that the result lowers to a well-formed machine.
MachineIR transform_zqp_to_zbqp_star(const MachineIR &ir);

/// Instance-level wrapper: ZQP instance over an IR to a ZBQP* instance whose
/// budget is larger by k.
DecisionProblemInstance transform_zqp_instance(const DecisionProblemInstance &inst);

/// halting_time(transformed) - halting_time(original) for each input.
std::vector<std::int64_t> step_overhead(const Machine &original, const Machine &transformed,
                                        const std::vector<std::string> &inputs, std::int64_t max_steps = 100000);

}  // namespace qtm
