#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtmsim/machine.hpp"
#include "qtmsim/machine_ir.hpp"

namespace qtm {

enum class ClassId { EQP, EBQP, EBQP_star, BQP, BBQP, BBQP_star, ZQP, ZBQP, ZBQP_star };

std::string_view class_name(ClassId c);
ClassId parse_class(std::string_view name);  // "EBQP*" etc.

/// Cell roles a class reads: acceptance | halt + decision | halt + accept + reject.
std::vector<std::string> required_cells(ClassId c);

/// Step count as a polynomial in the input length, or a constant.
struct StepBudget {
    std::vector<std::int64_t> coefficients;  // c0 + c1·ℓ + c2·ℓ² + ...
    std::optional<std::int64_t> constant;

    static StepBudget poly(std::vector<std::int64_t> coefficients);
    static StepBudget fixed(std::int64_t steps);

    /// Throws std::invalid_argument when the result is below 1.
    std::int64_t evaluate(std::int64_t length) const;
    /// Returns a budget larger by `extra` steps.
    StepBudget plus(std::int64_t extra) const;
    std::string describe() const;
};

/// A machine (or lowered IR), an input, a step budget and named cells.
///
///     class BBQP*
///     machine bqp-demo.mqt        (or: ir zqp-demo.mqir)
///     budget poly 2 0 1           (or: budget const 6)
///     cell acceptance 0
///     input 101
///
/// Paths are relative to the instance file. IR cells are inherited.
struct DecisionProblemInstance {
    ClassId cls = ClassId::EQP;
    std::string source;  // instance file path, empty when built in code
    std::string machine_path;
    std::shared_ptr<const Machine> machine;
    std::optional<MachineIR> ir;
    StepBudget budget;
    std::string input;
    std::map<std::string, std::int64_t> cells;

    std::int64_t cell(std::string_view role) const;  // throws std::invalid_argument
    std::int64_t input_length() const;
    std::int64_t steps() const { return budget.evaluate(input_length()); }
    /// Throws std::invalid_argument when a cell required by the class is
    /// missing or two roles share an index.
    void require_cells() const;
};

DecisionProblemInstance parse_instance(std::string_view text, const std::string &base_dir);
DecisionProblemInstance load_instance(const std::string &path);

/// Serialise in instance-file syntax; `machine_ref` replaces the machine line.
std::string instance_to_text(const DecisionProblemInstance &inst, const std::string &machine_ref);

}  // namespace qtm
