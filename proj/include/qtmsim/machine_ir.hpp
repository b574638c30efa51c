#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qtmsim/machine.hpp"

namespace qtm {

/// Phased description of a zero-error decision machine.
///
/// Tape layout: input on cells 0.., special cells (halt, decision or
/// accept/reject) at indices <= -2, cell -1 free for COMPUTE.
///
///   INIT     write initial values into special cells, then enter COMPUTE
///            at head 0 (omitted: the machine starts in the COMPUTE entry).
///   COMPUTE  raw rules from `entry` to one of the exits `yes`, `no`,
///            `abort`, with the head back on cell 0. COMPUTE owns the halt
///            cell: 1 on yes/no, 0 on abort.
///   WRITE    on yes (no), write 1 (0) into each listed cell; every branch
///            then walks to the halt cell and enters the final state.
///
/// File syntax:
///
///     ir <name>
///     alphabet # 0 1
///     directions LNR
///     cell <role> <index>
///     phase INIT
///       init <role> <symbol>
///     end
///     phase COMPUTE
///       states <names...>
///       entry <state>
///       exits <yes-state> <no-state> <abort-state>
///       rule <machine-file rule>
///     end
///     phase WRITE
///       write <role> ...
///     end
struct MachineIR {
    std::string name;
    std::vector<std::string> alphabet;
    DirectionSet directions = DirectionSet::LNR;
    std::map<std::string, std::int64_t> cells;  // role -> cell index
    std::vector<std::pair<std::string, std::string>> init;  // (role, symbol), INIT phase
    bool has_init_phase = false;

    std::vector<std::string> compute_states;
    std::string entry;
    std::string exit_yes;
    std::string exit_no;
    std::string exit_abort;
    std::vector<std::string> compute_rules;  // text after `rule`

    std::vector<std::string> write;  // roles written by WRITE

    /// Step overhead recorded by a transformation (0 when untransformed).
    std::int64_t k = 0;

    std::int64_t cell(std::string_view role) const;  // throws std::invalid_argument
    bool has_cell(std::string_view role) const { return cells.count(std::string(role)) > 0; }
};

MachineIR parse_ir(std::string_view text);
MachineIR load_ir(const std::string &path);
std::string ir_to_text(const MachineIR &ir);

/// Step counts contributed by the generated phases of a lowering.
struct LoweringInfo {
    std::int64_t init_steps = 0;
    std::int64_t write_steps = 0;  // longest branch (yes/no or abort)
    std::vector<std::string> completed;  // columns filled by complete_columns
};

/// Lower to a Machine: generated INIT/WRITE walks plus COMPUTE rules, then
/// complete_columns and validate_wellformed. Throws std::runtime_error naming
/// the failing column when the result is not well-formed.
Machine lower(const MachineIR &ir, LoweringInfo *info = nullptr);

}  // namespace qtm
