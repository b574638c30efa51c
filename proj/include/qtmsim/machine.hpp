#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtmsim/amplitude.hpp"

namespace qtm {

/// Index into a machine's alphabet. Index 0 is always the blank `#`.
using SymbolId = std::uint8_t;
/// Index into a machine's state set.
using StateId = std::uint16_t;

inline constexpr SymbolId kBlank = 0;
inline constexpr std::string_view kBlankName = "#";
inline constexpr int kMachineFormatVersion = 1;

enum class Direction : std::int8_t { L = -1, N = 0, R = 1 };
enum class DirectionSet { LR, LNR };

char direction_char(Direction d);

/// One superposed target of a transition column: write `write`, enter `next`, move `move`.
struct Transition {
    Amplitude amplitude;
    SymbolId write;
    StateId next;
    Direction move;
};

/// A machine (Σ, Q, δ). δ is stored column-wise: column (q, σ) lists its
/// superposed targets; an empty column means "no rule".
///
/// The final state is stationary. Rules for it may be written in machine
/// files only as identity self-loops and are not stored.
class Machine {
   public:
    Machine(std::string name, std::vector<std::string> alphabet, std::vector<std::string> states,
            StateId initial, StateId final_state, DirectionSet directions);

    const std::string &name() const { return name_; }
    const std::vector<std::string> &alphabet() const { return alphabet_; }
    const std::vector<std::string> &states() const { return states_; }
    StateId initial() const { return initial_; }
    StateId final_state() const { return final_; }
    DirectionSet directions() const { return directions_; }

    std::size_t symbol_count() const { return alphabet_.size(); }
    std::size_t state_count() const { return states_.size(); }

    std::optional<SymbolId> find_symbol(std::string_view name) const;
    std::optional<StateId> find_state(std::string_view name) const;
    SymbolId symbol(std::string_view name) const;  // throws std::invalid_argument
    StateId state(std::string_view name) const;    // throws std::invalid_argument

    const std::vector<Transition> &column(StateId q, SymbolId s) const;
    bool has_column(StateId q, SymbolId s) const { return !column(q, s).empty(); }

    /// Adds one target to column (q, s). Throws std::invalid_argument on a
    /// duplicate (write, next, move) key, an undeclared direction, or a rule
    /// out of the final state.
    void add_transition(StateId q, SymbolId s, Transition t);

    /// Total number of stored (q, σ, target) entries.
    std::size_t entry_count() const;

    /// Column label used in reports, e.g. "(q0,1)".
    std::string column_label(StateId q, SymbolId s) const;

    /// Serialise in machine-file syntax. parse_machine(to_text()) round-trips.
    std::string to_text() const;

   private:
    std::string name_;
    std::vector<std::string> alphabet_;
    std::vector<std::string> states_;
    StateId initial_;
    StateId final_;
    DirectionSet directions_;
    std::vector<std::vector<Transition>> columns_;

    std::size_t index(StateId q, SymbolId s) const { return std::size_t(q) * alphabet_.size() + s; }
};

/// Parse the line-oriented machine file format:
///
///     machine <name>
///     alphabet # 0 1 ...
///     states q0 qf ...
///     initial q0
///     final qf
///     directions LR|LNR
///     rule <state> <symbol> -> <ampl> <symbol> <state> <dir> ; ...
///
/// Lines starting with `#` are comments. Throws ParseError naming the line.
Machine parse_machine(std::string_view text);

/// Reads and parses a machine file.
Machine load_machine(const std::string &path);

/// Reads a whole file; throws std::runtime_error when unreadable.
std::string read_text_file(const std::string &path);

/// Splits on whitespace.
std::vector<std::string> split_words(std::string_view line);

}  // namespace qtm
