#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qtmsim/machine.hpp"

namespace qtm {

struct ColumnNorm {
    std::string column;
    double norm_sq = 0.0;
    bool ok = false;
};

/// Inner product between the images of two configurations whose overlap is
/// governed by a pair of columns: `same-head` (orthogonality of distinct
/// columns), `adjacent` (heads one cell apart) or `distance-2`.
struct ColumnOverlap {
    std::string kind;
    std::string first;
    std::string second;
    std::string written;  // symbols (τ1,τ2) fixed by the overlap, empty for same-head
    std::complex<double> value;
    bool ok = false;
};

/// Local well-formedness of δ over the non-final columns. These are the
/// necessary conditions for U_M to be an isometry on non-halted
/// configurations; check_unitarity_window tests the operator directly.
struct WellformedReport {
    std::string scope = "necessary conditions";
    std::vector<ColumnNorm> norms;
    std::vector<ColumnOverlap> overlaps;  // structurally non-zero or failing entries only
    std::size_t pairs_checked = 0;
    std::vector<std::string> failures;  // one line per violation, naming the column(s)
    bool pass = false;
};

WellformedReport validate_wellformed(const Machine &m);

struct WindowVerdict {
    bool pass = false;
    double worst_deviation = 0.0;
    std::int64_t radius = 0;
    std::int64_t steps = 0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    std::size_t largest_support = 0;
};

/// Randomised isometry test of U_M^steps on vectors supported on non-final
/// configurations inside [-radius, radius]. Amplitude that enters the final
/// state is retired together with its halting step. Passes when every
/// sampled pair satisfies |<Uφ,Uψ> - <φ,ψ>| and |‖Uφ‖² - 1| below 1e-6.
/// Throws std::invalid_argument when radius < steps, steps < 1 or samples < 1.
WindowVerdict check_unitarity_window(const Machine &m, std::int64_t radius, std::int64_t steps,
                                     std::int64_t samples, std::uint64_t seed);

/// Fill every missing non-final column with a deterministic transition into a
/// (symbol, state) slot that no existing entry uses, entering that state with
/// its established direction. Requires each state to be entered from a single
/// direction. Returns the labels of the filled columns; throws
/// std::runtime_error when no free slot remains.
std::vector<std::string> complete_columns(Machine &m);

}  // namespace qtm
