#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qtmsim/machine.hpp"

namespace qtm {

/// Amplitudes below this magnitude are dropped after every step.
inline constexpr double kPruneThreshold = 1e-14;
/// Tolerance for norm and orthogonality checks.
inline constexpr double kNormTolerance = 1e-9;

/// Tape contents, head position and control state. The tape stores only
/// non-blank cells, sorted by index, so equal configurations compare equal.
struct Configuration {
    StateId state = 0;
    std::int64_t head = 0;
    std::vector<std::pair<std::int64_t, SymbolId>> tape;

    SymbolId read(std::int64_t cell) const;
    void write(std::int64_t cell, SymbolId symbol);

    /// The machine's initial configuration for `input` (cells 0..len-1, head 0).
    static Configuration initial(const Machine &m, std::span<const SymbolId> input);

    std::string describe(const Machine &m) const;

    auto operator<=>(const Configuration &) const = default;
    bool operator==(const Configuration &) const = default;
};

/// Finite complex combination of configurations in canonical (sorted) order.
///
/// Amplitudes are held as separate real/imaginary arrays so that norm and
/// inner-product reductions go through the dense kernels.
class Superposition {
   public:
    Superposition() = default;

    /// Basis state |c>.
    static Superposition basis(Configuration c);

    /// Build from an accumulation map. Entries below kPruneThreshold are dropped.
    static Superposition from_map(const std::map<Configuration, std::complex<double>> &terms);

    std::size_t size() const { return configs_.size(); }
    const Configuration &config(std::size_t k) const { return configs_[k]; }
    std::complex<double> amplitude(std::size_t k) const { return {re_[k], im_[k]}; }
    std::complex<double> amplitude_of(const Configuration &c) const;

    std::span<const double> real_parts() const { return re_; }
    std::span<const double> imag_parts() const { return im_; }

    double norm_sq() const;
    /// <this|other>, antilinear in this.
    std::complex<double> inner(const Superposition &other) const;

    /// Rescale all amplitudes by a positive real factor.
    Superposition scaled(double factor) const;

    /// a*this + b*other.
    Superposition combine(std::complex<double> a, const Superposition &other, std::complex<double> b) const;

    bool consumed() const { return consumed_; }
    /// Marks the superposition as consumed by a terminal measurement.
    void consume() { consumed_ = true; }
    /// Throws ConsumedError when consumed.
    void require_live(const char *op) const;

   private:
    std::vector<Configuration> configs_;
    std::vector<double> re_;
    std::vector<double> im_;
    bool consumed_ = false;
};

/// Converts a string of symbol names (one character per symbol, or
/// whitespace-separated tokens when any symbol is longer) to ids.
std::vector<SymbolId> encode_input(const Machine &m, std::string_view input);

/// One application of U_M. Configurations in the final state are stationary.
Superposition step(const Machine &m, const Superposition &s);

/// T steps from the initial configuration on `input`.
Superposition run(const Machine &m, std::span<const SymbolId> input, std::int64_t steps);
Superposition run(const Machine &m, std::string_view input, std::int64_t steps);

/// Probability of each symbol at `cell`, indexed by SymbolId.
std::vector<double> marginal(const Machine &m, const Superposition &s, std::int64_t cell);

/// Project onto tape(cell) == symbol and renormalise by a positive real factor.
/// Throws std::domain_error if that outcome has zero probability.
Superposition condition(const Superposition &s, std::int64_t cell, SymbolId symbol);

/// Squared norm of the part of `s` in the final state.
double halted_mass(const Machine &m, const Superposition &s);

/// First T at which all amplitude of run(m, input, T) is in the final state,
/// or -1 when that does not happen within max_steps.
std::int64_t halting_time(const Machine &m, std::span<const SymbolId> input, std::int64_t max_steps);

}  // namespace qtm
