#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "qtmsim/machine.hpp"
#include "qtmsim/statistics.hpp"

namespace qtm {

struct EnsembleConfig {
    std::int64_t n = 1;  // ensemble members
    std::uint64_t seed = 0;
    std::int64_t partitions = 1;  // worker split; worker i draws from stream i
    bool slow_path = false;       // n independent full simulations
};

struct EnsembleReport {
    std::int64_t n = 0;
    std::int64_t count_plus = 0;   // members observed as |1>
    std::int64_t count_minus = 0;  // members observed as |0>
    double average = 0.0;          // (count_plus - count_minus) / n
    double exact_p1 = 0.0;
    std::optional<double> theta;
    bool within_theta = false;
    EstimateScale scale = EstimateScale::probability;
    std::uint64_t seed = 0;
    std::int64_t partitions = 1;
    bool slow_path = false;
};

/// Binomial(n, p1) as the sum of one draw per partition. Deterministic in
/// (seed, n, partitions); p1 within 1e-9 of 0 or 1 gives 0 or n exactly.
std::int64_t sample_count_plus(double p1, std::int64_t n, std::uint64_t seed, std::int64_t partitions);

/// Ensemble-average measurement of `cell` after T steps on `input`.
/// Fast path: one state evolution, then a binomial draw from the exact
/// marginal. Slow path: every member is simulated and observed on its own
/// stream (member j uses stream j), so the result is independent of the
/// partition count. When θ is given, within_theta reports
/// |estimate - truth| < θ on `scale`.
EnsembleReport ensemble_measure(const Machine &m, std::string_view input, std::int64_t steps, std::int64_t cell,
                                const EnsembleConfig &cfg, std::optional<double> theta = std::nullopt,
                                EstimateScale scale = EstimateScale::probability);

/// Member count meeting the (ε,θ) contract: required_n(θ, ε, convention).
std::int64_t realize_mbqtm(double theta, double epsilon, TailConvention convention = TailConvention::two_sided);

struct ErrorRate {
    double rate = 0.0;
    std::int64_t trials = 0;
    std::int64_t exceedances = 0;
    double mc_sigma = 0.0;  // sqrt(rate(1-rate)/trials)
};

/// Monte Carlo estimate of P(|estimate - truth| ≥ θ) for ensembles of n
/// members with marginal p1. Trials are split into contiguous blocks, one
/// per partition; block i draws from stream i of cfg.seed. cfg.n is ignored.
ErrorRate empirical_error_rate(double p1, std::int64_t n, double theta, EstimateScale scale, std::int64_t trials,
                               const EnsembleConfig &cfg);

}  // namespace qtm
