#pragma once

#include <cstdint>
#include <string_view>
#include <utility>

#include "qtmsim/rng.hpp"
#include "qtmsim/superposition.hpp"

namespace qtm {

/// Squared amplitudes (|α|², |β|²) of a cell restricted to symbols 1 and 0.
struct QubitMarginal {
    double p1 = 0.0;
    double p0 = 0.0;

    /// |α|² - |β|²
    double expectation() const { return p1 - p0; }
    /// True when p1 is 0 or 1 within 1e-9.
    bool eigenstate() const;
};

enum class MeasurementKind { qtm_observe, qtm_partial, bqtm_bulk, mbqtm_et };
std::string_view kind_name(MeasurementKind k);

struct MeasurementOutcome {
    double value = 0.0;  // clamped to [-1, 1]
    double value_unclamped = 0.0;
    MeasurementKind model = MeasurementKind::bqtm_bulk;
    bool collapsed = false;
    bool fault = false;
    double theta = 0.0;
    double epsilon = 0.0;  // 0 for bulk measurements
    std::uint64_t seed = 0;
};

enum class NoiseKind { uniform, adversarial_edge };
std::string_view noise_name(NoiseKind k);
NoiseKind parse_noise(std::string_view name);

/// In-band error e with |e| < θ. `uniform` draws e ~ U(-θ, θ);
/// `adversarial-edge` returns ±(θ - 1e-12), alternating sign on each draw.
class NoiseModel {
   public:
    NoiseModel(NoiseKind kind, double theta);

    NoiseKind kind() const { return kind_; }
    double theta() const { return theta_; }
    double draw(Rng &rng);

   private:
    NoiseKind kind_;
    double theta_;
    bool next_positive_ = true;
};

/// Machine model a harness runs under. Only QTM allows observation.
enum class MachineModel { qtm, bqtm, mbqtm };
std::string_view model_name(MachineModel m);

/// Full projective observation: configuration c_k with probability |α_k|²;
/// the returned superposition is |c_k>.
std::pair<Configuration, Superposition> observe_full(const Superposition &s, Rng &rng);

/// Partial observation of one cell. Refused (ModelViolation) unless `model` is QTM.
std::pair<SymbolId, Superposition> observe_cell(const Machine &m, const Superposition &s, std::int64_t cell,
                                                Rng &rng, MachineModel model = MachineModel::qtm);

/// (|α|², |β|²) at `cell`. Throws std::domain_error when the cell carries
/// more than 1e-9 probability on any symbol other than 0 and 1.
QubitMarginal qubit_marginal(const Machine &m, const Superposition &s, std::int64_t cell);

/// Non-collapsing bulk measurement: value = (p1 - p0) + e, |e| < θ.
MeasurementOutcome bulk_measure(const QubitMarginal &q, NoiseModel &noise, Rng &rng);

/// (ε,θ)-measurement (abstract model). Eigenstates give exactly ±1. Otherwise,
/// with probability below ε the reading is a fault drawn uniformly from
/// [-1,1] outside the θ band; else (p1 - p0) plus in-band noise. `inband`
/// defaults to uniform noise. Throws std::invalid_argument unless
/// 0 < θ < 1/2 and 0 < ε < 1/2.
MeasurementOutcome et_measure(const QubitMarginal &q, double epsilon, double theta, Rng &rng,
                              NoiseModel *inband = nullptr);

/// Owns the superposition of one run and enforces the model's rules:
/// observation only under QTM, bulk measurement only under BQTM, a single
/// consuming (ε,θ)-measurement under MBQTM.
class Harness {
   public:
    Harness(const Machine &m, Superposition s, MachineModel model);

    const Superposition &state() const { return state_; }
    MachineModel model() const { return model_; }

    Configuration observe_full(Rng &rng);
    SymbolId observe_cell(std::int64_t cell, Rng &rng);
    MeasurementOutcome bulk_measure(std::int64_t cell, NoiseModel &noise, Rng &rng);
    MeasurementOutcome et_measure(std::int64_t cell, double epsilon, double theta, Rng &rng,
                                  NoiseModel *inband = nullptr);

   private:
    const Machine *machine_;
    Superposition state_;
    MachineModel model_;

    void require(MachineModel needed, const char *op) const;
};

}  // namespace qtm
