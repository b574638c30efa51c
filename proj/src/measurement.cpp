#include "qtmsim/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qtmsim/errors.hpp"
#include "qtmsim/kernels.hpp"

namespace qtm {

bool QubitMarginal::eigenstate() const { return std::abs(p1 - 1.0) <= 1e-9 || std::abs(p1) <= 1e-9; }

std::string_view kind_name(MeasurementKind k) {
    switch (k) {
        case MeasurementKind::qtm_observe:
            return "qtm-observe";
        case MeasurementKind::qtm_partial:
            return "qtm-partial";
        case MeasurementKind::bqtm_bulk:
            return "bqtm-bulk";
        case MeasurementKind::mbqtm_et:
            return "mbqtm-et";
    }
    return "unknown";
}

std::string_view noise_name(NoiseKind k) { return k == NoiseKind::uniform ? "uniform" : "adversarial-edge"; }

NoiseKind parse_noise(std::string_view name) {
    if (name == "uniform") {
        return NoiseKind::uniform;
    }
    if (name == "adversarial-edge") {
        return NoiseKind::adversarial_edge;
    }
    throw std::invalid_argument("unknown noise model '" + std::string(name) + "'");
}

std::string_view model_name(MachineModel m) {
    switch (m) {
        case MachineModel::qtm:
            return "qtm";
        case MachineModel::bqtm:
            return "bqtm";
        case MachineModel::mbqtm:
            return "mbqtm";
    }
    return "unknown";
}

NoiseModel::NoiseModel(NoiseKind kind, double theta) : kind_(kind), theta_(theta) {
    if (!(theta > 0.0)) {
        throw std::invalid_argument("noise band θ must be positive");
    }
}

double NoiseModel::draw(Rng &rng) {
    if (kind_ == NoiseKind::adversarial_edge) {
        double e = theta_ - 1e-12;
        double sign = next_positive_ ? 1.0 : -1.0;
        next_positive_ = !next_positive_;
        return sign * e;
    }
    std::uniform_real_distribution<double> u(-theta_, theta_);
    double e = u(rng);
    while (e <= -theta_) {  // keep the band open on both ends
        e = u(rng);
    }
    return e;
}

std::pair<Configuration, Superposition> observe_full(const Superposition &s, Rng &rng) {
    s.require_live("observe_full");
    std::vector<double> weights(s.size());
    kernels::abs_sq(s.real_parts(), s.imag_parts(), weights);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    const Configuration &c = s.config(pick(rng));
    return {c, Superposition::basis(c)};
}

std::pair<SymbolId, Superposition> observe_cell(const Machine &m, const Superposition &s, std::int64_t cell,
                                                Rng &rng, MachineModel model) {
    if (model != MachineModel::qtm) {
        throw ModelViolation("partial observation is not allowed under the " + std::string(model_name(model)) +
                             " model");
    }
    auto probs = marginal(m, s, cell);
    std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
    auto symbol = static_cast<SymbolId>(pick(rng));
    return {symbol, condition(s, cell, symbol)};
}

QubitMarginal qubit_marginal(const Machine &m, const Superposition &s, std::int64_t cell) {
    auto one = m.find_symbol("1");
    auto zero = m.find_symbol("0");
    if (!one || !zero) {
        throw std::domain_error("alphabet of '" + m.name() + "' lacks the symbols 0 and 1");
    }
    auto probs = marginal(m, s, cell);
    for (SymbolId k = 0; k < probs.size(); ++k) {
        if (k != *one && k != *zero && probs[k] > 1e-9) {
            throw std::domain_error("cell " + std::to_string(cell) + " holds symbol '" + m.alphabet()[k] +
                                    "' with probability " + std::to_string(probs[k]) + "; not a qubit cell");
        }
    }
    return QubitMarginal{probs[*one], probs[*zero]};
}

MeasurementOutcome bulk_measure(const QubitMarginal &q, NoiseModel &noise, Rng &rng) {
    MeasurementOutcome o;
    o.model = MeasurementKind::bqtm_bulk;
    o.theta = noise.theta();
    o.value_unclamped = q.expectation() + noise.draw(rng);
    o.value = std::clamp(o.value_unclamped, -1.0, 1.0);
    o.collapsed = false;
    return o;
}

MeasurementOutcome et_measure(const QubitMarginal &q, double epsilon, double theta, Rng &rng, NoiseModel *inband) {
    if (!(theta > 0.0 && theta < 0.5)) {
        throw std::invalid_argument("(ε,θ)-measurement requires 0 < θ < 1/2");
    }
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw std::invalid_argument("(ε,θ)-measurement requires 0 < ε < 1/2");
    }
    MeasurementOutcome o;
    o.model = MeasurementKind::mbqtm_et;
    o.theta = theta;
    o.epsilon = epsilon;
    o.collapsed = true;
    if (std::abs(q.p1 - 1.0) <= 1e-9) {
        o.value = o.value_unclamped = 1.0;
        return o;
    }
    if (std::abs(q.p1) <= 1e-9) {
        o.value = o.value_unclamped = -1.0;
        return o;
    }
    const double v = q.expectation();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < std::nextafter(epsilon, 0.0)) {
        const double left = std::max(0.0, (v - theta) + 1.0);
        const double right = std::max(0.0, 1.0 - (v + theta));
        std::uniform_real_distribution<double> pick(0.0, left + right);
        double x = pick(rng);
        o.value = o.value_unclamped = x < left ? -1.0 + x : v + theta + (x - left);
        o.fault = true;
        return o;
    }
    double e;
    if (inband) {
        e = inband->draw(rng);
        if (!(std::abs(e) < theta)) {
            throw std::invalid_argument("in-band noise model band exceeds θ");
        }
    } else {
        NoiseModel uniform(NoiseKind::uniform, theta);
        e = uniform.draw(rng);
    }
    o.value_unclamped = v + e;
    o.value = std::clamp(o.value_unclamped, -1.0, 1.0);
    return o;
}

Harness::Harness(const Machine &m, Superposition s, MachineModel model)
    : machine_(&m), state_(std::move(s)), model_(model) {}

void Harness::require(MachineModel needed, const char *op) const {
    state_.require_live(op);
    if (model_ != needed) {
        throw ModelViolation(std::string(op) + " is not available under the " + std::string(model_name(model_)) +
                             " model");
    }
}

Configuration Harness::observe_full(Rng &rng) {
    require(MachineModel::qtm, "observe_full");
    auto [c, post] = qtm::observe_full(state_, rng);
    state_ = std::move(post);
    return c;
}

SymbolId Harness::observe_cell(std::int64_t cell, Rng &rng) {
    state_.require_live("observe_cell");
    auto [sym, post] = qtm::observe_cell(*machine_, state_, cell, rng, model_);
    state_ = std::move(post);
    return sym;
}

MeasurementOutcome Harness::bulk_measure(std::int64_t cell, NoiseModel &noise, Rng &rng) {
    require(MachineModel::bqtm, "bulk_measure");
    return qtm::bulk_measure(qubit_marginal(*machine_, state_, cell), noise, rng);
}

MeasurementOutcome Harness::et_measure(std::int64_t cell, double epsilon, double theta, Rng &rng,
                                       NoiseModel *inband) {
    require(MachineModel::mbqtm, "et_measure");
    auto o = qtm::et_measure(qubit_marginal(*machine_, state_, cell), epsilon, theta, rng, inband);
    state_.consume();
    return o;
}

}  // namespace qtm
