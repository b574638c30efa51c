#include "qtmsim/superposition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qtmsim/errors.hpp"
#include "qtmsim/kernels.hpp"

namespace qtm {

SymbolId Configuration::read(std::int64_t cell) const {
    auto it = std::lower_bound(tape.begin(), tape.end(), cell,
                               [](const auto &entry, std::int64_t c) { return entry.first < c; });
    if (it != tape.end() && it->first == cell) {
        return it->second;
    }
    return kBlank;
}

void Configuration::write(std::int64_t cell, SymbolId symbol) {
    auto it = std::lower_bound(tape.begin(), tape.end(), cell,
                               [](const auto &entry, std::int64_t c) { return entry.first < c; });
    bool present = it != tape.end() && it->first == cell;
    if (symbol == kBlank) {
        if (present) {
            tape.erase(it);
        }
    } else if (present) {
        it->second = symbol;
    } else {
        tape.insert(it, {cell, symbol});
    }
}

Configuration Configuration::initial(const Machine &m, std::span<const SymbolId> input) {
    Configuration c;
    c.state = m.initial();
    c.head = 0;
    for (std::size_t k = 0; k < input.size(); ++k) {
        c.write(static_cast<std::int64_t>(k), input[k]);
    }
    return c;
}

std::string Configuration::describe(const Machine &m) const {
    std::ostringstream out;
    out << m.states()[state] << " head=" << head << " tape=";
    if (tape.empty()) {
        out << "(blank)";
    }
    for (std::size_t k = 0; k < tape.size(); ++k) {
        out << (k ? "," : "") << tape[k].first << ':' << m.alphabet()[tape[k].second];
    }
    return out.str();
}

Superposition Superposition::basis(Configuration c) {
    Superposition s;
    s.configs_.push_back(std::move(c));
    s.re_.push_back(1.0);
    s.im_.push_back(0.0);
    return s;
}

Superposition Superposition::from_map(const std::map<Configuration, std::complex<double>> &terms) {
    Superposition s;
    s.configs_.reserve(terms.size());
    s.re_.reserve(terms.size());
    s.im_.reserve(terms.size());
    for (const auto &[c, a] : terms) {
        if (std::abs(a) < kPruneThreshold) {
            continue;
        }
        s.configs_.push_back(c);
        s.re_.push_back(a.real());
        s.im_.push_back(a.imag());
    }
    return s;
}

std::complex<double> Superposition::amplitude_of(const Configuration &c) const {
    auto it = std::lower_bound(configs_.begin(), configs_.end(), c);
    if (it == configs_.end() || *it != c) {
        return {0.0, 0.0};
    }
    return amplitude(static_cast<std::size_t>(it - configs_.begin()));
}

double Superposition::norm_sq() const { return kernels::norm_sq(re_, im_); }

std::complex<double> Superposition::inner(const Superposition &other) const {
    // Gather the common support into aligned dense arrays.
    std::vector<double> a_re, a_im, b_re, b_im;
    std::size_t i = 0, j = 0;
    while (i < configs_.size() && j < other.configs_.size()) {
        if (configs_[i] < other.configs_[j]) {
            ++i;
        } else if (other.configs_[j] < configs_[i]) {
            ++j;
        } else {
            a_re.push_back(re_[i]);
            a_im.push_back(im_[i]);
            b_re.push_back(other.re_[j]);
            b_im.push_back(other.im_[j]);
            ++i;
            ++j;
        }
    }
    return kernels::inner_product(a_re, a_im, b_re, b_im);
}

Superposition Superposition::scaled(double factor) const {
    Superposition s = *this;
    kernels::scale(s.re_, s.im_, factor);
    return s;
}

Superposition Superposition::combine(std::complex<double> a, const Superposition &other,
                                     std::complex<double> b) const {
    std::map<Configuration, std::complex<double>> acc;
    for (std::size_t k = 0; k < size(); ++k) {
        acc[configs_[k]] += a * amplitude(k);
    }
    for (std::size_t k = 0; k < other.size(); ++k) {
        acc[other.configs_[k]] += b * other.amplitude(k);
    }
    return from_map(acc);
}

void Superposition::require_live(const char *op) const {
    if (consumed_) {
        throw ConsumedError(std::string(op) + ": superposition already consumed by a terminal measurement");
    }
}

std::vector<SymbolId> encode_input(const Machine &m, std::string_view input) {
    std::vector<SymbolId> out;
    bool tokens = input.find_first_of(" \t,") != std::string_view::npos;
    if (tokens) {
        std::string normalized(input);
        std::replace(normalized.begin(), normalized.end(), ',', ' ');
        for (const auto &w : split_words(normalized)) {
            out.push_back(m.symbol(w));
        }
    } else {
        for (char ch : input) {
            out.push_back(m.symbol(std::string_view(&ch, 1)));
        }
    }
    return out;
}

Superposition step(const Machine &m, const Superposition &s) {
    s.require_live("step");
    std::map<Configuration, std::complex<double>> next;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const Configuration &c = s.config(k);
        const std::complex<double> a = s.amplitude(k);
        if (c.state == m.final_state()) {
            next[c] += a;
            continue;
        }
        const SymbolId read = c.read(c.head);
        for (const Transition &t : m.column(c.state, read)) {
            Configuration d = c;
            d.write(c.head, t.write);
            d.state = t.next;
            d.head = c.head + static_cast<std::int64_t>(t.move);
            next[std::move(d)] += a * t.amplitude.value;
        }
    }
    return Superposition::from_map(next);
}

Superposition run(const Machine &m, std::span<const SymbolId> input, std::int64_t steps) {
    if (steps < 0) {
        throw std::invalid_argument("step count must be non-negative");
    }
    Superposition s = Superposition::basis(Configuration::initial(m, input));
    for (std::int64_t t = 0; t < steps; ++t) {
        s = step(m, s);
    }
    return s;
}

Superposition run(const Machine &m, std::string_view input, std::int64_t steps) {
    auto symbols = encode_input(m, input);
    return run(m, symbols, steps);
}

std::vector<double> marginal(const Machine &m, const Superposition &s, std::int64_t cell) {
    s.require_live("marginal");
    std::vector<double> weights(s.size());
    kernels::abs_sq(s.real_parts(), s.imag_parts(), weights);
    std::vector<double> probs(m.symbol_count(), 0.0);
    for (std::size_t k = 0; k < s.size(); ++k) {
        probs[s.config(k).read(cell)] += weights[k];
    }
    return probs;
}

Superposition condition(const Superposition &s, std::int64_t cell, SymbolId symbol) {
    s.require_live("condition");
    std::map<Configuration, std::complex<double>> kept;
    double mass = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s.config(k).read(cell) == symbol) {
            kept.emplace(s.config(k), s.amplitude(k));
            mass += std::norm(s.amplitude(k));
        }
    }
    if (mass <= 0.0) {
        throw std::domain_error("cannot condition on a zero-probability outcome at cell " + std::to_string(cell));
    }
    return Superposition::from_map(kept).scaled(1.0 / std::sqrt(mass));
}

double halted_mass(const Machine &m, const Superposition &s) {
    double mass = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s.config(k).state == m.final_state()) {
            mass += std::norm(s.amplitude(k));
        }
    }
    return mass;
}

std::int64_t halting_time(const Machine &m, std::span<const SymbolId> input, std::int64_t max_steps) {
    Superposition s = Superposition::basis(Configuration::initial(m, input));
    for (std::int64_t t = 0; t <= max_steps; ++t) {
        bool all_final = true;
        for (std::size_t k = 0; k < s.size() && all_final; ++k) {
            all_final = s.config(k).state == m.final_state();
        }
        if (all_final) {
            return t;
        }
        s = step(m, s);
    }
    return -1;
}

}  // namespace qtm
