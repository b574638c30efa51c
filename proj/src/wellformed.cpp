#include "qtmsim/wellformed.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qtmsim/kernels.hpp"
#include "qtmsim/superposition.hpp"

namespace qtm {
namespace {

constexpr double kWindowTolerance = 1e-6;
constexpr std::size_t kMaxClusterSize = 4096;

struct ColumnRef {
    StateId q;
    SymbolId s;
};

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(12);
    o << v;
    return o.str();
}

// Amplitude of target (write, next, move) in column c, or 0.
std::complex<double> entry(const Machine &m, ColumnRef c, SymbolId write, StateId next, Direction move) {
    for (const auto &t : m.column(c.q, c.s)) {
        if (t.write == write && t.next == next && t.move == move) {
            return t.amplitude.value;
        }
    }
    return {0.0, 0.0};
}

}  // namespace

WellformedReport validate_wellformed(const Machine &m) {
    WellformedReport r;
    std::vector<ColumnRef> cols;
    for (StateId q = 0; q < m.state_count(); ++q) {
        if (q == m.final_state()) {
            continue;
        }
        for (SymbolId s = 0; s < m.symbol_count(); ++s) {
            cols.push_back({q, s});
        }
    }

    for (auto c : cols) {
        const auto &col = m.column(c.q, c.s);
        const std::string label = m.column_label(c.q, c.s);
        if (col.empty()) {
            r.failures.push_back(label + ": missing rule");
            r.norms.push_back({label, 0.0, false});
            continue;
        }
        double n2 = 0.0;
        for (const auto &t : col) {
            double mag = std::abs(t.amplitude.value);
            if (!std::isfinite(mag) || mag > 1.0 + 1e-9) {
                r.failures.push_back(label + ": amplitude '" + t.amplitude.source + "' has modulus " + fmt(mag) +
                                     " > 1");
            }
            n2 += std::norm(t.amplitude.value);
        }
        bool ok = std::abs(n2 - 1.0) <= kNormTolerance;
        r.norms.push_back({label, n2, ok});
        if (!ok) {
            r.failures.push_back(label + ": squared norm " + fmt(n2) + " (expected 1)");
        }
    }

    auto record = [&](std::string kind, ColumnRef a, ColumnRef b, std::string written, std::complex<double> v,
                      bool structural) {
        bool ok = std::abs(v) <= kNormTolerance;
        if (structural || !ok) {
            r.overlaps.push_back({kind, m.column_label(a.q, a.s), m.column_label(b.q, b.s), written, v, ok});
        }
        if (!ok) {
            std::ostringstream msg;
            msg << m.column_label(a.q, a.s) << " vs " << m.column_label(b.q, b.s) << ": " << kind << " overlap "
                << fmt(std::abs(v));
            if (!written.empty()) {
                msg << " (writes " << written << ")";
            }
            r.failures.push_back(msg.str());
        }
    };

    // Same head: distinct columns must have orthogonal images.
    for (std::size_t i = 0; i < cols.size(); ++i) {
        for (std::size_t j = i + 1; j < cols.size(); ++j) {
            std::complex<double> v{0.0, 0.0};
            bool structural = false;
            for (const auto &t : m.column(cols[i].q, cols[i].s)) {
                auto b = entry(m, cols[j], t.write, t.next, t.move);
                if (b != std::complex<double>{0.0, 0.0}) {
                    structural = true;
                }
                v += std::conj(t.amplitude.value) * b;
            }
            ++r.pairs_checked;
            record("same-head", cols[i], cols[j], "", v, structural);
        }
    }

    // Heads one or two cells apart: left configuration writes τ1, right writes τ2.
    for (auto a : cols) {
        for (auto b : cols) {
            for (SymbolId t1 = 0; t1 < m.symbol_count(); ++t1) {
                for (SymbolId t2 = 0; t2 < m.symbol_count(); ++t2) {
                    std::complex<double> d2{0.0, 0.0};
                    std::complex<double> d1{0.0, 0.0};
                    bool s2 = false;
                    bool s1 = false;
                    for (StateId q = 0; q < m.state_count(); ++q) {
                        auto aR = entry(m, a, t1, q, Direction::R);
                        auto aN = entry(m, a, t1, q, Direction::N);
                        auto bL = entry(m, b, t2, q, Direction::L);
                        auto bN = entry(m, b, t2, q, Direction::N);
                        d2 += std::conj(aR) * bL;
                        d1 += std::conj(aR) * bN + std::conj(aN) * bL;
                        s2 = s2 || (std::abs(aR) > 0 && std::abs(bL) > 0);
                        s1 = s1 || (std::abs(aR) > 0 && std::abs(bN) > 0) || (std::abs(aN) > 0 && std::abs(bL) > 0);
                    }
                    std::string written = "(" + m.alphabet()[t1] + "," + m.alphabet()[t2] + ")";
                    r.pairs_checked += 2;
                    record("distance-2", a, b, written, d2, s2);
                    record("adjacent", a, b, written, d1, s1);
                }
            }
        }
    }

    r.pass = r.failures.empty();
    return r;
}

namespace {

struct TaggedConfig {
    Configuration config;
    std::int64_t halted_at;  // -1 while running
    auto operator<=>(const TaggedConfig &) const = default;
};

using TaggedState = std::map<TaggedConfig, std::complex<double>>;

TaggedState evolve_tagged(const Machine &m, const TaggedState &in, std::int64_t t) {
    TaggedState out;
    for (const auto &[key, a] : in) {
        if (key.halted_at >= 0) {
            out[key] += a;
            continue;
        }
        const Configuration &c = key.config;
        for (const auto &tr : m.column(c.state, c.read(c.head))) {
            Configuration d = c;
            d.write(c.head, tr.write);
            d.state = tr.next;
            d.head = c.head + static_cast<std::int64_t>(tr.move);
            std::int64_t tag = tr.next == m.final_state() ? t : -1;
            out[TaggedConfig{std::move(d), tag}] += a * tr.amplitude.value;
        }
    }
    return out;
}

std::complex<double> tagged_inner(const TaggedState &x, const TaggedState &y) {
    std::vector<double> a_re, a_im, b_re, b_im;
    auto i = x.begin();
    auto j = y.begin();
    while (i != x.end() && j != y.end()) {
        if (i->first < j->first) {
            ++i;
        } else if (j->first < i->first) {
            ++j;
        } else {
            a_re.push_back(i->second.real());
            a_im.push_back(i->second.imag());
            b_re.push_back(j->second.real());
            b_im.push_back(j->second.imag());
            ++i;
            ++j;
        }
    }
    return kernels::inner_product(a_re, a_im, b_re, b_im);
}

}  // namespace

WindowVerdict check_unitarity_window(const Machine &m, std::int64_t radius, std::int64_t steps,
                                     std::int64_t samples, std::uint64_t seed) {
    if (steps < 1) {
        throw std::invalid_argument("unitarity window: steps must be at least 1");
    }
    if (samples < 1) {
        throw std::invalid_argument("unitarity window: samples must be at least 1");
    }
    if (radius < steps) {
        throw std::invalid_argument("unitarity window: radius " + std::to_string(radius) +
                                    " is smaller than the step count " + std::to_string(steps));
    }
    WindowVerdict v;
    v.radius = radius;
    v.steps = steps;
    v.samples = samples;
    v.seed = seed;

    std::vector<StateId> running;
    for (StateId q = 0; q < m.state_count(); ++q) {
        if (q != m.final_state()) {
            running.push_back(q);
        }
    }
    const std::size_t sigma = m.symbol_count();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    for (std::int64_t sample = 0; sample < samples; ++sample) {
        std::uniform_int_distribution<std::int64_t> pick_head(-(radius - steps), radius - steps);
        const std::int64_t centre = pick_head(rng);
        const std::int64_t lo = centre - steps;
        const std::int64_t hi = centre + steps;
        const std::size_t block = static_cast<std::size_t>(hi - lo + 1);

        Configuration background;
        std::uniform_int_distribution<int> pick_symbol(0, static_cast<int>(sigma) - 1);
        for (std::int64_t cell = -radius; cell <= radius; ++cell) {
            if (cell < lo || cell > hi) {
                background.write(cell, static_cast<SymbolId>(pick_symbol(rng)));
            }
        }

        // Cluster: every running state x head in block x symbol assignment on block.
        double full = static_cast<double>(running.size()) * static_cast<double>(block) *
                      std::pow(static_cast<double>(sigma), static_cast<double>(block));
        auto make = [&](std::size_t q_idx, std::size_t head_off, std::uint64_t assignment) {
            Configuration c = background;
            c.state = running[q_idx];
            c.head = lo + static_cast<std::int64_t>(head_off);
            for (std::size_t k = 0; k < block; ++k) {
                c.write(lo + static_cast<std::int64_t>(k), static_cast<SymbolId>(assignment % sigma));
                assignment /= sigma;
            }
            return c;
        };
        std::set<Configuration> support;
        if (full <= static_cast<double>(kMaxClusterSize)) {
            std::uint64_t assignments = static_cast<std::uint64_t>(std::llround(std::pow(double(sigma), double(block))));
            for (std::size_t q = 0; q < running.size(); ++q) {
                for (std::size_t h = 0; h < block; ++h) {
                    for (std::uint64_t a = 0; a < assignments; ++a) {
                        support.insert(make(q, h, a));
                    }
                }
            }
        } else {
            std::uniform_int_distribution<std::size_t> pick_q(0, running.size() - 1);
            std::uniform_int_distribution<std::size_t> pick_h(0, block - 1);
            std::uniform_int_distribution<std::uint64_t> pick_a(
                0, static_cast<std::uint64_t>(std::pow(double(sigma), double(block))) - 1);
            while (support.size() < kMaxClusterSize) {
                support.insert(make(pick_q(rng), pick_h(rng), pick_a(rng)));
            }
        }
        v.largest_support = std::max(v.largest_support, support.size());

        auto random_state = [&]() {
            TaggedState st;
            double n2 = 0.0;
            for (const auto &c : support) {
                std::complex<double> a(gauss(rng), gauss(rng));
                n2 += std::norm(a);
                st.emplace(TaggedConfig{c, -1}, a);
            }
            for (auto &[k, a] : st) {
                a /= std::sqrt(n2);
            }
            return st;
        };
        TaggedState phi = random_state();
        TaggedState psi = random_state();
        const std::complex<double> before = tagged_inner(phi, psi);
        for (std::int64_t t = 1; t <= steps; ++t) {
            phi = evolve_tagged(m, phi, t);
            psi = evolve_tagged(m, psi, t);
        }
        const std::complex<double> after = tagged_inner(phi, psi);
        double dev = std::abs(after - before);
        dev = std::max(dev, std::abs(tagged_inner(phi, phi).real() - 1.0));
        dev = std::max(dev, std::abs(tagged_inner(psi, psi).real() - 1.0));
        v.worst_deviation = std::max(v.worst_deviation, dev);
    }
    v.pass = v.worst_deviation <= kWindowTolerance;
    return v;
}

std::vector<std::string> complete_columns(Machine &m) {
    const std::size_t sigma = m.symbol_count();
    std::vector<int> entering(m.state_count(), 2);  // 2 = unassigned, else Direction value
    std::set<std::pair<SymbolId, StateId>> used;
    for (StateId q = 0; q < m.state_count(); ++q) {
        for (SymbolId s = 0; s < sigma; ++s) {
            for (const auto &t : m.column(q, s)) {
                int d = static_cast<int>(t.move);
                if (entering[t.next] != 2 && entering[t.next] != d) {
                    throw std::runtime_error("cannot complete: state '" + m.states()[t.next] +
                                             "' is entered from more than one direction");
                }
                entering[t.next] = d;
                used.insert({t.write, t.next});
            }
        }
    }
    if (entering[m.final_state()] == 2) {
        entering[m.final_state()] = static_cast<int>(Direction::N);
    }
    const Direction fresh = m.directions() == DirectionSet::LNR ? Direction::N : Direction::R;
    std::vector<std::string> filled;
    for (StateId q = 0; q < m.state_count(); ++q) {
        if (q == m.final_state()) {
            continue;
        }
        for (SymbolId s = 0; s < sigma; ++s) {
            if (m.has_column(q, s)) {
                continue;
            }
            bool done = false;
            for (StateId target = 0; target < m.state_count() && !done; ++target) {
                Direction d = entering[target] == 2 ? fresh : static_cast<Direction>(entering[target]);
                if (target == m.final_state() && d != Direction::N) {
                    continue;
                }
                for (SymbolId w = 0; w < sigma && !done; ++w) {
                    if (used.count({w, target})) {
                        continue;
                    }
                    m.add_transition(q, s, Transition{Amplitude{{1.0, 0.0}, "1"}, w, target, d});
                    used.insert({w, target});
                    entering[target] = static_cast<int>(d);
                    filled.push_back(m.column_label(q, s));
                    done = true;
                }
            }
            if (!done) {
                throw std::runtime_error("cannot complete column " + m.column_label(q, s) + ": no free slot");
            }
        }
    }
    return filled;
}

}  // namespace qtm
