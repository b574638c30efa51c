#include "qtmsim/machine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qtmsim/errors.hpp"

namespace qtm {

char direction_char(Direction d) {
    switch (d) {
        case Direction::L:
            return 'L';
        case Direction::N:
            return 'N';
        case Direction::R:
            return 'R';
    }
    return '?';
}

Machine::Machine(std::string name, std::vector<std::string> alphabet, std::vector<std::string> states,
                 StateId initial, StateId final_state, DirectionSet directions)
    : name_(std::move(name)),
      alphabet_(std::move(alphabet)),
      states_(std::move(states)),
      initial_(initial),
      final_(final_state),
      directions_(directions) {
    if (alphabet_.empty() || alphabet_[0] != kBlankName) {
        throw std::invalid_argument("alphabet must start with the blank symbol #");
    }
    if (alphabet_.size() > 255) {
        throw std::invalid_argument("alphabet too large");
    }
    if (initial_ >= states_.size() || final_ >= states_.size()) {
        throw std::invalid_argument("initial/final state out of range");
    }
    if (initial_ == final_) {
        throw std::invalid_argument("final state must differ from the initial state");
    }
    columns_.resize(states_.size() * alphabet_.size());
}

std::optional<SymbolId> Machine::find_symbol(std::string_view name) const {
    auto it = std::find(alphabet_.begin(), alphabet_.end(), name);
    if (it == alphabet_.end()) {
        return std::nullopt;
    }
    return static_cast<SymbolId>(it - alphabet_.begin());
}

std::optional<StateId> Machine::find_state(std::string_view name) const {
    auto it = std::find(states_.begin(), states_.end(), name);
    if (it == states_.end()) {
        return std::nullopt;
    }
    return static_cast<StateId>(it - states_.begin());
}

SymbolId Machine::symbol(std::string_view name) const {
    if (auto s = find_symbol(name)) {
        return *s;
    }
    throw std::invalid_argument("undeclared symbol '" + std::string(name) + "'");
}

StateId Machine::state(std::string_view name) const {
    if (auto q = find_state(name)) {
        return *q;
    }
    throw std::invalid_argument("undeclared state '" + std::string(name) + "'");
}

const std::vector<Transition> &Machine::column(StateId q, SymbolId s) const {
    return columns_.at(index(q, s));
}

void Machine::add_transition(StateId q, SymbolId s, Transition t) {
    if (q >= states_.size() || t.next >= states_.size()) {
        throw std::invalid_argument("state out of range");
    }
    if (s >= alphabet_.size() || t.write >= alphabet_.size()) {
        throw std::invalid_argument("symbol out of range");
    }
    if (t.move == Direction::N && directions_ == DirectionSet::LR) {
        throw std::invalid_argument("direction N used but machine declares directions LR");
    }
    if (q == final_) {
        throw std::invalid_argument("the final state is stationary and takes no stored rules");
    }
    auto &col = columns_[index(q, s)];
    for (const auto &e : col) {
        if (e.write == t.write && e.next == t.next && e.move == t.move) {
            throw std::invalid_argument("duplicate rule for (" + states_[q] + "," + alphabet_[s] + "," +
                                        alphabet_[t.write] + "," + states_[t.next] + "," +
                                        direction_char(t.move) + ")");
        }
    }
    col.push_back(std::move(t));
}

std::size_t Machine::entry_count() const {
    std::size_t n = 0;
    for (const auto &c : columns_) {
        n += c.size();
    }
    return n;
}

std::string Machine::column_label(StateId q, SymbolId s) const {
    return "(" + states_.at(q) + "," + alphabet_.at(s) + ")";
}

std::string Machine::to_text() const {
    std::ostringstream out;
    out << "machine " << name_ << "\n";
    out << "alphabet";
    for (const auto &a : alphabet_) {
        out << ' ' << a;
    }
    out << "\nstates";
    for (const auto &q : states_) {
        out << ' ' << q;
    }
    out << "\ninitial " << states_[initial_] << "\nfinal " << states_[final_] << "\ndirections "
        << (directions_ == DirectionSet::LR ? "LR" : "LNR") << "\n";
    for (StateId q = 0; q < states_.size(); ++q) {
        for (SymbolId s = 0; s < alphabet_.size(); ++s) {
            const auto &col = column(q, s);
            if (col.empty()) {
                continue;
            }
            out << "rule " << states_[q] << ' ' << alphabet_[s] << " ->";
            for (std::size_t k = 0; k < col.size(); ++k) {
                const auto &t = col[k];
                if (t.amplitude.source.empty()) {
                    throw std::logic_error("amplitude without source expression cannot be serialised");
                }
                out << (k ? " ; " : " ") << t.amplitude.source << ' ' << alphabet_[t.write] << ' '
                    << states_[t.next] << ' ' << direction_char(t.move);
            }
            out << "\n";
        }
    }
    return out.str();
}

std::vector<std::string> split_words(std::string_view line) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) {
            ++j;
        }
        if (j > i) {
            words.emplace_back(line.substr(i, j - i));
        }
        i = j;
    }
    return words;
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

struct PendingTarget {
    std::string amplitude;
    std::string write;
    std::string next;
    std::string move;
    std::size_t line;
};

struct PendingRule {
    std::string state;
    std::string symbol;
    std::vector<PendingTarget> targets;
    std::size_t line;
};

PendingTarget parse_target(std::string_view segment, std::size_t line) {
    auto words = split_words(segment);
    if (words.size() < 4) {
        throw ParseError("rule target needs '<ampl> <symbol> <state> <dir>'", line, 0);
    }
    // The amplitude may contain spaces; the last three words are symbol, state, direction.
    auto dir_pos = segment.find_last_not_of(" \t\r");
    std::string_view rest = segment.substr(0, dir_pos + 1);
    for (int k = 0; k < 3; ++k) {
        auto end = rest.find_last_not_of(" \t");
        auto start = rest.find_last_of(" \t", end);
        rest = rest.substr(0, start == std::string_view::npos ? 0 : start);
    }
    std::size_t n = words.size();
    return PendingTarget{std::string(rest), words[n - 3], words[n - 2], words[n - 1], line};
}

}  // namespace

Machine parse_machine(std::string_view text) {
    std::optional<std::string> name;
    std::optional<std::vector<std::string>> alphabet;
    std::optional<std::vector<std::string>> states;
    std::optional<std::string> initial;
    std::optional<std::string> final_state;
    std::optional<DirectionSet> directions;
    std::vector<PendingRule> rules;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        auto first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos || line[first] == '#') {
            continue;
        }
        auto words = split_words(line);
        const std::string &kw = words[0];
        auto need_one = [&](const char *what) -> std::string {
            if (words.size() != 2) {
                throw ParseError(std::string(what) + " takes exactly one argument", line_no, 0);
            }
            return words[1];
        };
        auto once = [&](bool already, const char *what) {
            if (already) {
                throw ParseError(std::string("duplicate ") + what + " declaration", line_no, 0);
            }
        };
        if (kw == "machine") {
            once(name.has_value(), "machine");
            name = need_one("machine");
        } else if (kw == "alphabet") {
            once(alphabet.has_value(), "alphabet");
            alphabet = std::vector<std::string>(words.begin() + 1, words.end());
        } else if (kw == "states") {
            once(states.has_value(), "states");
            states = std::vector<std::string>(words.begin() + 1, words.end());
        } else if (kw == "initial") {
            once(initial.has_value(), "initial");
            initial = need_one("initial");
        } else if (kw == "final") {
            once(final_state.has_value(), "final");
            final_state = need_one("final");
        } else if (kw == "directions") {
            once(directions.has_value(), "directions");
            auto d = need_one("directions");
            if (d == "LR") {
                directions = DirectionSet::LR;
            } else if (d == "LNR") {
                directions = DirectionSet::LNR;
            } else {
                throw ParseError("directions must be LR or LNR", line_no, 0);
            }
        } else if (kw == "rule") {
            auto arrow = line.find("->");
            if (arrow == std::string_view::npos) {
                throw ParseError("rule is missing '->'", line_no, 0);
            }
            auto head = split_words(line.substr(0, arrow));
            if (head.size() != 3) {
                throw ParseError("rule must start 'rule <state> <symbol> ->'", line_no, 0);
            }
            PendingRule r{head[1], head[2], {}, line_no};
            std::string_view body = line.substr(arrow + 2);
            std::size_t start = 0;
            while (true) {
                auto semi = body.find(';', start);
                auto seg = body.substr(start, semi == std::string_view::npos ? body.size() - start : semi - start);
                r.targets.push_back(parse_target(seg, line_no));
                if (semi == std::string_view::npos) {
                    break;
                }
                start = semi + 1;
            }
            rules.push_back(std::move(r));
        } else {
            throw ParseError("unknown keyword '" + kw + "'", line_no, first);
        }
    }

    if (!name) {
        throw ParseError("missing machine name", 0, 0);
    }
    if (!alphabet) {
        throw ParseError("missing alphabet", 0, 0);
    }
    if (!states) {
        throw ParseError("missing states", 0, 0);
    }
    if (!initial) {
        throw ParseError("missing initial state", 0, 0);
    }
    if (!final_state) {
        throw ParseError("missing final state", 0, 0);
    }
    if (!directions) {
        throw ParseError("missing directions", 0, 0);
    }

    // Blank first so that SymbolId 0 is `#`.
    std::vector<std::string> sigma = *alphabet;
    auto blank = std::find(sigma.begin(), sigma.end(), kBlankName);
    if (blank == sigma.end()) {
        throw ParseError("alphabet must contain the blank symbol #", 0, 0);
    }
    std::rotate(sigma.begin(), blank, blank + 1);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        for (std::size_t j = i + 1; j < sigma.size(); ++j) {
            if (sigma[i] == sigma[j]) {
                throw ParseError("duplicate symbol '" + sigma[i] + "'", 0, 0);
            }
        }
    }
    for (std::size_t i = 0; i < states->size(); ++i) {
        for (std::size_t j = i + 1; j < states->size(); ++j) {
            if ((*states)[i] == (*states)[j]) {
                throw ParseError("duplicate state '" + (*states)[i] + "'", 0, 0);
            }
        }
    }
    auto state_index = [&](const std::string &s, std::size_t line) -> StateId {
        auto it = std::find(states->begin(), states->end(), s);
        if (it == states->end()) {
            throw ParseError("undeclared state '" + s + "'", line, 0);
        }
        return static_cast<StateId>(it - states->begin());
    };
    auto symbol_index = [&](const std::string &s, std::size_t line) -> SymbolId {
        auto it = std::find(sigma.begin(), sigma.end(), s);
        if (it == sigma.end()) {
            throw ParseError("undeclared symbol '" + s + "'", line, 0);
        }
        return static_cast<SymbolId>(it - sigma.begin());
    };
    StateId q0 = state_index(*initial, 0);
    StateId qf = state_index(*final_state, 0);
    if (q0 == qf) {
        throw ParseError("final state must not equal the initial state", 0, 0);
    }

    Machine m(*name, sigma, *states, q0, qf, *directions);
    for (const auto &r : rules) {
        StateId q = state_index(r.state, r.line);
        SymbolId s = symbol_index(r.symbol, r.line);
        for (const auto &t : r.targets) {
            Amplitude amp;
            try {
                amp = parse_amplitude(t.amplitude);
            } catch (const ParseError &e) {
                throw ParseError(std::string("bad amplitude '") + t.amplitude + "': " + e.what(), t.line,
                                 e.position());
            }
            Direction d;
            if (t.move == "L") {
                d = Direction::L;
            } else if (t.move == "R") {
                d = Direction::R;
            } else if (t.move == "N") {
                d = Direction::N;
            } else {
                throw ParseError("direction must be L, N or R", t.line, 0);
            }
            Transition tr{amp, symbol_index(t.write, t.line), state_index(t.next, t.line), d};
            if (q == qf) {
                bool identity = tr.write == s && tr.next == qf && d == Direction::N &&
                                std::abs(amp.value - std::complex<double>(1.0, 0.0)) < 1e-12 &&
                                r.targets.size() == 1;
                if (!identity) {
                    throw ParseError("rules out of the final state must be identity self-loops '1 " + r.symbol +
                                         " " + r.state + " N'",
                                     t.line, 0);
                }
                if (d == Direction::N && *directions == DirectionSet::LR) {
                    throw ParseError("direction N used but machine declares directions LR", t.line, 0);
                }
                continue;
            }
            try {
                m.add_transition(q, s, std::move(tr));
            } catch (const std::invalid_argument &e) {
                throw ParseError(e.what(), t.line, 0);
            }
        }
    }
    return m;
}

Machine load_machine(const std::string &path) { return parse_machine(read_text_file(path)); }

}  // namespace qtm
