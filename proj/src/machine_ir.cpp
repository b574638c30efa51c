#include "qtmsim/machine_ir.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qtmsim/errors.hpp"
#include "qtmsim/wellformed.hpp"

namespace qtm {

std::int64_t MachineIR::cell(std::string_view role) const {
    auto it = cells.find(std::string(role));
    if (it == cells.end()) {
        throw std::invalid_argument("IR '" + name + "' declares no " + std::string(role) + " cell");
    }
    return it->second;
}

namespace {

enum class Phase { none, init, compute, write };

std::int64_t parse_index(const std::string &word, std::size_t line) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(word, &used);
        if (used != word.size()) {
            throw std::invalid_argument(word);
        }
        return v;
    } catch (const std::exception &) {
        throw ParseError("expected a cell index, got '" + word + "'", line, 0);
    }
}

}  // namespace

MachineIR parse_ir(std::string_view text) {
    MachineIR ir;
    Phase phase = Phase::none;
    bool seen_compute = false;
    bool seen_write = false;
    bool seen_directions = false;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        auto words = split_words(line);
        const std::string &kw = words[0];
        auto need = [&](std::size_t n) {
            if (words.size() != n + 1) {
                throw ParseError("'" + kw + "' takes " + std::to_string(n) + " argument(s)", line_no, first);
            }
        };
        if (kw == "phase") {
            need(1);
            if (phase != Phase::none) {
                throw ParseError("phase opened before the previous 'end'", line_no, first);
            }
            if (words[1] == "INIT") {
                if (seen_compute || ir.has_init_phase) {
                    throw ParseError("INIT must come first and only once", line_no, first);
                }
                phase = Phase::init;
                ir.has_init_phase = true;
            } else if (words[1] == "COMPUTE") {
                if (seen_compute || seen_write) {
                    throw ParseError("COMPUTE must come once, before WRITE", line_no, first);
                }
                phase = Phase::compute;
                seen_compute = true;
            } else if (words[1] == "WRITE") {
                if (!seen_compute || seen_write) {
                    throw ParseError("WRITE must come once, after COMPUTE", line_no, first);
                }
                phase = Phase::write;
                seen_write = true;
            } else {
                throw ParseError("unknown phase '" + words[1] + "' (INIT|COMPUTE|WRITE)", line_no, first);
            }
            continue;
        }
        if (kw == "end") {
            if (phase == Phase::none) {
                throw ParseError("'end' outside a phase", line_no, first);
            }
            phase = Phase::none;
            continue;
        }
        switch (phase) {
            case Phase::none:
                if (kw == "ir") {
                    need(1);
                    ir.name = words[1];
                } else if (kw == "alphabet") {
                    ir.alphabet.assign(words.begin() + 1, words.end());
                } else if (kw == "directions") {
                    need(1);
                    if (words[1] == "LR") {
                        ir.directions = DirectionSet::LR;
                    } else if (words[1] == "LNR") {
                        ir.directions = DirectionSet::LNR;
                    } else {
                        throw ParseError("directions must be LR or LNR", line_no, first);
                    }
                    seen_directions = true;
                } else if (kw == "cell") {
                    need(2);
                    if (!ir.cells.emplace(words[1], parse_index(words[2], line_no)).second) {
                        throw ParseError("duplicate cell role '" + words[1] + "'", line_no, first);
                    }
                } else if (kw == "k") {
                    need(1);
                    ir.k = parse_index(words[1], line_no);
                } else {
                    throw ParseError("'" + kw + "' outside a phase", line_no, first);
                }
                break;
            case Phase::init:
                if (kw != "init") {
                    throw ParseError("INIT accepts only 'init <role> <symbol>'", line_no, first);
                }
                need(2);
                ir.init.emplace_back(words[1], words[2]);
                break;
            case Phase::compute:
                if (kw == "states") {
                    ir.compute_states.insert(ir.compute_states.end(), words.begin() + 1, words.end());
                } else if (kw == "entry") {
                    need(1);
                    ir.entry = words[1];
                } else if (kw == "exits") {
                    need(3);
                    ir.exit_yes = words[1];
                    ir.exit_no = words[2];
                    ir.exit_abort = words[3];
                } else if (kw == "rule") {
                    auto rest = line.substr(line.find("rule") + 4);
                    auto b = rest.find_first_not_of(" \t");
                    auto e = rest.find_last_not_of(" \t\r");
                    ir.compute_rules.push_back(b == std::string::npos ? "" : rest.substr(b, e - b + 1));
                } else {
                    throw ParseError("unknown COMPUTE keyword '" + kw + "'", line_no, first);
                }
                break;
            case Phase::write:
                if (kw != "write" || words.size() < 2) {
                    throw ParseError("WRITE accepts only 'write <role> ...'", line_no, first);
                }
                ir.write.insert(ir.write.end(), words.begin() + 1, words.end());
                break;
        }
    }
    if (phase != Phase::none) {
        throw ParseError("unterminated phase (missing 'end')", line_no, 0);
    }
    if (ir.name.empty()) {
        throw ParseError("missing 'ir <name>'", 0, 0);
    }
    if (ir.alphabet.empty()) {
        throw ParseError("missing alphabet", 0, 0);
    }
    if (!seen_directions) {
        throw ParseError("missing directions", 0, 0);
    }
    if (!seen_compute) {
        throw ParseError("missing COMPUTE phase", 0, 0);
    }
    if (!seen_write || ir.write.empty()) {
        throw ParseError("missing WRITE phase", 0, 0);
    }
    if (ir.entry.empty() || ir.exit_yes.empty()) {
        throw ParseError("COMPUTE needs 'entry' and 'exits'", 0, 0);
    }
    return ir;
}

MachineIR load_ir(const std::string &path) { return parse_ir(read_text_file(path)); }

std::string ir_to_text(const MachineIR &ir) {
    std::ostringstream out;
    out << "ir " << ir.name << "\nalphabet";
    for (const auto &s : ir.alphabet) {
        out << ' ' << s;
    }
    out << "\ndirections " << (ir.directions == DirectionSet::LR ? "LR" : "LNR") << '\n';
    std::vector<std::pair<std::int64_t, std::string>> by_index;
    for (const auto &[role, idx] : ir.cells) {
        by_index.emplace_back(idx, role);
    }
    std::sort(by_index.rbegin(), by_index.rend());
    for (const auto &[idx, role] : by_index) {
        out << "cell " << role << ' ' << idx << '\n';
    }
    if (ir.k != 0) {
        out << "k " << ir.k << '\n';
    }
    if (ir.has_init_phase) {
        out << "\nphase INIT\n";
        for (const auto &[role, sym] : ir.init) {
            out << "init " << role << ' ' << sym << '\n';
        }
        out << "end\n";
    }
    out << "\nphase COMPUTE\nstates";
    for (const auto &s : ir.compute_states) {
        out << ' ' << s;
    }
    out << "\nentry " << ir.entry << "\nexits " << ir.exit_yes << ' ' << ir.exit_no << ' ' << ir.exit_abort << '\n';
    for (const auto &r : ir.compute_rules) {
        out << "rule " << r << '\n';
    }
    out << "end\n\nphase WRITE\nwrite";
    for (const auto &w : ir.write) {
        out << ' ' << w;
    }
    out << "\nend\n";
    return out.str();
}

namespace {

// Accumulates generated states and rules in machine-file syntax.
class Builder {
   public:
    explicit Builder(const std::vector<std::string> &alphabet) : alphabet_(alphabet) {}

    std::string fresh(const std::string &prefix) {
        std::string s = prefix + "." + std::to_string(++counters_[prefix]);
        states.push_back(s);
        return s;
    }

    // Move without touching the tape, whatever the cell holds.
    void walk(const std::string &from, const std::string &to, char dir) {
        for (const auto &sym : alphabet_) {
            single(from, sym, sym, to, dir);
        }
    }

    void single(const std::string &from, const std::string &read, const std::string &write, const std::string &to,
                char dir) {
        rules.push_back(from + " " + read + " -> 1 " + write + " " + to + " " + dir);
    }

    std::vector<std::string> states;
    std::vector<std::string> rules;

   private:
    const std::vector<std::string> &alphabet_;
    std::map<std::string, int> counters_;
};

}  // namespace

Machine lower(const MachineIR &ir, LoweringInfo *info) {
    if (ir.directions != DirectionSet::LNR) {
        throw std::invalid_argument("IR lowering needs directions LNR (the halting step does not move)");
    }
    const std::int64_t halt = ir.cell("halt");
    std::set<std::int64_t> seen;
    for (const auto &[role, idx] : ir.cells) {
        if (idx > -2) {
            throw std::invalid_argument("special cell '" + role + "' must lie at index -2 or below");
        }
        if (!seen.insert(idx).second) {
            throw std::invalid_argument("special cells must be distinct");
        }
    }
    const std::set<std::string> reserved_names = {"q0", "qf", "done"};
    std::set<std::string> compute_names(ir.compute_states.begin(), ir.compute_states.end());
    for (const auto &s : ir.compute_states) {
        if (reserved_names.count(s) || s.find('.') != std::string::npos) {
            throw std::invalid_argument("COMPUTE state name '" + s + "' is reserved for generated states");
        }
    }
    for (const auto *s : {&ir.entry, &ir.exit_yes, &ir.exit_no, &ir.exit_abort}) {
        if (!compute_names.count(*s)) {
            throw std::invalid_argument("COMPUTE does not declare state '" + *s + "'");
        }
    }

    std::map<std::int64_t, std::string> initial_value;
    for (const auto &[role, sym] : ir.init) {
        if (!initial_value.emplace(ir.cell(role), sym).second) {
            throw std::invalid_argument("cell '" + role + "' initialised twice");
        }
    }
    auto content = [&](std::int64_t idx) {
        auto it = initial_value.find(idx);
        return it == initial_value.end() ? std::string(kBlankName) : it->second;
    };

    Builder b(ir.alphabet);
    LoweringInfo local;
    std::string initial = ir.entry;

    if (!initial_value.empty()) {
        initial = "q0";
        const std::int64_t lowest = initial_value.begin()->first;
        std::string cur = "q0";
        std::string next = b.fresh("i");
        b.walk(cur, next, 'L');
        cur = next;
        for (std::int64_t pos = -1; pos > lowest; --pos) {
            next = b.fresh("i");
            if (initial_value.count(pos)) {
                b.single(cur, std::string(kBlankName), initial_value[pos], next, 'L');
            } else {
                b.walk(cur, next, 'L');
            }
            cur = next;
        }
        next = b.fresh("r");
        b.single(cur, std::string(kBlankName), initial_value[lowest], next, 'R');
        cur = next;
        for (std::int64_t pos = lowest + 1; pos < -1; ++pos) {
            next = b.fresh("r");
            b.walk(cur, next, 'R');
            cur = next;
        }
        b.single(cur, std::string(kBlankName), std::string(kBlankName), ir.entry, 'R');
        local.init_steps = -2 * lowest;
    }

    std::set<std::int64_t> targets;
    for (const auto &role : ir.write) {
        std::int64_t idx = ir.cell(role);
        if (idx >= halt) {
            throw std::invalid_argument("written cell '" + role + "' must lie beyond the halt cell");
        }
        targets.insert(idx);
    }
    const std::int64_t last = *targets.begin();
    for (const auto &[exit, result] :
         {std::pair{ir.exit_yes, std::string("1")}, std::pair{ir.exit_no, std::string("0")}}) {
        std::string cur = exit;
        std::string next = b.fresh("w" + result);
        b.walk(cur, next, 'L');
        cur = next;
        for (std::int64_t pos = -1; pos > last; --pos) {
            next = b.fresh("w" + result);
            if (targets.count(pos)) {
                b.single(cur, content(pos), result, next, 'L');
            } else {
                b.walk(cur, next, 'L');
            }
            cur = next;
        }
        b.single(cur, content(last), result, "done", 'R');
    }
    {
        std::string cur = "done";
        for (std::int64_t pos = last + 1; pos < halt; ++pos) {
            std::string next = b.fresh("d");
            b.walk(cur, next, 'R');
            cur = next;
        }
        b.single(cur, "1", "1", "qf", 'N');
    }
    {
        std::string cur = ir.exit_abort;
        for (std::int64_t pos = 0; pos > halt; --pos) {
            std::string next = b.fresh("a");
            b.walk(cur, next, 'L');
            cur = next;
        }
        b.single(cur, "0", "0", "qf", 'N');
    }
    local.write_steps = std::max(halt - 2 * last + 1, -halt + 1);

    std::ostringstream text;
    text << "machine " << ir.name << "\nalphabet";
    for (const auto &s : ir.alphabet) {
        text << ' ' << s;
    }
    text << "\nstates";
    if (!initial_value.empty()) {
        text << " q0";
    }
    for (const auto &s : ir.compute_states) {
        text << ' ' << s;
    }
    for (const auto &s : b.states) {
        text << ' ' << s;
    }
    text << " done qf\ninitial " << initial << "\nfinal qf\ndirections LNR\n";
    for (const auto &r : ir.compute_rules) {
        text << "rule " << r << '\n';
    }
    for (const auto &r : b.rules) {
        text << "rule " << r << '\n';
    }

    Machine m = parse_machine(text.str());
    local.completed = complete_columns(m);
    auto report = validate_wellformed(m);
    if (!report.pass) {
        std::string msg = "lowered machine '" + ir.name + "' is not well-formed:";
        for (const auto &f : report.failures) {
            msg += "\n  " + f;
        }
        throw std::runtime_error(msg);
    }
    if (info) {
        *info = std::move(local);
    }
    return m;
}

}  // namespace qtm
