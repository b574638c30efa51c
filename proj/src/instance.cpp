#include "qtmsim/instance.hpp"

#include <filesystem>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qtmsim/errors.hpp"
#include "qtmsim/superposition.hpp"

namespace qtm {

namespace {

constexpr std::pair<ClassId, std::string_view> kClassNames[] = {
    {ClassId::EQP, "EQP"},  {ClassId::EBQP, "EBQP"}, {ClassId::EBQP_star, "EBQP*"},
    {ClassId::BQP, "BQP"},  {ClassId::BBQP, "BBQP"}, {ClassId::BBQP_star, "BBQP*"},
    {ClassId::ZQP, "ZQP"},  {ClassId::ZBQP, "ZBQP"}, {ClassId::ZBQP_star, "ZBQP*"},
};

std::int64_t parse_int(const std::string &word, std::size_t line) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(word, &used);
        if (used == word.size()) {
            return v;
        }
    } catch (const std::exception &) {
    }
    throw ParseError("expected an integer, got '" + word + "'", line, 0);
}

}  // namespace

std::string_view class_name(ClassId c) {
    for (const auto &[id, name] : kClassNames) {
        if (id == c) {
            return name;
        }
    }
    return "?";
}

ClassId parse_class(std::string_view name) {
    for (const auto &[id, n] : kClassNames) {
        if (n == name) {
            return id;
        }
    }
    throw std::invalid_argument("unknown class '" + std::string(name) + "'");
}

std::vector<std::string> required_cells(ClassId c) {
    switch (c) {
        case ClassId::ZQP:
            return {"halt", "decision"};
        case ClassId::ZBQP:
        case ClassId::ZBQP_star:
            return {"halt", "accept", "reject"};
        default:
            return {"acceptance"};
    }
}

StepBudget StepBudget::poly(std::vector<std::int64_t> coefficients) {
    for (auto c : coefficients) {
        if (c < 0) {
            throw std::invalid_argument("budget coefficients must be non-negative");
        }
    }
    StepBudget b;
    b.coefficients = std::move(coefficients);
    return b;
}

StepBudget StepBudget::fixed(std::int64_t steps) {
    StepBudget b;
    b.constant = steps;
    return b;
}

std::int64_t StepBudget::evaluate(std::int64_t length) const {
    std::int64_t total = 0;
    if (constant) {
        total = *constant;
    } else {
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
            total = total * length + *it;
        }
    }
    if (total < 1) {
        throw std::invalid_argument("step budget evaluates to " + std::to_string(total) + " (< 1)");
    }
    return total;
}

StepBudget StepBudget::plus(std::int64_t extra) const {
    StepBudget b = *this;
    if (b.constant) {
        *b.constant += extra;
    } else if (b.coefficients.empty()) {
        b.coefficients.push_back(extra);
    } else {
        b.coefficients[0] += extra;
    }
    return b;
}

std::string StepBudget::describe() const {
    if (constant) {
        return "const " + std::to_string(*constant);
    }
    std::string s = "poly";
    for (auto c : coefficients) {
        s += " " + std::to_string(c);
    }
    return s;
}

std::int64_t DecisionProblemInstance::cell(std::string_view role) const {
    auto it = cells.find(std::string(role));
    if (it == cells.end()) {
        throw std::invalid_argument("instance declares no " + std::string(role) + " cell");
    }
    return it->second;
}

std::int64_t DecisionProblemInstance::input_length() const {
    return static_cast<std::int64_t>(encode_input(*machine, input).size());
}

void DecisionProblemInstance::require_cells() const {
    std::set<std::int64_t> used;
    for (const auto &role : required_cells(cls)) {
        std::int64_t idx = cell(role);
        if (!used.insert(idx).second) {
            throw std::invalid_argument("cell roles of a " + std::string(class_name(cls)) +
                                        " instance must use distinct indices");
        }
    }
}

DecisionProblemInstance parse_instance(std::string_view text, const std::string &base_dir) {
    DecisionProblemInstance inst;
    bool have_class = false;
    bool have_budget = false;
    std::map<std::string, std::int64_t> explicit_cells;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    auto resolve = [&](const std::string &p) {
        std::filesystem::path path(p);
        return path.is_absolute() ? p : (std::filesystem::path(base_dir) / path).string();
    };
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        auto words = split_words(line);
        const std::string &kw = words[0];
        try {
            if (kw == "class" && words.size() == 2) {
                inst.cls = parse_class(words[1]);
                have_class = true;
            } else if (kw == "machine" && words.size() == 2) {
                inst.machine_path = resolve(words[1]);
                inst.machine = std::make_shared<const Machine>(load_machine(inst.machine_path));
            } else if (kw == "ir" && words.size() == 2) {
                inst.machine_path = resolve(words[1]);
                inst.ir = load_ir(inst.machine_path);
                inst.machine = std::make_shared<const Machine>(lower(*inst.ir));
            } else if (kw == "budget" && words.size() >= 3 && words[1] == "poly") {
                std::vector<std::int64_t> coeffs;
                for (std::size_t i = 2; i < words.size(); ++i) {
                    coeffs.push_back(parse_int(words[i], line_no));
                }
                inst.budget = StepBudget::poly(coeffs);
                have_budget = true;
            } else if (kw == "budget" && words.size() == 3 && words[1] == "const") {
                inst.budget = StepBudget::fixed(parse_int(words[2], line_no));
                have_budget = true;
            } else if (kw == "cell" && words.size() == 3) {
                explicit_cells[words[1]] = parse_int(words[2], line_no);
            } else if (kw == "input") {
                std::string rest;
                for (std::size_t i = 1; i < words.size(); ++i) {
                    rest += (i > 1 ? " " : "") + words[i];
                }
                inst.input = rest;
            } else {
                throw ParseError("unrecognised instance line", line_no, first);
            }
        } catch (const ParseError &) {
            throw;
        } catch (const std::exception &e) {
            throw ParseError(e.what(), line_no, first);
        }
    }
    if (!have_class) {
        throw ParseError("missing class", 0, 0);
    }
    if (!inst.machine) {
        throw ParseError("missing machine or ir", 0, 0);
    }
    if (!have_budget) {
        throw ParseError("missing budget", 0, 0);
    }
    if (inst.ir) {
        inst.cells = inst.ir->cells;
    }
    for (const auto &[role, idx] : explicit_cells) {
        inst.cells[role] = idx;
    }
    inst.require_cells();
    return inst;
}

DecisionProblemInstance load_instance(const std::string &path) {
    auto inst = parse_instance(read_text_file(path), std::filesystem::path(path).parent_path().string());
    inst.source = path;
    return inst;
}

std::string instance_to_text(const DecisionProblemInstance &inst, const std::string &machine_ref) {
    std::ostringstream out;
    out << "class " << class_name(inst.cls) << '\n' << machine_ref << '\n' << "budget " << inst.budget.describe() << '\n';
    for (const auto &[role, idx] : inst.cells) {
        out << "cell " << role << ' ' << idx << '\n';
    }
    out << "input " << inst.input << '\n';
    return out.str();
}

}  // namespace qtm
