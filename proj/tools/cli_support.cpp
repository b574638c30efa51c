#include "cli_support.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qtmsim/machine.hpp"

namespace qtm::cli {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) {
        return "";
    }
    auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

double parse_decimal(const std::string &s) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != s.size() || s.empty() || !std::isfinite(v)) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    return v;
}

}  // namespace

double parse_real(std::string_view text) {
    std::string s = trim(text);
    if (s.rfind("2^", 0) == 0) {
        std::string exp = s.substr(2);
        std::size_t used = 0;
        long k = 0;
        try {
            k = std::stol(exp, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != exp.size() || exp.empty() || std::labs(k) > 1000) {
            throw std::invalid_argument("bad power of two: '" + s + "'");
        }
        return std::ldexp(1.0, static_cast<int>(k));
    }
    if (auto slash = s.find('/'); slash != std::string::npos) {
        double num = parse_decimal(s.substr(0, slash));
        double den = parse_decimal(s.substr(slash + 1));
        if (den == 0.0) {
            throw std::invalid_argument("zero denominator in '" + s + "'");
        }
        return num / den;
    }
    return parse_decimal(s);
}

std::vector<double> parse_real_list(std::string_view text) {
    std::vector<double> out;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ',')) {
        if (!trim(item).empty()) {
            out.push_back(parse_real(item));
        }
    }
    return out;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t> &flag) {
    if (flag) {
        return *flag;
    }
    if (const char *env = std::getenv("QTMSIM_SEED"); env && *env) {
        try {
            std::size_t used = 0;
            unsigned long long v = std::stoull(env, &used);
            if (used == std::string(env).size()) {
                return v;
            }
        } catch (const std::exception &) {
        }
        throw std::invalid_argument("QTMSIM_SEED is not an unsigned integer");
    }
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string render_text(const nlohmann::ordered_json &payload, const std::string &prefix) {
    std::string out;
    if (payload.is_object()) {
        for (auto it = payload.begin(); it != payload.end(); ++it) {
            out += render_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
        }
    } else if (payload.is_array() && !payload.empty() && (payload[0].is_object() || payload[0].is_array())) {
        for (std::size_t i = 0; i < payload.size(); ++i) {
            out += render_text(payload[i], prefix + "[" + std::to_string(i) + "]");
        }
    } else if (payload.is_string()) {
        out += prefix + ": " + payload.get<std::string>() + "\n";
    } else {
        out += prefix + ": " + payload.dump() + "\n";
    }
    return out;
}

std::string version_string() {
    return "qtmsim 1.0.0 (machine format " + std::to_string(kMachineFormatVersion) + ")";
}

}  // namespace qtm::cli
