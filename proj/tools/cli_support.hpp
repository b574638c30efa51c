#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace qtm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInvalid = 3;

/// Decimal, `a/b`, or `2^-k` / `2^k`.
double parse_real(std::string_view text);

/// Comma-separated list of parse_real values.
std::vector<double> parse_real_list(std::string_view text);

/// Seed from the flag, else QTMSIM_SEED, else std::random_device.
std::uint64_t resolve_seed(const std::optional<std::uint64_t> &flag);

/// key: value lines. Nested objects become dotted keys, arrays of objects
/// indexed keys. Numbers are printed exactly as in the JSON document.
std::string render_text(const nlohmann::ordered_json &payload, const std::string &prefix = "");

std::string version_string();

}  // namespace qtm::cli
