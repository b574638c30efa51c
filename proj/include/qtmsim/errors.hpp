#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qtm {

/// Malformed input text. `line` is 1-based (0 when not line oriented);
/// `position` is the 0-based character offset within the line or expression.
class ParseError : public std::runtime_error {
   public:
    ParseError(const std::string &message, std::size_t line, std::size_t position);

    std::size_t line() const noexcept { return line_; }
    std::size_t position() const noexcept { return position_; }

   private:
    std::size_t line_;
    std::size_t position_;
};

/// Operation attempted on a superposition already consumed by a terminal measurement.
class ConsumedError : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

/// Operation forbidden by the active machine model (e.g. partial observation on a BQTM).
class ModelViolation : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

}  // namespace qtm
