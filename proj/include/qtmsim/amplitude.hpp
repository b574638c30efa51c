#pragma once

#include <complex>
#include <string>
#include <string_view>

namespace qtm {

/// A transition amplitude. Values come from exact expressions such as
/// `1/sqrt(2)` or `-1/2 + (sqrt(3)/2)i`; the source text is kept for reports.
struct Amplitude {
    std::complex<double> value;
    std::string source;
};

/// Evaluate an amplitude expression.
///
///     ampl  := ["+"|"-"] cterm (("+"|"-") cterm)*
///     cterm := (rterm | "(" ampl ")") ["i"] | "i"
///     rterm := rational | rational ["*"] "sqrt(" int ")" | rational "/sqrt(" int ")"
///            | "sqrt(" int ")" ["/" int]
///     rational := int ["/" int]
///
/// Whitespace between tokens is ignored. Throws ParseError with the offending
/// offset on syntax errors, integer overflow or a zero denominator.
Amplitude parse_amplitude(std::string_view text);

}  // namespace qtm
