#include "qtmsim/amplitude.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>

#include "qtmsim/errors.hpp"

namespace qtm {

ParseError::ParseError(const std::string &message, std::size_t line, std::size_t position)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", position " +
                                        std::to_string(position) + ": " + message
                                  : "position " + std::to_string(position) + ": " + message),
      line_(line),
      position_(position) {}

namespace {

using Complex = std::complex<long double>;

class AmplitudeParser {
   public:
    explicit AmplitudeParser(std::string_view text) : text_(text) {}

    Complex parse() {
        Complex v = expression();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        }
        return v;
    }

   private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string &what) const { throw ParseError(what, 0, pos_); }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) {
            ++pos_;
        }
    }

    bool peek(char c) {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool peek_word(std::string_view w) {
        skip_space();
        return text_.substr(pos_, w.size()) == w;
    }

    bool peek_digit() {
        skip_space();
        return pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9';
    }

    void expect(char c) {
        if (!peek(c)) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    long double integer() {
        skip_space();
        std::uint64_t v = 0;
        auto first = text_.data() + pos_;
        auto last = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec == std::errc::result_out_of_range) {
            fail("integer literal overflows");
        }
        if (ec != std::errc() || ptr == first) {
            fail("expected integer");
        }
        pos_ += static_cast<std::size_t>(ptr - first);
        return static_cast<long double>(v);
    }

    long double sqrt_call() {
        pos_ += 5;  // "sqrt("
        long double v = std::sqrt(integer());
        expect(')');
        return v;
    }

    long double nonzero(long double d, std::size_t at) {
        if (d == 0.0L) {
            throw ParseError("division by zero", 0, at);
        }
        return d;
    }

    long double rterm() {
        if (peek_word("sqrt(")) {
            long double v = sqrt_call();
            if (peek('/')) {
                ++pos_;
                std::size_t at = pos_;
                v /= nonzero(integer(), at);
            }
            return v;
        }
        long double v = integer();
        if (peek('/')) {
            ++pos_;
            std::size_t at = pos_;
            if (peek_word("sqrt(")) {
                return v / nonzero(sqrt_call(), at);
            }
            v /= nonzero(integer(), at);
        }
        if (peek('*')) {
            ++pos_;
            if (!peek_word("sqrt(")) {
                fail("expected sqrt( after '*'");
            }
            return v * sqrt_call();
        }
        if (peek_word("sqrt(")) {
            return v * sqrt_call();
        }
        if (peek('/')) {
            ++pos_;
            std::size_t at = pos_;
            if (!peek_word("sqrt(")) {
                fail("expected sqrt( after second '/'");
            }
            return v / nonzero(sqrt_call(), at);
        }
        return v;
    }

    Complex cterm() {
        if (peek('i')) {
            ++pos_;
            return Complex(0.0L, 1.0L);
        }
        Complex v;
        if (peek('(')) {
            ++pos_;
            v = expression();
            expect(')');
        } else if (peek_digit() || peek_word("sqrt(")) {
            v = Complex(rterm(), 0.0L);
        } else {
            fail(pos_ < text_.size() ? "expected a term" : "unexpected end of expression");
        }
        if (peek('i')) {
            ++pos_;
            v *= Complex(0.0L, 1.0L);
        }
        return v;
    }

    Complex expression() {
        long double sign = 1.0L;
        if (peek('-')) {
            ++pos_;
            sign = -1.0L;
        } else if (peek('+')) {
            ++pos_;
        }
        Complex v = sign * cterm();
        while (true) {
            if (peek('+')) {
                ++pos_;
                v += cterm();
            } else if (peek('-')) {
                ++pos_;
                v -= cterm();
            } else {
                break;
            }
        }
        return v;
    }
};

}  // namespace

Amplitude parse_amplitude(std::string_view text) {
    AmplitudeParser parser(text);
    Complex v = parser.parse();
    std::complex<double> value(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        throw ParseError("amplitude is not finite", 0, 0);
    }
    std::string source(text);
    auto b = source.find_first_not_of(" \t");
    auto e = source.find_last_not_of(" \t");
    source = b == std::string::npos ? std::string() : source.substr(b, e - b + 1);
    return Amplitude{value, std::move(source)};
}

}  // namespace qtm
