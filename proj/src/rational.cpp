#include "patsched/rational.hpp"

#include <charconv>
#include <stdexcept>

namespace patsched {

namespace {

__extension__ using Wide = __int128;

std::int64_t parse_int(std::string_view text, std::string_view whole) {
    std::int64_t value = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last) {
        throw std::invalid_argument("not a rational: '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

std::string to_decimal(const Rational& value) {
    if (value.denominator() == 1) {
        return std::to_string(value.numerator());
    }
    constexpr Wide kScale = 1'000'000;
    const bool negative = value.numerator() < 0;
    const Wide num = negative ? -static_cast<Wide>(value.numerator())
                                  : static_cast<Wide>(value.numerator());
    const Wide den = value.denominator();
    // Round half away from zero at the sixth place.
    const Wide scaled = (num * kScale * 2 + den) / (den * 2);
    auto whole = static_cast<std::int64_t>(scaled / kScale);
    auto frac = static_cast<std::int64_t>(scaled % kScale);

    std::string out;
    if (negative && scaled != 0) {
        out.push_back('-');
    }
    out += std::to_string(whole);
    if (frac != 0) {
        std::string digits = std::to_string(frac);
        digits.insert(0, 6 - digits.size(), '0');
        while (digits.back() == '0') {
            digits.pop_back();
        }
        out += '.';
        out += digits;
    }
    return out;
}

std::string to_fraction_text(const Rational& value) {
    if (value.denominator() == 1) {
        return std::to_string(value.numerator());
    }
    return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_int(text, text));
    }
    const auto num = parse_int(text.substr(0, slash), text);
    const auto den = parse_int(text.substr(slash + 1), text);
    if (den == 0) {
        throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    }
    return Rational(num, den);
}

}  // namespace patsched
