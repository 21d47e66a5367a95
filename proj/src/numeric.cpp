#include "fjq/numeric.hpp"

#include "fjq/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>

namespace fjq {

namespace mp = boost::multiprecision;

BigInt binomial(int n, int r) {
    if (r < 0 || n < 0 || r > n) return 0;
    r = std::min(r, n - r);
    BigInt result = 1;
    for (int j = 1; j <= r; ++j) {
        result *= n - r + j;
        result /= j;  // exact: result is C(n - r + j, j) here
    }
    return result;
}

double to_double(const Rational& q) {
    BigInt num = mp::numerator(q);
    const BigInt den = mp::denominator(q);
    if (num == 0) return 0.0;
    const bool negative = num < 0;
    if (negative) num = -num;

    // Scale so that the integer quotient lands in [2^62, 2^64).
    const long shift = 63 + static_cast<long>(mp::msb(den)) - static_cast<long>(mp::msb(num));
    BigInt scaled_num = num;
    BigInt scaled_den = den;
    if (shift >= 0) {
        scaled_num <<= shift;
    } else {
        scaled_den <<= -shift;
    }
    BigInt quotient;
    BigInt remainder;
    mp::divide_qr(scaled_num, scaled_den, quotient, remainder);
    auto bits = quotient.convert_to<std::uint64_t>();
    // Sticky bit: sits well below the 53-bit rounding position.
    if (remainder != 0) bits |= 1u;
    const double value = std::ldexp(static_cast<double>(bits), static_cast<int>(-shift));
    return negative ? -value : value;
}

double to_double(const BigInt& z) { return to_double(Rational(z)); }

double round_significant(double x, int digits) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*g", digits, x);
    return std::strtod(buffer, nullptr);
}

namespace {

[[noreturn]] void bad_number(std::string_view text) {
    throw DomainError("not an exact decimal or fraction: '" + std::string(text) + "'");
}

BigInt parse_integer(std::string_view digits, std::string_view whole) {
    if (digits.empty()) bad_number(whole);
    for (char c : digits) {
        if (c < '0' || c > '9') bad_number(whole);
    }
    // cpp_int reads a leading 0 as an octal prefix.
    const auto first = digits.find_first_not_of('0');
    if (first == std::string_view::npos) return 0;
    return BigInt(std::string(digits.substr(first)));
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) bad_number(text);

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        const Rational num = parse_rational(s.substr(0, slash));
        const Rational den = parse_rational(s.substr(slash + 1));
        if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
        return num / den;
    }

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = s.substr(e + 1);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
            exp_negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
        if (ec != std::errc() || ptr != exp_text.data() + exp_text.size() || exp_text.empty()) bad_number(text);
        if (exponent > 10000) bad_number(text);
        if (exp_negative) exponent = -exponent;
        s = s.substr(0, e);
    }

    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        const std::string_view int_part = s.substr(0, dot);
        const std::string_view frac_part = s.substr(dot + 1);
        if (int_part.empty() && frac_part.empty()) bad_number(text);
        digits = std::string(int_part) + std::string(frac_part);
        exponent -= static_cast<long>(frac_part.size());
    } else {
        digits = std::string(s);
    }

    Rational value(parse_integer(digits, text));
    const BigInt scale = mp::pow(BigInt(10), static_cast<unsigned>(std::labs(exponent)));
    if (exponent >= 0) {
        value *= scale;
    } else {
        value /= scale;
    }
    return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) {
    if (mp::denominator(q) == 1) return mp::numerator(q).str();
    return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

std::string to_string(const BigInt& z) { return z.str(); }

std::string format_double(double x) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
    if (ec != std::errc()) {
        std::snprintf(buffer, sizeof buffer, "%.17g", x);
        return buffer;
    }
    return std::string(buffer, ptr);
}

}  // namespace fjq
