#pragma once

#include <boost/rational.hpp>

#include <charconv>
#include <numeric>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace shearlab {

using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& q) {
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

inline std::int64_t parse_int(std::string_view text) {
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && text.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last)
        throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    return value;
}

// Accepts "p/q" or a bare integer "p".
inline Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    std::int64_t den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
}

inline Rational midpoint(const Rational& a, const Rational& b) {
    return (a + b) / 2;
}

inline int compare(const Rational& a, const Rational& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

/** The index-th rational in the fixed enumeration 0, 1, -1, 2, -2, 1/2, -1/2, 3, ... (by |p|+q). */
inline Rational nth_rational(std::uint64_t index) {
    if (index == 0) return Rational(0);
    std::uint64_t seen = 1;
    for (std::int64_t height = 2;; ++height) {
        // numerators and denominators with |p| + q == height, q >= 1, gcd 1
        for (std::int64_t den = 1; den < height; ++den) {
            std::int64_t num = height - den;
            if (std::gcd(num, den) != 1) continue;
            if (seen == index) return Rational(num, den);
            ++seen;
            if (seen == index) return Rational(-num, den);
            ++seen;
        }
    }
}

} // namespace shearlab
