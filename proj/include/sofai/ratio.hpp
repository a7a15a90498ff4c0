#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sofai {

// Exact rational, always in lowest terms with positive denominator.
// Used wherever goal-satisfaction ratios are compared against thresholds,
// so that e.g. 2/4 >= 1/2 holds exactly rather than up to float rounding.
struct Ratio {
    long long num = 0;
    long long den = 1;

    constexpr Ratio() = default;
    Ratio(long long n, long long d) : num(n), den(d) {
        if (den == 0)
            throw std::invalid_argument("Ratio: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    // Parses "1", "0.5", ".25" into an exact rational.
    static Ratio from_decimal(std::string_view text) {
        if (text.empty())
            throw std::invalid_argument("Ratio: empty decimal");
        bool neg = false;
        std::size_t i = 0;
        if (text[0] == '-' || text[0] == '+') {
            neg = text[0] == '-';
            i = 1;
        }
        long long n = 0, d = 1;
        bool seen_digit = false, seen_dot = false;
        for (; i < text.size(); ++i) {
            char c = text[i];
            if (c == '.') {
                if (seen_dot)
                    throw std::invalid_argument("Ratio: bad decimal '" + std::string(text) + "'");
                seen_dot = true;
            } else if (c >= '0' && c <= '9') {
                n = n * 10 + (c - '0');
                if (seen_dot)
                    d *= 10;
                seen_digit = true;
            } else {
                throw std::invalid_argument("Ratio: bad decimal '" + std::string(text) + "'");
            }
        }
        if (!seen_digit)
            throw std::invalid_argument("Ratio: bad decimal '" + std::string(text) + "'");
        return Ratio(neg ? -n : n, d);
    }

    std::string to_string() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
};

inline bool operator==(const Ratio &a, const Ratio &b) { return a.num == b.num && a.den == b.den; }
inline bool operator!=(const Ratio &a, const Ratio &b) { return !(a == b); }
inline bool operator<(const Ratio &a, const Ratio &b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}
inline bool operator>(const Ratio &a, const Ratio &b) { return b < a; }
inline bool operator<=(const Ratio &a, const Ratio &b) { return !(b < a); }
inline bool operator>=(const Ratio &a, const Ratio &b) { return !(a < b); }

inline Ratio operator+(const Ratio &a, const Ratio &b) {
    long long l = std::lcm(a.den, b.den);
    return Ratio(a.num * (l / a.den) + b.num * (l / b.den), l);
}
inline Ratio operator-(const Ratio &a, const Ratio &b) {
    long long l = std::lcm(a.den, b.den);
    return Ratio(a.num * (l / a.den) - b.num * (l / b.den), l);
}
inline Ratio operator/(const Ratio &a, long long k) { return Ratio(a.num, a.den * k); }

} // namespace sofai
