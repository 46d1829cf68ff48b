#pragma once

#include <numeric>
#include <string>

namespace charp {

/// Small exact rational (report values: densities, height constants).
struct Rat {
    long long num = 0;
    long long den = 1;

    Rat() = default;
    Rat(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }

    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator<(const Rat& a, const Rat& b) {
        return (__int128)a.num * b.den < (__int128)b.num * a.den;
    }
    friend bool operator<=(const Rat& a, const Rat& b) { return a == b || a < b; }

    std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }
    double approx() const { return (double)num / (double)den; }
};

}  // namespace charp
