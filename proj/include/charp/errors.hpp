#pragma once

#include <stdexcept>
#include <string>

namespace charp {

struct ZeroDenominator : std::domain_error {
    ZeroDenominator() : std::domain_error("denominator is zero") {}
};

struct ZeroPolynomial : std::domain_error {
    ZeroPolynomial() : std::domain_error("zero polynomial has no factorization") {}
};

struct ZeroArgument : std::domain_error {
    explicit ZeroArgument(const std::string& what) : std::domain_error(what) {}
};

struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct RankZero : std::domain_error {
    RankZero() : std::domain_error("group has rank zero: no places to select") {}
};

struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Parse failure with position information and the tokens that would have
/// been accepted at that point.
struct ParseError : std::invalid_argument {
    int line;
    int column;
    std::string expected;

    ParseError(int line_, int col_, const std::string& expected_, const std::string& what)
        : std::invalid_argument(what), line(line_), column(col_), expected(expected_) {}
};

}  // namespace charp
