#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "charp/ratfunc.hpp"

namespace charp {

/// Expression tree for the published text grammar: integer constants,
/// identifiers, + - * / ^ and parentheses.  Which identifiers are legal
/// depends on the evaluation domain (scalars: u, t; series: also x;
/// systems: also x1..xd).
struct Expr {
    enum class Kind { Int, Var, Add, Sub, Mul, Div, Neg, Pow };
    Kind kind;
    long long ival = 0;                 // Int, and the exponent for Pow
    std::string name;                   // Var
    std::shared_ptr<const Expr> lhs, rhs;
};
using ExprPtr = std::shared_ptr<const Expr>;

/// Parse an expression; positions are 1-based within the given text.
/// Throws ParseError with line/column and the expected-token set.
ExprPtr parse_expression(const std::string& text);

/// Evaluate in F_q(t).  Legal variables: t, and u when the field is a
/// proper extension.  Throws ValidationError on unknown variables or
/// division by zero.
RatFunc eval_scalar(const ExprPtr& e, const FqFieldPtr& F);
RatFunc parse_scalar(const std::string& text, const FqFieldPtr& F);

/// Rational function of x over F_q(t), reduced, for series input.
struct XRat {
    XPoly num;
    XPoly den;
};
XRat eval_series_expr(const ExprPtr& e, const FqFieldPtr& F);

/// Exact rational arithmetic in F_q(t)(x) on reduced (num, den) pairs.
XRat xrat_reduce(XPoly num, XPoly den);
XRat xrat_add(const XRat& a, const XRat& b);
XRat xrat_sub(const XRat& a, const XRat& b);
XRat xrat_mul(const XRat& a, const XRat& b);
XRat xrat_div(const XRat& a, const XRat& b);

/// Evaluate at a point of A^d; variables x1..xd (x is an alias for x1
/// when d = 1).  Empty result signals an undefined value (vanishing
/// denominator or 0/0) at this point.
std::optional<RatFunc> eval_at_point(const ExprPtr& e, const FqFieldPtr& F,
                                     const std::vector<RatFunc>& coords);

/// Variables other than t/u appearing in the expression.
std::vector<std::string> expr_point_vars(const ExprPtr& e);

/// Canonical printing.  Scalars print as num/den with ascending-power
/// monomial order; each side is parenthesized when it has more than one
/// term.  Every printed form re-parses to an equal value.
std::string to_string(const Poly& p);
std::string to_string(const RatFunc& f);
std::string to_string(const Place& v);
std::string to_string(const XPoly& p);
std::string series_to_string(const XPoly& num, const XPoly& den);

}  // namespace charp
