#include "charp/scalar_io.hpp"

#include <algorithm>
#include <cctype>

namespace charp {

namespace {

struct Token {
    enum class Kind { Int, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Kind kind;
    long long ival = 0;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
   public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

   private:
    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;

    void advance() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) bump();
        tok_ = Token{Token::Kind::End, 0, "", line_, col_};
        if (pos_ >= s_.size()) return;
        char c = s_[pos_];
        tok_.line = line_;
        tok_.col = col_;
        if (std::isdigit((unsigned char)c)) {
            long long v = 0;
            std::string txt;
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
                v = v * 10 + (s_[pos_] - '0');
                txt += s_[pos_];
                bump();
            }
            tok_.kind = Token::Kind::Int;
            tok_.ival = v;
            tok_.text = txt;
            return;
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            std::string txt;
            while (pos_ < s_.size() && (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_')) {
                txt += s_[pos_];
                bump();
            }
            tok_.kind = Token::Kind::Ident;
            tok_.text = txt;
            return;
        }
        switch (c) {
            case '+': tok_.kind = Token::Kind::Plus; break;
            case '-': tok_.kind = Token::Kind::Minus; break;
            case '*': tok_.kind = Token::Kind::Star; break;
            case '/': tok_.kind = Token::Kind::Slash; break;
            case '^': tok_.kind = Token::Kind::Caret; break;
            case '(': tok_.kind = Token::Kind::LParen; break;
            case ')': tok_.kind = Token::Kind::RParen; break;
            default:
                throw ParseError(line_, col_, "integer, identifier, + - * / ^ ( )",
                                 std::string("unexpected character '") + c + "'");
        }
        tok_.text = std::string(1, c);
        bump();
    }

    void bump() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
};

class Parser {
   public:
    explicit Parser(const std::string& s) : lex_(s) {}

    ExprPtr parse() {
        ExprPtr e = sum();
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::End)
            throw ParseError(t.line, t.col, "operator or end of expression",
                             "trailing input starting at '" + t.text + "'");
        return e;
    }

   private:
    Lexer lex_;

    static ExprPtr node(Expr::Kind k, ExprPtr l, ExprPtr r) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->lhs = std::move(l);
        e->rhs = std::move(r);
        return e;
    }

    ExprPtr sum() {
        ExprPtr e = term();
        while (true) {
            auto k = lex_.peek().kind;
            if (k == Token::Kind::Plus) {
                lex_.take();
                e = node(Expr::Kind::Add, e, term());
            } else if (k == Token::Kind::Minus) {
                lex_.take();
                e = node(Expr::Kind::Sub, e, term());
            } else {
                return e;
            }
        }
    }

    ExprPtr term() {
        ExprPtr e = factor();
        while (true) {
            auto k = lex_.peek().kind;
            if (k == Token::Kind::Star) {
                lex_.take();
                e = node(Expr::Kind::Mul, e, factor());
            } else if (k == Token::Kind::Slash) {
                lex_.take();
                e = node(Expr::Kind::Div, e, factor());
            } else {
                return e;
            }
        }
    }

    ExprPtr factor() {
        if (lex_.peek().kind == Token::Kind::Minus) {
            Token m = lex_.take();
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Neg;
            e->lhs = factor();
            return e;
        }
        ExprPtr e = primary();
        while (lex_.peek().kind == Token::Kind::Caret) {
            lex_.take();
            long long sign = 1;
            bool parens = false;
            if (lex_.peek().kind == Token::Kind::LParen) {
                parens = true;
                lex_.take();
            }
            if (lex_.peek().kind == Token::Kind::Minus) {
                lex_.take();
                sign = -1;
            } else if (lex_.peek().kind == Token::Kind::Plus) {
                lex_.take();
            }
            Token t = lex_.peek();
            if (t.kind != Token::Kind::Int)
                throw ParseError(t.line, t.col, "integer exponent", "exponent must be an integer literal");
            lex_.take();
            if (parens) {
                Token c = lex_.peek();
                if (c.kind != Token::Kind::RParen)
                    throw ParseError(c.line, c.col, ")", "unclosed exponent parenthesis");
                lex_.take();
            }
            auto p = std::make_shared<Expr>();
            p->kind = Expr::Kind::Pow;
            p->ival = sign * t.ival;
            p->lhs = e;
            e = p;
        }
        return e;
    }

    ExprPtr primary() {
        Token t = lex_.peek();
        switch (t.kind) {
            case Token::Kind::Int: {
                lex_.take();
                auto e = std::make_shared<Expr>();
                e->kind = Expr::Kind::Int;
                e->ival = t.ival;
                return e;
            }
            case Token::Kind::Ident: {
                lex_.take();
                auto e = std::make_shared<Expr>();
                e->kind = Expr::Kind::Var;
                e->name = t.text;
                return e;
            }
            case Token::Kind::LParen: {
                lex_.take();
                ExprPtr e = sum();
                Token c = lex_.peek();
                if (c.kind != Token::Kind::RParen) throw ParseError(c.line, c.col, ")", "unclosed parenthesis");
                lex_.take();
                return e;
            }
            default:
                throw ParseError(t.line, t.col, "integer, identifier or (",
                                 "expected a primary expression" + (t.text.empty() ? "" : " before '" + t.text + "'"));
        }
    }
};

}  // namespace

ExprPtr parse_expression(const std::string& text) { return Parser(text).parse(); }

RatFunc eval_scalar(const ExprPtr& e, const FqFieldPtr& F) {
    switch (e->kind) {
        case Expr::Kind::Int: return RatFunc::from_int(F, e->ival);
        case Expr::Kind::Var:
            if (e->name == "t") return RatFunc::t(F);
            if (e->name == "u") {
                if (F->ext_degree() == 1)
                    throw ValidationError("variable u requires an extension field (ext_degree > 1)");
                return RatFunc::constant(F, F->from_coeffs({0, 1}));
            }
            throw ValidationError("unknown scalar variable '" + e->name + "' (expected t or u)");
        case Expr::Kind::Add: return eval_scalar(e->lhs, F) + eval_scalar(e->rhs, F);
        case Expr::Kind::Sub: return eval_scalar(e->lhs, F) - eval_scalar(e->rhs, F);
        case Expr::Kind::Mul: return eval_scalar(e->lhs, F) * eval_scalar(e->rhs, F);
        case Expr::Kind::Div: {
            RatFunc d = eval_scalar(e->rhs, F);
            if (d.is_zero()) throw ValidationError("division by zero in scalar expression");
            return eval_scalar(e->lhs, F) / d;
        }
        case Expr::Kind::Neg: return -eval_scalar(e->lhs, F);
        case Expr::Kind::Pow: {
            RatFunc b = eval_scalar(e->lhs, F);
            if (b.is_zero() && e->ival < 0) throw ValidationError("negative power of zero");
            return b.pow(e->ival);
        }
    }
    throw ValidationError("corrupt expression tree");
}

RatFunc parse_scalar(const std::string& text, const FqFieldPtr& F) {
    return eval_scalar(parse_expression(text), F);
}

XRat xrat_reduce(XPoly num, XPoly den) {
    if (den.is_zero()) throw ValidationError("division by zero in series expression");
    if (num.is_zero())
        return {num, XPoly::constant(num.ring(), 'x', num.ring().one())};
    XPoly g = xpoly_gcd(num, den);
    if (g.degree() > 0) {
        num = num / g;
        den = den / g;
    }
    // Normalize so the denominator's lowest nonzero coefficient is 1 when
    // den(0) != 0, otherwise make the leading coefficient 1.
    RatFunc pivot = den.coeff(0);
    if (pivot.is_zero()) pivot = den.leading();
    RatFunc inv = den.ring().one() / pivot;
    return {num.scaled(inv), den.scaled(inv)};
}

XRat xrat_add(const XRat& a, const XRat& b) {
    return xrat_reduce(a.num * b.den + b.num * a.den, a.den * b.den);
}

XRat xrat_sub(const XRat& a, const XRat& b) {
    return xrat_reduce(a.num * b.den - b.num * a.den, a.den * b.den);
}

XRat xrat_mul(const XRat& a, const XRat& b) { return xrat_reduce(a.num * b.num, a.den * b.den); }

XRat xrat_div(const XRat& a, const XRat& b) {
    if (b.num.is_zero()) throw ValidationError("division by zero in series expression");
    return xrat_reduce(a.num * b.den, a.den * b.num);
}

namespace {

XRat xrat_from_scalar(const FqFieldPtr& F, RatFunc v) {
    RatFuncRing R{F};
    return {XPoly::constant(R, 'x', std::move(v)), XPoly::constant(R, 'x', R.one())};
}

}  // namespace

XRat eval_series_expr(const ExprPtr& e, const FqFieldPtr& F) {
    RatFuncRing R{F};
    switch (e->kind) {
        case Expr::Kind::Int: return xrat_from_scalar(F, RatFunc::from_int(F, e->ival));
        case Expr::Kind::Var:
            if (e->name == "x")
                return {XPoly::monomial(R, 'x', R.one(), 1), XPoly::constant(R, 'x', R.one())};
            return xrat_from_scalar(F, eval_scalar(e, F));
        case Expr::Kind::Add: return xrat_add(eval_series_expr(e->lhs, F), eval_series_expr(e->rhs, F));
        case Expr::Kind::Sub: return xrat_sub(eval_series_expr(e->lhs, F), eval_series_expr(e->rhs, F));
        case Expr::Kind::Mul: return xrat_mul(eval_series_expr(e->lhs, F), eval_series_expr(e->rhs, F));
        case Expr::Kind::Div: return xrat_div(eval_series_expr(e->lhs, F), eval_series_expr(e->rhs, F));
        case Expr::Kind::Neg: {
            XRat v = eval_series_expr(e->lhs, F);
            return {-v.num, v.den};
        }
        case Expr::Kind::Pow: {
            XRat b = eval_series_expr(e->lhs, F);
            long long k = e->ival;
            if (k < 0) {
                if (b.num.is_zero()) throw ValidationError("negative power of zero");
                std::swap(b.num, b.den);
                k = -k;
            }
            return xrat_reduce(b.num.pow((unsigned long long)k), b.den.pow((unsigned long long)k));
        }
    }
    throw ValidationError("corrupt expression tree");
}

std::optional<RatFunc> eval_at_point(const ExprPtr& e, const FqFieldPtr& F,
                                     const std::vector<RatFunc>& coords) {
    switch (e->kind) {
        case Expr::Kind::Int: return RatFunc::from_int(F, e->ival);
        case Expr::Kind::Var: {
            if (e->name == "t" || e->name == "u") return eval_scalar(e, F);
            if (e->name == "x" && coords.size() == 1) return coords[0];
            if (e->name.size() > 1 && e->name[0] == 'x') {
                std::size_t idx = 0;
                for (std::size_t i = 1; i < e->name.size(); ++i) {
                    if (!std::isdigit((unsigned char)e->name[i])) { idx = 0; break; }
                    idx = idx * 10 + (std::size_t)(e->name[i] - '0');
                }
                if (idx >= 1 && idx <= coords.size()) return coords[idx - 1];
            }
            throw ValidationError("unknown variable '" + e->name + "' in system expression");
        }
        case Expr::Kind::Add: {
            auto a = eval_at_point(e->lhs, F, coords), b = eval_at_point(e->rhs, F, coords);
            if (!a || !b) return std::nullopt;
            return *a + *b;
        }
        case Expr::Kind::Sub: {
            auto a = eval_at_point(e->lhs, F, coords), b = eval_at_point(e->rhs, F, coords);
            if (!a || !b) return std::nullopt;
            return *a - *b;
        }
        case Expr::Kind::Mul: {
            auto a = eval_at_point(e->lhs, F, coords), b = eval_at_point(e->rhs, F, coords);
            if (!a || !b) return std::nullopt;
            return *a * *b;
        }
        case Expr::Kind::Div: {
            auto a = eval_at_point(e->lhs, F, coords), b = eval_at_point(e->rhs, F, coords);
            if (!a || !b || b->is_zero()) return std::nullopt;
            return *a / *b;
        }
        case Expr::Kind::Neg: {
            auto a = eval_at_point(e->lhs, F, coords);
            if (!a) return std::nullopt;
            return -*a;
        }
        case Expr::Kind::Pow: {
            auto a = eval_at_point(e->lhs, F, coords);
            if (!a) return std::nullopt;
            if (a->is_zero() && e->ival < 0) return std::nullopt;
            return a->pow(e->ival);
        }
    }
    throw ValidationError("corrupt expression tree");
}

static void collect_vars(const ExprPtr& e, std::vector<std::string>& out) {
    if (!e) return;
    if (e->kind == Expr::Kind::Var && e->name != "t" && e->name != "u") {
        if (std::find(out.begin(), out.end(), e->name) == out.end()) out.push_back(e->name);
    }
    collect_vars(e->lhs, out);
    collect_vars(e->rhs, out);
}

std::vector<std::string> expr_point_vars(const ExprPtr& e) {
    std::vector<std::string> out;
    collect_vars(e, out);
    return out;
}

namespace {

std::string fq_coeff_string(const FqFieldPtr& F, FqElem c, bool* composite) {
    std::string s = F->to_string(c);
    *composite = s.find('+') != std::string::npos;
    return s;
}

std::size_t term_count(const Poly& p) {
    std::size_t n = 0;
    for (auto c : p.coeffs())
        if (c != 0) ++n;
    return n;
}

}  // namespace

std::string to_string(const Poly& p) {
    if (p.is_zero()) return "0";
    const auto& F = p.ring().F;
    std::string s;
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
        FqElem c = p.coeffs()[i];
        if (c == 0) continue;
        if (!s.empty()) s += "+";
        bool composite = false;
        std::string cs = fq_coeff_string(F, c, &composite);
        if (i == 0) {
            s += composite ? "(" + cs + ")" : cs;
        } else {
            if (c != 1) s += (composite ? "(" + cs + ")" : cs) + "*";
            s += p.var();
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

std::string to_string(const RatFunc& f) {
    std::string n = to_string(f.num());
    std::string d = to_string(f.den());
    if (term_count(f.num()) > 1) n = "(" + n + ")";
    if (term_count(f.den()) > 1) d = "(" + d + ")";
    return n + "/" + d;
}

std::string to_string(const Place& v) {
    if (v.at_infinity) return "infinity";
    return to_string(*v.pi);
}

namespace {
// Compact coefficient for embedding in x-polynomials: drop "/1".
std::string coeff_string(const RatFunc& f, bool* needs_parens) {
    bool den_one = f.den().is_constant() && !f.den().is_zero();
    if (den_one) {
        *needs_parens = term_count(f.num()) > 1;
        return to_string(f.num());
    }
    *needs_parens = false;  // printed with its own parentheses
    std::string n = to_string(f.num());
    std::string d = to_string(f.den());
    if (term_count(f.num()) > 1) n = "(" + n + ")";
    if (term_count(f.den()) > 1) d = "(" + d + ")";
    return "(" + n + "/" + d + ")";
}
}  // namespace

std::string to_string(const XPoly& p) {
    if (p.is_zero()) return "0";
    std::string s;
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
        const RatFunc& c = p.coeffs()[i];
        if (c.is_zero()) continue;
        if (!s.empty()) s += "+";
        if (i == 0) {
            bool parens = false;
            std::string cs = coeff_string(c, &parens);
            s += parens ? "(" + cs + ")" : cs;
        } else {
            if (!c.is_one()) {
                bool parens = false;
                std::string cs = coeff_string(c, &parens);
                s += (parens ? "(" + cs + ")" : cs) + "*";
            }
            s += 'x';
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

std::string series_to_string(const XPoly& num, const XPoly& den) {
    return "(" + to_string(num) + ")/(" + to_string(den) + ")";
}

}  // namespace charp
