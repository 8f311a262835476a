#include <cctype>
#include <cstdlib>
#include <optional>

#include "canard/expr.hpp"

namespace canard {
namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
    bool is_integer = false;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& current() const { return tok_; }

    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::size_t start = pos_;
        if (pos_ >= text_.size()) {
            tok_ = {Tok::End, "", start};
            return;
        }
        char c = text_[pos_];
        switch (c) {
            case '+': ++pos_; tok_ = {Tok::Plus, "+", start}; return;
            case '-': ++pos_; tok_ = {Tok::Minus, "-", start}; return;
            case '*': ++pos_; tok_ = {Tok::Star, "*", start}; return;
            case '/': ++pos_; tok_ = {Tok::Slash, "/", start}; return;
            case '^': ++pos_; tok_ = {Tok::Caret, "^", start}; return;
            case '(': ++pos_; tok_ = {Tok::LParen, "(", start}; return;
            case ')': ++pos_; tok_ = {Tok::RParen, ")", start}; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            bool integer = true;
            std::size_t p = pos_;
            while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
            if (p < text_.size() && text_[p] == '.') {
                integer = false;
                ++p;
                while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
            }
            if (p < text_.size() && (text_[p] == 'e' || text_[p] == 'E')) {
                std::size_t q = p + 1;
                if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
                if (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) {
                    integer = false;
                    p = q;
                    while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
                }
            }
            std::string lit = text_.substr(pos_, p - pos_);
            if (lit == ".") throw ParseError("malformed number", start);
            pos_ = p;
            tok_ = {Tok::Number, lit, start, integer};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t p = pos_;
            while (p < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[p])) || text_[p] == '_'))
                ++p;
            tok_ = {Tok::Ident, text_.substr(pos_, p - pos_), start};
            pos_ = p;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
    Token tok_;
};

std::optional<FuncKind> lookup_func(const std::string& name) {
    if (name == "sin") return FuncKind::Sin;
    if (name == "cos") return FuncKind::Cos;
    if (name == "exp") return FuncKind::Exp;
    if (name == "log") return FuncKind::Log;
    if (name == "sqrt") return FuncKind::Sqrt;
    return std::nullopt;
}

class Parser {
public:
    Parser(const std::string& text, const SymbolSet& symbols) : lex_(text), symbols_(symbols) {}

    Expr run() {
        Expr e = parse_sum();
        if (lex_.current().kind != Tok::End)
            throw ParseError("unexpected trailing input", lex_.current().pos);
        return e;
    }

private:
    Expr parse_sum() {
        std::vector<Expr> terms;
        // A leading sign is handled by parse_unary inside the first term.
        terms.push_back(parse_term());
        while (lex_.current().kind == Tok::Plus || lex_.current().kind == Tok::Minus) {
            bool neg = lex_.current().kind == Tok::Minus;
            lex_.advance();
            Expr t = parse_term();
            terms.push_back(neg ? -t : t);
        }
        if (terms.size() == 1) return terms[0];
        Expr acc = terms[0];
        for (std::size_t i = 1; i < terms.size(); ++i) acc = acc + terms[i];
        return acc;
    }

    Expr parse_term() {
        Expr e = parse_unary();
        bool e_is_int_literal = last_primary_was_integer_;
        while (lex_.current().kind == Tok::Star || lex_.current().kind == Tok::Slash) {
            bool divide = lex_.current().kind == Tok::Slash;
            lex_.advance();
            Expr rhs = parse_unary();
            bool rhs_is_int = last_primary_was_integer_;
            if (divide) {
                if (e_is_int_literal && rhs_is_int && e.is_number() && rhs.is_number() &&
                    !rhs.node().value.is_zero()) {
                    // integer/integer literal -> exact rational constant
                    e = Expr::number(e.node().value / rhs.node().value);
                } else {
                    e = e / rhs;
                    e_is_int_literal = false;
                }
            } else {
                e = e * rhs;
                e_is_int_literal = false;
            }
        }
        last_primary_was_integer_ = e_is_int_literal;
        return e;
    }

    Expr parse_unary() {
        if (lex_.current().kind == Tok::Minus) {
            lex_.advance();
            Expr e = -parse_unary();
            last_primary_was_integer_ = false;
            return e;
        }
        if (lex_.current().kind == Tok::Plus) {
            lex_.advance();
            return parse_unary();
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (lex_.current().kind == Tok::Caret) {
            lex_.advance();
            long long k = parse_exponent();
            if (k < INT32_MIN || k > INT32_MAX)
                throw ParseError("exponent out of range", lex_.current().pos);
            last_primary_was_integer_ = false;
            return base.pow(static_cast<int>(k));
        }
        return base;
    }

    // Exponents are integer literals, optionally signed or parenthesized;
    // a chained `^` inside an exponent is folded right-associatively.
    long long parse_exponent() {
        const Token& t = lex_.current();
        if (t.kind == Tok::LParen) {
            lex_.advance();
            long long k = parse_exponent();
            expect(Tok::RParen, "expected ')'");
            return maybe_chain(k);
        }
        bool neg = false;
        if (t.kind == Tok::Minus) {
            neg = true;
            lex_.advance();
        }
        const Token& lit = lex_.current();
        if (lit.kind != Tok::Number || !lit.is_integer)
            throw ParseError("exponent must be an integer literal", lit.pos);
        long long k = std::strtoll(lit.text.c_str(), nullptr, 10);
        lex_.advance();
        return maybe_chain(neg ? -k : k);
    }

    long long maybe_chain(long long k) {
        if (lex_.current().kind != Tok::Caret) return k;
        lex_.advance();
        long long e = parse_exponent();
        if (e < 0) throw ParseError("negative exponent in exponent chain", lex_.current().pos);
        long long acc = 1;
        for (long long i = 0; i < e; ++i) {
            acc *= k;
            if (acc > INT32_MAX || acc < INT32_MIN)
                throw ParseError("exponent out of range", lex_.current().pos);
        }
        return acc;
    }

    Expr parse_primary() {
        const Token t = lex_.current();
        last_primary_was_integer_ = false;
        switch (t.kind) {
            case Tok::Number: {
                lex_.advance();
                if (t.is_integer) {
                    last_primary_was_integer_ = true;
                    return Expr::integer(std::strtoll(t.text.c_str(), nullptr, 10));
                }
                return Expr::real(std::strtod(t.text.c_str(), nullptr));
            }
            case Tok::Ident: {
                lex_.advance();
                if (auto f = lookup_func(t.text)) {
                    expect(Tok::LParen, "expected '(' after function name");
                    Expr arg = parse_sum();
                    expect(Tok::RParen, "expected ')'");
                    return Expr::call(*f, arg);
                }
                if (symbols_.is_variable(t.text)) return Expr::variable(t.text);
                if (symbols_.is_parameter(t.text)) return Expr::parameter(t.text);
                throw ParseError("undeclared identifier '" + t.text + "'", t.pos);
            }
            case Tok::LParen: {
                lex_.advance();
                Expr e = parse_sum();
                expect(Tok::RParen, "expected ')'");
                return e;
            }
            default:
                throw ParseError("expected a value", t.pos);
        }
    }

    void expect(Tok kind, const char* message) {
        if (lex_.current().kind != kind) throw ParseError(message, lex_.current().pos);
        lex_.advance();
    }

    Lexer lex_;
    const SymbolSet& symbols_;
    bool last_primary_was_integer_ = false;
};

} // namespace

Expr parse_expression(const std::string& text, const SymbolSet& symbols) {
    return Parser(text, symbols).run();
}

} // namespace canard
