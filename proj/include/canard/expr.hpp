#ifndef CANARD_EXPR_HPP
#define CANARD_EXPR_HPP

#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "canard/rational.hpp"

namespace canard {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Raised by the expression parser; carries the byte offset of the offence.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Raised on numeric evaluation failures (domain violations, division by zero).
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when evaluation hits a symbol with no binding.
class UnboundSymbolError : public EvalError {
public:
    explicit UnboundSymbolError(const std::string& name)
        : EvalError("unbound symbol '" + name + "'"), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

// ---------------------------------------------------------------------------
// Numbers: exact rationals with sticky degradation to double
// ---------------------------------------------------------------------------

/// A scalar constant. Exact (rational) until an inexact input or an overflow
/// contaminates it; contamination is sticky and queryable.
class NumberValue {
public:
    NumberValue() : exact_(true), rat_(0), flt_(0.0) {}
    static NumberValue exact(Rational r) {
        NumberValue v;
        v.exact_ = true;
        v.rat_ = r;
        v.flt_ = r.to_double();
        return v;
    }
    static NumberValue inexact(double d) {
        NumberValue v;
        v.exact_ = false;
        v.rat_ = Rational(0);
        v.flt_ = d;
        return v;
    }

    bool is_exact() const { return exact_; }
    const Rational& rat() const { return rat_; }
    double to_double() const { return exact_ ? rat_.to_double() : flt_; }

    bool is_zero() const { return exact_ ? rat_.is_zero() : flt_ == 0.0; }
    bool is_one() const { return exact_ ? rat_.is_one() : flt_ == 1.0; }
    bool negative() const { return exact_ ? rat_.negative() : flt_ < 0.0; }

    NumberValue operator-() const;
    friend NumberValue operator+(const NumberValue& a, const NumberValue& b);
    friend NumberValue operator-(const NumberValue& a, const NumberValue& b);
    friend NumberValue operator*(const NumberValue& a, const NumberValue& b);
    /// Division; the caller guarantees b is nonzero.
    friend NumberValue operator/(const NumberValue& a, const NumberValue& b);
    NumberValue pow(int k) const;
    NumberValue abs() const { return negative() ? -*this : *this; }

    friend bool operator==(const NumberValue& a, const NumberValue& b) {
        if (a.exact_ != b.exact_) return false;
        return a.exact_ ? a.rat_ == b.rat_ : a.flt_ == b.flt_;
    }

    std::string str() const;

private:
    bool exact_;
    Rational rat_;
    double flt_;
};

// ---------------------------------------------------------------------------
// Expression trees
// ---------------------------------------------------------------------------

enum class ExprKind { Number, Variable, Parameter, Sum, Product, Quotient, Power, Negate, Call };

enum class FuncKind { Sin, Cos, Exp, Log, Sqrt };

const char* func_name(FuncKind f);

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

/// One immutable node of an expression tree. Sum and Product are n-ary;
/// Quotient holds {numerator, denominator}; Power holds the base plus an
/// integer exponent; Negate and Call hold a single child.
struct ExprNode {
    ExprKind kind;
    NumberValue value;          // Number
    std::string name;           // Variable / Parameter
    FuncKind func = FuncKind::Sin; // Call
    int exponent = 0;           // Power
    std::vector<ExprPtr> kids;
};

/// Value-semantics handle to an immutable expression tree. Copies are cheap
/// (shared structure); all operations build new trees.
class Expr {
public:
    Expr() : node_(zero_node()) {}
    explicit Expr(ExprPtr node) : node_(std::move(node)) {}

    static Expr integer(long long n) { return number(NumberValue::exact(Rational(n))); }
    static Expr rational(Rational r) { return number(NumberValue::exact(r)); }
    static Expr real(double d) { return number(NumberValue::inexact(d)); }
    static Expr number(NumberValue v);
    static Expr variable(std::string name);
    static Expr parameter(std::string name);
    static Expr call(FuncKind f, Expr arg);

    const ExprNode& node() const { return *node_; }
    const ExprPtr& ptr() const { return node_; }
    ExprKind kind() const { return node_->kind; }

    bool is_number() const { return node_->kind == ExprKind::Number; }
    bool is_zero_literal() const { return is_number() && node_->value.is_zero(); }
    bool is_one_literal() const { return is_number() && node_->value.is_one(); }

    Expr operator-() const;
    Expr pow(int k) const;
    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);

    /// Precedence-aware text form; parses back to an equivalent tree.
    std::string str() const;

private:
    static const ExprPtr& zero_node();
    ExprPtr node_;
};

/// Structural (node-by-node) equality.
bool structurally_equal(const Expr& a, const Expr& b);

/// Symbol names a parser accepts; variables and parameters are disjoint.
struct SymbolSet {
    std::vector<std::string> variables;
    std::vector<std::string> parameters;
    bool is_variable(const std::string& n) const;
    bool is_parameter(const std::string& n) const;
};

/// Parse `text` against the declared symbols. Grammar (loose to tight):
/// `+ -` < `* /` < unary `-` < `^` (right-assoc, integer literal exponent);
/// `sin cos exp log sqrt` are reserved function names; `p/q` with two integer
/// literals becomes an exact rational constant.
Expr parse_expression(const std::string& text, const SymbolSet& symbols);

/// Exact partial derivative with respect to the symbol `var`, simplified.
Expr differentiate(const Expr& e, const std::string& var);

/// Simultaneous substitution of symbols by expressions, then simplify.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& replacements);

/// Heuristic normal form: constant folding, 0/1 identities, like-term
/// collection over polynomial parts (with opaque subtrees treated as atoms)
/// and light cancellation in quotients of exact polynomials. Idempotent.
Expr simplify(const Expr& e);

using Bindings = std::map<std::string, double>;

/// Numeric evaluation; every free symbol must be bound. Exact subtrees are
/// folded in rational arithmetic before conversion to double.
double evaluate(const Expr& e, const Bindings& bindings);

/// All free symbol names (variables and parameters) in the tree.
std::set<std::string> free_symbols(const Expr& e);

/// True if any constant in the tree has lost exactness.
bool contains_inexact(const Expr& e);

/// Zero test per the library's convention: structural zero after simplify,
/// otherwise |value| < 1e-10 at 8 seeded random points in [-1,1] per symbol.
bool is_effectively_zero(const Expr& e, std::uint64_t seed = 0x5eedULL);

// ---------------------------------------------------------------------------
// Compiled evaluation for numeric hot loops
// ---------------------------------------------------------------------------

/// Flat stack-machine form of an expression for fast repeated evaluation.
/// Slots map symbol names to positions in the evaluation argument span.
class CompiledExpr {
public:
    CompiledExpr() = default;
    CompiledExpr(const Expr& e, const std::vector<std::string>& slot_names);

    double eval(std::span<const double> slots) const;

private:
    enum class Op : std::uint8_t { Const, Slot, Add, Sub, Mul, Div, Neg, PowI, Sin, Cos, Exp, Log, Sqrt };
    struct Instr {
        Op op;
        int arg = 0;
        double value = 0.0;
    };
    std::vector<Instr> code_;
    int max_stack_ = 0;
};

} // namespace canard

#endif
