#include "canard/expr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace canard {

// ---------------------------------------------------------------------------
// NumberValue
// ---------------------------------------------------------------------------

NumberValue NumberValue::operator-() const {
    return exact_ ? exact(-rat_) : inexact(-flt_);
}

NumberValue operator+(const NumberValue& a, const NumberValue& b) {
    if (a.exact_ && b.exact_) {
        try {
            return NumberValue::exact(a.rat_ + b.rat_);
        } catch (const RationalOverflow&) {
        }
    }
    return NumberValue::inexact(a.to_double() + b.to_double());
}

NumberValue operator-(const NumberValue& a, const NumberValue& b) { return a + (-b); }

NumberValue operator*(const NumberValue& a, const NumberValue& b) {
    if (a.exact_ && b.exact_) {
        try {
            return NumberValue::exact(a.rat_ * b.rat_);
        } catch (const RationalOverflow&) {
        }
    }
    return NumberValue::inexact(a.to_double() * b.to_double());
}

NumberValue operator/(const NumberValue& a, const NumberValue& b) {
    if (a.exact_ && b.exact_ && !b.rat_.is_zero()) {
        try {
            return NumberValue::exact(a.rat_ / b.rat_);
        } catch (const RationalOverflow&) {
        }
    }
    return NumberValue::inexact(a.to_double() / b.to_double());
}

NumberValue NumberValue::pow(int k) const {
    if (exact_ && !(rat_.is_zero() && k < 0)) {
        try {
            return exact(rat_.pow(k));
        } catch (const RationalOverflow&) {
        }
    }
    return inexact(std::pow(to_double(), static_cast<double>(k)));
}

std::string NumberValue::str() const {
    if (exact_) return rat_.str();
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", flt_);
    return buf;
}

// ---------------------------------------------------------------------------
// Node construction
// ---------------------------------------------------------------------------

const char* func_name(FuncKind f) {
    switch (f) {
        case FuncKind::Sin: return "sin";
        case FuncKind::Cos: return "cos";
        case FuncKind::Exp: return "exp";
        case FuncKind::Log: return "log";
        case FuncKind::Sqrt: return "sqrt";
    }
    return "?";
}

namespace {

ExprPtr make_node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

} // namespace

const ExprPtr& Expr::zero_node() {
    static const ExprPtr zero = make_node({ExprKind::Number, NumberValue(), "", FuncKind::Sin, 0, {}});
    return zero;
}

Expr Expr::number(NumberValue v) {
    return Expr(make_node({ExprKind::Number, std::move(v), "", FuncKind::Sin, 0, {}}));
}

Expr Expr::variable(std::string name) {
    return Expr(make_node({ExprKind::Variable, NumberValue(), std::move(name), FuncKind::Sin, 0, {}}));
}

Expr Expr::parameter(std::string name) {
    return Expr(make_node({ExprKind::Parameter, NumberValue(), std::move(name), FuncKind::Sin, 0, {}}));
}

Expr Expr::call(FuncKind f, Expr arg) {
    return Expr(make_node({ExprKind::Call, NumberValue(), "", f, 0, {arg.ptr()}}));
}

Expr Expr::operator-() const {
    return Expr(make_node({ExprKind::Negate, NumberValue(), "", FuncKind::Sin, 0, {node_}}));
}

Expr Expr::pow(int k) const {
    return Expr(make_node({ExprKind::Power, NumberValue(), "", FuncKind::Sin, k, {node_}}));
}

Expr operator+(const Expr& a, const Expr& b) {
    std::vector<ExprPtr> kids;
    for (const Expr* e : {&a, &b}) {
        if (e->kind() == ExprKind::Sum)
            kids.insert(kids.end(), e->node().kids.begin(), e->node().kids.end());
        else
            kids.push_back(e->ptr());
    }
    return Expr(make_node({ExprKind::Sum, NumberValue(), "", FuncKind::Sin, 0, std::move(kids)}));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
    std::vector<ExprPtr> kids;
    for (const Expr* e : {&a, &b}) {
        if (e->kind() == ExprKind::Product)
            kids.insert(kids.end(), e->node().kids.begin(), e->node().kids.end());
        else
            kids.push_back(e->ptr());
    }
    return Expr(make_node({ExprKind::Product, NumberValue(), "", FuncKind::Sin, 0, std::move(kids)}));
}

Expr operator/(const Expr& a, const Expr& b) {
    return Expr(make_node({ExprKind::Quotient, NumberValue(), "", FuncKind::Sin, 0, {a.ptr(), b.ptr()}}));
}

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

namespace {

bool nodes_equal(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprKind::Number:
            if (!(a.value == b.value)) return false;
            break;
        case ExprKind::Variable:
        case ExprKind::Parameter:
            if (a.name != b.name) return false;
            break;
        case ExprKind::Power:
            if (a.exponent != b.exponent) return false;
            break;
        case ExprKind::Call:
            if (a.func != b.func) return false;
            break;
        default:
            break;
    }
    if (a.kids.size() != b.kids.size()) return false;
    for (std::size_t i = 0; i < a.kids.size(); ++i) {
        if (a.kids[i] == b.kids[i]) continue; // shared subtree
        if (!nodes_equal(*a.kids[i], *b.kids[i])) return false;
    }
    return true;
}

} // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
    return a.ptr() == b.ptr() || nodes_equal(a.node(), b.node());
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

// Precedence levels used for parenthesization.
enum Level { kSumLevel = 0, kProductLevel = 1, kUnaryLevel = 2, kPowerLevel = 3 };

int node_level(const ExprNode& n) {
    switch (n.kind) {
        case ExprKind::Sum: return kSumLevel;
        case ExprKind::Product:
        case ExprKind::Quotient: return kProductLevel;
        case ExprKind::Negate: return kUnaryLevel;
        case ExprKind::Power: return kPowerLevel;
        case ExprKind::Number:
            return n.value.negative() ? kUnaryLevel : kPowerLevel + 1;
        default: return kPowerLevel + 1;
    }
}

void print_node(std::ostream& os, const ExprNode& n, int min_level);

void print_child(std::ostream& os, const ExprPtr& child, int min_level) {
    if (node_level(*child) < min_level) {
        os << '(';
        print_node(os, *child, kSumLevel);
        os << ')';
    } else {
        print_node(os, *child, kSumLevel);
    }
}

void print_node(std::ostream& os, const ExprNode& n, int) {
    switch (n.kind) {
        case ExprKind::Number:
            os << n.value.str();
            break;
        case ExprKind::Variable:
        case ExprKind::Parameter:
            os << n.name;
            break;
        case ExprKind::Sum: {
            bool first = true;
            ExprNode flipped; // storage for sign-flipped numeric terms
            for (const ExprPtr& kid : n.kids) {
                const ExprNode* term = kid.get();
                bool negate = term->kind == ExprKind::Negate;
                if (negate) {
                    term = term->kids[0].get();
                } else if (term->kind == ExprKind::Number && term->value.negative()) {
                    negate = true;
                    flipped = *term;
                    flipped.value = -term->value;
                    term = &flipped;
                }
                if (first) {
                    if (negate) os << '-';
                    first = false;
                } else {
                    os << (negate ? " - " : " + ");
                }
                if (node_level(*term) < kProductLevel) {
                    os << '(';
                    print_node(os, *term, kSumLevel);
                    os << ')';
                } else {
                    print_node(os, *term, kSumLevel);
                }
            }
            if (first) os << '0';
            break;
        }
        case ExprKind::Product: {
            bool first = true;
            for (const ExprPtr& kid : n.kids) {
                if (!first) os << '*';
                first = false;
                print_child(os, kid, kProductLevel + 1);
            }
            if (first) os << '1';
            break;
        }
        case ExprKind::Quotient:
            print_child(os, n.kids[0], kProductLevel);
            os << '/';
            print_child(os, n.kids[1], kProductLevel + 1);
            break;
        case ExprKind::Negate:
            os << '-';
            print_child(os, n.kids[0], kUnaryLevel);
            break;
        case ExprKind::Power:
            print_child(os, n.kids[0], kPowerLevel + 1);
            os << '^';
            if (n.exponent < 0)
                os << '(' << n.exponent << ')';
            else
                os << n.exponent;
            break;
        case ExprKind::Call:
            os << func_name(n.func) << '(';
            print_node(os, *n.kids[0], kSumLevel);
            os << ')';
            break;
    }
}

} // namespace

std::string Expr::str() const {
    std::ostringstream os;
    print_node(os, *node_, kSumLevel);
    return os.str();
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

namespace {

Expr diff_raw(const Expr& e, const std::string& var) {
    const ExprNode& n = e.node();
    switch (n.kind) {
        case ExprKind::Number:
            return Expr::integer(0);
        case ExprKind::Variable:
        case ExprKind::Parameter:
            return Expr::integer(n.name == var ? 1 : 0);
        case ExprKind::Sum: {
            Expr acc = Expr::integer(0);
            for (const ExprPtr& kid : n.kids) acc = acc + diff_raw(Expr(kid), var);
            return acc;
        }
        case ExprKind::Negate:
            return -diff_raw(Expr(n.kids[0]), var);
        case ExprKind::Product: {
            Expr acc = Expr::integer(0);
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                Expr term = diff_raw(Expr(n.kids[i]), var);
                for (std::size_t j = 0; j < n.kids.size(); ++j)
                    if (j != i) term = term * Expr(n.kids[j]);
                acc = acc + term;
            }
            return acc;
        }
        case ExprKind::Quotient: {
            Expr a(n.kids[0]), b(n.kids[1]);
            Expr da = diff_raw(a, var), db = diff_raw(b, var);
            return (da * b - a * db) / b.pow(2);
        }
        case ExprKind::Power: {
            Expr base(n.kids[0]);
            Expr db = diff_raw(base, var);
            if (n.exponent == 0) return Expr::integer(0);
            return Expr::integer(n.exponent) * base.pow(n.exponent - 1) * db;
        }
        case ExprKind::Call: {
            Expr arg(n.kids[0]);
            Expr da = diff_raw(arg, var);
            switch (n.func) {
                case FuncKind::Sin: return Expr::call(FuncKind::Cos, arg) * da;
                case FuncKind::Cos: return -(Expr::call(FuncKind::Sin, arg) * da);
                case FuncKind::Exp: return Expr::call(FuncKind::Exp, arg) * da;
                case FuncKind::Log: return da / arg;
                case FuncKind::Sqrt: return da / (Expr::integer(2) * Expr::call(FuncKind::Sqrt, arg));
            }
            return Expr::integer(0);
        }
    }
    return Expr::integer(0);
}

} // namespace

Expr differentiate(const Expr& e, const std::string& var) {
    return simplify(diff_raw(e, var));
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

namespace {

Expr substitute_raw(const Expr& e, const std::map<std::string, Expr>& repl) {
    const ExprNode& n = e.node();
    if (n.kind == ExprKind::Variable || n.kind == ExprKind::Parameter) {
        auto it = repl.find(n.name);
        return it == repl.end() ? e : it->second;
    }
    if (n.kids.empty()) return e;
    ExprNode out = n;
    out.kids.clear();
    for (const ExprPtr& kid : n.kids) out.kids.push_back(substitute_raw(Expr(kid), repl).ptr());
    return Expr(make_node(std::move(out)));
}

} // namespace

Expr substitute(const Expr& e, const std::map<std::string, Expr>& replacements) {
    return simplify(substitute_raw(e, replacements));
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

NumberValue eval_node(const ExprNode& n, const Bindings& b) {
    switch (n.kind) {
        case ExprKind::Number:
            return n.value;
        case ExprKind::Variable:
        case ExprKind::Parameter: {
            auto it = b.find(n.name);
            if (it == b.end()) throw UnboundSymbolError(n.name);
            return NumberValue::inexact(it->second);
        }
        case ExprKind::Sum: {
            NumberValue acc = NumberValue::exact(Rational(0));
            for (const ExprPtr& kid : n.kids) acc = acc + eval_node(*kid, b);
            return acc;
        }
        case ExprKind::Product: {
            NumberValue acc = NumberValue::exact(Rational(1));
            for (const ExprPtr& kid : n.kids) acc = acc * eval_node(*kid, b);
            return acc;
        }
        case ExprKind::Quotient: {
            NumberValue den = eval_node(*n.kids[1], b);
            if (den.to_double() == 0.0) throw EvalError("division by zero");
            return eval_node(*n.kids[0], b) / den;
        }
        case ExprKind::Negate:
            return -eval_node(*n.kids[0], b);
        case ExprKind::Power: {
            NumberValue base = eval_node(*n.kids[0], b);
            if (base.to_double() == 0.0 && n.exponent < 0)
                throw EvalError("zero raised to a negative power");
            return base.pow(n.exponent);
        }
        case ExprKind::Call: {
            double a = eval_node(*n.kids[0], b).to_double();
            switch (n.func) {
                case FuncKind::Sin: return NumberValue::inexact(std::sin(a));
                case FuncKind::Cos: return NumberValue::inexact(std::cos(a));
                case FuncKind::Exp: return NumberValue::inexact(std::exp(a));
                case FuncKind::Log:
                    if (a <= 0.0) throw EvalError("log of non-positive value");
                    return NumberValue::inexact(std::log(a));
                case FuncKind::Sqrt:
                    if (a < 0.0) throw EvalError("sqrt of negative value");
                    return NumberValue::inexact(std::sqrt(a));
            }
            throw EvalError("unknown function");
        }
    }
    throw EvalError("malformed expression node");
}

} // namespace

double evaluate(const Expr& e, const Bindings& bindings) {
    return eval_node(e.node(), bindings).to_double();
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

namespace {

void collect_symbols(const ExprNode& n, std::set<std::string>& out) {
    if (n.kind == ExprKind::Variable || n.kind == ExprKind::Parameter) out.insert(n.name);
    for (const ExprPtr& kid : n.kids) collect_symbols(*kid, out);
}

bool any_inexact(const ExprNode& n) {
    if (n.kind == ExprKind::Number && !n.value.is_exact()) return true;
    for (const ExprPtr& kid : n.kids)
        if (any_inexact(*kid)) return true;
    return false;
}

} // namespace

std::set<std::string> free_symbols(const Expr& e) {
    std::set<std::string> out;
    collect_symbols(e.node(), out);
    return out;
}

bool contains_inexact(const Expr& e) { return any_inexact(e.node()); }

bool is_effectively_zero(const Expr& e, std::uint64_t seed) {
    Expr s = simplify(e);
    if (s.is_zero_literal()) return true;
    if (s.is_number()) return false;
    std::set<std::string> syms = free_symbols(s);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    int checked = 0;
    for (int attempt = 0; attempt < 64 && checked < 8; ++attempt) {
        Bindings b;
        for (const std::string& name : syms) b[name] = dist(rng);
        try {
            if (std::abs(evaluate(s, b)) >= 1e-10) return false;
            ++checked;
        } catch (const EvalError&) {
            // landed on a pole; resample
        }
    }
    return checked > 0;
}

// ---------------------------------------------------------------------------
// Compiled evaluation
// ---------------------------------------------------------------------------

CompiledExpr::CompiledExpr(const Expr& e, const std::vector<std::string>& slot_names) {
    // Emit postorder; track worst-case stack depth.
    int depth = 0;
    auto note_push = [&](int d) { max_stack_ = std::max(max_stack_, d); };

    struct Walker {
        CompiledExpr* self;
        const std::vector<std::string>& slots;
        int* depth;
        std::function<void(int)> note;
        void walk(const ExprNode& n) {
            switch (n.kind) {
                case ExprKind::Number:
                    self->code_.push_back({Op::Const, 0, n.value.to_double()});
                    note(++*depth);
                    return;
                case ExprKind::Variable:
                case ExprKind::Parameter: {
                    auto it = std::find(slots.begin(), slots.end(), n.name);
                    if (it == slots.end()) throw UnboundSymbolError(n.name);
                    self->code_.push_back({Op::Slot, static_cast<int>(it - slots.begin()), 0.0});
                    note(++*depth);
                    return;
                }
                case ExprKind::Sum:
                case ExprKind::Product: {
                    Op op = n.kind == ExprKind::Sum ? Op::Add : Op::Mul;
                    if (n.kids.empty()) {
                        self->code_.push_back({Op::Const, 0, n.kind == ExprKind::Sum ? 0.0 : 1.0});
                        note(++*depth);
                        return;
                    }
                    walk(*n.kids[0]);
                    for (std::size_t i = 1; i < n.kids.size(); ++i) {
                        walk(*n.kids[i]);
                        self->code_.push_back({op, 0, 0.0});
                        --*depth;
                    }
                    return;
                }
                case ExprKind::Quotient:
                    walk(*n.kids[0]);
                    walk(*n.kids[1]);
                    self->code_.push_back({Op::Div, 0, 0.0});
                    --*depth;
                    return;
                case ExprKind::Negate:
                    walk(*n.kids[0]);
                    self->code_.push_back({Op::Neg, 0, 0.0});
                    return;
                case ExprKind::Power:
                    walk(*n.kids[0]);
                    self->code_.push_back({Op::PowI, n.exponent, 0.0});
                    return;
                case ExprKind::Call: {
                    walk(*n.kids[0]);
                    Op op = Op::Sin;
                    switch (n.func) {
                        case FuncKind::Sin: op = Op::Sin; break;
                        case FuncKind::Cos: op = Op::Cos; break;
                        case FuncKind::Exp: op = Op::Exp; break;
                        case FuncKind::Log: op = Op::Log; break;
                        case FuncKind::Sqrt: op = Op::Sqrt; break;
                    }
                    self->code_.push_back({op, 0, 0.0});
                    return;
                }
            }
        }
    };

    Walker w{this, slot_names, &depth, note_push};
    w.walk(e.node());
    if (max_stack_ > 128) throw std::runtime_error("expression too deep to compile");
}

double CompiledExpr::eval(std::span<const double> slots) const {
    double stack[128];
    int top = -1;
    for (const Instr& in : code_) {
        switch (in.op) {
            case Op::Const: stack[++top] = in.value; break;
            case Op::Slot: stack[++top] = slots[static_cast<std::size_t>(in.arg)]; break;
            case Op::Add: --top; stack[top] += stack[top + 1]; break;
            case Op::Sub: --top; stack[top] -= stack[top + 1]; break;
            case Op::Mul: --top; stack[top] *= stack[top + 1]; break;
            case Op::Div: --top; stack[top] /= stack[top + 1]; break;
            case Op::Neg: stack[top] = -stack[top]; break;
            case Op::PowI: {
                double b = stack[top];
                int k = in.arg;
                double r;
                switch (k) {
                    case 0: r = 1.0; break;
                    case 1: r = b; break;
                    case 2: r = b * b; break;
                    case 3: r = b * b * b; break;
                    default: r = std::pow(b, static_cast<double>(k));
                }
                stack[top] = r;
                break;
            }
            case Op::Sin: stack[top] = std::sin(stack[top]); break;
            case Op::Cos: stack[top] = std::cos(stack[top]); break;
            case Op::Exp: stack[top] = std::exp(stack[top]); break;
            case Op::Log: stack[top] = std::log(stack[top]); break;
            case Op::Sqrt: stack[top] = std::sqrt(stack[top]); break;
        }
    }
    return top >= 0 ? stack[top] : 0.0;
}

// ---------------------------------------------------------------------------
// SymbolSet
// ---------------------------------------------------------------------------

bool SymbolSet::is_variable(const std::string& n) const {
    return std::find(variables.begin(), variables.end(), n) != variables.end();
}

bool SymbolSet::is_parameter(const std::string& n) const {
    return std::find(parameters.begin(), parameters.end(), n) != parameters.end();
}

} // namespace canard
