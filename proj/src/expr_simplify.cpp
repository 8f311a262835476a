// Heuristic normal form for expression trees.
//
// Subtrees built from numbers, symbols, +, *, -, / and integer powers are
// flattened into a quotient of sparse multivariate polynomials; opaque
// subtrees (function calls) are treated as extra indeterminates. The quotient
// is reduced by monomial-content cancellation and, when all coefficients are
// exact, by exact polynomial division. The result is re-emitted in a fixed
// canonical term order, which makes the whole pass idempotent.

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>

#include "canard/expr.hpp"

namespace canard {
namespace {

// --- monomials --------------------------------------------------------------

using Monomial = std::vector<std::pair<int, int>>; // (atom id, exponent>0), sorted by id

int total_degree(const Monomial& m) {
    int d = 0;
    for (const auto& [id, e] : m) d += e;
    return d;
}

struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            int ida = i < a.size() ? a[i].first : INT_MAX;
            int idb = j < b.size() ? b[j].first : INT_MAX;
            if (ida == idb) {
                if (a[i].second != b[j].second) return a[i].second < b[j].second;
                ++i;
                ++j;
            } else if (ida < idb) {
                return false; // a has the higher exponent at the first differing id
            } else {
                return true;
            }
        }
        return false;
    }
};

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial out;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        int ida = i < a.size() ? a[i].first : INT_MAX;
        int idb = j < b.size() ? b[j].first : INT_MAX;
        if (ida == idb) {
            out.emplace_back(ida, a[i].second + b[j].second);
            ++i;
            ++j;
        } else if (ida < idb) {
            out.push_back(a[i++]);
        } else {
            out.push_back(b[j++]);
        }
    }
    return out;
}

std::optional<Monomial> mono_div(const Monomial& a, const Monomial& b) {
    Monomial out;
    std::size_t i = 0;
    for (const auto& [id, e] : b) {
        while (i < a.size() && a[i].first < id) out.push_back(a[i++]);
        if (i >= a.size() || a[i].first != id || a[i].second < e) return std::nullopt;
        if (a[i].second > e) out.emplace_back(id, a[i].second - e);
        ++i;
    }
    while (i < a.size()) out.push_back(a[i++]);
    return out;
}

// --- polynomials ------------------------------------------------------------

using Poly = std::map<Monomial, NumberValue, GrlexLess>;

void poly_add_term(Poly& p, const Monomial& m, const NumberValue& c) {
    if (c.is_zero()) return;
    auto it = p.find(m);
    if (it == p.end()) {
        p.emplace(m, c);
        return;
    }
    NumberValue s = it->second + c;
    if (s.is_zero())
        p.erase(it);
    else
        it->second = s;
}

Poly poly_const(const NumberValue& c) {
    Poly p;
    poly_add_term(p, {}, c);
    return p;
}

Poly poly_one() { return poly_const(NumberValue::exact(Rational(1))); }

Poly poly_atom(int id) {
    Poly p;
    poly_add_term(p, {{id, 1}}, NumberValue::exact(Rational(1)));
    return p;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly out = a;
    for (const auto& [m, c] : b) poly_add_term(out, m, c);
    return out;
}

Poly poly_neg(const Poly& a) {
    Poly out;
    for (const auto& [m, c] : a) out.emplace(m, -c);
    return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) poly_add_term(out, mono_mul(ma, mb), ca * cb);
    return out;
}

Poly poly_pow(const Poly& a, int k) {
    Poly acc = poly_one();
    Poly base = a;
    while (k > 0) {
        if (k & 1) acc = poly_mul(acc, base);
        k >>= 1;
        if (k) base = poly_mul(base, base);
    }
    return acc;
}

bool poly_is_one(const Poly& p) {
    return p.size() == 1 && p.begin()->first.empty() && p.begin()->second.is_one();
}

bool poly_equal(const Poly& a, const Poly& b) {
    if (a.size() != b.size()) return false;
    auto ia = a.begin();
    for (auto ib = b.begin(); ib != b.end(); ++ia, ++ib)
        if (ia->first != ib->first || !(ia->second == ib->second)) return false;
    return true;
}

bool poly_all_exact(const Poly& p) {
    for (const auto& [m, c] : p)
        if (!c.is_exact()) return false;
    return true;
}

// Exact division; succeeds iff b divides a (all coefficients exact).
std::optional<Poly> poly_divide_exact(const Poly& a, const Poly& b) {
    if (b.empty()) return std::nullopt;
    try {
        Poly q;
        Poly r = a;
        const auto& lt_b = *b.rbegin();
        int guard = 0;
        while (!r.empty()) {
            if (++guard > 20000) return std::nullopt;
            const auto lt_r = *r.rbegin();
            auto m = mono_div(lt_r.first, lt_b.first);
            if (!m) return std::nullopt;
            NumberValue c = lt_r.second / lt_b.second;
            poly_add_term(q, *m, c);
            for (const auto& [bm, bc] : b) poly_add_term(r, mono_mul(*m, bm), -(c * bc));
        }
        return q;
    } catch (const RationalOverflow&) {
        return std::nullopt;
    }
}

// --- atoms ------------------------------------------------------------------

struct Atom {
    ExprPtr node;
    int rank;        // 0 variable, 1 parameter, 2 opaque
    std::string key; // name or canonical printed form
};

struct AtomTable {
    std::vector<Atom> atoms;

    int intern(const Expr& e, int rank, std::string key) {
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (atoms[i].rank == rank && atoms[i].key == key &&
                structurally_equal(Expr(atoms[i].node), e))
                return static_cast<int>(i);
        atoms.push_back({e.ptr(), rank, std::move(key)});
        return static_cast<int>(atoms.size() - 1);
    }
};

// --- rational functions -----------------------------------------------------

// den.empty() marks an explicit division by zero; kept and re-emitted as-is.
struct RatFn {
    Poly num;
    Poly den;
};

RatFn rat_zero_den(Poly num) { return {std::move(num), Poly{}}; }

RatFn rat_add(const RatFn& a, const RatFn& b) {
    if (a.den.empty() || b.den.empty()) return rat_zero_den(poly_one());
    if (poly_equal(a.den, b.den)) return {poly_add(a.num, b.num), a.den};
    return {poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)), poly_mul(a.den, b.den)};
}

RatFn rat_mul(const RatFn& a, const RatFn& b) {
    if (a.den.empty() || b.den.empty()) return rat_zero_den(poly_one());
    return {poly_mul(a.num, b.num), poly_mul(a.den, b.den)};
}

RatFn rat_div(const RatFn& a, const RatFn& b) {
    if (a.den.empty() || b.den.empty() || b.num.empty())
        return rat_zero_den(a.den.empty() || b.den.empty() ? poly_one() : a.num);
    return {poly_mul(a.num, b.den), poly_mul(a.den, b.num)};
}

RatFn rat_pow(const RatFn& a, int k) {
    if (k == 0) return {poly_one(), poly_one()};
    if (a.den.empty()) return rat_zero_den(poly_one());
    if (k > 0) return {poly_pow(a.num, k), poly_pow(a.den, k)};
    if (a.num.empty()) return rat_zero_den(poly_one());
    return {poly_pow(a.den, -k), poly_pow(a.num, -k)};
}

// --- rationalization --------------------------------------------------------

std::optional<Rational> rational_sqrt(const Rational& r) {
    if (r.negative()) return std::nullopt;
    auto isqrt = [](long long v) -> std::optional<long long> {
        if (v < 0) return std::nullopt;
        long long s = static_cast<long long>(std::sqrt(static_cast<double>(v)));
        for (long long c = std::max(0LL, s - 2); c <= s + 2; ++c)
            if (c * c == v) return c;
        return std::nullopt;
    };
    auto n = isqrt(r.num());
    auto d = isqrt(r.den());
    if (!n || !d) return std::nullopt;
    return Rational(*n, *d);
}

Expr fold_call(FuncKind f, const Expr& arg, bool* folded) {
    *folded = true;
    const NumberValue& v = arg.node().value;
    if (v.is_exact()) {
        const Rational& r = v.rat();
        switch (f) {
            case FuncKind::Sin:
                if (r.is_zero()) return Expr::integer(0);
                break;
            case FuncKind::Cos:
                if (r.is_zero()) return Expr::integer(1);
                break;
            case FuncKind::Exp:
                if (r.is_zero()) return Expr::integer(1);
                break;
            case FuncKind::Log:
                if (r.is_one()) return Expr::integer(0);
                break;
            case FuncKind::Sqrt:
                if (auto s = rational_sqrt(r)) return Expr::rational(*s);
                break;
        }
        *folded = false;
        return arg;
    }
    double a = v.to_double();
    switch (f) {
        case FuncKind::Sin: return Expr::real(std::sin(a));
        case FuncKind::Cos: return Expr::real(std::cos(a));
        case FuncKind::Exp: return Expr::real(std::exp(a));
        case FuncKind::Log: return Expr::real(std::log(a));
        case FuncKind::Sqrt: return Expr::real(std::sqrt(a));
    }
    *folded = false;
    return arg;
}

RatFn rationalize(const ExprNode& n, AtomTable& table) {
    switch (n.kind) {
        case ExprKind::Number:
            return {poly_const(n.value), poly_one()};
        case ExprKind::Variable:
            return {poly_atom(table.intern(Expr(std::make_shared<const ExprNode>(n)), 0, n.name)),
                    poly_one()};
        case ExprKind::Parameter:
            return {poly_atom(table.intern(Expr(std::make_shared<const ExprNode>(n)), 1, n.name)),
                    poly_one()};
        case ExprKind::Sum: {
            RatFn acc = {Poly{}, poly_one()};
            for (const ExprPtr& kid : n.kids) acc = rat_add(acc, rationalize(*kid, table));
            return acc;
        }
        case ExprKind::Product: {
            RatFn acc = {poly_one(), poly_one()};
            for (const ExprPtr& kid : n.kids) acc = rat_mul(acc, rationalize(*kid, table));
            return acc;
        }
        case ExprKind::Quotient:
            return rat_div(rationalize(*n.kids[0], table), rationalize(*n.kids[1], table));
        case ExprKind::Negate: {
            RatFn a = rationalize(*n.kids[0], table);
            a.num = poly_neg(a.num);
            return a;
        }
        case ExprKind::Power:
            return rat_pow(rationalize(*n.kids[0], table), n.exponent);
        case ExprKind::Call: {
            Expr arg = simplify(Expr(n.kids[0]));
            if (arg.is_number()) {
                bool folded = false;
                Expr v = fold_call(n.func, arg, &folded);
                if (folded) return {poly_const(v.node().value), poly_one()};
            }
            Expr atom = Expr::call(n.func, arg);
            return {poly_atom(table.intern(atom, 2, atom.str())), poly_one()};
        }
    }
    return {Poly{}, poly_one()};
}

// --- reduction --------------------------------------------------------------

std::map<int, int> min_exponents(const Poly& p) {
    std::map<int, int> mins;
    bool first = true;
    for (const auto& [m, c] : p) {
        if (first) {
            for (const auto& [id, e] : m) mins[id] = e;
            first = false;
            continue;
        }
        for (auto it = mins.begin(); it != mins.end();) {
            int e = 0;
            for (const auto& [id, me] : m)
                if (id == it->first) e = me;
            if (e == 0) {
                it = mins.erase(it);
            } else {
                it->second = std::min(it->second, e);
                ++it;
            }
        }
    }
    return mins;
}

Poly divide_by_monomial(const Poly& p, const Monomial& m) {
    Poly out;
    for (const auto& [pm, c] : p) {
        auto q = mono_div(pm, m);
        out.emplace(*q, c); // divisibility guaranteed by content computation
    }
    return out;
}

void reduce(RatFn& r) {
    if (r.den.empty()) return;
    if (r.num.empty()) {
        r.den = poly_one();
        return;
    }

    // Common monomial content.
    auto mins_n = min_exponents(r.num);
    auto mins_d = min_exponents(r.den);
    Monomial common;
    for (const auto& [id, en] : mins_n) {
        auto it = mins_d.find(id);
        if (it != mins_d.end()) common.emplace_back(id, std::min(en, it->second));
    }
    if (!common.empty()) {
        r.num = divide_by_monomial(r.num, common);
        r.den = divide_by_monomial(r.den, common);
    }

    // Constant denominator folds into the numerator.
    if (r.den.size() == 1 && r.den.begin()->first.empty()) {
        NumberValue c = r.den.begin()->second;
        Poly out;
        for (const auto& [m, v] : r.num) out.emplace(m, v / c);
        r.num = std::move(out);
        r.den = poly_one();
        return;
    }

    if (poly_all_exact(r.num) && poly_all_exact(r.den)) {
        if (auto q = poly_divide_exact(r.num, r.den)) {
            r.num = std::move(*q);
            r.den = poly_one();
            return;
        }
        if (auto q = poly_divide_exact(r.den, r.num)) {
            // num/den == 1/q when den == q * num
            r.num = poly_one();
            r.den = std::move(*q);
        }
        // Scale to coprime integer coefficients.
        try {
            auto lcm_checked = [](long long a, long long b) -> long long {
                __int128 l = static_cast<__int128>(a) / std::gcd(a, b) * b;
                if (l > INT64_MAX) throw RationalOverflow();
                return static_cast<long long>(l);
            };
            long long l = 1;
            for (const Poly* p : {&r.num, &r.den})
                for (const auto& [m, c] : *p) l = lcm_checked(l, c.rat().den());
            long long g = 0;
            for (const Poly* p : {&r.num, &r.den})
                for (const auto& [m, c] : *p)
                    g = std::gcd(g, (c.rat() * Rational(l)).num());
            if (g == 0) g = 1;
            Rational scale = Rational(l, g);
            if (!scale.is_one()) {
                for (Poly* p : {&r.num, &r.den}) {
                    Poly out;
                    for (const auto& [m, c] : *p)
                        out.emplace(m, NumberValue::exact(c.rat() * scale));
                    *p = std::move(out);
                }
            }
        } catch (const RationalOverflow&) {
            // keep unscaled coefficients
        }
    }

    // Sign convention: leading denominator coefficient positive.
    if (!r.den.empty() && r.den.rbegin()->second.negative()) {
        r.num = poly_neg(r.num);
        r.den = poly_neg(r.den);
    }
}

// --- emission ---------------------------------------------------------------

Expr emit_poly(const Poly& p, const std::vector<ExprPtr>& atoms) {
    if (p.empty()) return Expr::integer(0);
    std::vector<Expr> terms;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        const Monomial& m = it->first;
        NumberValue c = it->second;
        if (m.empty()) {
            terms.push_back(Expr::number(c)); // constants carry their own sign
            continue;
        }
        bool negate = c.negative();
        NumberValue mag = c.abs();
        std::vector<Expr> parts;
        if (!mag.is_one()) parts.push_back(Expr::number(mag));
        for (const auto& [id, e] : m) {
            Expr a(atoms[static_cast<std::size_t>(id)]);
            parts.push_back(e == 1 ? a : a.pow(e));
        }
        Expr term = parts[0];
        for (std::size_t i = 1; i < parts.size(); ++i) term = term * parts[i];
        terms.push_back(negate ? -term : term);
    }
    if (terms.size() == 1) return terms[0];
    Expr acc = terms[0];
    for (std::size_t i = 1; i < terms.size(); ++i) acc = acc + terms[i];
    return acc;
}

Poly remap_poly(const Poly& p, const std::vector<int>& new_id) {
    Poly out;
    for (const auto& [m, c] : p) {
        Monomial nm;
        for (const auto& [id, e] : m) nm.emplace_back(new_id[static_cast<std::size_t>(id)], e);
        std::sort(nm.begin(), nm.end());
        out.emplace(std::move(nm), c);
    }
    return out;
}

} // namespace

Expr simplify(const Expr& e) {
    AtomTable table;
    RatFn r = rationalize(e.node(), table);

    // Canonical atom order: variables, then parameters, then opaque atoms,
    // each group sorted by name / printed form.
    std::vector<int> order(table.atoms.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Atom& aa = table.atoms[static_cast<std::size_t>(a)];
        const Atom& ab = table.atoms[static_cast<std::size_t>(b)];
        if (aa.rank != ab.rank) return aa.rank < ab.rank;
        if (aa.key != ab.key) return aa.key < ab.key;
        return a < b;
    });
    std::vector<int> new_id(table.atoms.size());
    std::vector<ExprPtr> atoms(table.atoms.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        new_id[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos);
        atoms[pos] = table.atoms[static_cast<std::size_t>(order[pos])].node;
    }
    r.num = remap_poly(r.num, new_id);
    r.den = remap_poly(r.den, new_id);

    reduce(r);

    if (r.den.empty()) return emit_poly(r.num, atoms) / Expr::integer(0);
    if (poly_is_one(r.den)) return emit_poly(r.num, atoms);
    return emit_poly(r.num, atoms) / emit_poly(r.den, atoms);
}

} // namespace canard
