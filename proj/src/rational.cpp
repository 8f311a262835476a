#include "canard/rational.hpp"

namespace canard {
namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

constexpr __int128 kMax = static_cast<__int128>(INT64_MAX);
constexpr __int128 kMin = static_cast<__int128>(INT64_MIN);

} // namespace

Rational Rational::make_checked(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    if (n > kMax || n < kMin || d > kMax) throw RationalOverflow();
    Rational r;
    r.num_ = static_cast<long long>(n);
    r.den_ = static_cast<long long>(d);
    return r;
}

Rational::Rational(long long n, long long d) {
    Rational r = make_checked(n, d);
    num_ = r.num_;
    den_ = r.den_;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational::make_checked(
        static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
        static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    return Rational::make_checked(static_cast<__int128>(a.num_) * b.num_,
                                  static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("rational division by zero");
    return Rational::make_checked(static_cast<__int128>(a.num_) * b.den_,
                                  static_cast<__int128>(a.den_) * b.num_);
}

Rational Rational::reciprocal() const {
    if (is_zero()) throw std::domain_error("reciprocal of zero");
    return make_checked(den_, num_);
}

Rational Rational::pow(int k) const {
    if (k == 0) return Rational(1);
    if (k < 0) return reciprocal().pow(-k);
    Rational base = *this;
    Rational acc(1);
    int e = k;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = (e >>= 1) ? base * base : base;
    }
    return acc;
}

bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

} // namespace canard
