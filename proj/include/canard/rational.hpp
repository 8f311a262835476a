#ifndef CANARD_RATIONAL_HPP
#define CANARD_RATIONAL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace canard {

/// Thrown when a rational result no longer fits in 64-bit storage.
/// Callers catch it and degrade to floating point.
class RationalOverflow : public std::overflow_error {
public:
    RationalOverflow() : std::overflow_error("rational arithmetic overflow") {}
};

/// Exact rational number with 64-bit numerator and denominator.
/// Always normalized: gcd(num, den) == 1 and den > 0.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d);

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && den_ == 1; }
    bool is_integer() const { return den_ == 1; }
    bool negative() const { return num_ < 0; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const;

    Rational operator-() const { return Rational(-num_, den_); }
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);

    /// Integer power; k may be negative if the value is nonzero.
    Rational pow(int k) const;

    Rational abs() const { return num_ < 0 ? -*this : *this; }
    Rational reciprocal() const;

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);

private:
    static Rational make_checked(__int128 n, __int128 d);
    long long num_;
    long long den_;
};

} // namespace canard

#endif
