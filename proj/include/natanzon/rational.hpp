#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace natanzon {

// Exact rational arithmetic on 64-bit integers. Used by the preset
// constructors and tests so that parameter identities can be checked without
// floating-point error. Values in this library stay tiny, so plain int64
// with gcd normalization is enough; overflow throws instead of wrapping.
class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator-() const { return Rational(-num_, den_); }

    friend Rational operator+(const Rational& x, const Rational& y) {
        return Rational(checked_add(checked_mul(x.num_, y.den_), checked_mul(y.num_, x.den_)),
                        checked_mul(x.den_, y.den_));
    }
    friend Rational operator-(const Rational& x, const Rational& y) { return x + (-y); }
    friend Rational operator*(const Rational& x, const Rational& y) {
        return Rational(checked_mul(x.num_, y.num_), checked_mul(x.den_, y.den_));
    }
    friend Rational operator/(const Rational& x, const Rational& y) {
        if (y.num_ == 0) throw std::domain_error("Rational: division by zero");
        return Rational(checked_mul(x.num_, y.den_), checked_mul(x.den_, y.num_));
    }

    friend bool operator==(const Rational& x, const Rational& y) {
        return x.num_ == y.num_ && x.den_ == y.den_;
    }
    friend bool operator!=(const Rational& x, const Rational& y) { return !(x == y); }
    friend bool operator<(const Rational& x, const Rational& y) {
        return checked_mul(x.num_, y.den_) < checked_mul(y.num_, x.den_);
    }
    friend bool operator>(const Rational& x, const Rational& y) { return y < x; }
    friend bool operator<=(const Rational& x, const Rational& y) { return !(y < x); }
    friend bool operator>=(const Rational& x, const Rational& y) { return !(x < y); }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_)
                         : std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    static std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
        std::int64_t r = 0;
        if (__builtin_mul_overflow(x, y, &r)) throw std::overflow_error("Rational: overflow");
        return r;
    }
    static std::int64_t checked_add(std::int64_t x, std::int64_t y) {
        std::int64_t r = 0;
        if (__builtin_add_overflow(x, y, &r)) throw std::overflow_error("Rational: overflow");
        return r;
    }

    void normalize() {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
        if (num_ == 0) den_ = 1;
    }

    std::int64_t num_;
    std::int64_t den_;
};

}  // namespace natanzon
