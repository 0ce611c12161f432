// Exact nonnegative dyadic rationals (num / 2^exp) and the exact rationals
// that arise as their quotients. No floating point is involved in any
// arithmetic or comparison here; to_double() exists only for display.

#ifndef SPEEDPRIOR_DYADIC_HPP
#define SPEEDPRIOR_DYADIC_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>

#include "json.hpp"

namespace speedprior {

using BigInt = boost::multiprecision::cpp_int;

class Dyadic {
public:
    Dyadic() = default;
    Dyadic(BigInt numerator, std::uint32_t exponent);

    static Dyadic zero() { return {}; }
    static Dyadic one() { return Dyadic(1, 0); }
    // 2^-k
    static Dyadic pow2_neg(std::uint32_t k) { return Dyadic(1, k); }

    const BigInt& numerator() const { return num_; }
    std::uint32_t exponent() const { return exp_; }
    bool is_zero() const { return num_.is_zero(); }

    Dyadic& operator+=(const Dyadic& other);
    // Throws std::domain_error when the result would be negative.
    Dyadic& operator-=(const Dyadic& other);
    // Multiplies by 2^-k.
    Dyadic scaled(std::uint32_t k) const;

    friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
    friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b);

    friend bool operator==(const Dyadic& a, const Dyadic& b) {
        return a.exp_ == b.exp_ && a.num_ == b.num_;
    }
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

    double to_double() const;
    std::string to_string() const;  // "num/2^exp"

    nlohmann::json to_json() const;  // {"num": "<decimal>", "exp": e}
    static Dyadic from_json(const nlohmann::json& j);

private:
    void canonicalize();

    BigInt num_ = 0;
    std::uint32_t exp_ = 0;
};

// Exact ratio of two integers in lowest terms, denominator positive.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(BigInt num, BigInt den);
    // a / b; throws std::domain_error when b is zero.
    static Rational ratio(const Dyadic& a, const Dyadic& b);
    static Rational ratio_of(const Rational& a, const Rational& b);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);
    friend Rational operator+(const Rational& a, const Rational& b);

    double to_double() const;
    nlohmann::json to_json() const;  // {"num_n": "...", "num_d": "..."}

private:
    BigInt num_;
    BigInt den_;
};

}  // namespace speedprior

#endif  // SPEEDPRIOR_DYADIC_HPP
