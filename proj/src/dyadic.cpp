#include "speedprior/dyadic.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cmath>
#include <stdexcept>

namespace speedprior {

Dyadic::Dyadic(BigInt numerator, std::uint32_t exponent) : num_(std::move(numerator)), exp_(exponent) {
    if (num_ < 0) throw std::domain_error("dyadic: negative numerator");
    canonicalize();
}

void Dyadic::canonicalize() {
    if (num_.is_zero()) {
        exp_ = 0;
        return;
    }
    const auto tz = static_cast<std::uint32_t>(boost::multiprecision::lsb(num_));
    const std::uint32_t shift = std::min(tz, exp_);
    if (shift > 0) {
        num_ >>= shift;
        exp_ -= shift;
    }
}

Dyadic& Dyadic::operator+=(const Dyadic& other) {
    if (other.exp_ > exp_) {
        num_ <<= (other.exp_ - exp_);
        exp_ = other.exp_;
        num_ += other.num_;
    } else {
        num_ += BigInt(other.num_) << (exp_ - other.exp_);
    }
    canonicalize();
    return *this;
}

Dyadic& Dyadic::operator-=(const Dyadic& other) {
    if (other.exp_ > exp_) {
        num_ <<= (other.exp_ - exp_);
        exp_ = other.exp_;
        num_ -= other.num_;
    } else {
        num_ -= BigInt(other.num_) << (exp_ - other.exp_);
    }
    if (num_ < 0) throw std::domain_error("dyadic: subtraction would be negative");
    canonicalize();
    return *this;
}

Dyadic Dyadic::scaled(std::uint32_t k) const {
    Dyadic out = *this;
    if (!out.num_.is_zero()) out.exp_ += k;
    return out;
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) { return Dyadic(a.num_ * b.num_, a.exp_ + b.exp_); }

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    const std::uint32_t e = std::max(a.exp_, b.exp_);
    const BigInt lhs = a.num_ << (e - a.exp_);
    const BigInt rhs = b.num_ << (e - b.exp_);
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

double Dyadic::to_double() const { return std::ldexp(num_.convert_to<double>(), -static_cast<int>(exp_)); }

std::string Dyadic::to_string() const { return num_.str() + "/2^" + std::to_string(exp_); }

nlohmann::json Dyadic::to_json() const { return {{"num", num_.str()}, {"exp", exp_}}; }

Dyadic Dyadic::from_json(const nlohmann::json& j) {
    return Dyadic(BigInt(j.at("num").get<std::string>()), j.at("exp").get<std::uint32_t>());
}

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("rational: zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    const BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::ratio(const Dyadic& a, const Dyadic& b) {
    if (b.is_zero()) throw std::domain_error("rational: division by a zero dyadic");
    // (na / 2^ea) / (nb / 2^eb) = na * 2^eb / (nb * 2^ea)
    return Rational(a.numerator() << b.exponent(), b.numerator() << a.exponent());
}

Rational Rational::ratio_of(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational::ratio_of: division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const BigInt lhs = a.num_ * b.den_;
    const BigInt rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

double Rational::to_double() const {
    // Scale down together so huge operands stay finite.
    BigInt n = num_, d = den_;
    const auto nb = n.is_zero() ? 0u : static_cast<unsigned>(boost::multiprecision::msb(n < 0 ? BigInt(-n) : n));
    const auto db = static_cast<unsigned>(boost::multiprecision::msb(d));
    const unsigned top = std::max(nb, db);
    if (top > 900) {
        n >>= (top - 900);
        d >>= (top - 900);
        if (d.is_zero()) d = 1;
    }
    return n.convert_to<double>() / d.convert_to<double>();
}

nlohmann::json Rational::to_json() const { return {{"num_n", num_.str()}, {"num_d", den_.str()}}; }

}  // namespace speedprior
