// Finite binary strings: the currency for programs, outputs and observations.
//
// Bits are packed MSB-first into 64-bit words so that word-wise comparison
// agrees with bitwise lexicographic comparison. Unused tail bits are always 0.

#ifndef SPEEDPRIOR_BITSTRING_HPP
#define SPEEDPRIOR_BITSTRING_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace speedprior {

class Bitstring {
public:
    Bitstring() = default;

    // Parses ASCII '0'/'1'. The empty string is lambda.
    static Bitstring from_string(std::string_view text);
    static Bitstring repeat(std::string_view pattern, std::size_t times);
    // The low `length` bits of `value`, most significant first.
    static Bitstring from_uint(std::uint64_t value, std::size_t length);

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool operator[](std::size_t k) const {
        return (words_[k >> 6] >> (63 - (k & 63))) & 1u;
    }
    void set(std::size_t k, bool bit);
    void push_back(bool bit);
    void pop_back();
    void append(const Bitstring& other);
    void clear() { words_.clear(); size_ = 0; }

    Bitstring prefix(std::size_t n) const;  // x_n: the whole string if n >= size
    bool starts_with(const Bitstring& p) const;
    std::size_t common_prefix_length(const Bitstring& other) const;
    std::size_t leading_ones() const;

    std::string to_string() const;
    std::uint64_t hash() const;

    friend bool operator==(const Bitstring& a, const Bitstring& b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }
    // Lexicographic order with a proper prefix preceding its extensions.
    friend std::strong_ordering operator<=>(const Bitstring& a, const Bitstring& b);

    friend Bitstring operator+(Bitstring a, const Bitstring& b) {
        a.append(b);
        return a;
    }

private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

std::strong_ordering lex_compare(const Bitstring& a, const Bitstring& b);

// x': the lexicographically smallest y > x with l(y) <= l(x); nullopt for 1...1 (and lambda).
std::optional<Bitstring> successor_bounded(const Bitstring& x);

// binary(l(x)) with every digit doubled, then "01", then x. binary(0) = "0".
Bitstring self_delim_encode(const Bitstring& x);

class DecodeError : public std::runtime_error {
public:
    DecodeError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at bit " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

struct Decoded {
    Bitstring value;
    std::size_t consumed = 0;
};

// Reads one self-delimiting code word from the front of `stream`; trailing bits are ignored.
Decoded self_delim_decode(const Bitstring& stream);

class Dyadic;
// 0.x as an exact dyadic rational. Throws std::domain_error for lambda.
Dyadic dyadic_value(const Bitstring& x);

}  // namespace speedprior

template <>
struct std::hash<speedprior::Bitstring> {
    std::size_t operator()(const speedprior::Bitstring& b) const noexcept {
        return static_cast<std::size_t>(b.hash());
    }
};

#endif  // SPEEDPRIOR_BITSTRING_HPP
