#include "speedprior/bitstring.hpp"

#include <bit>

#include "speedprior/dyadic.hpp"

namespace speedprior {

namespace {

constexpr std::uint64_t bit_mask(std::size_t k) { return std::uint64_t{1} << (63 - (k & 63)); }

// Mask selecting the first `n` (1..64) bits of a word.
constexpr std::uint64_t head_mask(std::size_t n) {
    return n >= 64 ? ~std::uint64_t{0} : ~(~std::uint64_t{0} >> n);
}

}  // namespace

Bitstring Bitstring::from_string(std::string_view text) {
    Bitstring out;
    out.words_.reserve((text.size() + 63) / 64);
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bitstring: unexpected character '" + std::string(1, c) + "'");
        }
        out.push_back(c == '1');
    }
    return out;
}

Bitstring Bitstring::repeat(std::string_view pattern, std::size_t times) {
    const Bitstring unit = from_string(pattern);
    Bitstring out;
    for (std::size_t i = 0; i < times; ++i) out.append(unit);
    return out;
}

Bitstring Bitstring::from_uint(std::uint64_t value, std::size_t length) {
    Bitstring out;
    for (std::size_t k = length; k-- > 0;) out.push_back(k < 64 && ((value >> k) & 1u));
    return out;
}

void Bitstring::set(std::size_t k, bool bit) {
    if (bit) {
        words_[k >> 6] |= bit_mask(k);
    } else {
        words_[k >> 6] &= ~bit_mask(k);
    }
}

void Bitstring::push_back(bool bit) {
    if ((size_ & 63) == 0) words_.push_back(0);
    ++size_;
    if (bit) words_[(size_ - 1) >> 6] |= bit_mask(size_ - 1);
}

void Bitstring::pop_back() {
    if (size_ == 0) throw std::out_of_range("bitstring: pop_back on empty string");
    --size_;
    words_[size_ >> 6] &= ~bit_mask(size_);
    if ((size_ & 63) == 0) words_.pop_back();
}

void Bitstring::append(const Bitstring& other) {
    if ((size_ & 63) == 0) {
        words_.insert(words_.end(), other.words_.begin(), other.words_.end());
        size_ += other.size_;
        return;
    }
    for (std::size_t k = 0; k < other.size_; ++k) push_back(other[k]);
}

Bitstring Bitstring::prefix(std::size_t n) const {
    if (n >= size_) return *this;
    Bitstring out;
    out.size_ = n;
    out.words_.assign(words_.begin(), words_.begin() + static_cast<std::ptrdiff_t>((n + 63) / 64));
    if (n & 63) out.words_.back() &= head_mask(n & 63);
    return out;
}

bool Bitstring::starts_with(const Bitstring& p) const {
    return p.size_ <= size_ && common_prefix_length(p) == p.size_;
}

std::size_t Bitstring::common_prefix_length(const Bitstring& other) const {
    const std::size_t limit = std::min(size_, other.size_);
    const std::size_t nwords = (limit + 63) / 64;
    for (std::size_t w = 0; w < nwords; ++w) {
        const std::uint64_t diff = words_[w] ^ other.words_[w];
        if (diff != 0) return std::min(limit, w * 64 + static_cast<std::size_t>(std::countl_zero(diff)));
    }
    return limit;
}

std::size_t Bitstring::leading_ones() const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
        const std::uint64_t inv = ~words_[w];
        if (inv != 0) return std::min(size_, w * 64 + static_cast<std::size_t>(std::countl_zero(inv)));
    }
    return size_;
}

std::string Bitstring::to_string() const {
    std::string s;
    s.reserve(size_);
    for (std::size_t k = 0; k < size_; ++k) s.push_back((*this)[k] ? '1' : '0');
    return s;
}

std::uint64_t Bitstring::hash() const {
    // FNV-1a over the packed words and the length.
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(size_);
    for (std::uint64_t w : words_) mix(w);
    return h;
}

std::strong_ordering operator<=>(const Bitstring& a, const Bitstring& b) {
    const std::size_t lcp = a.common_prefix_length(b);
    if (lcp < a.size_ && lcp < b.size_) return a[lcp] <=> b[lcp];
    return a.size_ <=> b.size_;
}

std::strong_ordering lex_compare(const Bitstring& a, const Bitstring& b) { return a <=> b; }

std::optional<Bitstring> successor_bounded(const Bitstring& x) {
    // Diverge from x at its last 0-bit and stop there.
    for (std::size_t k = x.size(); k-- > 0;) {
        if (!x[k]) {
            Bitstring y = x.prefix(k);
            y.push_back(true);
            return y;
        }
    }
    return std::nullopt;
}

Bitstring self_delim_encode(const Bitstring& x) {
    Bitstring out;
    const std::size_t n = x.size();
    const int digits = n == 0 ? 1 : static_cast<int>(std::bit_width(n));
    for (int k = digits - 1; k >= 0; --k) {
        const bool d = (n >> k) & 1u;
        out.push_back(d);
        out.push_back(d);
    }
    out.push_back(false);
    out.push_back(true);
    out.append(x);
    return out;
}

Decoded self_delim_decode(const Bitstring& stream) {
    std::size_t pos = 0;
    std::uint64_t length = 0;
    int digits = 0;
    bool leading_zero = false;
    for (;;) {
        if (pos + 2 > stream.size()) throw DecodeError("self-delimiting header truncated", pos);
        const bool a = stream[pos];
        const bool b = stream[pos + 1];
        if (!a && b) {
            if (digits == 0) throw DecodeError("self-delimiting header has no length digits", pos);
            pos += 2;
            break;
        }
        if (a && !b) throw DecodeError("self-delimiting header has odd pair 10", pos);
        if (leading_zero) throw DecodeError("self-delimiting length has a leading zero", pos);
        if (digits == 63) throw DecodeError("self-delimiting length overflows", pos);
        if (digits == 0 && !a) leading_zero = true;
        length = (length << 1) | (a ? 1u : 0u);
        ++digits;
        pos += 2;
    }
    if (stream.size() - pos < length) {
        throw DecodeError("self-delimiting payload truncated", stream.size());
    }
    Decoded out;
    for (std::uint64_t k = 0; k < length; ++k) out.value.push_back(stream[pos + k]);
    out.consumed = pos + length;
    return out;
}

Dyadic dyadic_value(const Bitstring& x) {
    if (x.empty()) throw std::domain_error("dyadic_value: 0.x is undefined for the empty string");
    BigInt num = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        num <<= 1;
        if (x[k]) num += 1;
    }
    return Dyadic(std::move(num), static_cast<std::uint32_t>(x.size()));
}

}  // namespace speedprior
