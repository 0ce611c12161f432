#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "gen.hpp"
#include "speedprior/bitstring.hpp"
#include "speedprior/dyadic.hpp"

using speedprior::Bitstring;

namespace {

Bitstring B(const char* s) { return Bitstring::from_string(s); }

// Every string of length <= n as text, shortest first.
std::vector<std::string> all_texts(std::size_t n) {
    std::vector<std::string> out{""};
    for (std::size_t k = 0; out.size() < (std::size_t{2} << n) - 1; ++k) {
        out.push_back(out[k] + "0");
        out.push_back(out[k] + "1");
    }
    return out;
}

}  // namespace

TEST_CASE("parse and print") {
    CHECK(B("").empty());
    CHECK(B("0110").to_string() == "0110");
    CHECK(B("0110").size() == 4);
    CHECK_THROWS_AS(B("01a"), std::invalid_argument);
    CHECK(Bitstring::repeat("10", 3) == B("101010"));
    CHECK(Bitstring::from_uint(5, 4) == B("0101"));

    // Word boundaries.
    const std::string long_text = std::string(63, '1') + "01" + std::string(70, '0') + "1";
    const Bitstring x = Bitstring::from_string(long_text);
    CHECK(x.to_string() == long_text);
    CHECK(x.leading_ones() == 63);
    Bitstring y = x;
    y.pop_back();
    CHECK(y.to_string() == long_text.substr(0, long_text.size() - 1));
}

TEST_CASE("order agrees with string comparison") {
    gen::Rng rng(7);
    for (int k = 0; k < 4000; ++k) {
        const std::string a = rng.text(140), b = rng.text(140);
        const auto want = a <=> b;
        CHECK((Bitstring::from_string(a) <=> Bitstring::from_string(b)) == want);
        CHECK((Bitstring::from_string(a) == Bitstring::from_string(b)) == (a == b));
    }
    CHECK(B("01") < B("010"));
    CHECK(B("") < B("0"));
    CHECK(B("011") > B("0101"));
}

TEST_CASE("prefix helpers against std::string") {
    gen::Rng rng(11);
    for (int k = 0; k < 2000; ++k) {
        const std::string a = rng.text(130);
        std::string b = rng.coin() ? a.substr(0, rng.below(a.size() + 1)) + rng.text(20) : rng.text(130);
        const Bitstring A = Bitstring::from_string(a), Bb = Bitstring::from_string(b);
        std::size_t lcp = 0;
        while (lcp < a.size() && lcp < b.size() && a[lcp] == b[lcp]) ++lcp;
        CHECK(A.common_prefix_length(Bb) == lcp);
        CHECK(A.starts_with(Bb) == (a.compare(0, b.size(), b) == 0 && b.size() <= a.size()));
        const std::size_t n = rng.below(a.size() + 2);
        CHECK(A.prefix(n).to_string() == a.substr(0, n));
        CHECK((A + Bb).to_string() == a + b);
        CHECK(A.leading_ones() == std::min(a.find('0'), a.size()));
        if (A == Bb) CHECK(A.hash() == Bb.hash());
    }
}

TEST_CASE("successor x' against exhaustive search") {
    const auto texts = all_texts(9);
    for (const std::string& x : texts) {
        std::optional<std::string> best;
        for (const std::string& y : texts) {
            if (y.size() <= x.size() && y > x && (!best || y < *best)) best = y;
        }
        const auto got = speedprior::successor_bounded(Bitstring::from_string(x));
        REQUIRE(got.has_value() == best.has_value());
        if (best) CHECK(got->to_string() == *best);
    }
    CHECK(speedprior::successor_bounded(B("0101"))->to_string() == "011");
}

TEST_CASE("self-delimiting code") {
    CHECK(speedprior::self_delim_encode(B("01101")) == B("1100110101101"));
    CHECK(speedprior::self_delim_encode(B("")) == B("0001"));

    for (const std::string& x : all_texts(12)) {
        const Bitstring code = speedprior::self_delim_encode(Bitstring::from_string(x));
        const auto d = speedprior::self_delim_decode(code + B("10"));
        REQUIRE(d.value.to_string() == x);
        CHECK(d.consumed == code.size());
    }

    using speedprior::DecodeError;
    CHECK_THROWS_AS(speedprior::self_delim_decode(B("1")), DecodeError);        // half a pair
    CHECK_THROWS_AS(speedprior::self_delim_decode(B("01")), DecodeError);       // no length digits
    CHECK_THROWS_AS(speedprior::self_delim_decode(B("1110")), DecodeError);     // "10" is not a pair
    CHECK_THROWS_AS(speedprior::self_delim_decode(B("001101")), DecodeError);   // leading zero
    CHECK_THROWS_AS(speedprior::self_delim_decode(B("110001")), DecodeError);   // payload cut short
    CHECK_THROWS_AS(speedprior::self_delim_decode(B("11001100")), DecodeError); // no terminator
}

TEST_CASE("code words form a prefix-free set") {
    std::vector<Bitstring> codes;
    for (const std::string& x : all_texts(8)) codes.push_back(speedprior::self_delim_encode(Bitstring::from_string(x)));
    std::sort(codes.begin(), codes.end());
    for (std::size_t k = 0; k + 1 < codes.size(); ++k) CHECK_FALSE(codes[k + 1].starts_with(codes[k]));
}

TEST_CASE("dyadic value 0.x") {
    using speedprior::Dyadic;
    CHECK(speedprior::dyadic_value(B("1")) == Dyadic(1, 1));
    CHECK(speedprior::dyadic_value(B("011")) == Dyadic(3, 3));
    CHECK(speedprior::dyadic_value(B("0100")) == Dyadic(1, 2));
    CHECK_THROWS_AS(speedprior::dyadic_value(B("")), std::domain_error);
}
