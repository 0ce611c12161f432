#include <map>

#include "doctest.h"
#include "speedprior/checks.hpp"
#include "speedprior/oracles.hpp"
#include "speedprior/predict.hpp"

using namespace speedprior;

namespace {

Bitstring B(const char* s) { return Bitstring::from_string(s); }

const FastFacts& facts(int h) {
    static std::map<int, FastFacts> cache;
    auto it = cache.find(h);
    if (it == cache.end()) it = cache.emplace(h, fast_run(h, Discipline::Monotone, 4)).first;
    return it->second;
}

}  // namespace

TEST_CASE("conditional probabilities") {
    const FastFacts& f = facts(12);
    const Dyadic root = Dyadic::one() - Dyadic::pow2_neg(12);
    CHECK(conditional(B(""), B("1"), f, 12) == Rational::ratio(speed_prior_lb(B("1"), f, 12), root));
    CHECK(conditional(B("1"), B(""), f, 12) == Rational(1, 1));
    CHECK(conditional(B("10"), B("1"), f, 12) == Rational(1, 176));

    const auto brute = oracle::speed_prior_table(12, Discipline::Monotone, 3);
    CHECK(conditional(B("10"), B("1"), f, 12) == Rational::ratio(brute.at(B("101")), brute.at(B("10"))));

    CHECK_THROWS_AS(conditional(B("101010"), B("1"), f, 12), NotYetEnumerated);
    try {
        conditional(B("101010"), B("1"), f, 12);
    } catch (const NotYetEnumerated& e) {
        CHECK(e.x() == B("101010"));
        CHECK(e.horizon() == 12);
    }
}

TEST_CASE("next bit") {
    const FastFacts& f = facts(12);
    const NextBit nb = next_bit(B("1"), f, 12);
    CHECK(nb.cond0 + nb.cond1 <= Rational(1, 1));
    CHECK(nb.bit == (nb.cond1 > nb.cond0));

    // Equal masses tie, and ties go to 0.
    const NextBit tie = next_bit(B("10"), f, 12);
    CHECK(tie.cond0 == tie.cond1);
    CHECK_FALSE(tie.bit);
    CHECK(tie.mass_gap == Rational(1, 1));

    CHECK_THROWS_AS(next_bit(B("101010"), f, 12), NotYetEnumerated);

    for (std::uint64_t k = 2; k < 64; ++k) {
        const Bitstring x = alphabet_nth(k);
        if (speed_prior_lb(x, f, 12).is_zero()) continue;
        try {
            const NextBit r = next_bit(x, f, 12);
            CHECK(r.cond0 + r.cond1 <= Rational(1, 1));
        } catch (const NotYetEnumerated&) {
        }
    }
}

TEST_CASE("ranked continuations") {
    const FastFacts& f = facts(12);
    const Prediction empty = rank_continuations(B("1"), 0, f, 12);
    REQUIRE(empty.candidates.size() == 1);
    CHECK(empty.candidates[0].y.empty());
    CHECK(empty.candidates[0].cond == Rational(1, 1));

    const Prediction p = rank_continuations(B("1"), 2, f, 12);
    REQUIRE_FALSE(p.candidates.empty());
    CHECK(p.chosen == std::size_t{0});
    Rational total;
    for (std::size_t k = 0; k < p.candidates.size(); ++k) {
        const Candidate& c = p.candidates[k];
        CHECK(c.y.size() == 2);
        CHECK(c.cond == conditional(B("1"), c.y, f, 12));
        CHECK(c.kt == kt_ub(B("1") + c.y, f, 12).kt_ub);
        total = total + c.cond;
        if (k > 0) {
            const Candidate& prev = p.candidates[k - 1];
            CHECK(prev.cond >= c.cond);
            if (prev.cond == c.cond) CHECK((prev.kt < c.kt || (prev.kt == c.kt && prev.y < c.y)));
        }
    }
    CHECK(total <= Rational(1, 1));

    CHECK_THROWS_AS(rank_continuations(B("101010"), 1, f, 12), NotYetEnumerated);
}

TEST_CASE("sweep over horizons") {
    const auto steps = prediction_sweep(B("1"), facts(16), {2, 3, 6, 9, 12, 14, 16});
    REQUIRE(steps.size() == 7);
    CHECK_FALSE(steps[0].prediction.has_value());
    CHECK_FALSE(steps[0].refusal.empty());
    for (std::size_t k = 1; k < steps.size(); ++k) {
        const SweepStep& s = steps[k];
        CHECK(s.horizon > steps[k - 1].horizon);
        if (s.prediction && steps[k - 1].prediction) {
            CHECK(s.flipped == (s.prediction->bit != steps[k - 1].prediction->bit));
        }
        if (s.flipped) CHECK_FALSE(s.witness_delta.empty());
        for (const auto& [x, w] : s.witness_delta) {
            CHECK(w.phase > steps[k - 1].horizon);
            CHECK(w.phase <= s.horizon);
            CHECK(x.size() == 2);
        }
    }
}

TEST_CASE("periodic sequences at a longer horizon") {
    // (10)^k needs the 13-bit loop OUT1 OUT0 JZ 2 and ~log2(2k) more phases.
    const auto r = checks::periodic_prediction(facts(20), 20, {3, 4, 5, 6}, 13, 1024);
    CHECK_MESSAGE(r.ok, r.detail.dump());
}

TEST_CASE("a clear mass winner has near-minimal kt") {
    for (int h : {10, 12, 14, 16, 18}) {
        std::size_t asserted = 0;
        facts(h).for_each(
            [&](const Bitstring& x, const FastFacts::XFacts&) {
                for (std::size_t k : {1u, 2u}) {
                    const Prediction p = rank_continuations(x, k, facts(h), h);
                    if (p.candidates.size() < 2 || (p.top_gap && *p.top_gap <= Rational(2, 1))) continue;
                    ++asserted;
                    CHECK_MESSAGE(p.top_kt_within_one, x.to_string(), " k=", k, " h=", h);
                }
            },
            5);
        MESSAGE("h=", h, ": ", asserted, " rankings with a clear winner");
    }
}
