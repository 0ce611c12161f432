#include <map>

#include "doctest.h"
#include "gen.hpp"
#include "speedprior/measures.hpp"
#include "speedprior/oracles.hpp"

using namespace speedprior;

namespace {

Bitstring B(const char* s) { return Bitstring::from_string(s); }

constexpr Discipline kAll[] = {Discipline::Monotone, Discipline::EnumerableOutput, Discipline::General};

const FastFacts& facts(Discipline d, int h) {
    static std::map<std::pair<Discipline, int>, FastFacts> cache;
    auto it = cache.find({d, h});
    if (it == cache.end()) it = cache.emplace(std::pair{d, h}, fast_run(h, d, 4)).first;
    return it->second;
}

// Every string of length 1..n.
std::vector<Bitstring> strings_upto(std::size_t n) {
    std::vector<Bitstring> out;
    for (std::uint64_t k = 2; k < (std::uint64_t{2} << n); ++k) out.push_back(alphabet_nth(k));
    return out;
}

}  // namespace

TEST_CASE("ceil_log2") {
    CHECK(ceil_log2(1) == 0);
    CHECK(ceil_log2(2) == 1);
    CHECK(ceil_log2(3) == 2);
    CHECK(ceil_log2(4) == 2);
    CHECK(ceil_log2(5) == 3);
    CHECK(ceil_log2(std::uint64_t{1} << 40) == 40);
}

TEST_CASE("speed prior lower bound: hand values") {
    const FastFacts& f = facts(Discipline::Monotone, 14);
    for (int h = 1; h <= 14; ++h) CHECK(speed_prior_lb(B(""), f, h) == Dyadic::one() - Dyadic::pow2_neg(h));
    // Only 001 produces "1" by phase 6, contributing 2^-i 2^-3 in phases 3..6.
    CHECK(speed_prior_lb(B("1"), f, 6) == Dyadic(15, 9));
    CHECK(speed_prior_lb(B("1"), f, 2) == Dyadic::zero());
    CHECK_THROWS_AS(speed_prior_lb(B("1"), f, 15), HorizonError);
    CHECK(speed_prior_lb(B("101010"), f, 14) == Dyadic::zero());
}

TEST_CASE("speed prior lower bound against brute force") {
    for (Discipline d : kAll) {
        const FastFacts& f = facts(d, 12);
        for (int h : {5, 9, 12}) {
            const auto want = oracle::speed_prior_table(h, d, 5);
            const MeasureTable table = speed_prior_table(f, h, 5);
            for (const Bitstring& x : strings_upto(5)) {
                const auto it = want.find(x);
                const Dyadic w = it == want.end() ? Dyadic::zero() : it->second;
                REQUIRE(speed_prior_lb(x, f, h) == w);
                CHECK(table.mass(x) == w);
            }
        }
    }
}

TEST_CASE("Kt upper bound") {
    const FastFacts& f = facts(Discipline::Monotone, 12);
    const KtEstimate one = kt_ub(B("1"), f);
    CHECK(one.kt_ub == 3);
    CHECK(one.program.to_string() == "001");
    CHECK(one.t == 1);
    CHECK(one.first_phase == 3);
    CHECK(kt_ub(B(""), f).kt_ub == 0);
    CHECK_THROWS_AS(kt_ub(B("101010"), f), NotYetEnumerated);
    CHECK_THROWS_AS(kt_ub(B("1"), f, 2), NotYetEnumerated);

    // Exhaustive search over every program of up to 11 bits for 2^11 steps
    // finds every pair with l(p) + log t <= 11, so it agrees with FAST there.
    const auto oracle_kt = oracle::exhaustive_kt(11, 2048, Discipline::Monotone, 5);
    const FastFacts& f11 = facts(Discipline::Monotone, 11);
    std::size_t compared = 0;
    for (const Bitstring& x : strings_upto(5)) {
        const auto it = oracle_kt.find(x);
        const bool within = it != oracle_kt.end() && it->second.kt <= 11;
        REQUIRE(f11.contains(x) == within);
        if (!within) continue;
        CHECK(kt_ub(x, f11).kt_ub == it->second.kt);
        ++compared;
    }
    CHECK(compared >= 10);
}

TEST_CASE("discrete m from halting programs") {
    const HaltingBudget budget{12, 1024};
    const MeasureTable table = halting_table(Discipline::Monotone, budget);
    // 001 001 111 00 is the only program of <= 12 bits halting on "11".
    CHECK(m_lb(B("11"), table) == Dyadic::pow2_neg(11));
    CHECK(m_lb(B("11"), Discipline::Monotone, budget) == Dyadic::pow2_neg(11));
    // HALT alone, 5 bits, leaves the empty output.
    CHECK(m_lb(B(""), table) >= Dyadic::pow2_neg(5));

    for (Discipline d : kAll) {
        for (unsigned workers : {1u, 3u}) {
            const HaltingBudget b{10, 256};
            const MeasureTable t = halting_table(d, b, workers);
            const auto want = oracle::halting_table(10, 256, d);
            CHECK(t.rows.size() == want.size());
            for (const auto& [x, mass] : want) CHECK(t.mass(x) == mass);
        }
    }
}

TEST_CASE("complexity report at horizon 12") {
    const FastFacts &m = facts(Discipline::Monotone, 12), &e = facts(Discipline::EnumerableOutput, 12),
                    &g = facts(Discipline::General, 12);
    const MeasureTable halt = halting_table(Discipline::Monotone, {12, 4096});

    const ComplexityReport one = complexity_report(B("1"), &m, &e, &g, &halt, 12);
    CHECK(one.k_halt_ub == 8);  // OUT1 HALT
    CHECK(one.km_mtm_ub == 3);
    CHECK(one.k_eom_ub == 3);
    CHECK(one.k_gtm_ub == 3);
    CHECK_FALSE(one.gtm_unconverged);

    const ComplexityReport two = complexity_report(B("11"), &m, &e, &g, &halt, 12);
    CHECK(two.k_halt_ub == 11);
    CHECK(two.km_mtm_ub == 6);

    const ComplexityReport none = complexity_report(B("101010"), &m, nullptr, &g, &halt, 12);
    CHECK_FALSE(none.km_mtm_ub.has_value());
    CHECK_FALSE(none.k_eom_ub.has_value());

    for (const Bitstring& x : strings_upto(5)) {
        const ComplexityReport r = complexity_report(x, &m, &e, &g, &halt, 12);
        if (r.km_mtm_ub && r.k_eom_ub) CHECK(*r.k_eom_ub <= *r.km_mtm_ub);
        if (r.k_eom_ub && r.k_gtm_ub) CHECK(*r.k_gtm_ub <= *r.k_eom_ub);
    }
}

TEST_CASE("semimeasure property") {
    for (Discipline d : kAll) {
        for (int h : {6, 10, 14}) {
            const SemimeasureReport r = check_semimeasure(speed_prior_table(facts(d, 14), h, 7), 7);
            CHECK(r.ok);
            CHECK(r.root_ok);
            CHECK(r.violations.empty());
        }
    }

    // Negative control: a table that gives more to the children than the parent.
    MeasureTable bad;
    bad.rows[B("")].mass = Dyadic(1, 1);
    bad.rows[B("0")].mass = Dyadic(1, 2);
    bad.rows[B("1")].mass = Dyadic(3, 3);
    const SemimeasureReport r = check_semimeasure(bad, 2);
    CHECK_FALSE(r.ok);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].x == B(""));

    MeasureTable heavy;
    heavy.rows[B("")].mass = Dyadic(3, 1);
    CHECK_FALSE(check_semimeasure(heavy, 1).root_ok);
}

TEST_CASE("Kraft sums") {
    CHECK(kraft_check({B("0"), B("10"), B("11")}) == Dyadic::one());
    CHECK(kraft_check({B("00"), B("01")}) == Dyadic(1, 1));
    CHECK(kraft_check({}) == Dyadic::zero());
    CHECK_THROWS_AS(kraft_check({B("0"), B("01")}), KraftError);
    CHECK_THROWS_AS(kraft_check({B("011"), B("1"), B("01")}), KraftError);
    try {
        kraft_check({B("110"), B("11")});
    } catch (const KraftError& e) {
        CHECK(e.shorter == B("11"));
        CHECK(e.longer == B("110"));
    }

    gen::Rng rng(99);
    for (int k = 0; k < 300; ++k) {
        // A random antichain: the leaves of a random binary tree.
        std::vector<Bitstring> leaves{B("")};
        for (int s = 0; s < 12; ++s) {
            const std::size_t at = rng.below(leaves.size());
            const Bitstring p = leaves[at];
            leaves[at] = p + B("0");
            if (rng.below(3)) leaves.push_back(p + B("1"));
        }
        CHECK(kraft_check(leaves) <= Dyadic::one());
    }

    for (Discipline d : kAll) {
        const KraftReport r = kraft_check_facts(facts(d, 14), 14);
        CHECK(r.ok);
        CHECK(r.checked > 0);
        CHECK(r.worst <= Dyadic::one());
    }
}

TEST_CASE("tail bound and coverage") {
    for (Discipline d : kAll) {
        for (const TailBoundRow& row : tail_bound_check(facts(d, 14), 14, 8)) {
            CHECK(row.within_bound);
            CHECK(row.mass <= Dyadic::pow2_neg(row.first_phase - 1));
        }
        CHECK(coverage_check(facts(d, 14), 13, 8).empty());
    }
}

TEST_CASE("fast-program dominance experiment") {
    const QRatioReport r = q_ratio_experiment(facts(Discipline::Monotone, 14), 14, {1, 2, 4, 8, 16, 64}, 2);
    REQUIRE(r.rows.size() == 6);
    CHECK(r.rows[0].f == 2);
    CHECK(r.rows[0].g == 1);
    CHECK(r.rows[5].g == 4096);
    CHECK(r.rows[5].truncated);
    CHECK_FALSE(r.rows[5].q.has_value());
    for (const QRatioRow& row : r.rows) {
        if (row.fast_mass.is_zero()) CHECK_FALSE(row.q.has_value());
        else REQUIRE(row.q.has_value());
        if (row.q) CHECK(*row.q == Rational::ratio(row.slow_mass, row.fast_mass));
    }
    CHECK(r.tail_nonincreasing);
}
