#include <bit>
#include <map>

#include "doctest.h"
#include "gen.hpp"
#include "speedprior/dovetail.hpp"
#include "speedprior/measures.hpp"
#include "speedprior/oracles.hpp"

using namespace speedprior;

namespace {

Bitstring B(const char* s) { return Bitstring::from_string(s); }

constexpr Discipline kAll[] = {Discipline::Monotone, Discipline::EnumerableOutput, Discipline::General};

// Phases 1..14 of each discipline, shared by the heavier cases below.
const FastFacts& facts14(Discipline d) {
    static std::map<Discipline, FastFacts> cache;
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, fast_run(14, d, 4)).first;
    return it->second;
}

}  // namespace

TEST_CASE("ALPHABET listing") {
    CHECK(alphabet_nth(1) == B(""));
    CHECK(alphabet_nth(2) == B("0"));
    CHECK(alphabet_nth(3) == B("1"));
    CHECK(alphabet_nth(4) == B("00"));
    CHECK(alphabet_nth(7) == B("11"));
    // Counting through the listing by hand: successive strings of one
    // length are binary increments, and the length grows after all ones.
    std::string cur;
    for (std::uint64_t n = 1; n < 5000; ++n) {
        REQUIRE(alphabet_nth(n).to_string() == cur);
        CHECK(alphabet_index(alphabet_nth(n)) == n);
        std::size_t k = cur.size();
        while (k > 0 && cur[k - 1] == '1') cur[--k] = '0';
        if (k == 0) cur = std::string(cur.size() + 1, '0');
        else cur[k - 1] = '1';
    }
    for (std::size_t n = 1; n <= 20; ++n) {
        // 1^n sits at the end of its length block, so at block position 2^n.
        const std::uint64_t idx = alphabet_index(Bitstring::repeat("1", n));
        CHECK(idx - ((std::uint64_t{1} << n) - 1) == (std::uint64_t{1} << n));
        CHECK(oracle::alphabet_first_with_ones(n) == idx);
    }
}

TEST_CASE("SIMPLE schedule") {
    const std::uint64_t want[] = {1, 2, 1, 3, 1, 2, 1, 4, 1, 2, 1, 3, 1, 2, 1, 5};
    for (std::uint64_t s = 1; s <= 16; ++s) CHECK(simple_schedule(s) == want[s - 1]);

    // Count instructions per program directly.
    std::map<std::uint64_t, std::uint64_t> done;
    for (std::uint64_t s = 1; s <= 1u << 14; ++s) {
        const std::uint64_t k = simple_schedule(s);
        const std::uint64_t m = ++done[k];
        REQUIRE(simple_step_of(k, m) == s);
    }
    // Program k gets a 2^-k share of the steps.
    for (std::uint64_t k = 1; k <= 10; ++k) CHECK(done[k] == (std::uint64_t{1} << (14 - k)));
}

TEST_CASE("early phases by hand") {
    for (Discipline d : kAll) {
        const PhaseRecord p1 = oracle::naive_phase(1, d);
        REQUIRE(p1.entries.size() == 3);
        for (const Entry& e : p1.entries) {
            CHECK(e.status == Status::AwaitingBit);
            CHECK(e.steps == 0);
        }
    }
    FastEngine engine(Discipline::Monotone);
    engine.advance_to(4);
    const PhaseRecord p4 = engine.record(4);
    CHECK(p4.entries.size() == 31);
    bool seen = false;
    for (const Entry& e : p4.entries) {
        if (e.program.to_string() != "0010") continue;
        seen = true;
        CHECK(e.status == Status::BudgetExhausted);
        CHECK(e.steps == 1);
        CHECK(e.output == B("1"));
    }
    CHECK(seen);
}

TEST_CASE("shared tree equals literal execution") {
    for (Discipline d : kAll) {
        for (unsigned workers : {1u, 4u}) {
            FastEngine engine(d, workers);
            for (int i = 1; i <= 8; ++i) {
                engine.advance_to(i);
                CHECK(engine.record(i) == oracle::naive_phase(i, d));
            }
        }
    }
}

TEST_CASE("phase budget law") {
    for (Discipline d : kAll) {
        FastEngine engine(d);
        engine.advance_to(10);
        for (int i = 1; i <= 10; ++i) {
            for (const Entry& e : engine.record(i).entries) {
                const std::uint64_t b = phase_budget(i, e.program.length);
                const RunOutcome r = run(e.program.to_bitstring(), d, b);
                REQUIRE(e.steps == r.steps);
                CHECK(e.steps <= b);
                if (e.steps < b) CHECK(e.status != Status::BudgetExhausted);
            }
        }
    }
}

TEST_CASE("facts: first phases and witnesses") {
    const FastFacts& f = facts14(Discipline::Monotone);
    REQUIRE(f.find(B("")) != nullptr);
    CHECK(f.find(B(""))->first_phase == 1);
    const auto* one = f.find(B("1"));
    REQUIRE(one != nullptr);
    CHECK(one->first_phase == 3);
    CHECK(one->witnesses.front().program.to_string() == "001");
    CHECK(one->witnesses.front().t == 1);
    CHECK(f.find(B("101010")) == nullptr);
}

TEST_CASE("facts are monotone in the horizon") {
    for (Discipline d : kAll) {
        const FastFacts small = fast_run(9, d);
        const FastFacts& big = facts14(d);
        small.for_each([&](const Bitstring& x, const FastFacts::XFacts& fx) {
            const auto* bx = big.find(x);
            REQUIRE(bx != nullptr);
            CHECK(bx->first_phase == fx.first_phase);
            // Phases 1..9 contribute the same witnesses at either horizon.
            std::size_t k = 0;
            for (const Witness& w : bx->witnesses) {
                if (w.phase > 9) continue;
                REQUIRE(k < fx.witnesses.size());
                CHECK(w == fx.witnesses[k++]);
            }
            CHECK(k == fx.witnesses.size());
        });
    }
}

TEST_CASE("worker count does not change results") {
    for (Discipline d : kAll) {
        FastEngine a(d, 1), b(d, 7);
        a.advance_to(12);
        b.advance_to(12);
        for (int i = 1; i <= 12; ++i) CHECK(a.record(i).digest() == b.record(i).digest());
    }
}

TEST_CASE("witnesses are minimal and correct") {
    for (Discipline d : kAll) {
        const FastFacts& f = facts14(d);
        gen::Rng rng(static_cast<std::uint64_t>(d) + 5);
        std::size_t checked = 0;
        f.for_each(
            [&](const Bitstring& x, const FastFacts::XFacts& fx) {
                if (x.empty() || rng.below(4) != 0) return;
                for (const Witness& w : fx.witnesses) {
                    const Bitstring p = w.program.to_bitstring();
                    const MachineState m = run_state(p, d, phase_budget(w.phase, p.size()));
                    REQUIRE(m.output().starts_with(x));
                    std::uint64_t since = 0;
                    for (std::size_t k = 0; k < x.size(); ++k) since = std::max(since, m.written_at()[k]);
                    CHECK(since == w.t);
                    // No proper prefix of p already showed x in this phase.
                    for (std::size_t l = 0; l < p.size(); ++l) {
                        const RunOutcome q = run(p.prefix(l), d, phase_budget(w.phase, l));
                        CHECK_FALSE(q.output.starts_with(x));
                    }
                    ++checked;
                }
            },
            8);
        CHECK(checked > 100);
    }
}

TEST_CASE("ones appear at log2 n plus a constant") {
    // The loop OUT1 JZ 1 (10 bits) writes its n-th one at step 2n-1, so
    // 1^n needs 2^(i-10) >= 2n-1, i.e. phase 11 + log2 n for n a power of two.
    const FastFacts f = fast_run(17, Discipline::Monotone, 4);
    for (std::size_t n = 4; n <= 64; n *= 2) {
        const auto* fx = f.find(Bitstring::repeat("1", n));
        REQUIRE(fx != nullptr);
        CHECK(fx->first_phase - std::countr_zero(n) == 11);
    }
}

TEST_CASE("coverage against literal runs") {
    for (Discipline d : kAll) {
        for (int k = 3; k <= 12; ++k) {
            CHECK(coverage_check(facts14(d), k, 8).empty());
        }
    }
}
