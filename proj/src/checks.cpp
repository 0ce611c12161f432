#include "speedprior/checks.hpp"

#include <cmath>
#include <limits>

#include "speedprior/oracles.hpp"
#include "speedprior/predict.hpp"

namespace speedprior::checks {

namespace {

Json dyadic_json(const Dyadic& d) { return Json(d.to_json()); }

std::string show(const Bitstring& x) { return x.empty() ? std::string("<lambda>") : x.to_string(); }

// Keeps failure details short: the first few offenders and a count.
struct Offenders {
    Json list = Json::array();
    std::size_t count = 0;
    void add(Json j) {
        if (list.size() < 8) list.push_back(std::move(j));
        ++count;
    }
    void into(CheckResult& r) const {
        r.detail["violations"] = count;
        if (count) {
            r.ok = false;
            r.detail["examples"] = list;
        }
    }
};

}  // namespace

CheckResult encoding(std::size_t max_length) {
    CheckResult r{"encoding"};
    const Bitstring example = self_delim_encode(Bitstring::from_string("01101"));
    r.detail["example"] = example.to_string();
    r.detail["example_ok"] = example == Bitstring::from_string("1100110101101");
    if (!r.detail["example_ok"].get<bool>()) r.ok = false;

    Offenders bad;
    std::size_t count = 0;
    for (std::uint64_t n = 1; n < (std::uint64_t{2} << max_length); ++n) {
        const Bitstring x = alphabet_nth(n);
        ++count;
        Bitstring stream = self_delim_encode(x);
        stream.append(Bitstring::from_string("1"));  // trailing bits must be left alone
        try {
            const Decoded d = self_delim_decode(stream);
            if (!(d.value == x) || d.consumed + 1 != stream.size()) bad.add(show(x));
        } catch (const DecodeError&) {
            bad.add(show(x));
        }
    }
    r.detail["round_trips"] = count;
    bad.into(r);
    return r;
}

CheckResult oracle_equivalence(int max_phase, Discipline d, unsigned workers) {
    CheckResult r{"oracle_equivalence"};
    r.detail["discipline"] = discipline_name(d);
    r.detail["max_phase"] = max_phase;
    FastEngine engine(d, workers);
    engine.advance_to(max_phase);
    Offenders bad;
    std::size_t compared = 0;
    for (int i = 1; i <= max_phase; ++i) {
        const PhaseRecord tree = engine.record(i);
        const PhaseRecord naive = oracle::naive_phase(i, d);
        if (tree.entries.size() != naive.entries.size()) {
            bad.add({{"phase", i}, {"problem", "entry count"}});
            continue;
        }
        for (std::size_t k = 0; k < tree.entries.size(); ++k) {
            ++compared;
            const Entry& a = tree.entries[k];
            const Entry& b = naive.entries[k];
            if (!(a == b)) {
                bad.add({{"phase", i},
                         {"prefix", a.program.to_string()},
                         {"tree", {a.output.to_string(), a.steps, status_name(a.status)}},
                         {"naive", {b.output.to_string(), b.steps, status_name(b.status)}}});
            }
        }
    }
    r.detail["entries_compared"] = compared;
    bad.into(r);
    return r;
}

CheckResult phase_budget_law(const std::vector<PhaseRecord>& records, Discipline d) {
    CheckResult r{"phase_budget_law"};
    r.detail["discipline"] = discipline_name(d);
    int top = 0;
    for (const PhaseRecord& rec : records) top = std::max(top, rec.phase);
    r.detail["phases"] = top;

    // Termination step of every prefix at its largest budget; none means it
    // was still running.
    constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint64_t> term((std::size_t{2} << top) - 1, kNone);
    for (std::size_t l = 0; l <= static_cast<std::size_t>(top); ++l) {
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << l); ++bits) {
            const MachineState m = run_state(Bitstring::from_uint(bits, l), d, phase_budget(top, l));
            if (m.status() != Status::Running) term[(std::size_t{1} << l) - 1 + bits] = m.steps();
        }
    }
    Offenders bad;
    std::size_t checked = 0;
    for (const PhaseRecord& rec : records) {
        for (const Entry& e : rec.entries) {
            ++checked;
            const std::uint64_t budget = phase_budget(rec.phase, e.program.length);
            const std::uint64_t expect = std::min(budget, term[(std::size_t{1} << e.program.length) - 1 + e.program.bits]);
            const bool status_ok = e.status != Status::BudgetExhausted || e.steps == budget;
            if (e.steps != expect || !status_ok) {
                bad.add({{"phase", rec.phase}, {"prefix", e.program.to_string()}, {"steps", e.steps}, {"expected", expect}});
            }
        }
    }
    r.detail["entries_checked"] = checked;
    bad.into(r);
    return r;
}

CheckResult semimeasure(const FastFacts& facts, int horizon, std::size_t n) {
    CheckResult r{"semimeasure"};
    r.detail["discipline"] = discipline_name(facts.discipline());
    r.detail["horizon"] = horizon;
    r.detail["max_length"] = n;
    // Parents up to length n, so children up to n + 1.
    const MeasureTable table = speed_prior_table(facts, horizon, n + 1);
    const SemimeasureReport rep = check_semimeasure(table, n + 1);
    r.detail["root_mass"] = dyadic_json(table.mass(Bitstring()));
    r.detail["root_ok"] = rep.root_ok;
    r.detail["inequalities_checked"] = rep.residuals.size() + rep.violations.size();
    Offenders bad;
    for (const SemimeasureViolation& v : rep.violations) {
        bad.add({{"x", show(v.x)},
                 {"mass_x", dyadic_json(v.mass_x)},
                 {"mass_x0", dyadic_json(v.mass_x0)},
                 {"mass_x1", dyadic_json(v.mass_x1)}});
    }
    // Cross-check every mass against literal re-execution.
    std::size_t mismatches = 0;
    const auto reference = oracle::speed_prior_table(horizon, facts.discipline(), n + 1);
    for (const auto& [x, m] : reference) mismatches += !(table.mass(x) == m);
    for (const auto& [x, row] : table.rows) mismatches += !x.empty() && !reference.contains(x);
    r.detail["oracle_mismatches"] = mismatches;
    bad.into(r);
    if (!rep.root_ok || mismatches) r.ok = false;
    return r;
}

CheckResult kraft(const FastFacts& facts, int horizon) {
    CheckResult r{"kraft"};
    r.detail["discipline"] = discipline_name(facts.discipline());
    r.detail["horizon"] = horizon;
    const KraftReport rep = kraft_check_facts(facts, horizon);
    r.detail["groups_checked"] = rep.checked;
    r.detail["largest_sum"] = dyadic_json(rep.worst);
    Offenders bad;
    for (const std::string& p : rep.problems) bad.add(p);
    bad.into(r);
    if (!rep.ok) r.ok = false;
    return r;
}

CheckResult tail_bound(const FastFacts& facts, int horizon) {
    CheckResult r{"tail_bound"};
    r.detail["discipline"] = discipline_name(facts.discipline());
    r.detail["horizon"] = horizon;
    Offenders bad;
    std::size_t rows = 0, kt_exceed = 0;
    for (const TailBoundRow& row : tail_bound_check(facts, horizon)) {
        ++rows;
        if (!row.within_bound) {
            bad.add({{"x", show(row.x)}, {"first_phase", row.first_phase}, {"mass", dyadic_json(row.mass)}});
        }
        kt_exceed += !row.within_kt_bound;
    }
    r.detail["strings"] = rows;
    // Reported only: how often S_lb(x) exceeds 2^-kt_ub(x).
    r.detail["above_2^-kt"] = kt_exceed;
    bad.into(r);
    return r;
}

CheckResult coverage(const FastFacts& facts, int max_k, std::size_t max_length) {
    CheckResult r{"coverage"};
    r.detail["discipline"] = discipline_name(facts.discipline());
    r.detail["max_k"] = max_k;
    Offenders bad;
    for (int k = 1; k <= max_k; ++k) {
        for (const CoverageViolation& v : coverage_check(facts, k, max_length)) {
            bad.add({{"k", k}, {"x", show(v.x)}, {"kt", v.kt}, {"first_phase", v.first_phase}});
        }
    }
    bad.into(r);
    return r;
}

CheckResult hierarchy(const FastFacts& mtm, const FastFacts& eom, const FastFacts& gtm, int horizon) {
    CheckResult r{"hierarchy"};
    r.detail["horizon"] = horizon;
    // Union of strings seen under any discipline.
    std::vector<Bitstring> xs;
    for (const FastFacts* f : {&mtm, &eom, &gtm}) {
        f->for_each([&](const Bitstring& x, const FastFacts::XFacts& xf) {
            if (xf.first_phase != 0 && xf.first_phase <= horizon) xs.push_back(x);
        });
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    Offenders bad;
    std::size_t compared = 0, unconverged = 0;
    for (const Bitstring& x : xs) {
        const ComplexityReport c = complexity_report(x, &mtm, &eom, &gtm, nullptr, horizon);
        unconverged += c.gtm_unconverged;
        if (!c.km_mtm_ub || !c.k_eom_ub || !c.k_gtm_ub) continue;
        ++compared;
        if (!(*c.k_gtm_ub <= *c.k_eom_ub && *c.k_eom_ub <= *c.km_mtm_ub)) {
            bad.add({{"x", show(x)}, {"k_gtm", *c.k_gtm_ub}, {"k_eom", *c.k_eom_ub}, {"km_mtm", *c.km_mtm_ub}});
        }
    }
    r.detail["strings"] = xs.size();
    r.detail["compared"] = compared;
    r.detail["gtm_unconverged"] = unconverged;
    bad.into(r);
    return r;
}

CheckResult halting(Discipline d, const HaltingBudget& budget, unsigned workers) {
    CheckResult r{"halting_table"};
    r.detail["discipline"] = discipline_name(d);
    r.detail["max_program_length"] = budget.max_program_length;
    r.detail["steps"] = budget.steps;
    const MeasureTable table = halting_table(d, budget, workers);
    const auto reference = oracle::halting_table(budget.max_program_length, budget.steps, d);
    Offenders bad;
    for (const auto& [x, m] : reference) {
        if (!(table.mass(x) == m)) bad.add({{"x", show(x)}, {"tree", dyadic_json(table.mass(x))}, {"oracle", dyadic_json(m)}});
    }
    for (const auto& [x, row] : table.rows) {
        if (!reference.contains(x)) bad.add({{"x", show(x)}, {"tree", dyadic_json(row.mass)}, {"oracle", "absent"}});
    }
    r.detail["outputs"] = reference.size();
    bad.into(r);
    return r;
}

CheckResult guess_statistics(int max_i, std::uint64_t samples, std::uint64_t seed, Discipline d, unsigned workers,
                             std::size_t max_length, double threshold) {
    CheckResult r{"guess_statistics"};
    r.detail["discipline"] = discipline_name(d);
    r.detail["max_i"] = max_i;
    r.detail["samples"] = samples;
    r.detail["seed"] = seed;
    r.detail["rng"] = kRngId;
    r.detail["threshold"] = threshold;
    const GuessOracle oracle = guess_oracle(max_i, d);
    Dyadic total = oracle.remainder;
    for (const auto& [x, m] : oracle.final_outputs) total += m;
    r.detail["conservation"] = total == Dyadic::one();
    if (!(total == Dyadic::one())) r.ok = false;

    const GuessTally tally = guess_tally(samples, seed, d, max_i, workers);
    Offenders bad;
    double worst = 0;
    for (std::uint64_t n = 1; n < (std::uint64_t{2} << max_length); ++n) {
        const Bitstring x = alphabet_nth(n);
        const GuessReport g = guess_compare(x, tally, seed, oracle);
        worst = std::max(worst, std::abs(g.z));
        if (!g.pass(threshold)) {
            bad.add({{"x", show(x)}, {"emp", g.empirical}, {"exact", dyadic_json(g.exact)}, {"z", g.z},
                     {"horizon_mismatch", g.horizon_mismatch}});
        }
    }
    r.detail["max_abs_z"] = worst;
    bad.into(r);
    return r;
}

CheckResult alphabet(std::size_t max_n) {
    CheckResult r{"alphabet"};
    r.detail["max_n"] = max_n;
    Offenders bad;
    for (std::size_t n = 1; n <= max_n; ++n) {
        const Bitstring ones = Bitstring::repeat("1", n);
        // Position within the block of length-n strings, counted from 1.
        const std::uint64_t block_start = std::uint64_t{1} << n;  // index of 0^n
        const std::uint64_t in_block = alphabet_index(ones) - block_start + 1;
        const std::uint64_t first = oracle::alphabet_first_with_ones(n);
        const bool ok = in_block == (std::uint64_t{1} << n) && first == alphabet_index(ones) &&
                        alphabet_nth(first) == ones;
        if (!ok) bad.add({{"n", n}, {"position_in_block", in_block}, {"first_listed", first}});
    }
    bad.into(r);
    return r;
}

CheckResult periodic_prediction(const FastFacts& facts, int horizon, const std::vector<std::size_t>& ks,
                                std::size_t max_program_length, std::uint64_t oracle_budget) {
    CheckResult r{"periodic_prediction"};
    r.detail["discipline"] = discipline_name(facts.discipline());
    r.detail["horizon"] = horizon;
    r.detail["oracle_max_program_length"] = max_program_length;
    r.detail["oracle_budget"] = oracle_budget;
    std::size_t longest = 0;
    for (std::size_t k : ks) longest = std::max(longest, 2 * k + 1);
    const auto kt = oracle::exhaustive_kt(max_program_length, oracle_budget, facts.discipline(), longest);

    Json rows = Json::array();
    for (std::size_t k : ks) {
        const Bitstring x = Bitstring::repeat("10", k);
        Json row = {{"x", x.to_string()}};
        bool ok = true;
        try {
            const NextBit nb = next_bit(x, facts, horizon);
            row["predicted"] = nb.bit ? 1 : 0;
            if (!nb.bit) ok = false;  // the period continues with 1
        } catch (const NotYetEnumerated& e) {
            row["predicted"] = nullptr;
            row["refusal"] = e.what();
            ok = false;
        }
        Bitstring x0 = x, x1 = x;
        x0.push_back(false);
        x1.push_back(true);
        const auto a = kt.find(x0), b = kt.find(x1);
        if (a == kt.end() && b == kt.end()) {
            row["oracle"] = nullptr;
            row["oracle_note"] = "no program within the search bound outputs either continuation";
            ok = false;
        } else {
            const bool oracle_bit = a == kt.end() || (b != kt.end() && b->second.kt < a->second.kt);
            row["oracle"] = oracle_bit ? 1 : 0;
            if (!row["predicted"].is_null() && row["predicted"].get<int>() != (oracle_bit ? 1 : 0)) ok = false;
        }
        row["ok"] = ok;
        if (!ok) r.ok = false;
        rows.push_back(std::move(row));
    }
    r.detail["cases"] = rows;
    return r;
}

}  // namespace speedprior::checks
