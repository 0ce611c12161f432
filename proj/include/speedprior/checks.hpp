// Property suites shared by `verify` and the acceptance binary. Each check
// returns a pass flag plus a JSON detail object; none of them print.

#ifndef SPEEDPRIOR_CHECKS_HPP
#define SPEEDPRIOR_CHECKS_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "speedprior/dovetail.hpp"
#include "speedprior/guess.hpp"
#include "speedprior/measures.hpp"

namespace speedprior::checks {

using Json = nlohmann::ordered_json;

struct CheckResult {
    std::string name;
    bool ok = true;
    Json detail = Json::object();
};

// self_delim_encode(01101) == 1100110101101 and decode(encode(x)) == x for l(x) <= max_length.
CheckResult encoding(std::size_t max_length);

// Shared tree against literal per-prefix execution, phases 1..max_phase.
CheckResult oracle_equivalence(int max_phase, Discipline d, unsigned workers);

// steps = min(2^(i-l(p)), termination step) for every entry; termination
// steps come from one literal run per prefix at its largest budget.
CheckResult phase_budget_law(const std::vector<PhaseRecord>& records, Discipline d);

// S_lb(x0) + S_lb(x1) <= S_lb(x) for l(x) <= n, S_lb(lambda) <= 1; the
// table is also compared bit for bit with the brute-force masses.
CheckResult semimeasure(const FastFacts& facts, int horizon, std::size_t n);

CheckResult kraft(const FastFacts& facts, int horizon);

// S_lb(x) <= 2^(1 - i*(x)) asserted; S_lb(x) <= 2^-kt_ub(x) reported.
CheckResult tail_bound(const FastFacts& facts, int horizon);

CheckResult coverage(const FastFacts& facts, int max_k, std::size_t max_length);

// k_gtm <= k_eom <= km_mtm wherever all three exist.
CheckResult hierarchy(const FastFacts& mtm, const FastFacts& eom, const FastFacts& gtm, int horizon);

// Tree-built halting table against the brute-force one.
CheckResult halting(Discipline d, const HaltingBudget& budget, unsigned workers);

// Oracle conservation plus |z| <= threshold for every x with l(x) <= max_length.
CheckResult guess_statistics(int max_i, std::uint64_t samples, std::uint64_t seed, Discipline d, unsigned workers,
                             std::size_t max_length, double threshold);

// 1^n is the 2^n-th string of length n, and the first listed string
// carrying n ones, for n <= max_n.
CheckResult alphabet(std::size_t max_n);

// next_bit on (10)^k continues the period and agrees with the minimal-Kt
// continuation over all programs l(p) <= max_program_length run for
// oracle_budget steps.
CheckResult periodic_prediction(const FastFacts& facts, int horizon, const std::vector<std::size_t>& ks,
                                std::size_t max_program_length, std::uint64_t oracle_budget);

}  // namespace speedprior::checks

#endif  // SPEEDPRIOR_CHECKS_HPP
