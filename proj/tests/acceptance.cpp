// Acceptance run: one PASS/FAIL line per criterion, details as compact JSON.
// Exits nonzero if any criterion fails.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "speedprior/checks.hpp"
#include "speedprior/cli.hpp"
#include "speedprior/fast_cache.hpp"

using namespace speedprior;
using checks::CheckResult;
using checks::Json;

namespace {

// Pinned parameters. Everything except the GUESS z threshold is exact.
constexpr std::size_t kEncodingMaxLength = 12;
constexpr int kEquivalenceMaxPhase = 8;
constexpr int kFactsHorizon = 12;
constexpr std::size_t kSemimeasureMaxLength = 6;
constexpr int kGuessMaxI = 10;
constexpr std::uint64_t kGuessSamples = 1000000;
constexpr std::uint64_t kGuessSeed = 1;
constexpr std::size_t kGuessMaxLength = 3;
constexpr double kGuessZThreshold = 4.0;
constexpr std::size_t kAlphabetMaxN = 16;
constexpr int kCoverageMaxK = 12;
constexpr int kPredictionHorizon = 14;
constexpr std::size_t kPredictionOracleLength = 10;
constexpr std::uint64_t kPredictionOracleBudget = std::uint64_t{1} << 14;
constexpr int kHierarchyHorizon = 10;

constexpr Discipline kAll[] = {Discipline::Monotone, Discipline::EnumerableOutput, Discipline::General};

unsigned workers() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

// Combines per-discipline results into one.
CheckResult merge(const std::string& name, const std::vector<CheckResult>& parts) {
    CheckResult r{name};
    for (const CheckResult& p : parts) {
        r.ok = r.ok && p.ok;
        Json d = p.detail;
        const std::string key = d.contains("discipline") ? d["discipline"].get<std::string>() : p.name;
        d.erase("discipline");
        r.detail[key] = d;
    }
    return r;
}

std::string invoke(std::vector<std::string> args, int& code) {
    args.insert(args.begin(), "speedprior");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return out.str();
}

CheckResult determinism() {
    CheckResult r{"determinism"};
    for (const char* cmd : {"fast", "verify"}) {
        int c1 = 0, c8 = 0;
        const std::string a = invoke({cmd, "--workers", "1"}, c1);
        const std::string b = invoke({cmd, "--workers", "8"}, c8);
        const bool same = a == b && !a.empty();
        r.detail[cmd] = {{"bytes", a.size()}, {"identical", same}, {"exit_codes", {c1, c8}}};
        r.ok = r.ok && same;
    }
    return r;
}

}  // namespace

int main() {
    const unsigned w = workers();
    std::vector<std::pair<int, std::string>> titles = {
        {1, "encoding fidelity"},       {2, "FAST oracle equivalence"}, {3, "phase-budget law"},
        {4, "semimeasure property"},    {5, "per-phase Kraft"},         {6, "tail bound"},
        {7, "GUESS agreement"},         {8, "ALPHABET 1^n position"},   {9, "FAST coverage law"},
        {10, "periodic prediction"},    {11, "worker determinism"},     {12, "budgeted hierarchy"},
    };

    std::vector<FastFacts> facts12;
    std::vector<std::vector<PhaseRecord>> records12;
    for (Discipline d : kAll) {
        FastEngine engine(d, w);
        FastCache cache(d);
        fast_phase(kFactsHorizon, cache, engine);
        records12.push_back(cache.phases());
        facts12.push_back(FastFacts::from_records(d, cache.phases()));
    }

    int failures = 0;
    auto report = [&](int id, const CheckResult& r) {
        std::string title;
        for (const auto& [k, t] : titles) if (k == id) title = t;
        std::printf("%s %2d %-26s %s\n", r.ok ? "PASS" : "FAIL", id, title.c_str(), r.detail.dump().c_str());
        std::fflush(stdout);
        failures += !r.ok;
    };

    report(1, checks::encoding(kEncodingMaxLength));
    {
        std::vector<CheckResult> parts;
        for (Discipline d : kAll) parts.push_back(checks::oracle_equivalence(kEquivalenceMaxPhase, d, w));
        report(2, merge("oracle_equivalence", parts));
    }
    {
        std::vector<CheckResult> parts;
        for (std::size_t k = 0; k < 3; ++k) parts.push_back(checks::phase_budget_law(records12[k], kAll[k]));
        report(3, merge("phase_budget_law", parts));
    }
    {
        std::vector<CheckResult> parts;
        for (const FastFacts& f : facts12) parts.push_back(checks::semimeasure(f, kFactsHorizon, kSemimeasureMaxLength));
        report(4, merge("semimeasure", parts));
    }
    {
        std::vector<CheckResult> parts;
        for (const FastFacts& f : facts12) parts.push_back(checks::kraft(f, kFactsHorizon));
        report(5, merge("kraft", parts));
    }
    {
        std::vector<CheckResult> parts;
        for (const FastFacts& f : facts12) parts.push_back(checks::tail_bound(f, kFactsHorizon));
        report(6, merge("tail_bound", parts));
    }
    report(7, checks::guess_statistics(kGuessMaxI, kGuessSamples, kGuessSeed, Discipline::Monotone, w, kGuessMaxLength,
                                       kGuessZThreshold));
    report(8, checks::alphabet(kAlphabetMaxN));
    {
        std::vector<CheckResult> parts;
        for (const FastFacts& f : facts12) parts.push_back(checks::coverage(f, kCoverageMaxK, SIZE_MAX));
        report(9, merge("coverage", parts));
    }
    {
        const FastFacts f = fast_run(kPredictionHorizon, Discipline::Monotone, w);
        report(10, checks::periodic_prediction(f, kPredictionHorizon, {3, 4, 5, 6}, kPredictionOracleLength,
                                               kPredictionOracleBudget));
    }
    report(11, determinism());
    {
        const FastFacts m = fast_run(kHierarchyHorizon, Discipline::Monotone, w);
        const FastFacts e = fast_run(kHierarchyHorizon, Discipline::EnumerableOutput, w);
        const FastFacts g = fast_run(kHierarchyHorizon, Discipline::General, w);
        report(12, checks::hierarchy(m, e, g, kHierarchyHorizon));
    }

    std::printf("%d of %zu criteria passed\n", static_cast<int>(titles.size()) - failures, titles.size());
    return failures == 0 ? 0 : 1;
}
