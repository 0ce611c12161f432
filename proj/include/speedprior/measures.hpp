// Budgeted estimators over FAST results: lower bounds on the speed prior S
// and the discrete semimeasure m, upper bounds on Kt and on the monotone,
// enumerable-output and general complexities, plus property checkers.
//
// All masses are exact dyadics. Every figure is only valid at the horizon it
// was computed for.

#ifndef SPEEDPRIOR_MEASURES_HPP
#define SPEEDPRIOR_MEASURES_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "speedprior/bitstring.hpp"
#include "speedprior/dovetail.hpp"
#include "speedprior/dyadic.hpp"

namespace speedprior {

// x has no witness at the requested horizon. Not a statement about x's
// complexity, only about how far the enumeration got.
class NotYetEnumerated : public std::runtime_error {
public:
    explicit NotYetEnumerated(const Bitstring& x, int horizon);
    const Bitstring& x() const { return x_; }
    int horizon() const { return horizon_; }

private:
    Bitstring x_;
    int horizon_;
};

class HorizonError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

int ceil_log2(std::uint64_t t);  // ceil_log2(1) == 0

// ---------------------------------------------------------------------------
// Speed prior

// S_lb(x) = sum_{i<=horizon} 2^-i sum over minimal p producing x in phase i
// of 2^-l(p); S_i(lambda) = 1.
Dyadic speed_prior_lb(const Bitstring& x, const FastFacts& facts, int horizon);

enum class MeasureKind { SpeedPrior, DiscreteM };

struct MeasureTable {
    struct Row {
        Dyadic mass;
        std::vector<Witness> witnesses;  // for DiscreteM: phase 0, t = halting step
    };
    MeasureKind kind = MeasureKind::SpeedPrior;
    int horizon = 0;
    std::map<Bitstring, Row> rows;

    // Zero for absent x.
    Dyadic mass(const Bitstring& x) const;
};

// Every x with l(x) <= max_length enumerated by `horizon`.
MeasureTable speed_prior_table(const FastFacts& facts, int horizon, std::size_t max_length);

// ---------------------------------------------------------------------------
// Discrete semimeasure m

struct HaltingBudget {
    std::size_t max_program_length = 12;
    std::uint64_t steps = 1024;
};

// Programs with l(p) <= max_program_length that halt within `steps` after
// consuming exactly p, grouped by their final output.
MeasureTable halting_table(Discipline d, const HaltingBudget& budget, unsigned workers = 1);

Dyadic m_lb(const Bitstring& x, const MeasureTable& halting);
Dyadic m_lb(const Bitstring& x, Discipline d, const HaltingBudget& budget);

// ---------------------------------------------------------------------------
// Kt and the complexity hierarchy

struct KtEstimate {
    Bitstring x;
    int kt_ub = 0;
    Prefix program;
    std::uint64_t t = 1;
    int first_phase = 0;
};

// Throws NotYetEnumerated when x has no witness within `horizon`.
KtEstimate kt_ub(const Bitstring& x, const FastFacts& facts, int horizon);
KtEstimate kt_ub(const Bitstring& x, const FastFacts& facts);

struct ComplexityReport {
    Bitstring x;
    int horizon = 0;
    std::optional<int> k_halt_ub, km_mtm_ub, k_eom_ub, k_gtm_ub;
    bool gtm_unconverged = false;  // every shortest GTM witness changed in its last quarter
};

// Any of the three facts pointers may be null (bound then absent).
ComplexityReport complexity_report(const Bitstring& x, const FastFacts* mtm, const FastFacts* eom,
                                   const FastFacts* gtm, const MeasureTable* halting, int horizon);

// ---------------------------------------------------------------------------
// Property checks

struct SemimeasureViolation {
    Bitstring x;
    Dyadic mass_x, mass_x0, mass_x1;
};

struct SemimeasureReport {
    bool ok = true;
    bool root_ok = true;  // mass(lambda) <= 1
    std::vector<SemimeasureViolation> violations;
    std::map<Bitstring, Dyadic> residuals;  // mass(x) - mass(x0) - mass(x1) where nonnegative
};

// Checks mass(x0) + mass(x1) <= mass(x) for every l(x) < n and mass(lambda) <= 1.
SemimeasureReport check_semimeasure(const MeasureTable& table, std::size_t n);

class KraftError : public std::invalid_argument {
public:
    KraftError(const Bitstring& shorter, const Bitstring& longer);
    Bitstring shorter, longer;
};

// Sum of 2^-l(p) over a prefix antichain. Throws KraftError otherwise.
Dyadic kraft_check(std::vector<Bitstring> programs);

struct KraftReport {
    bool ok = true;
    std::size_t checked = 0;  // (x, phase) groups
    Dyadic worst;             // largest sum seen
    std::vector<std::string> problems;
};

// Per-phase witness sets of every x are antichains with Kraft sum <= 1.
KraftReport kraft_check_facts(const FastFacts& facts, int horizon);

struct TailBoundRow {
    Bitstring x;
    int first_phase = 0;
    Dyadic mass;
    bool within_bound = true;       // mass <= 2^(1 - first_phase), asserted
    int kt = 0;
    bool within_kt_bound = true;    // mass <= 2^-kt, reported only
};

std::vector<TailBoundRow> tail_bound_check(const FastFacts& facts, int horizon, std::size_t max_length = SIZE_MAX);

struct CoverageViolation {
    Bitstring x;
    int kt = 0;
    int first_phase = 0;  // 0: absent
};

// Every x of length <= max_length with some p, l(p) <= k, whose run of
// 2^(k-l(p)) steps ends with output stably starting with x since step t and
// l(p) + ceil(log2 t) <= k must be present in `facts` by phase k. The
// reference runs are literal (oracle), not the tree.
std::vector<CoverageViolation> coverage_check(const FastFacts& facts, int k, std::size_t max_length = SIZE_MAX);

// ---------------------------------------------------------------------------
// Fast-program dominance experiment

struct QRatioRow {
    std::size_t n = 0;
    std::uint64_t f = 0, g = 0;
    Dyadic slow_mass, fast_mass;  // witnesses with t >= g, with t <= f
    std::optional<Rational> q;    // absent when fast_mass is 0
    bool truncated = false;       // x_n not enumerated at the horizon
};

struct QRatioReport {
    std::vector<QRatioRow> rows;
    std::size_t tail_window = 0;
    bool tail_nonincreasing = true;
};

// x_n = 1^n with f(n) = c*n and g(n) = n^2. Q_n is the mass of witnesses
// needing >= g(n) steps over the mass of those needing <= f(n) steps.
QRatioReport q_ratio_experiment(const FastFacts& facts, int horizon, const std::vector<std::size_t>& ns,
                                std::uint64_t c, std::size_t tail_window = 4);

}  // namespace speedprior

#endif  // SPEEDPRIOR_MEASURES_HPP
