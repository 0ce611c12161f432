// GUESS: draw a phase i by tossing a fair coin until heads, set t = 2^i,
// then run the machine, drawing each demanded program bit by coin and
// halving t each time; stop once t steps have been executed.
//
// One stepper (GuessRun) holds the decision logic. The sampler feeds it
// pseudo-random coins, the oracle feeds it both values and weighs the
// branches exactly.

#ifndef SPEEDPRIOR_GUESS_HPP
#define SPEEDPRIOR_GUESS_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "speedprior/bitstring.hpp"
#include "speedprior/dyadic.hpp"
#include "speedprior/machine.hpp"

namespace speedprior {

inline constexpr const char* kRngId = "splitmix64-ctr-v1";

// Counter-based coin source: word k of stream s is splitmix64 applied to
// s + (k+1)*golden; bits are consumed MSB first.
class CoinStream {
public:
    CoinStream(std::uint64_t master_seed, std::uint64_t sample_index);
    bool flip();

private:
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::uint64_t word_ = 0;
    int left_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

class GuessRun {
public:
    GuessRun(Discipline d, int phase);

    // Runs until the machine demands a program bit (returns false) or the
    // run is over (returns true).
    bool advance();
    void supply(bool bit);  // answers a demand: feeds the bit, t := t / 2

    int phase() const { return phase_; }
    std::uint64_t t() const { return t_; }
    const MachineState& machine() const { return m_; }
    Status status() const;  // final status once advance() returned true

private:
    MachineState m_;
    int phase_;
    std::uint64_t t_;
    bool done_ = false;
};

struct GuessSample {
    int phase_i = 0;
    Bitstring program_bits;
    Bitstring output;
    std::uint64_t steps = 0;
    Status status = Status::BudgetExhausted;
    bool truncated = false;  // phase_i > max_i: not executed, output left empty

    friend bool operator==(const GuessSample&, const GuessSample&) = default;
};

// Sample `index` of the stream for `seed`. Phases beyond max_i are reported
// as truncated instead of run (their expected cost is unbounded).
GuessSample guess_sample(std::uint64_t seed, std::uint64_t index, Discipline d, int max_i);

struct GuessOracle {
    int max_i = 0;
    std::map<Bitstring, Dyadic> final_outputs;  // probability of each complete output
    Dyadic remainder;                           // 2^-max_i: phases beyond max_i

    // Probability that the final output starts with x (truncated runs excluded).
    Dyadic mass(const Bitstring& x) const;
};

GuessOracle guess_oracle(int max_i, Discipline d);

struct GuessReport {
    Bitstring x;
    std::uint64_t samples = 0, hits = 0;
    double empirical = 0;
    Dyadic exact;
    double z = 0;
    bool horizon_mismatch = false;  // hits with zero exact mass
    std::uint64_t seed = 0;
    int max_i = 0;

    bool pass(double threshold) const { return !horizon_mismatch && std::abs(z) <= threshold; }
};

// Counts samples whose output starts with x, with truncated samples
// counted for lambda only; the exact side adds the oracle remainder to
// lambda to match.
GuessReport guess_compare(const Bitstring& x, std::uint64_t n_samples, std::uint64_t seed, const GuessOracle& oracle,
                          Discipline d, unsigned workers = 1);

// Outputs of every sample for a seed, tallied once so that many x can be
// compared without resampling.
struct GuessTally {
    std::uint64_t samples = 0, truncated = 0;
    std::map<Bitstring, std::uint64_t> outputs;  // non-truncated final outputs

    std::uint64_t hits(const Bitstring& x) const;
};

GuessTally guess_tally(std::uint64_t n_samples, std::uint64_t seed, Discipline d, int max_i, unsigned workers = 1);
GuessReport guess_compare(const Bitstring& x, const GuessTally& tally, std::uint64_t seed, const GuessOracle& oracle);
// Same statistic against an arbitrary exact value (negative controls).
GuessReport guess_compare_against(const Bitstring& x, const GuessTally& tally, const Dyadic& exact);

}  // namespace speedprior

#endif  // SPEEDPRIOR_GUESS_HPP
