// Brute-force reference computations.
//
// Everything here re-executes programs from scratch with run_state() and
// never touches PrefixTree or FastFacts, so tests and `verify` can compare
// the fast paths against it. Only usable at small horizons.

#ifndef SPEEDPRIOR_ORACLES_HPP
#define SPEEDPRIOR_ORACLES_HPP

#include <cstdint>
#include <map>
#include <optional>

#include "speedprior/bitstring.hpp"
#include "speedprior/dovetail.hpp"
#include "speedprior/dyadic.hpp"
#include "speedprior/machine.hpp"

namespace speedprior::oracle {

// Phase i of FAST by literal per-prefix execution.
PhaseRecord naive_phase(int phase, Discipline d);

// S_lb(x) for every x with 1 <= l(x) <= max_length, summed over phases
// 1..horizon with prefix-minimal producers. Lambda is left out (anchor).
std::map<Bitstring, Dyadic> speed_prior_table(int horizon, Discipline d, std::size_t max_length);

// For every x, the least l(p) + ceil(log2 t) over p with l(p) <= k run for
// 2^(k-l(p)) steps, where the output at the end of that run starts with x
// and has done so since step t.
std::map<Bitstring, int> phase_kt_table(int k, Discipline d, std::size_t max_length);

struct KtWitness {
    int kt = 0;
    Bitstring program;
    std::uint64_t t = 0;
};
// Kt by exhaustive search: every program with l(p) <= max_program_length is
// run for `budget` steps; x is credited at the first step its output starts
// with x. Only meaningful for Monotone, where such prefixes are permanent.
std::map<Bitstring, KtWitness> exhaustive_kt(std::size_t max_program_length, std::uint64_t budget, Discipline d,
                                             std::size_t max_output_length);

// Sum of 2^-l(p) over programs p, l(p) <= max_length, that halt within
// `budget` steps after consuming exactly p and leave output exactly x.
std::map<Bitstring, Dyadic> halting_table(std::size_t max_length, std::uint64_t budget, Discipline d);

// 1-based ALPHABET position of the first listed string starting with 1^n,
// found by walking the listing with a binary counter.
std::uint64_t alphabet_first_with_ones(std::size_t n);

}  // namespace speedprior::oracle

#endif  // SPEEDPRIOR_ORACLES_HPP
