// Prediction with the speed prior: S(xy | x) = S(xy) / S(x), both lower
// bounds taken at the same horizon, compared exactly.

#ifndef SPEEDPRIOR_PREDICT_HPP
#define SPEEDPRIOR_PREDICT_HPP

#include <optional>
#include <string>
#include <vector>

#include "speedprior/bitstring.hpp"
#include "speedprior/dovetail.hpp"
#include "speedprior/dyadic.hpp"
#include "speedprior/measures.hpp"

namespace speedprior {

// Throws NotYetEnumerated when S_lb(x) = 0 at the horizon.
Rational conditional(const Bitstring& x, const Bitstring& y, const FastFacts& facts, int horizon);

struct NextBit {
    Bitstring x;
    int horizon = 0;
    bool bit = false;  // ties go to 0
    Rational cond0, cond1;
    std::size_t witnesses = 0;        // witnesses of x0 and x1 within the horizon
    std::optional<Rational> mass_gap;  // larger / smaller; absent when the smaller is 0
};

// Refuses (NotYetEnumerated) when S_lb(x) = 0 or both continuations have
// zero mass.
NextBit next_bit(const Bitstring& x, const FastFacts& facts, int horizon);

struct Candidate {
    Bitstring y;
    Rational cond;
    int kt = 0;  // kt_ub(xy)
};

struct Prediction {
    Bitstring observed;
    int horizon = 0;
    std::vector<Candidate> candidates;  // by conditional, then kt, then y
    std::optional<std::size_t> chosen;  // index 0 when nonempty

    // Top candidate vs the best runner-up; absent with fewer than two
    // candidates or a zero runner-up.
    std::optional<Rational> top_gap;
    // kt of the top candidate is within +1 of the least kt among candidates.
    bool top_kt_within_one = true;
};

Prediction rank_continuations(const Bitstring& x, std::size_t k, const FastFacts& facts, int horizon);

struct SweepStep {
    int horizon = 0;
    std::optional<NextBit> prediction;
    std::string refusal;  // set when prediction is absent
    bool flipped = false;
    // Witnesses of x0 / x1 that arrived since the previous horizon; listed
    // whenever the predicted bit changed.
    std::vector<std::pair<Bitstring, Witness>> witness_delta;
};

// next_bit at each horizon in increasing order.
std::vector<SweepStep> prediction_sweep(const Bitstring& x, const FastFacts& facts, const std::vector<int>& horizons);

}  // namespace speedprior

#endif  // SPEEDPRIOR_PREDICT_HPP
