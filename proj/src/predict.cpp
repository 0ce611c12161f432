#include "speedprior/predict.hpp"

#include <algorithm>

namespace speedprior {

namespace {

Dyadic checked_denominator(const Bitstring& x, const FastFacts& facts, int horizon) {
    Dyadic sx = speed_prior_lb(x, facts, horizon);
    if (sx == Dyadic::zero()) throw NotYetEnumerated(x, horizon);
    return sx;
}

std::size_t witness_count(const Bitstring& x, const FastFacts& facts, int horizon) {
    const FastFacts::XFacts* f = facts.find(x);
    if (!f) return 0;
    return static_cast<std::size_t>(std::count_if(f->witnesses.begin(), f->witnesses.end(),
                                                  [&](const Witness& w) { return w.phase <= horizon; }));
}

Bitstring with_bit(Bitstring x, bool b) {
    x.push_back(b);
    return x;
}

}  // namespace

Rational conditional(const Bitstring& x, const Bitstring& y, const FastFacts& facts, int horizon) {
    const Dyadic sx = checked_denominator(x, facts, horizon);
    return Rational::ratio(speed_prior_lb(x + y, facts, horizon), sx);
}

NextBit next_bit(const Bitstring& x, const FastFacts& facts, int horizon) {
    const Dyadic sx = checked_denominator(x, facts, horizon);
    NextBit r;
    r.x = x;
    r.horizon = horizon;
    const Bitstring x0 = with_bit(x, false), x1 = with_bit(x, true);
    r.cond0 = Rational::ratio(speed_prior_lb(x0, facts, horizon), sx);
    r.cond1 = Rational::ratio(speed_prior_lb(x1, facts, horizon), sx);
    if (r.cond0 == Rational() && r.cond1 == Rational()) throw NotYetEnumerated(x0, horizon);
    r.bit = r.cond1 > r.cond0;
    r.witnesses = witness_count(x0, facts, horizon) + witness_count(x1, facts, horizon);
    const Rational& hi = r.bit ? r.cond1 : r.cond0;
    const Rational& lo = r.bit ? r.cond0 : r.cond1;
    if (lo != Rational()) r.mass_gap = Rational::ratio_of(hi, lo);
    return r;
}

Prediction rank_continuations(const Bitstring& x, std::size_t k, const FastFacts& facts, int horizon) {
    const Dyadic sx = checked_denominator(x, facts, horizon);
    Prediction p;
    p.observed = x;
    p.horizon = horizon;
    for (const Bitstring& y : facts.extensions(x, k)) {
        const Dyadic m = speed_prior_lb(x + y, facts, horizon);
        if (m == Dyadic::zero()) continue;
        p.candidates.push_back({y, Rational::ratio(m, sx), kt_ub(x + y, facts, horizon).kt_ub});
    }
    std::sort(p.candidates.begin(), p.candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.cond != b.cond) return a.cond > b.cond;
        if (a.kt != b.kt) return a.kt < b.kt;
        return a.y < b.y;
    });
    if (p.candidates.empty()) return p;
    p.chosen = 0;
    if (p.candidates.size() > 1 && p.candidates[1].cond != Rational()) {
        p.top_gap = Rational::ratio_of(p.candidates[0].cond, p.candidates[1].cond);
    }
    int least = p.candidates[0].kt;
    for (const Candidate& c : p.candidates) least = std::min(least, c.kt);
    p.top_kt_within_one = p.candidates[0].kt <= least + 1;
    return p;
}

std::vector<SweepStep> prediction_sweep(const Bitstring& x, const FastFacts& facts, const std::vector<int>& horizons) {
    std::vector<SweepStep> steps;
    std::optional<bool> last_bit;
    int last_horizon = 0;
    for (int h : horizons) {
        SweepStep s;
        s.horizon = h;
        try {
            s.prediction = next_bit(x, facts, h);
        } catch (const NotYetEnumerated& e) {
            s.refusal = e.what();
        }
        if (s.prediction) {
            s.flipped = last_bit && *last_bit != s.prediction->bit;
            if (s.flipped) {
                for (bool b : {false, true}) {
                    const Bitstring xb = with_bit(x, b);
                    if (const FastFacts::XFacts* f = facts.find(xb)) {
                        for (const Witness& w : f->witnesses) {
                            if (w.phase > last_horizon && w.phase <= h) s.witness_delta.emplace_back(xb, w);
                        }
                    }
                }
            }
            last_bit = s.prediction->bit;
            last_horizon = h;
        }
        steps.push_back(std::move(s));
    }
    return steps;
}

}  // namespace speedprior
