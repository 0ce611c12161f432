#include "speedprior/oracles.hpp"

#include <algorithm>
#include <vector>

namespace speedprior::oracle {

namespace {

// All programs with l(p) <= max_length, shortest first, then lexicographic.
// Index of p is 2^l(p) - 1 + (p read as binary), so the parent of index k
// is (k - 1) / 2.
std::vector<Bitstring> all_programs(std::size_t max_length) {
    std::vector<Bitstring> out;
    out.reserve((std::size_t{2} << max_length) - 1);
    out.emplace_back();
    for (std::size_t k = 0; out.size() < (std::size_t{2} << max_length) - 1; ++k) {
        for (bool b : {false, true}) {
            Bitstring c = out[k];
            c.push_back(b);
            out.push_back(std::move(c));
        }
    }
    return out;
}

int log2_ceil(std::uint64_t t) {
    int k = 0;
    while ((std::uint64_t{1} << k) < t) ++k;
    return k;
}

std::vector<std::uint64_t> stability(const MachineState& m) {
    std::vector<std::uint64_t> s;
    std::uint64_t hi = 0;
    for (std::uint64_t w : m.written_at()) {
        hi = std::max(hi, w);
        s.push_back(hi);
    }
    return s;
}

Status outcome_status(const MachineState& m) {
    return m.status() == Status::Running ? Status::BudgetExhausted : m.status();
}

}  // namespace

PhaseRecord naive_phase(int phase, Discipline d) {
    PhaseRecord r;
    r.phase = phase;
    for (const Bitstring& p : all_programs(static_cast<std::size_t>(phase))) {
        const MachineState m = run_state(p, d, std::uint64_t{1} << (phase - static_cast<int>(p.size())));
        r.entries.push_back({Prefix::from_bitstring(p), m.steps(), outcome_status(m), m.output(), stability(m)});
    }
    std::sort(r.entries.begin(), r.entries.end(), [](const Entry& a, const Entry& b) { return a.program < b.program; });
    return r;
}

std::map<Bitstring, Dyadic> speed_prior_table(int horizon, Discipline d, std::size_t max_length) {
    std::map<Bitstring, Dyadic> mass;
    for (int i = 1; i <= horizon; ++i) {
        const std::vector<Bitstring> progs = all_programs(static_cast<std::size_t>(i));
        std::vector<Bitstring> outs;
        outs.reserve(progs.size());
        for (const Bitstring& p : progs) outs.push_back(run(p, d, std::uint64_t{1} << (i - static_cast<int>(p.size()))).output);

        for (std::size_t k = 0; k < progs.size(); ++k) {
            const Bitstring& o = outs[k];
            for (std::size_t len = 1; len <= std::min(o.size(), max_length); ++len) {
                const Bitstring x = o.prefix(len);
                bool minimal = true;
                for (std::size_t a = k; a > 0 && minimal;) {
                    a = (a - 1) / 2;
                    if (outs[a].starts_with(x)) minimal = false;
                }
                if (minimal) mass[x] += Dyadic::pow2_neg(static_cast<std::uint32_t>(i + progs[k].size()));
            }
        }
    }
    return mass;
}

std::map<Bitstring, int> phase_kt_table(int k, Discipline d, std::size_t max_length) {
    std::map<Bitstring, int> best;
    for (const Bitstring& p : all_programs(static_cast<std::size_t>(k))) {
        const MachineState m = run_state(p, d, std::uint64_t{1} << (k - static_cast<int>(p.size())));
        const std::vector<std::uint64_t> st = stability(m);
        for (std::size_t len = 1; len <= std::min(m.output().size(), max_length); ++len) {
            const int kt = static_cast<int>(p.size()) + log2_ceil(st[len - 1]);
            auto [it, fresh] = best.emplace(m.output().prefix(len), kt);
            if (!fresh) it->second = std::min(it->second, kt);
        }
    }
    return best;
}

std::map<Bitstring, KtWitness> exhaustive_kt(std::size_t max_program_length, std::uint64_t budget, Discipline d,
                                             std::size_t max_output_length) {
    std::map<Bitstring, KtWitness> best;
    for (const Bitstring& p : all_programs(max_program_length)) {
        std::size_t credited = 0;
        for (const auto& [t, out] : output_trace(p, d, budget)) {
            for (std::size_t len = credited + 1; len <= std::min(out.size(), max_output_length); ++len) {
                const KtWitness w{static_cast<int>(p.size()) + log2_ceil(t), p, t};
                auto [it, fresh] = best.emplace(out.prefix(len), w);
                if (!fresh && (w.kt < it->second.kt ||
                               (w.kt == it->second.kt && (p.size() < it->second.program.size() ||
                                                          (p.size() == it->second.program.size() && p < it->second.program))))) {
                    it->second = w;
                }
            }
            credited = std::max(credited, std::min(out.size(), max_output_length));
        }
    }
    return best;
}

std::map<Bitstring, Dyadic> halting_table(std::size_t max_length, std::uint64_t budget, Discipline d) {
    std::map<Bitstring, Dyadic> mass;
    for (const Bitstring& p : all_programs(max_length)) {
        const RunOutcome r = run(p, d, budget);
        if (r.status == Status::Halted && r.consumed == p.size()) {
            mass[r.output] += Dyadic::pow2_neg(static_cast<std::uint32_t>(p.size()));
        }
    }
    return mass;
}

std::uint64_t alphabet_first_with_ones(std::size_t n) {
    // The listing is lambda followed by, for each length, a binary counter
    // running from 0...0 to 1...1.
    std::uint64_t position = 1;
    if (n == 0) return position;
    for (std::size_t len = 1;; ++len) {
        std::vector<bool> digits(len, false);
        for (;;) {
            ++position;
            bool ones = len >= n;
            for (std::size_t k = 0; k < n && ones; ++k) ones = digits[k];
            if (ones) return position;
            std::size_t k = len;
            while (k > 0 && digits[k - 1]) digits[--k] = false;
            if (k == 0) break;
            digits[k - 1] = true;
        }
    }
}

}  // namespace speedprior::oracle
