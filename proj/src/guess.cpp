#include "speedprior/guess.hpp"

#include <cmath>
#include <limits>
#include <thread>
#include <vector>

namespace speedprior {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

CoinStream::CoinStream(std::uint64_t master_seed, std::uint64_t sample_index)
    : stream_(splitmix64(master_seed ^ splitmix64(sample_index))) {}

bool CoinStream::flip() {
    if (left_ == 0) {
        word_ = splitmix64(stream_ + (++counter_) * kGolden);
        left_ = 64;
    }
    --left_;
    return (word_ >> left_) & 1u;
}

GuessRun::GuessRun(Discipline d, int phase) : m_(d), phase_(phase), t_(std::uint64_t{1} << phase) {}

bool GuessRun::advance() {
    while (!done_) {
        // The budget check comes before each step; t = 0 ends the run at once.
        if (t_ == 0 || m_.steps() >= t_) {
            done_ = true;
            break;
        }
        const Status st = m_.step();
        if (st == Status::AwaitingBit) return false;
        if (is_terminal(st)) done_ = true;
    }
    return true;
}

void GuessRun::supply(bool bit) {
    m_.feed(bit);
    t_ /= 2;
}

Status GuessRun::status() const { return is_terminal(m_.status()) ? m_.status() : Status::BudgetExhausted; }

GuessSample guess_sample(std::uint64_t seed, std::uint64_t index, Discipline d, int max_i) {
    CoinStream coins(seed, index);
    GuessSample s;
    s.phase_i = 1;
    while (!coins.flip()) {
        ++s.phase_i;
        if (s.phase_i > max_i) {
            s.truncated = true;
            return s;
        }
    }
    if (s.phase_i > max_i) {
        s.truncated = true;
        return s;
    }
    GuessRun run(d, s.phase_i);
    while (!run.advance()) run.supply(coins.flip());
    s.program_bits = run.machine().consumed();
    s.output = run.machine().output();
    s.steps = run.machine().steps();
    s.status = run.status();
    return s;
}

Dyadic GuessOracle::mass(const Bitstring& x) const {
    Dyadic m;
    for (auto it = final_outputs.lower_bound(x); it != final_outputs.end() && it->first.starts_with(x); ++it) {
        m += it->second;
    }
    return m;
}

namespace {

void explore(GuessRun run, std::uint32_t depth, GuessOracle& out) {
    if (run.advance()) {
        out.final_outputs[run.machine().output()] += Dyadic::pow2_neg(depth);
        return;
    }
    GuessRun other = run;
    run.supply(false);
    explore(std::move(run), depth + 1, out);
    other.supply(true);
    explore(std::move(other), depth + 1, out);
}

}  // namespace

GuessOracle guess_oracle(int max_i, Discipline d) {
    GuessOracle o;
    o.max_i = max_i;
    for (int i = 1; i <= max_i; ++i) explore(GuessRun(d, i), static_cast<std::uint32_t>(i), o);
    o.remainder = Dyadic::pow2_neg(static_cast<std::uint32_t>(max_i));
    return o;
}

std::uint64_t GuessTally::hits(const Bitstring& x) const {
    std::uint64_t h = x.empty() ? truncated : 0;
    for (auto it = outputs.lower_bound(x); it != outputs.end() && it->first.starts_with(x); ++it) h += it->second;
    return h;
}

GuessTally guess_tally(std::uint64_t n_samples, std::uint64_t seed, Discipline d, int max_i, unsigned workers) {
    workers = std::max(1u, workers);
    std::vector<GuessTally> parts(workers);
    auto work = [&](unsigned w) {
        const std::uint64_t lo = n_samples * w / workers, hi = n_samples * (w + 1) / workers;
        GuessTally& t = parts[w];
        for (std::uint64_t k = lo; k < hi; ++k) {
            const GuessSample s = guess_sample(seed, k, d, max_i);
            ++t.samples;
            if (s.truncated) {
                ++t.truncated;
            } else {
                ++t.outputs[s.output];
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    GuessTally total;
    for (const GuessTally& p : parts) {
        total.samples += p.samples;
        total.truncated += p.truncated;
        for (const auto& [x, c] : p.outputs) total.outputs[x] += c;
    }
    return total;
}

GuessReport guess_compare_against(const Bitstring& x, const GuessTally& tally, const Dyadic& exact) {
    GuessReport r;
    r.x = x;
    r.samples = tally.samples;
    r.hits = tally.hits(x);
    r.exact = exact;
    r.empirical = tally.samples ? static_cast<double>(r.hits) / static_cast<double>(tally.samples) : 0.0;
    const double p = exact.to_double();
    if (p <= 0.0 || p >= 1.0) {
        r.z = r.empirical == p ? 0.0 : std::numeric_limits<double>::infinity();
        r.horizon_mismatch = p <= 0.0 && r.hits > 0;
    } else {
        r.z = (r.empirical - p) / std::sqrt(p * (1.0 - p) / static_cast<double>(tally.samples));
    }
    return r;
}

GuessReport guess_compare(const Bitstring& x, const GuessTally& tally, std::uint64_t seed, const GuessOracle& oracle) {
    Dyadic exact = oracle.mass(x);
    if (x.empty()) exact += oracle.remainder;
    GuessReport r = guess_compare_against(x, tally, exact);
    r.seed = seed;
    r.max_i = oracle.max_i;
    return r;
}

GuessReport guess_compare(const Bitstring& x, std::uint64_t n_samples, std::uint64_t seed, const GuessOracle& oracle,
                          Discipline d, unsigned workers) {
    if (n_samples == 0) throw std::invalid_argument("guess_compare: n_samples must be >= 1");
    return guess_compare(x, guess_tally(n_samples, seed, d, oracle.max_i, workers), seed, oracle);
}

}  // namespace speedprior
