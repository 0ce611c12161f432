// Enumeration schedulers: ALPHABET, SIMPLE and FAST.
//
// FAST phase i runs every program prefix p with l(p) <= i for 2^(i-l(p))
// instructions. PrefixTree shares the work: the run of a prefix q and of any
// extension of q coincide until q demands bit l(q)+1, so each tree node only
// executes the segment between its parent's bit demand and its own. Nodes
// keep their machine state between phases and resume where they stopped.

#ifndef SPEEDPRIOR_DOVETAIL_HPP
#define SPEEDPRIOR_DOVETAIL_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "speedprior/bitstring.hpp"
#include "speedprior/dyadic.hpp"
#include "speedprior/machine.hpp"

namespace speedprior {

// The phase index is bounded so that budgets, program prefixes and step
// counts fit comfortably in 64 bits.
inline constexpr int kMaxPhase = 40;

// ---------------------------------------------------------------------------
// ALPHABET and SIMPLE

// n-th string (n >= 1) in length-then-lexicographic order: lambda, 0, 1, 00, ...
Bitstring alphabet_nth(std::uint64_t n);
// Inverse of alphabet_nth: 2^l(x) + (x read as binary). Requires l(x) < 64.
std::uint64_t alphabet_index(const Bitstring& x);

// Program index that SIMPLE serves at `step` (>= 1): p^1 every second step,
// p^2 every second of the remaining steps, ... (the ruler sequence).
std::uint64_t simple_schedule(std::uint64_t step);
// Global SIMPLE step at which program p^k executes its m-th instruction.
BigInt simple_step_of(std::uint64_t k, std::uint64_t m);

// ---------------------------------------------------------------------------
// Program prefixes and phase records

// A program prefix of at most 64 bits, packed right-aligned.
struct Prefix {
    std::uint64_t bits = 0;
    std::uint32_t length = 0;

    static Prefix from_bitstring(const Bitstring& b);
    Bitstring to_bitstring() const { return Bitstring::from_uint(bits, length); }
    Prefix child(bool bit) const { return {(bits << 1) | (bit ? 1u : 0u), length + 1}; }
    bool is_prefix_of(const Prefix& other) const {
        return length <= other.length && (length == 0 || (other.bits >> (other.length - length)) == bits);
    }
    std::string to_string() const { return to_bitstring().to_string(); }

    friend bool operator==(const Prefix&, const Prefix&) = default;
    // Lexicographic with a proper prefix first.
    friend std::strong_ordering operator<=>(const Prefix& a, const Prefix& b);
};

// Output at some step of a run together with, for each k, the step since
// which the first k+1 output bits have been unchanged.
struct Snapshot {
    std::uint64_t step = 0;
    Bitstring output;
    std::vector<std::uint64_t> stable;

    static Snapshot capture(const MachineState& m);
    friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct Entry {
    Prefix program;
    std::uint64_t steps = 0;  // cumulative instructions executed for this prefix
    Status status = Status::Running;
    Bitstring output;
    std::vector<std::uint64_t> stable;

    friend bool operator==(const Entry&, const Entry&) = default;
};

// Non-owning view handed out while walking a tree.
struct EntryView {
    Prefix program;
    std::uint64_t steps = 0;
    Status status = Status::Running;
    std::uint64_t budget = 0;
    const Bitstring* output = nullptr;
    const std::vector<std::uint64_t>* stable = nullptr;

    Entry materialize() const { return {program, steps, status, *output, *stable}; }
};

inline EntryView view_of(const Entry& e, std::uint64_t budget) {
    return {e.program, e.steps, e.status, budget, &e.output, &e.stable};
}

struct PhaseRecord {
    int phase = 0;
    std::vector<Entry> entries;  // every prefix with l(p) <= phase, lexicographic order

    std::uint64_t digest() const;
    friend bool operator==(const PhaseRecord&, const PhaseRecord&) = default;
};

// Budget granted to a prefix of length l(p) in phase i.
inline std::uint64_t phase_budget(int phase, std::size_t length) {
    return std::uint64_t{1} << (phase - static_cast<int>(length));
}

// ---------------------------------------------------------------------------
// Shared-prefix execution tree

using EntryVisitor = std::function<void(const EntryView&)>;
using BudgetFn = std::function<std::uint64_t(std::size_t depth)>;

class PrefixTree {
public:
    // Snapshots are kept at every power-of-two step and at `extra_watch` steps.
    explicit PrefixTree(Discipline discipline, unsigned workers = 1, std::vector<std::uint64_t> extra_watch = {});
    ~PrefixTree();
    PrefixTree(PrefixTree&&) noexcept;
    PrefixTree& operator=(PrefixTree&&) noexcept;

    Discipline discipline() const { return discipline_; }

    // Runs every prefix of length <= max_depth up to budget(length) steps.
    // `budget` must be nonincreasing in depth and every value watched.
    void grow(const BudgetFn& budget, std::size_t max_depth);

    // Preorder walk over all prefixes of length <= max_depth using the same
    // budget function as a completed grow().
    void walk(const BudgetFn& budget, std::size_t max_depth, const EntryVisitor& visit) const;

    // Instructions executed by the tree so far (shared work, not per-prefix).
    std::uint64_t executed_steps() const;
    std::size_t node_count() const;

    struct Node;

private:
    Discipline discipline_;
    unsigned workers_;
    std::vector<std::uint64_t> extra_watch_;
    std::unique_ptr<Node> root_;
};

// FAST over one discipline, phase by phase.
class FastEngine {
public:
    explicit FastEngine(Discipline discipline, unsigned workers = 1);

    Discipline discipline() const { return tree_.discipline(); }
    int phases_complete() const { return phases_complete_; }

    // Runs phases up to and including `phase`.
    void advance_to(int phase);
    // Walks a completed phase in lexicographic prefix order.
    void for_each_entry(int phase, const EntryVisitor& visit) const;
    PhaseRecord record(int phase) const;

    std::uint64_t executed_steps() const { return tree_.executed_steps(); }

private:
    PrefixTree tree_;
    int phases_complete_ = 0;
};

struct PhaseStats {
    int phase = 0;
    std::uint64_t entries = 0;
    std::uint64_t literal_steps = 0;  // sum of per-prefix instruction counts
    std::uint64_t halted = 0, aborted = 0, awaiting = 0, exhausted = 0;
    std::uint64_t digest = 0;

    void add(const EntryView& e);
};

std::uint64_t entry_digest_step(std::uint64_t h, const EntryView& e);

// ---------------------------------------------------------------------------
// FastFacts: every output prefix x seen so far, with its minimal witnesses.

struct Witness {
    int phase = 0;
    Prefix program;
    std::uint64_t t = 0;  // step from which the run's output stably starts with x

    friend bool operator==(const Witness&, const Witness&) = default;
};

class FastFacts {
public:
    explicit FastFacts(Discipline discipline);

    // Adds one phase; entries must arrive in lexicographic prefix order and
    // phases in increasing order.
    class PhaseBuilder;
    PhaseBuilder begin_phase(int phase);

    static FastFacts from_engine(const FastEngine& engine, int max_phase);
    static FastFacts from_records(Discipline discipline, std::span<const PhaseRecord> records);

    Discipline discipline() const { return discipline_; }
    int max_phase() const { return max_phase_; }

    struct XFacts {
        int first_phase = 0;  // 0: never produced
        std::vector<Witness> witnesses;
    };

    bool contains(const Bitstring& x) const { return find(x) != nullptr; }
    // nullptr when x never appeared. Lambda always appears with first_phase 1.
    const XFacts* find(const Bitstring& x) const;

    // Visits every recorded x (lexicographic order), optionally only up to a length.
    void for_each(const std::function<void(const Bitstring&, const XFacts&)>& visit,
                  std::size_t max_length = SIZE_MAX) const;

    // Children of x present in the facts (for continuation enumeration).
    std::vector<Bitstring> extensions(const Bitstring& x, std::size_t extra_length) const;

    std::size_t size() const { return nodes_.size(); }

private:
    struct TrieNode {
        std::int32_t child[2] = {-1, -1};
        XFacts facts;
    };
    std::int32_t descend(std::int32_t node, bool bit, bool create);

    Discipline discipline_;
    int max_phase_ = 0;
    std::vector<TrieNode> nodes_;

    friend class PhaseBuilder;
};

class FastFacts::PhaseBuilder {
public:
    PhaseBuilder(FastFacts& facts, int phase);
    void add(const EntryView& e);

private:
    FastFacts* facts_;
    int phase_;
    std::vector<const Bitstring*> ancestors_;
};

// fast_run: phases 1..max_phase of FAST under one discipline.
FastFacts fast_run(int max_phase, Discipline discipline, unsigned workers = 1);

}  // namespace speedprior

#endif  // SPEEDPRIOR_DOVETAIL_HPP
