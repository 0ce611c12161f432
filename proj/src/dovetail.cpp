#include "speedprior/dovetail.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <stdexcept>
#include <thread>

namespace speedprior {

// ---------------------------------------------------------------------------
// ALPHABET and SIMPLE

Bitstring alphabet_nth(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("alphabet_nth: n must be >= 1");
    // The n-th string is n in binary without its leading 1.
    const int width = static_cast<int>(std::bit_width(n));
    return Bitstring::from_uint(n, static_cast<std::size_t>(width - 1));
}

std::uint64_t alphabet_index(const Bitstring& x) {
    if (x.size() >= 64) throw std::out_of_range("alphabet_index: string too long");
    std::uint64_t v = 1;
    for (std::size_t k = 0; k < x.size(); ++k) v = (v << 1) | (x[k] ? 1u : 0u);
    return v;
}

std::uint64_t simple_schedule(std::uint64_t step) {
    if (step == 0) throw std::invalid_argument("simple_schedule: step must be >= 1");
    return static_cast<std::uint64_t>(std::countr_zero(step)) + 1;
}

BigInt simple_step_of(std::uint64_t k, std::uint64_t m) {
    if (k == 0 || m == 0) throw std::invalid_argument("simple_step_of: k and m must be >= 1");
    return (BigInt(2) * m - 1) << (k - 1);
}

// ---------------------------------------------------------------------------
// Prefix / Snapshot / PhaseRecord

Prefix Prefix::from_bitstring(const Bitstring& b) {
    if (b.size() > 64) throw std::out_of_range("prefix longer than 64 bits");
    Prefix p;
    for (std::size_t k = 0; k < b.size(); ++k) p = p.child(b[k]);
    return p;
}

std::strong_ordering operator<=>(const Prefix& a, const Prefix& b) {
    const std::uint32_t common = std::min(a.length, b.length);
    const std::uint64_t ah = common == 0 ? 0 : a.bits >> (a.length - common);
    const std::uint64_t bh = common == 0 ? 0 : b.bits >> (b.length - common);
    if (ah != bh) return ah <=> bh;
    return a.length <=> b.length;
}

Snapshot Snapshot::capture(const MachineState& m) {
    Snapshot s;
    s.step = m.steps();
    s.output = m.output();
    s.stable.reserve(m.written_at().size());
    std::uint64_t running = 0;
    for (std::uint64_t w : m.written_at()) {
        running = std::max(running, w);
        s.stable.push_back(running);
    }
    return s;
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffu;
        h *= kFnvPrime;
    }
    return h;
}

bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace

std::uint64_t entry_digest_step(std::uint64_t h, const EntryView& e) {
    h = fnv_mix(h, e.program.bits);
    h = fnv_mix(h, e.program.length);
    h = fnv_mix(h, e.steps);
    h = fnv_mix(h, static_cast<std::uint64_t>(e.status));
    h = fnv_mix(h, e.output->hash());
    return h;
}

std::uint64_t PhaseRecord::digest() const {
    std::uint64_t h = fnv_mix(kFnvOffset, static_cast<std::uint64_t>(phase));
    for (const Entry& e : entries) h = entry_digest_step(h, view_of(e, 0));
    return h;
}

void PhaseStats::add(const EntryView& e) {
    if (entries == 0) digest = fnv_mix(kFnvOffset, static_cast<std::uint64_t>(phase));
    ++entries;
    literal_steps += e.steps;
    switch (e.status) {
        case Status::Halted: ++halted; break;
        case Status::Aborted: ++aborted; break;
        case Status::AwaitingBit: ++awaiting; break;
        default: ++exhausted; break;
    }
    digest = entry_digest_step(digest, e);
}

// ---------------------------------------------------------------------------
// PrefixTree

enum class NodeEnd { Open, Forked, Halted, Aborted };

struct PrefixTree::Node {
    std::uint64_t start_step = 0;
    std::unique_ptr<MachineState> live;
    NodeEnd end = NodeEnd::Open;
    std::uint64_t end_step = 0;
    Snapshot end_snap;
    std::vector<Snapshot> snaps;  // watched steps inside this node's segment
    std::uint64_t executed = 0;
    std::unique_ptr<Node> child[2];

    std::uint64_t progress() const { return live ? live->steps() : end_step; }

    const Snapshot& snapshot_at(std::uint64_t step) const {
        auto it = std::lower_bound(snaps.begin(), snaps.end(), step,
                                   [](const Snapshot& s, std::uint64_t v) { return s.step < v; });
        if (it != snaps.end() && it->step == step) return *it;
        if (end != NodeEnd::Open && end_step == step) return end_snap;
        throw std::logic_error("prefix tree: no snapshot at step " + std::to_string(step));
    }
};

namespace {

using Node = PrefixTree::Node;

struct Watch {
    const std::vector<std::uint64_t>* extra;
    bool operator()(std::uint64_t step) const {
        return is_pow2(step) || std::binary_search(extra->begin(), extra->end(), step);
    }
};

void advance_node(Node& n, std::uint64_t target, const Watch& watched) {
    if (!n.live) return;
    MachineState& m = *n.live;
    while (m.steps() < target) {
        const std::uint64_t before = m.steps();
        const Status st = m.step();
        if (st == Status::AwaitingBit) {
            n.end = NodeEnd::Forked;
            n.end_step = m.steps();
            n.end_snap = Snapshot::capture(m);
            for (int b = 0; b < 2; ++b) {
                auto c = std::make_unique<Node>();
                c->start_step = m.steps();
                c->live = std::make_unique<MachineState>(m);
                c->live->feed(b == 1);
                n.child[b] = std::move(c);
            }
            n.live.reset();
            return;
        }
        if (m.steps() > before) {
            ++n.executed;
            if (watched(m.steps())) n.snaps.push_back(Snapshot::capture(m));
        }
        if (is_terminal(st)) {
            n.end = st == Status::Halted ? NodeEnd::Halted : NodeEnd::Aborted;
            n.end_step = m.steps();
            n.end_snap = Snapshot::capture(m);
            n.live.reset();
            return;
        }
    }
}

struct Grower {
    const BudgetFn& budget;
    std::size_t max_depth;
    Watch watched;
    std::size_t split_depth;  // subtrees rooted here go to the worker pool
    std::vector<std::pair<Node*, std::size_t>>* deferred;

    void grow(Node& n, std::size_t depth) const {
        advance_node(n, budget(depth), watched);
        if (n.end != NodeEnd::Forked || depth + 1 > max_depth) return;
        if (n.end_step >= budget(depth + 1)) return;
        for (auto& c : n.child) {
            if (deferred && depth + 1 == split_depth) {
                deferred->emplace_back(c.get(), depth + 1);
            } else {
                grow(*c, depth + 1);
            }
        }
    }
};

void count_nodes(const Node& n, std::uint64_t& steps, std::size_t& nodes) {
    steps += n.executed;
    ++nodes;
    for (const auto& c : n.child) {
        if (c) count_nodes(*c, steps, nodes);
    }
}

}  // namespace

PrefixTree::PrefixTree(Discipline discipline, unsigned workers, std::vector<std::uint64_t> extra_watch)
    : discipline_(discipline), workers_(std::max(1u, workers)), extra_watch_(std::move(extra_watch)),
      root_(std::make_unique<Node>()) {
    std::sort(extra_watch_.begin(), extra_watch_.end());
    root_->live = std::make_unique<MachineState>(discipline);
}

PrefixTree::~PrefixTree() = default;
PrefixTree::PrefixTree(PrefixTree&&) noexcept = default;
PrefixTree& PrefixTree::operator=(PrefixTree&&) noexcept = default;

void PrefixTree::grow(const BudgetFn& budget, std::size_t max_depth) {
    const Watch watched{&extra_watch_};
    if (workers_ == 1) {
        Grower{budget, max_depth, watched, 0, nullptr}.grow(*root_, 0);
        return;
    }
    std::vector<std::pair<Node*, std::size_t>> deferred;
    const std::size_t split = std::min<std::size_t>(max_depth, 8);
    Grower top{budget, max_depth, watched, split, &deferred};
    top.grow(*root_, 0);

    // Subtrees are disjoint, so each is grown by exactly one worker.
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        const Grower g{budget, max_depth, watched, 0, nullptr};
        for (std::size_t k = next++; k < deferred.size(); k = next++) g.grow(*deferred[k].first, deferred[k].second);
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers_; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
}

void PrefixTree::walk(const BudgetFn& budget, std::size_t max_depth, const EntryVisitor& visit) const {
    // path[d] is the node of p_d (the first d bits of p), or null when no such node exists.
    std::vector<const Node*> path(max_depth + 1, nullptr);
    path[0] = root_.get();

    std::function<void(Prefix)> rec = [&](Prefix p) {
        const std::size_t e = p.length;
        const std::uint64_t B = budget(e);

        // Follow bit demands that happen strictly before the budget runs out.
        std::size_t d = 0;
        while (d < e && path[d]->end == NodeEnd::Forked && path[d]->end_step < B) ++d;
        const Node& q = *path[d];

        EntryView v;
        v.program = p;
        v.budget = B;
        if ((q.end == NodeEnd::Halted || q.end == NodeEnd::Aborted) && q.end_step <= B) {
            v.status = q.end == NodeEnd::Halted ? Status::Halted : Status::Aborted;
            v.steps = q.end_step;
            v.output = &q.end_snap.output;
            v.stable = &q.end_snap.stable;
        } else if (q.end == NodeEnd::Forked && q.end_step < B) {
            v.status = Status::AwaitingBit;
            v.steps = q.end_step;
            v.output = &q.end_snap.output;
            v.stable = &q.end_snap.stable;
        } else {
            if (q.progress() < B) throw std::logic_error("prefix tree: walked past grown budget");
            const Snapshot& s = q.snapshot_at(B);
            v.status = Status::BudgetExhausted;
            v.steps = B;
            v.output = &s.output;
            v.stable = &s.stable;
        }
        visit(v);

        if (e == max_depth) return;
        const Node* here = path[e];
        for (int b = 0; b < 2; ++b) {
            path[e + 1] = (here && here->end == NodeEnd::Forked) ? here->child[b].get() : nullptr;
            rec(p.child(b == 1));
        }
        path[e + 1] = nullptr;
    };
    rec(Prefix{});
}

std::uint64_t PrefixTree::executed_steps() const {
    std::uint64_t steps = 0;
    std::size_t nodes = 0;
    count_nodes(*root_, steps, nodes);
    return steps;
}

std::size_t PrefixTree::node_count() const {
    std::uint64_t steps = 0;
    std::size_t nodes = 0;
    count_nodes(*root_, steps, nodes);
    return nodes;
}

// ---------------------------------------------------------------------------
// FastEngine

FastEngine::FastEngine(Discipline discipline, unsigned workers) : tree_(discipline, workers) {}

void FastEngine::advance_to(int phase) {
    if (phase > kMaxPhase) throw std::out_of_range("FAST phase exceeds " + std::to_string(kMaxPhase));
    for (int i = phases_complete_ + 1; i <= phase; ++i) {
        tree_.grow([i](std::size_t d) { return phase_budget(i, d); }, static_cast<std::size_t>(i));
        phases_complete_ = i;
    }
}

void FastEngine::for_each_entry(int phase, const EntryVisitor& visit) const {
    if (phase < 1 || phase > phases_complete_) throw std::out_of_range("FAST phase not computed");
    tree_.walk([phase](std::size_t d) { return phase_budget(phase, d); }, static_cast<std::size_t>(phase), visit);
}

PhaseRecord FastEngine::record(int phase) const {
    PhaseRecord r;
    r.phase = phase;
    r.entries.reserve((std::size_t{2} << phase) - 1);
    for_each_entry(phase, [&r](const EntryView& v) { r.entries.push_back(v.materialize()); });
    return r;
}

// ---------------------------------------------------------------------------
// FastFacts

FastFacts::FastFacts(Discipline discipline) : discipline_(discipline) {
    nodes_.emplace_back();
    nodes_[0].facts.first_phase = 1;
}

std::int32_t FastFacts::descend(std::int32_t node, bool bit, bool create) {
    std::int32_t c = nodes_[static_cast<std::size_t>(node)].child[bit];
    if (c >= 0 || !create) return c;
    c = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    nodes_[static_cast<std::size_t>(node)].child[bit] = c;
    return c;
}

FastFacts::PhaseBuilder FastFacts::begin_phase(int phase) {
    if (phase <= max_phase_) throw std::logic_error("FastFacts: phases must be added in increasing order");
    max_phase_ = phase;
    return PhaseBuilder(*this, phase);
}

FastFacts::PhaseBuilder::PhaseBuilder(FastFacts& facts, int phase) : facts_(&facts), phase_(phase) {}

void FastFacts::PhaseBuilder::add(const EntryView& e) {
    const Bitstring& out = *e.output;
    const std::size_t depth = e.program.length;
    ancestors_.resize(depth);

    // Output prefixes already produced by a shorter prefix of this program
    // in this phase are not attributed to it (minimal witnesses only).
    std::size_t covered = 0;
    for (const Bitstring* a : ancestors_) covered = std::max(covered, out.common_prefix_length(*a));
    ancestors_.push_back(&out);
    if (covered >= out.size()) return;

    std::int32_t node = 0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        node = facts_->descend(node, out[k], true);
        if (k + 1 <= covered) continue;
        XFacts& f = facts_->nodes_[static_cast<std::size_t>(node)].facts;
        if (f.first_phase == 0) f.first_phase = phase_;
        f.witnesses.push_back({phase_, e.program, (*e.stable)[k]});
    }
}

FastFacts FastFacts::from_engine(const FastEngine& engine, int max_phase) {
    FastFacts facts(engine.discipline());
    for (int i = 1; i <= max_phase; ++i) {
        auto b = facts.begin_phase(i);
        engine.for_each_entry(i, [&b](const EntryView& v) { b.add(v); });
    }
    return facts;
}

FastFacts FastFacts::from_records(Discipline discipline, std::span<const PhaseRecord> records) {
    FastFacts facts(discipline);
    for (const PhaseRecord& r : records) {
        auto b = facts.begin_phase(r.phase);
        for (const Entry& e : r.entries) b.add(view_of(e, phase_budget(r.phase, e.program.length)));
    }
    return facts;
}

const FastFacts::XFacts* FastFacts::find(const Bitstring& x) const {
    std::int32_t node = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        node = nodes_[static_cast<std::size_t>(node)].child[x[k]];
        if (node < 0) return nullptr;
    }
    return &nodes_[static_cast<std::size_t>(node)].facts;
}

void FastFacts::for_each(const std::function<void(const Bitstring&, const XFacts&)>& visit,
                         std::size_t max_length) const {
    Bitstring x;
    std::function<void(std::int32_t)> rec = [&](std::int32_t node) {
        const TrieNode& n = nodes_[static_cast<std::size_t>(node)];
        visit(x, n.facts);
        if (x.size() >= max_length) return;
        for (int b = 0; b < 2; ++b) {
            if (n.child[b] < 0) continue;
            x.push_back(b == 1);
            rec(n.child[b]);
            x.pop_back();
        }
    };
    rec(0);
}

std::vector<Bitstring> FastFacts::extensions(const Bitstring& x, std::size_t extra_length) const {
    std::vector<Bitstring> out;
    std::int32_t start = 0;
    for (std::size_t k = 0; k < x.size() && start >= 0; ++k) start = nodes_[static_cast<std::size_t>(start)].child[x[k]];
    if (start < 0) return out;
    Bitstring y;
    std::function<void(std::int32_t)> rec = [&](std::int32_t node) {
        if (y.size() == extra_length) {
            out.push_back(y);
            return;
        }
        for (int b = 0; b < 2; ++b) {
            const std::int32_t c = nodes_[static_cast<std::size_t>(node)].child[b];
            if (c < 0) continue;
            y.push_back(b == 1);
            rec(c);
            y.pop_back();
        }
    };
    rec(start);
    return out;
}

FastFacts fast_run(int max_phase, Discipline discipline, unsigned workers) {
    if (max_phase < 1) throw std::invalid_argument("fast_run: max_phase must be >= 1");
    FastEngine engine(discipline, workers);
    engine.advance_to(max_phase);
    return FastFacts::from_engine(engine, max_phase);
}

}  // namespace speedprior
