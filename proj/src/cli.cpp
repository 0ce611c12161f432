#include "speedprior/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "speedprior/checks.hpp"
#include "speedprior/fast_cache.hpp"
#include "speedprior/guess.hpp"
#include "speedprior/measures.hpp"
#include "speedprior/oracles.hpp"
#include "speedprior/predict.hpp"

namespace speedprior::cli {

namespace {

using Json = nlohmann::ordered_json;

// Raised for bad user input; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string show(const Bitstring& x) { return x.to_string(); }

Json dyadic(const Dyadic& d) { return Json(d.to_json()); }
Json rational(const Rational& r) { return Json(r.to_json()); }

Bitstring parse_x(const std::string& s) {
    if (s == "lambda" || s == "-") return {};
    try {
        return Bitstring::from_string(s);
    } catch (const std::invalid_argument&) {
        throw ConfigError("not a bitstring: '" + s + "' (use 0/1 digits, or 'lambda' for the empty string)");
    }
}

// ---------------------------------------------------------------------------
// Output

class Emitter {
public:
    Emitter(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out), config_(cfg.semantic()) {}

    void emit(const std::string& kind, Json fields, int horizon) {
        Json rec;
        rec["kind"] = kind;
        for (auto& [k, v] : fields.items()) rec[k] = std::move(v);
        rec["horizon"] = horizon;
        rec["machine_hash"] = machine_hash();
        rec["config"] = config_;
        if (cfg_.format == "table") {
            out_ << render_row(rec) << '\n';
        } else {
            out_ << rec.dump() << '\n';
        }
    }

    // The table is a flat view of the same record.
    static std::string render_row(const Json& rec) {
        std::ostringstream os;
        os << std::left << std::setw(12) << rec["kind"].get<std::string>();
        for (const auto& [k, v] : rec.items()) {
            if (k == "kind" || k == "config" || k == "machine_hash") continue;
            os << ' ' << k << '=';
            if (v.is_string()) {
                const std::string& s = v.get_ref<const std::string&>();
                os << (s.empty() ? "<lambda>" : s);
            } else if (v.is_object() && v.contains("num") && v.contains("exp")) {
                os << v["num"].get<std::string>() << "/2^" << v["exp"].get<int>();
            } else if (v.is_object() && v.contains("num_n")) {
                os << v["num_n"].get<std::string>() << '/' << v["num_d"].get<std::string>();
            } else {
                os << v.dump();
            }
        }
        return os.str();
    }

private:
    const RunConfig& cfg_;
    std::ostream& out_;
    Json config_;
};

// ---------------------------------------------------------------------------
// FAST results, through the cache when one is configured

struct FastResult {
    FastFacts facts;
    std::vector<PhaseRecord> records;  // filled when requested or when caching
};

FastResult obtain_fast(const RunConfig& cfg, Discipline d, int phases, bool want_records, std::ostream& err) {
    if (!cfg.cache_dir) {
        FastEngine engine(d, cfg.workers);
        engine.advance_to(phases);
        FastResult r{FastFacts::from_engine(engine, phases), {}};
        if (want_records) {
            for (int i = 1; i <= phases; ++i) r.records.push_back(engine.record(i));
        }
        err << "fast: " << discipline_name(d) << " phases 1.." << phases << ", " << engine.executed_steps()
            << " shared instructions executed\n";
        return r;
    }

    const std::filesystem::path path = FastCache::file_in(*cfg.cache_dir, d);
    std::optional<FastCache> cached;
    if (std::filesystem::exists(path)) cached = FastCache::load(path, d);

    if (cached && cached->phases_complete() >= phases) {
        err << "cache hit: " << path.string() << " (" << cached->phases_complete() << " phases, 0 instructions executed)\n";
        std::vector<PhaseRecord> recs(cached->phases().begin(), cached->phases().begin() + phases);
        FastResult r{FastFacts::from_records(d, recs), {}};
        r.records = std::move(recs);
        return r;
    }

    FastEngine engine(d, cfg.workers);
    FastCache fresh(d);
    for (int i = 1; i <= phases; ++i) fast_phase(i, fresh, engine);
    if (cached) {
        for (int i = 1; i <= cached->phases_complete(); ++i) {
            if (!(cached->phase(i) == fresh.phase(i))) {
                throw CacheError("cache corrupt: phase " + std::to_string(i) + " of " + path.string() +
                                 " differs from recomputation");
            }
        }
    }
    fresh.save(path);
    err << "cache miss: " << path.string() << " extended from " << (cached ? cached->phases_complete() : 0) << " to "
        << phases << " phases, " << engine.executed_steps() << " shared instructions executed\n";
    FastResult r{FastFacts::from_records(d, fresh.phases()), fresh.phases()};
    return r;
}

std::vector<Bitstring> targets(const RunConfig& cfg, const FastFacts& facts, int horizon) {
    std::vector<Bitstring> xs;
    if (!cfg.xs.empty()) {
        for (const std::string& s : cfg.xs) xs.push_back(parse_x(s));
        return xs;
    }
    facts.for_each(
        [&](const Bitstring& x, const FastFacts::XFacts& f) {
            if (f.first_phase != 0 && f.first_phase <= horizon) xs.push_back(x);
        },
        cfg.max_length);
    return xs;
}

std::uint64_t default_budget(const RunConfig& cfg) {
    return cfg.budget ? *cfg.budget : (std::uint64_t{1} << cfg.max_phase);
}

// ---------------------------------------------------------------------------
// Commands

int cmd_fast(const RunConfig& cfg, Emitter& em, std::ostream& err) {
    const FastResult r = obtain_fast(cfg, cfg.discipline, cfg.max_phase, true, err);
    for (const PhaseRecord& rec : r.records) {
        PhaseStats s;
        s.phase = rec.phase;
        for (const Entry& e : rec.entries) s.add(view_of(e, phase_budget(rec.phase, e.program.length)));
        char digest[17];
        std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(s.digest));
        em.emit("phase",
                {{"phase", rec.phase},
                 {"entries", s.entries},
                 {"halted", s.halted},
                 {"aborted", s.aborted},
                 {"awaiting", s.awaiting},
                 {"exhausted", s.exhausted},
                 {"instructions", s.literal_steps},
                 {"digest", digest}},
                rec.phase);
        if (cfg.entries) {
            for (const Entry& e : rec.entries) {
                em.emit("entry",
                        {{"phase", rec.phase},
                         {"p", e.program.to_string()},
                         {"steps", e.steps},
                         {"status", status_name(e.status)},
                         {"x", show(e.output)}},
                        rec.phase);
            }
        }
    }
    em.emit("facts", {{"strings", r.facts.size()}}, cfg.max_phase);
    r.facts.for_each(
        [&](const Bitstring& x, const FastFacts::XFacts& f) {
            em.emit("first_phase", {{"x", show(x)}, {"first_phase", f.first_phase}, {"witnesses", f.witnesses.size()}},
                    cfg.max_phase);
        },
        cfg.max_length);
    return kOk;
}

int cmd_kt(const RunConfig& cfg, Emitter& em, std::ostream& err) {
    const FastResult r = obtain_fast(cfg, cfg.discipline, cfg.max_phase, false, err);
    for (const Bitstring& x : targets(cfg, r.facts, cfg.max_phase)) {
        try {
            const KtEstimate k = kt_ub(x, r.facts, cfg.max_phase);
            em.emit("kt",
                    {{"x", show(x)},
                     {"kt_ub", k.kt_ub},
                     {"program", k.program.to_string()},
                     {"t", k.t},
                     {"first_phase", k.first_phase}},
                    cfg.max_phase);
        } catch (const NotYetEnumerated&) {
            em.emit("kt", {{"x", show(x)}, {"kt_ub", nullptr}, {"status", "not yet enumerated"}}, cfg.max_phase);
        }
    }
    return kOk;
}

int cmd_sprior(const RunConfig& cfg, Emitter& em, std::ostream& err) {
    const FastResult r = obtain_fast(cfg, cfg.discipline, cfg.max_phase, false, err);
    for (const Bitstring& x : targets(cfg, r.facts, cfg.max_phase)) {
        const Dyadic m = speed_prior_lb(x, r.facts, cfg.max_phase);
        const FastFacts::XFacts* f = r.facts.find(x);
        std::size_t w = 0;
        if (f) {
            for (const Witness& v : f->witnesses) w += v.phase <= cfg.max_phase;
        }
        const int first = f && f->first_phase <= cfg.max_phase ? f->first_phase : 0;
        em.emit("mass",
                {{"measure", "speed_prior"},
                 {"x", show(x)},
                 {"mass", dyadic(m)},
                 {"approx", m.to_double()},
                 {"first_phase", first == 0 ? Json(nullptr) : Json(first)},
                 {"witnesses", w}},
                cfg.max_phase);
    }
    return kOk;
}

int cmd_m(const RunConfig& cfg, Emitter& em, std::ostream&) {
    const HaltingBudget budget{static_cast<std::size_t>(cfg.max_phase), default_budget(cfg)};
    const MeasureTable table = halting_table(cfg.discipline, budget, cfg.workers);
    std::vector<Bitstring> xs;
    for (const std::string& s : cfg.xs) xs.push_back(parse_x(s));
    if (cfg.xs.empty()) {
        for (const auto& [x, row] : table.rows) xs.push_back(x);
    }
    for (const Bitstring& x : xs) {
        Json programs = Json::array();
        auto it = table.rows.find(x);
        if (it != table.rows.end()) {
            for (const Witness& w : it->second.witnesses) programs.push_back({w.program.to_string(), w.t});
        }
        em.emit("mass",
                {{"measure", "m"},
                 {"x", show(x)},
                 {"mass", dyadic(table.mass(x))},
                 {"max_program_length", budget.max_program_length},
                 {"steps", budget.steps},
                 {"programs", programs}},
                cfg.max_phase);
    }
    return kOk;
}

int cmd_complexity(const RunConfig& cfg, Emitter& em, std::ostream& err) {
    const FastResult mtm = obtain_fast(cfg, Discipline::Monotone, cfg.max_phase, false, err);
    const FastResult eom = obtain_fast(cfg, Discipline::EnumerableOutput, cfg.max_phase, false, err);
    const FastResult gtm = obtain_fast(cfg, Discipline::General, cfg.max_phase, false, err);
    const HaltingBudget budget{static_cast<std::size_t>(cfg.max_phase), default_budget(cfg)};
    const MeasureTable halting = halting_table(Discipline::Monotone, budget, cfg.workers);

    std::vector<Bitstring> xs = targets(cfg, mtm.facts, cfg.max_phase);
    if (cfg.xs.empty()) {
        for (const FastResult* r : {&eom, &gtm}) {
            for (const Bitstring& x : targets(cfg, r->facts, cfg.max_phase)) xs.push_back(x);
        }
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    }
    auto bound = [](const std::optional<int>& v) { return v ? Json(*v) : Json("no witness within budget"); };
    bool ok = true;
    for (const Bitstring& x : xs) {
        const ComplexityReport c = complexity_report(x, &mtm.facts, &eom.facts, &gtm.facts, &halting, cfg.max_phase);
        const bool ordered = !(c.km_mtm_ub && c.k_eom_ub && c.k_gtm_ub) ||
                             (*c.k_gtm_ub <= *c.k_eom_ub && *c.k_eom_ub <= *c.km_mtm_ub);
        ok = ok && ordered;
        em.emit("complexity",
                {{"x", show(x)},
                 {"k_halt_ub", bound(c.k_halt_ub)},
                 {"km_mtm_ub", bound(c.km_mtm_ub)},
                 {"k_eom_ub", bound(c.k_eom_ub)},
                 {"k_gtm_ub", bound(c.k_gtm_ub)},
                 {"gtm_unconverged", c.gtm_unconverged},
                 {"gtm_heuristic", true},
                 {"ordered", ordered}},
                cfg.max_phase);
    }
    return ok ? kOk : kPropertyViolation;
}

// OUT1 followed by JZ back one instruction: emits 1 forever, the n-th bit
// at instruction 2n-1.
const char* kOnesLoop = "0011100001";

double log2_big(const BigInt& v) {
    const std::size_t top = boost::multiprecision::msb(v);
    if (top < 53) return std::log2(v.convert_to<double>());
    return std::log2(BigInt(v >> (top - 52)).convert_to<double>()) + static_cast<double>(top - 52);
}

std::uint64_t measured_step_constant(std::size_t n_max) {
    std::uint64_t c = 1;
    const auto trace = output_trace(Bitstring::from_string(kOnesLoop), Discipline::Monotone, 2 * n_max + 2);
    for (const auto& [t, out] : trace) {
        const std::uint64_t n = out.size();
        if (n > 0) c = std::max(c, (t + n - 1) / n);
    }
    return c;
}

int cmd_qratio(const RunConfig& cfg, Emitter& em, std::ostream& err) {
    const FastResult r = obtain_fast(cfg, cfg.discipline, cfg.max_phase, false, err);
    std::vector<std::size_t> ns;
    for (std::size_t n = 1; n <= 256; n *= 2) ns.push_back(n);
    const std::uint64_t c = measured_step_constant(256);
    const QRatioReport rep = q_ratio_experiment(r.facts, cfg.max_phase, ns, c);
    for (const QRatioRow& row : rep.rows) {
        em.emit("qratio",
                {{"n", row.n},
                 {"f", row.f},
                 {"g", row.g},
                 {"slow_mass", dyadic(row.slow_mass)},
                 {"fast_mass", dyadic(row.fast_mass)},
                 {"q", row.q ? rational(*row.q) : Json(nullptr)},
                 {"truncated", row.truncated}},
                cfg.max_phase);
    }
    em.emit("qratio_summary", {{"c", c}, {"tail_window", rep.tail_window}, {"tail_nonincreasing", rep.tail_nonincreasing}},
            cfg.max_phase);
    return rep.tail_nonincreasing ? kOk : kPropertyViolation;
}

int cmd_guess(const RunConfig& cfg, Emitter& em, std::ostream&, double threshold) {
    if (cfg.samples == 0) throw ConfigError("--samples must be >= 1");
    const GuessOracle oracle = guess_oracle(cfg.max_phase, cfg.discipline);
    const GuessTally tally = guess_tally(cfg.samples, cfg.seed, cfg.discipline, cfg.max_phase, cfg.workers);
    std::vector<Bitstring> xs;
    for (const std::string& s : cfg.xs) xs.push_back(parse_x(s));
    if (xs.empty()) {
        for (std::uint64_t n = 1; n < 16; ++n) xs.push_back(alphabet_nth(n));  // l(x) <= 3
    }
    bool ok = true;
    for (const Bitstring& x : xs) {
        const GuessReport g = guess_compare(x, tally, cfg.seed, oracle);
        ok = ok && g.pass(threshold);
        em.emit("guess",
                {{"x", show(x)},
                 {"emp", g.empirical},
                 {"hits", g.hits},
                 {"exact", dyadic(g.exact)},
                 {"z", std::isfinite(g.z) ? Json(g.z) : Json("inf")},
                 {"samples", g.samples},
                 {"seed", g.seed},
                 {"max_i", g.max_i},
                 {"rng", kRngId},
                 {"horizon_mismatch", g.horizon_mismatch},
                 {"pass", g.pass(threshold)}},
                cfg.max_phase);
    }
    return ok ? kOk : kPropertyViolation;
}

Json next_bit_fields(const NextBit& nb) {
    return {{"x", show(nb.x)},
            {"chosen", nb.bit ? "1" : "0"},
            {"cond", rational(nb.bit ? nb.cond1 : nb.cond0)},
            {"cond0", rational(nb.cond0)},
            {"cond1", rational(nb.cond1)},
            {"witnesses", nb.witnesses},
            {"mass_gap", nb.mass_gap ? rational(*nb.mass_gap) : Json(nullptr)}};
}

// The kt tie-in is only asserted when the top candidate has more than
// twice the mass of the runner-up (or the runner-up has none).
bool clear_winner(const Prediction& p) {
    if (p.candidates.size() < 2) return false;
    return !p.top_gap || *p.top_gap > Rational(2, 1);
}

int cmd_predict(const RunConfig& cfg, Emitter& em, std::ostream& err, bool sweep) {
    if (cfg.xs.empty()) throw ConfigError("predict needs at least one observed string");
    const FastResult r = obtain_fast(cfg, cfg.discipline, cfg.max_phase, false, err);
    bool violated = false;
    for (const std::string& s : cfg.xs) {
        const Bitstring x = parse_x(s);
        try {
            em.emit("prediction", next_bit_fields(next_bit(x, r.facts, cfg.max_phase)), cfg.max_phase);
        } catch (const NotYetEnumerated& e) {
            em.emit("prediction", {{"x", show(x)}, {"chosen", nullptr}, {"refusal", e.what()}, {"witnesses", 0}},
                    cfg.max_phase);
            continue;
        }
        if (cfg.continuation_length > 0) {
            const Prediction p = rank_continuations(x, cfg.continuation_length, r.facts, cfg.max_phase);
            Json cands = Json::array();
            for (const Candidate& c : p.candidates) cands.push_back({{"y", show(c.y)}, {"cond", rational(c.cond)}, {"kt", c.kt}});
            em.emit("ranking",
                    {{"x", show(x)},
                     {"k", cfg.continuation_length},
                     {"candidates", cands},
                     {"top_gap", p.top_gap ? rational(*p.top_gap) : Json(nullptr)},
                     {"top_kt_within_one", p.top_kt_within_one},
                     {"kt_asserted", clear_winner(p)}},
                    cfg.max_phase);
            if (clear_winner(p) && !p.top_kt_within_one) violated = true;
        }
        if (sweep) {
            std::vector<int> hs;
            for (int h = 1; h <= cfg.max_phase; ++h) hs.push_back(h);
            for (const SweepStep& st : prediction_sweep(x, r.facts, hs)) {
                Json f = st.prediction ? next_bit_fields(*st.prediction)
                                       : Json{{"x", show(x)}, {"chosen", nullptr}, {"refusal", st.refusal}};
                f["flipped"] = st.flipped;
                Json delta = Json::array();
                for (const auto& [xb, w] : st.witness_delta) {
                    delta.push_back({{"x", show(xb)}, {"phase", w.phase}, {"p", w.program.to_string()}, {"t", w.t}});
                }
                f["witness_delta"] = delta;
                em.emit("sweep", f, st.horizon);
            }
        }
    }
    return violated ? kPropertyViolation : kOk;
}

int cmd_bench(const RunConfig& cfg, Emitter& em, std::ostream& err) {
    const std::vector<std::size_t> ns = cfg.quick ? std::vector<std::size_t>{4, 8, 16, 32}
                                                  : std::vector<std::size_t>{4, 8, 16, 32, 64, 128, 256};
    const int cap = 26;
    FastEngine engine(Discipline::Monotone, cfg.workers);
    FastFacts facts(Discipline::Monotone);
    std::vector<std::uint64_t> cumulative{0};  // literal FAST instructions through phase i
    std::map<std::size_t, int> first;
    for (int i = 1; i <= cap && first.size() < ns.size(); ++i) {
        engine.advance_to(i);
        auto b = facts.begin_phase(i);
        PhaseStats s;
        s.phase = i;
        engine.for_each_entry(i, [&](const EntryView& v) {
            b.add(v);
            s.add(v);
        });
        cumulative.push_back(cumulative.back() + s.literal_steps);
        for (std::size_t n : ns) {
            if (!first.contains(n) && facts.contains(Bitstring::repeat("1", n))) first[n] = i;
        }
    }
    err << "bench: FAST ran to phase " << cumulative.size() - 1 << "\n";

    const Bitstring loop = Bitstring::from_string(kOnesLoop);
    const std::uint64_t k = alphabet_index(loop);
    std::optional<double> constant;
    bool within = true;
    double prev_simple = 0, prev_fast = 0, prev_logn = 0;
    Json slopes = Json::array();
    for (std::size_t n : ns) {
        const double log2n = std::log2(static_cast<double>(n));
        Json f;
        f["n"] = n;
        // ALPHABET: 1^n is the last, i.e. the 2^n-th, string of length n.
        f["alphabet_position"] = ((BigInt(1) << (n + 1)) - 1).str();
        f["alphabet_position_in_block"] = ("2^" + std::to_string(n));
        if (n <= 16) {
            f["alphabet_checked"] = oracle::alphabet_first_with_ones(n) == (std::uint64_t{2} << n) - 1;
            within = within && f["alphabet_checked"].get<bool>();
        } else {
            f["alphabet_checked"] = nullptr;
        }
        // SIMPLE: the loop program is p^k with k its ALPHABET index.
        const BigInt simple = simple_step_of(k, 2 * n - 1);
        const double simple_log2 = log2_big(simple);
        f["simple_program"] = kOnesLoop;
        f["simple_program_index"] = k;
        f["simple_instruction"] = 2 * n - 1;
        f["simple_step_log2"] = simple_log2;
        if (first.contains(n)) {
            const int i = first[n];
            f["fast_first_phase"] = i;
            f["fast_instructions"] = cumulative[static_cast<std::size_t>(i)];
            const double offset = i - log2n;
            f["fast_phase_minus_log2n"] = offset;
            if (!constant) constant = offset;
            const bool ok = std::abs(offset - *constant) <= 1.0;
            f["within_one"] = ok;
            within = within && ok;
            const double fast_log2 = std::log2(static_cast<double>(cumulative[static_cast<std::size_t>(i)]));
            if (prev_logn > 0) {
                slopes.push_back({{"n", n},
                                  {"simple", (simple_log2 - prev_simple) / (log2n - prev_logn)},
                                  {"fast", (fast_log2 - prev_fast) / (log2n - prev_logn)}});
            }
            prev_simple = simple_log2;
            prev_fast = fast_log2;
            prev_logn = log2n;
        } else {
            f["fast_first_phase"] = nullptr;
            f["truncated"] = true;
            within = false;
        }
        em.emit("bench", f, static_cast<int>(cumulative.size() - 1));
    }
    em.emit("bench_summary",
            {{"fast_constant", constant ? Json(*constant) : Json(nullptr)}, {"ok", within}, {"slopes", slopes}},
            static_cast<int>(cumulative.size() - 1));
    return within ? kOk : kPropertyViolation;
}

int cmd_verify(const RunConfig& cfg, Emitter& em, std::ostream& err) {
    const bool q = cfg.quick;
    const int horizon = q ? std::min(cfg.max_phase, 8) : cfg.max_phase;
    std::vector<checks::CheckResult> results;
    results.push_back(checks::encoding(q ? 8 : 12));
    results.push_back(checks::alphabet(q ? 12 : 16));
    for (Discipline d : {Discipline::Monotone, Discipline::EnumerableOutput, Discipline::General}) {
        results.push_back(checks::oracle_equivalence(q ? 6 : 8, d, cfg.workers));
        const FastResult r = obtain_fast(cfg, d, horizon, true, err);
        results.push_back(checks::phase_budget_law(r.records, d));
        results.push_back(checks::semimeasure(r.facts, horizon, 6));
        results.push_back(checks::kraft(r.facts, horizon));
        results.push_back(checks::tail_bound(r.facts, horizon));
        results.push_back(checks::coverage(r.facts, horizon, SIZE_MAX));
    }
    {
        const int h = std::min(horizon, 10);
        const FastResult mtm = obtain_fast(cfg, Discipline::Monotone, h, false, err);
        const FastResult eom = obtain_fast(cfg, Discipline::EnumerableOutput, h, false, err);
        const FastResult gtm = obtain_fast(cfg, Discipline::General, h, false, err);
        results.push_back(checks::hierarchy(mtm.facts, eom.facts, gtm.facts, h));
    }
    results.push_back(checks::halting(Discipline::Monotone, {static_cast<std::size_t>(horizon), 4096}, cfg.workers));
    results.push_back(checks::guess_statistics(10, q ? 100000 : cfg.samples, cfg.seed, Discipline::Monotone, cfg.workers,
                                               3, 4.0));
    Json failed = Json::array();
    for (const checks::CheckResult& c : results) {
        em.emit("check", {{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}}, horizon);
        if (!c.ok) failed.push_back(c.name);
    }
    em.emit("verify_summary", {{"ok", failed.empty()}, {"checks", results.size()}, {"failed", failed}}, horizon);
    return failed.empty() ? kOk : kPropertyViolation;
}

}  // namespace

nlohmann::ordered_json RunConfig::semantic() const {
    Json j;
    j["command"] = command;
    j["discipline"] = discipline_name(discipline);
    j["max_phase"] = max_phase;
    j["budget"] = budget ? Json(*budget) : Json(nullptr);
    j["seed"] = seed;
    j["samples"] = samples;
    j["quick"] = quick;
    j["max_length"] = max_length;
    j["continuation_length"] = continuation_length;
    j["x"] = xs;
    return j;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Speed prior toolkit: FAST enumeration, Kt, S and m bounds, GUESS sampling, prediction"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string discipline = "mtm";
    double z_threshold = 4.0;
    bool sweep = false;
    std::uint64_t budget = 0;

    app.add_option("--max-phase", cfg.max_phase, "FAST horizon i_max (GUESS: max_i; m: max program length)")
        ->check(CLI::Range(1, kMaxPhase));
    auto* budget_opt = app.add_option("--budget", budget, "step budget for m/complexity (default 2^max-phase)");
    app.add_option("--discipline", discipline, "output discipline")->check(CLI::IsMember({"mtm", "eom", "gtm"}));
    app.add_option("--seed", cfg.seed, "GUESS master seed");
    app.add_option("--samples", cfg.samples, "GUESS sample count");
    app.add_option("--cache", cfg.cache_dir, "FAST cache directory (one file per discipline)");
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"jsonl", "table"}));
    app.add_option("--workers", cfg.workers, "worker threads (never changes output)")->check(CLI::Range(1u, 256u));
    app.add_flag("--quick", cfg.quick, "smaller parameters (verify, bench)");
    app.add_option("--max-length", cfg.max_length, "longest x listed when no x is given");

    struct Sub {
        const char* name;
        const char* help;
        bool takes_x;
    };
    const Sub subs[] = {
        {"fast", "run FAST phases and report per-phase records and first phases", false},
        {"kt", "upper bounds on Kt(x)", true},
        {"sprior", "speed prior lower bounds S_lb(x)", true},
        {"m", "discrete semimeasure lower bounds m_lb(x) from halting programs", true},
        {"guess", "GUESS sampler against its exact oracle", true},
        {"predict", "next-bit prediction and continuation ranking", true},
        {"bench", "ALPHABET vs SIMPLE vs FAST on 1^n", false},
        {"verify", "run the property suites", false},
        {"complexity", "budgeted Km / K^E / K^G / halting upper bounds", true},
        {"qratio", "slow-vs-fast witness mass ratios on 1^n", false},
    };
    for (const Sub& s : subs) {
        CLI::App* sc = app.add_subcommand(s.name, s.help);
        sc->fallthrough();
        if (s.takes_x) sc->add_option("x", cfg.xs, "bitstrings ('lambda' for the empty string)");
        if (std::string(s.name) == "fast") sc->add_flag("--entries", cfg.entries, "also emit every phase entry");
        if (std::string(s.name) == "guess") sc->add_option("--z-threshold", z_threshold, "pass threshold on |z|");
        if (std::string(s.name) == "predict") {
            sc->add_option("--continuation-length", cfg.continuation_length, "length of ranked continuations (0: none)");
            sc->add_flag("--sweep", sweep, "repeat the prediction at every horizon up to --max-phase");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? kOk : kConfigError;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    cfg.discipline = parse_discipline(discipline);
    if (*budget_opt) cfg.budget = budget;

    Emitter em(cfg, out);
    try {
        if (cfg.command == "fast") return cmd_fast(cfg, em, err);
        if (cfg.command == "kt") return cmd_kt(cfg, em, err);
        if (cfg.command == "sprior") return cmd_sprior(cfg, em, err);
        if (cfg.command == "m") return cmd_m(cfg, em, err);
        if (cfg.command == "guess") return cmd_guess(cfg, em, err, z_threshold);
        if (cfg.command == "predict") return cmd_predict(cfg, em, err, sweep);
        if (cfg.command == "bench") return cmd_bench(cfg, em, err);
        if (cfg.command == "verify") return cmd_verify(cfg, em, err);
        if (cfg.command == "complexity") return cmd_complexity(cfg, em, err);
        if (cfg.command == "qratio") return cmd_qratio(cfg, em, err);
    } catch (const CacheError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const HorizonError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }
    err << "error: unknown command\n";
    return kConfigError;
}

}  // namespace speedprior::cli
