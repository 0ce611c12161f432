#include "speedprior/measures.hpp"

#include <algorithm>
#include <bit>

#include "speedprior/oracles.hpp"

namespace speedprior {

NotYetEnumerated::NotYetEnumerated(const Bitstring& x, int horizon)
    : std::runtime_error("not yet enumerated: x=" + (x.empty() ? std::string("<lambda>") : x.to_string()) +
                         " has no witness by phase " + std::to_string(horizon)),
      x_(x),
      horizon_(horizon) {}

int ceil_log2(std::uint64_t t) {
    if (t <= 1) return 0;
    return 64 - std::countl_zero(t - 1);
}

namespace {

void require_horizon(const FastFacts& facts, int horizon) {
    if (horizon < 1) throw HorizonError("horizon must be >= 1");
    if (horizon > facts.max_phase()) {
        throw HorizonError("horizon " + std::to_string(horizon) + " exceeds enumerated phases (" +
                           std::to_string(facts.max_phase()) + ")");
    }
}

Dyadic lambda_mass(int horizon) { return Dyadic::one() - Dyadic::pow2_neg(static_cast<std::uint32_t>(horizon)); }

Dyadic witness_weight(const Witness& w) { return Dyadic::pow2_neg(static_cast<std::uint32_t>(w.phase) + w.program.length); }

Dyadic mass_of(const FastFacts::XFacts& f, int horizon) {
    Dyadic m;
    for (const Witness& w : f.witnesses) {
        if (w.phase <= horizon) m += witness_weight(w);
    }
    return m;
}

}  // namespace

Dyadic speed_prior_lb(const Bitstring& x, const FastFacts& facts, int horizon) {
    require_horizon(facts, horizon);
    if (x.empty()) return lambda_mass(horizon);
    const FastFacts::XFacts* f = facts.find(x);
    return f ? mass_of(*f, horizon) : Dyadic::zero();
}

Dyadic MeasureTable::mass(const Bitstring& x) const {
    auto it = rows.find(x);
    return it == rows.end() ? Dyadic::zero() : it->second.mass;
}

MeasureTable speed_prior_table(const FastFacts& facts, int horizon, std::size_t max_length) {
    require_horizon(facts, horizon);
    MeasureTable t;
    t.kind = MeasureKind::SpeedPrior;
    t.horizon = horizon;
    facts.for_each(
        [&](const Bitstring& x, const FastFacts::XFacts& f) {
            if (x.empty()) {
                t.rows[x] = {lambda_mass(horizon), {}};
                return;
            }
            if (f.first_phase == 0 || f.first_phase > horizon) return;
            MeasureTable::Row row;
            for (const Witness& w : f.witnesses) {
                if (w.phase > horizon) continue;
                row.mass += witness_weight(w);
                row.witnesses.push_back(w);
            }
            t.rows[x] = std::move(row);
        },
        max_length);
    return t;
}

MeasureTable halting_table(Discipline d, const HaltingBudget& budget, unsigned workers) {
    MeasureTable t;
    t.kind = MeasureKind::DiscreteM;
    t.horizon = 0;
    PrefixTree tree(d, workers, {budget.steps});
    const BudgetFn constant = [&](std::size_t) { return budget.steps; };
    tree.grow(constant, budget.max_program_length);

    // A halted prefix consumed all of its bits unless a shorter prefix
    // already halted the same run.
    std::vector<bool> halted_at(budget.max_program_length + 1, false);
    tree.walk(constant, budget.max_program_length, [&](const EntryView& e) {
        const std::size_t l = e.program.length;
        halted_at[l] = e.status == Status::Halted;
        if (!halted_at[l] || (l > 0 && halted_at[l - 1])) return;
        MeasureTable::Row& row = t.rows[*e.output];
        row.mass += Dyadic::pow2_neg(static_cast<std::uint32_t>(l));
        row.witnesses.push_back({0, e.program, e.steps});
    });
    return t;
}

Dyadic m_lb(const Bitstring& x, const MeasureTable& halting) { return halting.mass(x); }

Dyadic m_lb(const Bitstring& x, Discipline d, const HaltingBudget& budget) { return halting_table(d, budget).mass(x); }

KtEstimate kt_ub(const Bitstring& x, const FastFacts& facts, int horizon) {
    require_horizon(facts, horizon);
    KtEstimate est;
    est.x = x;
    if (x.empty()) {
        est.first_phase = 1;
        return est;
    }
    const FastFacts::XFacts* f = facts.find(x);
    if (!f || f->first_phase == 0 || f->first_phase > horizon) throw NotYetEnumerated(x, horizon);
    est.first_phase = f->first_phase;
    bool found = false;
    for (const Witness& w : f->witnesses) {
        if (w.phase > horizon) continue;
        const int kt = static_cast<int>(w.program.length) + ceil_log2(w.t);
        const bool better = !found || kt < est.kt_ub ||
                            (kt == est.kt_ub && (w.program.length < est.program.length ||
                                                 (w.program.length == est.program.length &&
                                                  (w.program < est.program || (w.program == est.program && w.t < est.t)))));
        if (better) {
            est.kt_ub = kt;
            est.program = w.program;
            est.t = w.t;
            found = true;
        }
    }
    return est;
}

KtEstimate kt_ub(const Bitstring& x, const FastFacts& facts) { return kt_ub(x, facts, facts.max_phase()); }

ComplexityReport complexity_report(const Bitstring& x, const FastFacts* mtm, const FastFacts* eom,
                                   const FastFacts* gtm, const MeasureTable* halting, int horizon) {
    ComplexityReport r;
    r.x = x;
    r.horizon = horizon;

    auto shortest = [&](const FastFacts* facts) -> std::optional<int> {
        if (!facts) return std::nullopt;
        require_horizon(*facts, horizon);
        if (x.empty()) return 0;
        const FastFacts::XFacts* f = facts->find(x);
        if (!f) return std::nullopt;
        std::optional<int> best;
        for (const Witness& w : f->witnesses) {
            if (w.phase <= horizon && (!best || static_cast<int>(w.program.length) < *best)) {
                best = static_cast<int>(w.program.length);
            }
        }
        return best;
    };
    r.km_mtm_ub = shortest(mtm);
    r.k_eom_ub = shortest(eom);
    r.k_gtm_ub = shortest(gtm);

    if (r.k_gtm_ub && !x.empty()) {
        bool converged = false;
        for (const Witness& w : gtm->find(x)->witnesses) {
            if (w.phase > horizon || static_cast<int>(w.program.length) != *r.k_gtm_ub) continue;
            if (!changed_in_last_quarter(w.t, phase_budget(w.phase, w.program.length))) converged = true;
        }
        r.gtm_unconverged = !converged;
    }

    if (halting) {
        auto it = halting->rows.find(x);
        if (it != halting->rows.end()) {
            for (const Witness& w : it->second.witnesses) {
                const int l = static_cast<int>(w.program.length);
                if (!r.k_halt_ub || l < *r.k_halt_ub) r.k_halt_ub = l;
            }
        }
    }
    return r;
}

SemimeasureReport check_semimeasure(const MeasureTable& table, std::size_t n) {
    SemimeasureReport rep;
    if (table.mass(Bitstring()) > Dyadic::one()) {
        rep.ok = rep.root_ok = false;
    }
    // Every x below length n when that is small; otherwise the strings with
    // mass and the parents of strings with mass (the rest read 0 <= 0).
    std::vector<Bitstring> domain;
    if (n <= 20) {
        for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) domain.push_back(alphabet_nth(k));
    } else {
        domain.emplace_back();
        for (const auto& [x, row] : table.rows) {
            if (!x.empty() && x.size() < n) domain.push_back(x);
            if (!x.empty() && x.size() <= n) domain.push_back(x.prefix(x.size() - 1));
        }
        std::sort(domain.begin(), domain.end());
        domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
    }

    for (const Bitstring& x : domain) {
        if (x.size() >= n) continue;
        Bitstring x0 = x, x1 = x;
        x0.push_back(false);
        x1.push_back(true);
        const Dyadic mx = table.mass(x), m0 = table.mass(x0), m1 = table.mass(x1);
        const Dyadic children = m0 + m1;
        if (children > mx) {
            rep.ok = false;
            rep.violations.push_back({x, mx, m0, m1});
        } else {
            rep.residuals[x] = mx - children;
        }
    }
    return rep;
}

KraftError::KraftError(const Bitstring& s, const Bitstring& l)
    : std::invalid_argument("not a prefix antichain: " + (s.empty() ? std::string("<lambda>") : s.to_string()) +
                            " is a prefix of " + l.to_string()),
      shorter(s),
      longer(l) {}

Dyadic kraft_check(std::vector<Bitstring> programs) {
    // In lexicographic order any prefix relation shows up between neighbours.
    std::sort(programs.begin(), programs.end());
    Dyadic sum;
    for (std::size_t k = 0; k < programs.size(); ++k) {
        if (k + 1 < programs.size() && programs[k + 1].starts_with(programs[k])) {
            throw KraftError(programs[k], programs[k + 1]);
        }
        sum += Dyadic::pow2_neg(static_cast<std::uint32_t>(programs[k].size()));
    }
    return sum;
}

KraftReport kraft_check_facts(const FastFacts& facts, int horizon) {
    require_horizon(facts, horizon);
    KraftReport rep;
    facts.for_each([&](const Bitstring& x, const FastFacts::XFacts& f) {
        std::map<int, std::vector<Bitstring>> by_phase;
        for (const Witness& w : f.witnesses) {
            if (w.phase <= horizon) by_phase[w.phase].push_back(w.program.to_bitstring());
        }
        for (auto& [phase, progs] : by_phase) {
            ++rep.checked;
            try {
                const Dyadic sum = kraft_check(std::move(progs));
                if (sum > rep.worst) rep.worst = sum;
                if (sum > Dyadic::one()) {
                    rep.ok = false;
                    rep.problems.push_back("x=" + x.to_string() + " phase " + std::to_string(phase) +
                                           ": Kraft sum " + sum.to_string() + " > 1");
                }
            } catch (const KraftError& e) {
                rep.ok = false;
                rep.problems.push_back("x=" + x.to_string() + " phase " + std::to_string(phase) + ": " + e.what());
            }
        }
    });
    return rep;
}

std::vector<TailBoundRow> tail_bound_check(const FastFacts& facts, int horizon, std::size_t max_length) {
    require_horizon(facts, horizon);
    std::vector<TailBoundRow> rows;
    facts.for_each(
        [&](const Bitstring& x, const FastFacts::XFacts& f) {
            if (x.empty() || f.first_phase == 0 || f.first_phase > horizon) return;
            TailBoundRow r;
            r.x = x;
            r.first_phase = f.first_phase;
            r.mass = mass_of(f, horizon);
            r.within_bound = r.mass <= Dyadic::pow2_neg(static_cast<std::uint32_t>(f.first_phase - 1));
            r.kt = kt_ub(x, facts, horizon).kt_ub;
            r.within_kt_bound = r.mass <= Dyadic::pow2_neg(static_cast<std::uint32_t>(r.kt));
            rows.push_back(std::move(r));
        },
        max_length);
    return rows;
}

std::vector<CoverageViolation> coverage_check(const FastFacts& facts, int k, std::size_t max_length) {
    require_horizon(facts, k);
    std::vector<CoverageViolation> bad;
    for (const auto& [x, kt] : oracle::phase_kt_table(k, facts.discipline(), max_length)) {
        if (kt > k) continue;
        const FastFacts::XFacts* f = facts.find(x);
        const int first = f ? f->first_phase : 0;
        if (first == 0 || first > k) bad.push_back({x, kt, first});
    }
    return bad;
}

QRatioReport q_ratio_experiment(const FastFacts& facts, int horizon, const std::vector<std::size_t>& ns,
                                std::uint64_t c, std::size_t tail_window) {
    require_horizon(facts, horizon);
    QRatioReport rep;
    rep.tail_window = tail_window;
    for (std::size_t n : ns) {
        QRatioRow row;
        row.n = n;
        row.f = c * n;
        row.g = static_cast<std::uint64_t>(n) * n;
        const FastFacts::XFacts* f = facts.find(Bitstring::repeat("1", n));
        if (!f || f->first_phase == 0 || f->first_phase > horizon) {
            row.truncated = true;
            rep.rows.push_back(std::move(row));
            continue;
        }
        for (const Witness& w : f->witnesses) {
            if (w.phase > horizon) continue;
            if (w.t >= row.g) row.slow_mass += witness_weight(w);
            if (w.t <= row.f) row.fast_mass += witness_weight(w);
        }
        if (row.fast_mass > Dyadic::zero()) row.q = Rational::ratio(row.slow_mass, row.fast_mass);
        rep.rows.push_back(std::move(row));
    }
    std::vector<Rational> qs;
    for (const QRatioRow& r : rep.rows) {
        if (r.q) qs.push_back(*r.q);
    }
    const std::size_t from = qs.size() > tail_window ? qs.size() - tail_window : 0;
    for (std::size_t k = from + 1; k < qs.size(); ++k) {
        if (qs[k] > qs[k - 1]) rep.tail_nonincreasing = false;
    }
    return rep;
}

}  // namespace speedprior
