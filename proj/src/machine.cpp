#include "speedprior/machine.hpp"

#include <cstdio>
#include <stdexcept>

namespace speedprior {

namespace {

constexpr std::size_t kOpcodeBits = 3;
constexpr std::size_t kJumpOperandBits = 4;
constexpr std::size_t kExtOperandBits = 2;

enum Opcode : unsigned { Out0 = 0, Out1, Left, Right, Set, Clr, Jz, Ext };
enum ExtOp : unsigned { Halt = 0, OutLeft, OutRight, DelOut };

unsigned read_bits(const Bitstring& bits, std::size_t at, std::size_t n) {
    unsigned v = 0;
    for (std::size_t k = 0; k < n; ++k) v = (v << 1) | (bits[at + k] ? 1u : 0u);
    return v;
}

constexpr std::string_view kTableDescription =
    "speedprior-machine/1;msb-first;"
    "000=OUT0;001=OUT1;010=LEFT;011=RIGHT;100=SET;101=CLR;110kkkk=JZ(k back,0=self);"
    "11100=HALT;11101=OUTLEFT;11110=OUTRIGHT;11111=DELOUT;"
    "write-advances-head;mtm=append-only;eom=no-lex-decrease;gtm=free;"
    "abort-freezes-output;abort-counts-step;stall-costs-zero;budget-checked-before-decode";

}  // namespace

std::string_view discipline_name(Discipline d) {
    switch (d) {
        case Discipline::Monotone: return "mtm";
        case Discipline::EnumerableOutput: return "eom";
        case Discipline::General: return "gtm";
    }
    return "?";
}

Discipline parse_discipline(std::string_view name) {
    if (name == "mtm") return Discipline::Monotone;
    if (name == "eom") return Discipline::EnumerableOutput;
    if (name == "gtm") return Discipline::General;
    throw std::invalid_argument("unknown discipline '" + std::string(name) + "' (expected mtm, eom or gtm)");
}

std::string_view status_name(Status s) {
    switch (s) {
        case Status::Running: return "running";
        case Status::AwaitingBit: return "awaiting";
        case Status::Halted: return "halted";
        case Status::Aborted: return "aborted";
        case Status::BudgetExhausted: return "exhausted";
    }
    return "?";
}

Status parse_status(std::string_view name) {
    for (Status s : {Status::Running, Status::AwaitingBit, Status::Halted, Status::Aborted, Status::BudgetExhausted}) {
        if (status_name(s) == name) return s;
    }
    throw std::invalid_argument("unknown status '" + std::string(name) + "'");
}

const std::string& machine_hash() {
    static const std::string hash = [] {
        std::uint64_t h = 1469598103934665603ull;
        for (char c : kTableDescription) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return std::string(buf);
    }();
    return hash;
}

bool WorkTape::get(std::int64_t cell) const {
    if (cell >= 0) {
        const auto k = static_cast<std::size_t>(cell);
        return k < right_.size() && right_[k];
    }
    const auto k = static_cast<std::size_t>(-(cell + 1));
    return k < left_.size() && left_[k];
}

void WorkTape::set(std::int64_t cell, bool bit) {
    auto& side = cell >= 0 ? right_ : left_;
    const auto k = static_cast<std::size_t>(cell >= 0 ? cell : -(cell + 1));
    if (k >= side.size()) {
        if (!bit) return;
        side.resize(k + 1, 0);
    }
    side[k] = bit;
}

MachineState::MachineState(Discipline discipline) : discipline_(discipline) {}

void MachineState::feed(bool bit) {
    consumed_.push_back(bit);
    if (status_ == Status::AwaitingBit) status_ = Status::Running;
}

Status MachineState::step() {
    if (is_terminal(status_)) return status_;

    const std::size_t avail = consumed_.size();
    if (pc_ + kOpcodeBits > avail) {
        status_ = Status::AwaitingBit;
        return status_;
    }
    const unsigned op = read_bits(consumed_, pc_, kOpcodeBits);
    const std::size_t length = op == Jz    ? kOpcodeBits + kJumpOperandBits
                               : op == Ext ? kOpcodeBits + kExtOperandBits
                                           : kOpcodeBits;
    if (pc_ + length > avail) {
        status_ = Status::AwaitingBit;
        return status_;
    }
    if (index_ == boundaries_.size()) boundaries_.push_back(pc_);

    status_ = Status::Running;
    ++steps_;
    std::size_t next_index = index_ + 1;
    std::size_t next_pc = pc_ + length;

    switch (op) {
        case Out0: write_output(false); break;
        case Out1: write_output(true); break;
        case Left: --work_head_; break;
        case Right: ++work_head_; break;
        case Set: tape_.set(work_head_, true); break;
        case Clr: tape_.set(work_head_, false); break;
        case Jz: {
            if (!tape_.get(work_head_)) {
                const unsigned back = read_bits(consumed_, pc_ + kOpcodeBits, kJumpOperandBits);
                if (back > index_) {
                    abort();
                    return status_;
                }
                next_index = index_ - back;
                next_pc = boundaries_[next_index];
            }
            break;
        }
        case Ext: {
            const unsigned ext = read_bits(consumed_, pc_ + kOpcodeBits, kExtOperandBits);
            if (ext == Halt) {
                status_ = Status::Halted;
                pc_ = next_pc;
                index_ = next_index;
                return status_;
            }
            if (discipline_ == Discipline::Monotone) {
                abort();
                return status_;
            }
            if (ext == OutLeft) {
                if (output_head_ > 0) --output_head_;
            } else if (ext == OutRight) {
                if (output_head_ < output_.size()) ++output_head_;
            } else {
                // Removing the last square always makes the output lexicographically smaller.
                if (discipline_ != Discipline::General || output_.empty()) {
                    abort();
                    return status_;
                }
                output_.pop_back();
                written_at_.pop_back();
                if (output_head_ > output_.size()) output_head_ = output_.size();
                last_change_ = steps_;
            }
            break;
        }
    }
    if (status_ == Status::Aborted) return status_;
    pc_ = next_pc;
    index_ = next_index;
    return status_;
}

void MachineState::write_output(bool bit) {
    if (output_head_ == output_.size()) {
        output_.push_back(bit);
        written_at_.push_back(steps_);
        ++output_head_;
        last_change_ = steps_;
        return;
    }
    // Overwrite in place: only reachable under EnumerableOutput and General.
    const bool old = output_[output_head_];
    if (old != bit) {
        if (discipline_ == Discipline::EnumerableOutput && old && !bit) {
            abort();
            return;
        }
        output_.set(output_head_, bit);
        written_at_[output_head_] = steps_;
        last_change_ = steps_;
    }
    ++output_head_;
}

MachineState run_state(const Bitstring& program, Discipline discipline, std::uint64_t budget) {
    MachineState m(discipline);
    for (;;) {
        if (is_terminal(m.status())) break;
        if (m.steps() >= budget) break;
        if (m.step() == Status::AwaitingBit) {
            if (m.consumed().size() >= program.size()) break;
            m.feed(program[m.consumed().size()]);
        }
    }
    return m;
}

RunOutcome run(const Bitstring& program, Discipline discipline, std::uint64_t budget) {
    const MachineState m = run_state(program, discipline, budget);
    RunOutcome out;
    out.output = m.output();
    out.consumed = m.consumed().size();
    out.steps = m.steps();
    out.stable_since = m.last_output_change();
    if (is_terminal(m.status()) || m.status() == Status::AwaitingBit) {
        out.status = m.status();
    } else {
        out.status = Status::BudgetExhausted;
    }
    out.unconverged = discipline == Discipline::General && out.status == Status::BudgetExhausted &&
                      changed_in_last_quarter(out.stable_since, budget);
    return out;
}

std::vector<std::pair<std::uint64_t, Bitstring>> output_trace(const Bitstring& program, Discipline discipline,
                                                              std::uint64_t budget) {
    std::vector<std::pair<std::uint64_t, Bitstring>> trace;
    MachineState m(discipline);
    for (;;) {
        if (is_terminal(m.status()) || m.steps() >= budget) break;
        const std::uint64_t before = m.steps();
        if (m.step() == Status::AwaitingBit) {
            if (m.consumed().size() >= program.size()) break;
            m.feed(program[m.consumed().size()]);
            continue;
        }
        if (m.steps() != before && m.last_output_change() == m.steps()) trace.emplace_back(m.steps(), m.output());
    }
    return trace;
}

}  // namespace speedprior
