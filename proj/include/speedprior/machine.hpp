// The universal binary machine.
//
// Program bits are the instruction stream: the machine "requests an input
// bit" exactly when decoding runs past the bits consumed so far, so every
// bitstring is a program prefix and l(p) is the number of bits demanded.
//
// Opcode table (MSB first, version 1):
//
//   000        OUT0      write 0 at the output head, head += 1
//   001        OUT1      write 1 at the output head, head += 1
//   010        LEFT      work head -= 1
//   011        RIGHT     work head += 1
//   100        SET       work cell := 1
//   101        CLR       work cell := 0
//   110 kkkk   JZ k      if work cell == 0, jump to the start of the k-th
//                        previous instruction (k = 0: own start)
//   111 00     HALT
//   111 01     OUTLEFT   output head -= 1 (stays at 0)
//   111 10     OUTRIGHT  output head += 1 (stays at l(output))
//   111 11     DELOUT    delete the last output square
//
// Output disciplines:
//   Monotone          OUTLEFT, OUTRIGHT and DELOUT abort; writes always append.
//   EnumerableOutput  an edit that makes the output lexicographically smaller
//                     aborts; DELOUT therefore always aborts.
//   General           every edit is allowed; DELOUT on empty output aborts.
//
// An aborted run keeps the output it had before the offending instruction.
// The offending instruction still counts as an executed step.

#ifndef SPEEDPRIOR_MACHINE_HPP
#define SPEEDPRIOR_MACHINE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "speedprior/bitstring.hpp"

namespace speedprior {

enum class Discipline { Monotone, EnumerableOutput, General };

std::string_view discipline_name(Discipline d);  // "mtm" / "eom" / "gtm"
// Throws std::invalid_argument on anything else.
Discipline parse_discipline(std::string_view name);

enum class Status { Running, AwaitingBit, Halted, Aborted, BudgetExhausted };

std::string_view status_name(Status s);
Status parse_status(std::string_view name);
inline bool is_terminal(Status s) { return s == Status::Halted || s == Status::Aborted; }

// Stable digest of the opcode table and discipline rules, as 16 hex digits.
const std::string& machine_hash();

// Two-way infinite tape of bits, zero-initialised.
class WorkTape {
public:
    bool get(std::int64_t cell) const;
    void set(std::int64_t cell, bool bit);

    friend bool operator==(const WorkTape&, const WorkTape&) = default;

private:
    std::vector<std::uint8_t> right_;  // cells 0, 1, 2, ...
    std::vector<std::uint8_t> left_;   // cells -1, -2, ...
};

class MachineState {
public:
    explicit MachineState(Discipline discipline = Discipline::Monotone);

    Discipline discipline() const { return discipline_; }
    const Bitstring& consumed() const { return consumed_; }
    std::size_t pc() const { return pc_; }
    const std::vector<std::size_t>& instruction_boundaries() const { return boundaries_; }
    const WorkTape& work_tape() const { return tape_; }
    std::int64_t work_head() const { return work_head_; }
    const Bitstring& output() const { return output_; }
    std::size_t output_head() const { return output_head_; }
    std::uint64_t steps() const { return steps_; }
    Status status() const { return status_; }

    // Step at which each output square last changed value or was created.
    const std::vector<std::uint64_t>& written_at() const { return written_at_; }
    // Step of the most recent output change; 0 if the output never changed.
    std::uint64_t last_output_change() const { return last_change_; }

    // Supplies the next program bit. Clears AwaitingBit.
    void feed(bool bit);

    // Executes one instruction, or sets AwaitingBit (without counting a step)
    // when the next instruction needs bits beyond consumed(). No-op once
    // Halted or Aborted.
    Status step();

    friend bool operator==(const MachineState&, const MachineState&) = default;

private:
    void write_output(bool bit);
    void abort() { status_ = Status::Aborted; }

    Discipline discipline_;
    Bitstring consumed_;
    std::size_t pc_ = 0;
    std::size_t index_ = 0;  // index into boundaries_ of the instruction at pc_
    std::vector<std::size_t> boundaries_;
    WorkTape tape_;
    std::int64_t work_head_ = 0;
    Bitstring output_;
    std::size_t output_head_ = 0;
    std::vector<std::uint64_t> written_at_;
    std::uint64_t last_change_ = 0;
    std::uint64_t steps_ = 0;
    Status status_ = Status::Running;
};

struct RunOutcome {
    Bitstring output;
    std::size_t consumed = 0;
    std::uint64_t steps = 0;
    Status status = Status::Running;
    std::uint64_t stable_since = 0;
    // General discipline only: the output changed within the last quarter of the budget.
    bool unconverged = false;

    friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

// Runs `program` until it halts, aborts, needs a bit beyond the program, or has
// executed `budget` instructions. The budget is checked before each decode.
RunOutcome run(const Bitstring& program, Discipline discipline, std::uint64_t budget);

// Like run() but returns the final machine state.
MachineState run_state(const Bitstring& program, Discipline discipline, std::uint64_t budget);

// (step, output) after every step that changed the output.
std::vector<std::pair<std::uint64_t, Bitstring>> output_trace(const Bitstring& program, Discipline discipline,
                                                              std::uint64_t budget);

// Budgeted convergence heuristic shared by run() and the dovetailer.
inline bool changed_in_last_quarter(std::uint64_t stable_since, std::uint64_t budget) {
    return stable_since > budget - budget / 4;
}

}  // namespace speedprior

#endif  // SPEEDPRIOR_MACHINE_HPP
