// Command-line front end. Kept in the library so tests can drive it
// in-process and compare outputs byte for byte.

#ifndef SPEEDPRIOR_CLI_HPP
#define SPEEDPRIOR_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "speedprior/machine.hpp"

namespace speedprior::cli {

enum ExitCode : int { kOk = 0, kPropertyViolation = 1, kConfigError = 2 };

struct RunConfig {
    std::string command;
    Discipline discipline = Discipline::Monotone;
    int max_phase = 12;
    std::optional<std::uint64_t> budget;
    std::uint64_t seed = 1;
    std::uint64_t samples = 1000000;
    std::optional<std::string> cache_dir;
    std::string format = "jsonl";
    unsigned workers = 1;
    bool quick = false;
    std::size_t max_length = 6;           // string length bound for table-style commands
    std::size_t continuation_length = 1;  // predict: length of ranked continuations
    bool entries = false;                 // fast: dump every phase entry
    std::vector<std::string> xs;

    // The parts of the config that determine results. Worker count, cache
    // location and output format are left out so they cannot change bytes.
    nlohmann::ordered_json semantic() const;
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace speedprior::cli

#endif  // SPEEDPRIOR_CLI_HPP
