// Persistent FAST phase cache.
//
// JSONL container: a header line
//   {"format":"speedprior-fastcache","format_version":1,"machine_hash":...,
//    "discipline":"mtm","phases_complete":N}
// then for each phase a {"phase":i,"entries":2^(i+1)-1} line followed by its
// entries {"p":prefix,"n":steps,"s":status,"x":output,"w":[stable steps]} in
// lexicographic prefix order, and a trailer {"end":true,"digest":hex} holding
// FNV-1a of every preceding byte. Anything that fails these checks is
// rejected; nothing is rebuilt silently.

#ifndef SPEEDPRIOR_FAST_CACHE_HPP
#define SPEEDPRIOR_FAST_CACHE_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "speedprior/dovetail.hpp"

namespace speedprior {

inline constexpr int kCacheFormatVersion = 1;

class CacheError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FastCache {
public:
    explicit FastCache(Discipline discipline) : discipline_(discipline) {}

    Discipline discipline() const { return discipline_; }
    int phases_complete() const { return static_cast<int>(phases_.size()); }
    const std::vector<PhaseRecord>& phases() const { return phases_; }
    const PhaseRecord& phase(int i) const { return phases_.at(static_cast<std::size_t>(i - 1)); }

    // Phases must be appended in order 1, 2, 3, ...
    void append(PhaseRecord record);

    void save(const std::filesystem::path& path) const;
    // Throws CacheError on corruption, machine-hash or discipline mismatch.
    static FastCache load(const std::filesystem::path& path, Discipline expected);

    // Default file name inside a cache directory, keyed by discipline.
    static std::filesystem::path file_in(const std::filesystem::path& dir, Discipline d);

private:
    Discipline discipline_;
    std::vector<PhaseRecord> phases_;
};

// Returns phase i from the cache, computing (and appending) missing phases
// with `engine` first. The engine must use the cache's discipline.
const PhaseRecord& fast_phase(int i, FastCache& cache, FastEngine& engine);

}  // namespace speedprior

#endif  // SPEEDPRIOR_FAST_CACHE_HPP
