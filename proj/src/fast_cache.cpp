#include "speedprior/fast_cache.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace speedprior {

namespace {

using nlohmann::json;

constexpr const char* kFormatName = "speedprior-fastcache";

struct Fnv {
    std::uint64_t h = 1469598103934665603ull;
    void feed(const std::string& line) {
        for (char c : line) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        h ^= static_cast<unsigned char>('\n');
        h *= 1099511628211ull;
    }
    std::string hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }
};

std::uint64_t expected_entries(int phase) { return (std::uint64_t{2} << phase) - 1; }

}  // namespace

void FastCache::append(PhaseRecord record) {
    if (record.phase != phases_complete() + 1) {
        throw CacheError("cache: expected phase " + std::to_string(phases_complete() + 1) + ", got " +
                         std::to_string(record.phase));
    }
    phases_.push_back(std::move(record));
}

std::filesystem::path FastCache::file_in(const std::filesystem::path& dir, Discipline d) {
    return dir / ("fast_" + std::string(discipline_name(d)) + ".jsonl");
}

void FastCache::save(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CacheError("cache: cannot write " + tmp.string());
        Fnv fnv;
        auto emit = [&](const json& j) {
            const std::string line = j.dump();
            fnv.feed(line);
            out << line << '\n';
        };
        emit({{"format", kFormatName},
              {"format_version", kCacheFormatVersion},
              {"machine_hash", machine_hash()},
              {"discipline", discipline_name(discipline_)},
              {"phases_complete", phases_complete()}});
        for (const PhaseRecord& r : phases_) {
            emit({{"phase", r.phase}, {"entries", r.entries.size()}});
            for (const Entry& e : r.entries) {
                emit({{"p", e.program.to_string()},
                      {"n", e.steps},
                      {"s", status_name(e.status)},
                      {"x", e.output.to_string()},
                      {"w", e.stable}});
            }
        }
        out << json{{"end", true}, {"digest", fnv.hex()}}.dump() << '\n';
        if (!out) throw CacheError("cache: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

FastCache FastCache::load(const std::filesystem::path& path, Discipline expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheError("cache: cannot open " + path.string());

    std::string line;
    std::size_t lineno = 0;
    Fnv fnv;
    auto next = [&](bool hashed) -> json {
        if (!std::getline(in, line)) throw CacheError("cache corrupt: truncated at line " + std::to_string(lineno + 1));
        ++lineno;
        if (hashed) fnv.feed(line);
        try {
            return json::parse(line);
        } catch (const json::exception& e) {
            throw CacheError("cache corrupt: line " + std::to_string(lineno) + ": " + e.what());
        }
    };

    try {
        const json header = next(true);
        if (header.value("format", "") != kFormatName) throw CacheError("cache corrupt: not a FAST cache file");
        if (header.at("format_version").get<int>() != kCacheFormatVersion) {
            throw CacheError("cache version mismatch: format_version " + header.at("format_version").dump() +
                             ", expected " + std::to_string(kCacheFormatVersion));
        }
        if (header.at("machine_hash").get<std::string>() != machine_hash()) {
            throw CacheError("cache version mismatch: machine hash " + header.at("machine_hash").get<std::string>() +
                             ", expected " + machine_hash());
        }
        if (header.at("discipline").get<std::string>() != discipline_name(expected)) {
            throw CacheError("cache discipline mismatch: file holds " + header.at("discipline").get<std::string>() +
                             ", expected " + std::string(discipline_name(expected)));
        }
        const int phases = header.at("phases_complete").get<int>();
        if (phases < 0 || phases > kMaxPhase) throw CacheError("cache corrupt: bad phases_complete");

        FastCache cache(expected);
        for (int i = 1; i <= phases; ++i) {
            const json ph = next(true);
            if (ph.at("phase").get<int>() != i || ph.at("entries").get<std::uint64_t>() != expected_entries(i)) {
                throw CacheError("cache corrupt: bad phase header at line " + std::to_string(lineno));
            }
            PhaseRecord r;
            r.phase = i;
            r.entries.reserve(expected_entries(i));
            for (std::uint64_t k = 0; k < expected_entries(i); ++k) {
                const json j = next(true);
                Entry e;
                e.program = Prefix::from_bitstring(Bitstring::from_string(j.at("p").get<std::string>()));
                e.steps = j.at("n").get<std::uint64_t>();
                e.status = parse_status(j.at("s").get<std::string>());
                e.output = Bitstring::from_string(j.at("x").get<std::string>());
                e.stable = j.at("w").get<std::vector<std::uint64_t>>();
                if (e.stable.size() != e.output.size()) {
                    throw CacheError("cache corrupt: stability list length at line " + std::to_string(lineno));
                }
                if (!r.entries.empty() && !(r.entries.back().program < e.program)) {
                    throw CacheError("cache corrupt: entries out of order at line " + std::to_string(lineno));
                }
                r.entries.push_back(std::move(e));
            }
            cache.phases_.push_back(std::move(r));
        }
        const json trailer = next(false);
        if (!trailer.value("end", false) || trailer.value("digest", "") != fnv.hex()) {
            throw CacheError("cache corrupt: digest mismatch");
        }
        if (std::getline(in, line) && !line.empty()) throw CacheError("cache corrupt: trailing data");
        return cache;
    } catch (const CacheError&) {
        throw;
    } catch (const std::exception& e) {
        throw CacheError("cache corrupt: line " + std::to_string(lineno) + ": " + e.what());
    }
}

const PhaseRecord& fast_phase(int i, FastCache& cache, FastEngine& engine) {
    if (engine.discipline() != cache.discipline()) throw CacheError("cache discipline differs from engine");
    if (i < 1 || i > kMaxPhase) throw std::out_of_range("fast_phase: phase out of range");
    while (cache.phases_complete() < i) {
        const int next = cache.phases_complete() + 1;
        engine.advance_to(std::max(next, engine.phases_complete()));
        cache.append(engine.record(next));
    }
    return cache.phase(i);
}

}  // namespace speedprior
