#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "speedprior/fast_cache.hpp"
#include "speedprior/oracles.hpp"

using namespace speedprior;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("speedprior-cache-test-" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

FastCache filled(Discipline d, int phases) {
    FastCache cache(d);
    FastEngine engine(d);
    fast_phase(phases, cache, engine);
    return cache;
}

}  // namespace

TEST_CASE("save and load round trip") {
    TempDir dir;
    for (Discipline d : {Discipline::Monotone, Discipline::EnumerableOutput, Discipline::General}) {
        const FastCache cache = filled(d, 7);
        const fs::path file = FastCache::file_in(dir.path, d);
        cache.save(file);
        const FastCache back = FastCache::load(file, d);
        REQUIRE(back.phases_complete() == 7);
        for (int i = 1; i <= 7; ++i) {
            CHECK(back.phase(i) == cache.phase(i));
            CHECK(back.phase(i) == oracle::naive_phase(i, d));
        }
        // Saving again reproduces the same bytes.
        const fs::path again = dir.path / "again.jsonl";
        back.save(again);
        CHECK(slurp(again) == slurp(file));
    }
    CHECK(FastCache::file_in(dir.path, Discipline::General).filename() == "fast_gtm.jsonl");
}

TEST_CASE("extension keeps earlier phases") {
    FastCache cache = filled(Discipline::Monotone, 4);
    FastEngine engine(Discipline::Monotone);
    const PhaseRecord& p6 = fast_phase(6, cache, engine);
    CHECK(p6.phase == 6);
    CHECK(cache.phases_complete() == 6);
    CHECK(cache.phase(4) == oracle::naive_phase(4, Discipline::Monotone));
    CHECK_THROWS(cache.append(oracle::naive_phase(8, Discipline::Monotone)));
}

TEST_CASE("damaged or foreign files are rejected") {
    TempDir dir;
    const fs::path file = dir.path / "c.jsonl";
    filled(Discipline::Monotone, 5).save(file);
    const std::string good = slurp(file);
    REQUIRE_NOTHROW(FastCache::load(file, Discipline::Monotone));

    CHECK_THROWS_AS(FastCache::load(file, Discipline::General), CacheError);
    CHECK_THROWS_AS(FastCache::load(dir.path / "missing.jsonl", Discipline::Monotone), CacheError);

    auto rejects = [&](std::string text) {
        spit(file, text);
        bool threw = false;
        try {
            FastCache::load(file, Discipline::Monotone);
        } catch (const CacheError&) {
            threw = true;
        }
        return threw;
    };
    auto replaced = [&](const std::string& from, const std::string& to) {
        std::string t = good;
        const auto at = t.find(from);
        REQUIRE(at != std::string::npos);
        return t.replace(at, from.size(), to);
    };

    CHECK(rejects(good.substr(0, good.size() / 2)));
    CHECK(rejects(good.substr(0, good.rfind('\n', good.size() - 2) + 1)));  // trailer dropped
    CHECK(rejects(good + "{\"phase\":6}\n"));
    CHECK(rejects(replaced(machine_hash(), "0000000000000000")));
    CHECK(rejects(replaced("\"format_version\":1", "\"format_version\":2")));
    CHECK(rejects(replaced("\"s\":\"awaiting\"", "\"s\":\"halted\"")));
    CHECK(rejects("not json\n"));
    CHECK(rejects(""));
    // One flipped output bit somewhere in the middle.
    {
        std::string t = good;
        const auto at = t.find("\"x\":\"1", t.size() / 2);
        REQUIRE(at != std::string::npos);
        t[at + 5] = '0';
        CHECK(rejects(t));
    }
    CHECK_FALSE(rejects(good));
}
