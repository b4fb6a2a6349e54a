#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "doctest.h"
#include "vmap/codecs.hpp"
#include "vmap/feedgen.hpp"
#include "vmap/signal_engine.hpp"

using namespace vmap;
using namespace vmap::feedgen;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("vmap_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write(const fs::path& p, const std::string& s) {
    std::ofstream(p, std::ios::binary) << s;
}

}  // namespace

TEST_CASE("generate_day is deterministic") {
    GenSpec spec;
    spec.tickers = 50;
    spec.interval_seconds = 600;
    auto a = generate_day(spec);
    auto b = generate_day(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].universe == b[i].universe);
    spec.seed = 2;
    CHECK_FALSE(generate_day(spec)[3].universe == a[3].universe);
    CHECK(a.front().ssm == 34200);
    CHECK(a.back().ssm == 57600);
    CHECK(a.size() == 40);
}

TEST_CASE("generated snapshots satisfy record invariants") {
    GenSpec spec;
    spec.tickers = 200;
    spec.interval_seconds = 300;
    spec.zero_close_fraction = 0.1;
    for (const auto& snap : generate_day(spec)) {
        for (const auto& t : snap.universe.tickers()) {
            REQUIRE(t.low <= t.last);
            REQUIRE(t.last <= t.high);
            REQUIRE(t.low > 0);
            REQUIRE(is_valid_symbol(t.symbol));
            REQUIRE(t.close >= 0);
        }
        // survives a text round trip
        REQUIRE(codecs::parse_market_snapshot(codecs::write_market_snapshot(snap.universe)) == snap.universe);
    }
}

TEST_CASE("reference price equals close at the open") {
    GenSpec spec;
    spec.tickers = 30;
    const auto day = generate_day(spec);
    for (const auto& t : day.front().universe.tickers()) {
        if (t.close > 0) CHECK(reference_price(t, clock_fraction(34200, spec.session)) == t.close);
    }
}

TEST_CASE("missing-industry fraction is exact") {
    GenSpec spec;
    spec.tickers = 100;
    spec.missing_industry_fraction = 0.1;
    spec.interval_seconds = 3600;
    const auto day = generate_day(spec);
    const auto& snap = day[2];
    auto st = compute_signals(snap.universe, snap.ssm, spec.session);
    CHECK(std::count_if(st.begin(), st.end(), [](const SignalState& s) { return !s.signal; }) == 10);
}

TEST_CASE("bad specs") {
    GenSpec s;
    s.tickers = 1;
    CHECK_THROWS_AS(generate_day(s), Error);
    GenSpec f;
    f.missing_industry_fraction = 1.5;
    CHECK_THROWS_AS(generate_day(f), Error);
}

TEST_CASE("snapshot_at picks the latest not after the clock") {
    GenSpec spec;
    spec.tickers = 5;
    spec.interval_seconds = 60;
    const auto day = generate_day(spec);
    CHECK(snapshot_at(day, 0).ssm == 34200);
    CHECK(snapshot_at(day, 34259).ssm == 34200);
    CHECK(snapshot_at(day, 34260).ssm == 34260);
    CHECK(snapshot_at(day, 80000).ssm == 57600);
}

TEST_CASE("timestamps in file names") {
    CHECK(timestamp_of("mkt.data.093000.txt") == 34200);
    CHECK(timestamp_of("/x/y/snap_155930.tsv") == 57570);
    CHECK_FALSE(timestamp_of("mkt.data.txt"));
    CHECK_FALSE(timestamp_of("mkt.data.250000.txt"));
}

TEST_CASE("replay orders by timestamp") {
    GenSpec spec;
    spec.tickers = 5;
    spec.interval_seconds = 60;
    const auto day = generate_day(spec);
    const auto dir = scratch_dir("replay");
    write(dir / "mkt.data.093200.txt", codecs::write_market_snapshot(day[2].universe));
    write(dir / "mkt.data.093000.txt", codecs::write_market_snapshot(day[0].universe));
    write(dir / "mkt.data.093100.txt", codecs::write_market_snapshot(day[1].universe));
    write(dir / "notes.txt", "ignored");

    Replay r(dir, std::numeric_limits<double>::infinity());
    std::vector<int> seen;
    while (auto s = r.next()) {
        seen.push_back(s->ssm);
        CHECK(s->universe == day[seen.size() - 1].universe);
    }
    CHECK(seen == std::vector<int>{34200, 34260, 34320});

    write(dir / "mkt.data.093100.txt", "garbage");
    Replay bad(dir, 0);
    CHECK(bad.next());
    try {
        bad.next();
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("mkt.data.093100.txt") != std::string::npos);
    }
    fs::remove_all(dir);

    CHECK_THROWS_AS(Replay(scratch_dir("empty"), 0), Error);
}
