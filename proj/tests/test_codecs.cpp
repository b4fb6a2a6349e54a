#include "doctest.h"
#include "vmap/codecs.hpp"
#include "vmap/scramble.hpp"
#include "vmap/signal_engine.hpp"
#include "vmap/text.hpp"

using namespace vmap;
using namespace vmap::codecs;

namespace {

const std::string kHeader(kMarketHeader);

std::string snapshot(std::initializer_list<std::string> rows) {
    std::string s = kHeader;
    for (auto& r : rows) s += "\n" + r;
    return s;
}

ErrorCode code_of(const std::string& bytes) {
    try {
        parse_market_snapshot(bytes);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error");
    return ErrorCode::ParseError;
}

Universe four_cap_universe() {
    std::vector<TickerRecord> tk(4);
    const char* syms[] = {"AAA", "BBB", "CCC", "DDD"};
    const double caps[] = {100e6, 10e6, 20e6, 1000e6};
    for (int i = 0; i < 4; ++i) {
        tk[i].symbol = syms[i];
        tk[i].market_cap = caps[i];
        tk[i].liquidity = 1e6 * (4 - i);
        tk[i].exchange = Exchange::Nasdaq;
    }
    return Universe(tk);
}

}  // namespace

TEST_CASE("parse_market_snapshot") {
    auto u = parse_market_snapshot(snapshot({
        "KO\t6\tN\t180000000000\t800000000\t44.1\t44.5\t44.6\t43.9\t1\tBeverages\tNA",
        "XYZ\t0\t2\t5e7\t1e5\t0\t3.1\t3.2\t3\t1\t\t0.25",
    }) + "\n");
    REQUIRE(u.size() == 2);
    CHECK(u[0].exchange == Exchange::Nyse);
    CHECK_FALSE(u[0].prev_signal);
    CHECK(u[1].industry.empty());
    CHECK(u[1].close == 0.0);
    CHECK(u[1].prev_signal == 0.25);
    CHECK(u[1].market_cap == 5e7);
}

TEST_CASE("parse_market_snapshot errors") {
    CHECK(code_of("Ticker\tSector") == ErrorCode::HeaderMismatch);
    CHECK(code_of(snapshot({"KO\t6\t1\t1\t1\t1\t1\t1\t1\t1\tBev"})) == ErrorCode::ColumnCount);
    CHECK(code_of(snapshot({"KO\t6\t1\tx\t1\t1\t1\t1\t1\t1\tBev\tNA"})) == ErrorCode::NumericParse);
    CHECK(code_of(snapshot({"KO\t10\t1\t1\t1\t1\t1\t1\t1\t1\tBev\tNA"})) == ErrorCode::InvalidCluster);
    CHECK(code_of(snapshot({"KO\t1\t1\t1\t1\t1\t1\t1\t1\t1\tBev\tNA", "KO\t1\t1\t1\t1\t1\t1\t1\t1\t1\tBev\tNA"})) ==
          ErrorCode::DuplicateSymbol);
    try {
        parse_market_snapshot(snapshot({"KO\t6\t1\t1\t1\t1\t1\t1\t1\t1\tBev\tNA", "PEP\t6\t1\t1\t1"}));
        FAIL("expected ColumnCount");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("market snapshot round trip") {
    auto bytes = snapshot({
        "KO\t6\t1\t180000000000\t800000000\t44.1\t44.5\t44.6\t43.9\t1\tBeverages\tNA",
        "XYZ\t0\t2\t50000000\t100000\t0\t3.1\t3.2\t3\t0.5\t\t-1.25",
    });
    CHECK(write_market_snapshot(parse_market_snapshot(bytes)) == bytes);
}

TEST_CASE("m.txt layout") {
    const auto u = four_cap_universe();
    const auto bytes = write_map_file(u);
    CHECK(bytes ==
          "AAA\t0\t2\t100000000\t2\t4000000\t3\n"
          "BBB\t0\t2\t10000000\t0\t3000000\t2\n"
          "CCC\t0\t2\t20000000\t1\t2000000\t1\n"
          "DDD\t0\t2\t1000000000\t3\t1000000\t0");
    CHECK(bytes.back() != '\n');
    auto rows = parse_map_file(bytes);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].cap_rank == 2);
    CHECK(rows[3].market_cap == 1e9);

    std::vector<int> bad{0, 0, 1, 2}, ok{0, 1, 2, 3};
    CHECK_THROWS_AS(write_map_file(u, bad, ok), Error);
    CHECK_THROWS_AS(write_map_file(Universe{}), Error);
}

TEST_CASE("s.txt pre-open") {
    std::vector<SignalState> st(3);
    st[0].signal_rank = 2;
    st[1].signal_rank = 0;
    st[2].signal_rank = 1;
    CHECK(write_signal_file(MarketStamp::pre_open(), st) == "0,*\t2,*\t0,*\t1");
}

TEST_CASE("s.txt entries") {
    std::vector<SignalState> st(3);
    st[0].signal = 1.0;
    st[0].scrambled = scramble(1.0, 0);
    st[0].delta = 0.5;
    st[0].delta_rank = 3;
    st[0].signal_rank = 2;
    st[1].signal_rank = 0;
    st[1].delta_rank = 2;
    st[2].signal = -0.5;
    st[2].scrambled = scramble(-0.5, 2);
    st[2].delta = 0.1;
    st[2].delta_rank = 30;
    st[2].signal_rank = 1;
    const std::string m2 = text::format_scaled4(scramble_units(-0.5, 2));
    const auto bytes = write_signal_file(MarketStamp(17), st);
    CHECK(bytes == "17,-0.33\t2\t3,\t0," + m2 + "\t1");

    auto parsed = parse_signal_file(bytes);
    CHECK(parsed.stamp == 17);
    REQUIRE(parsed.entries.size() == 3);
    CHECK(parsed.entries[0].delta_rank == 3);
    CHECK(parsed.entries[1].scrambled_token.empty());
    CHECK_FALSE(parsed.entries[2].delta_rank);
    CHECK(descramble(std::string_view(parsed.entries[0].scrambled_token), 0) == 1.0);
    CHECK_FALSE(descramble(std::string_view(parsed.entries[1].scrambled_token), 1));

    CHECK(write_signal_file(MarketStamp::closed(), st).rfind("-1,", 0) == 0);
}

TEST_CASE("s.txt parse errors") {
    CHECK_THROWS_AS(parse_signal_file("x,1\t2"), Error);
    CHECK_THROWS_AS(parse_signal_file("3,1"), Error);
    CHECK_THROWS_AS(parse_signal_file("3,1\t2\t3\t4"), Error);
    CHECK_THROWS_AS(parse_signal_file("3,1\tq"), Error);
}

TEST_CASE("sig.delta.txt") {
    std::vector<TickerRecord> tk(2);
    tk[0].symbol = "AB";
    tk[1].symbol = "CD";
    const Universe u(tk);
    std::vector<SignalState> st(2);
    st[0].signal = 1.3;
    st[0].scrambled = scramble(1.3, 0);
    st[0].delta = 0.05;
    st[0].signal_rank = 1;
    st[0].delta_rank = 0;
    st[1].signal_rank = 0;
    st[1].delta_rank = 1;
    const auto bytes = write_sig_delta(u, st);
    CHECK(bytes ==
          "Ticker\tScrambled.Signal\tSignal\tSignal.ix\tDelta\tDelta.ix\n"
          "AB\t-0.429\t1.3\t1\t0.05\t0\n"
          "CD\tNA\tNA\t0\tNA\t1");
    auto rows = parse_sig_delta(bytes);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].signal == 1.3);
    CHECK(rows[0].scrambled == -0.429);
    CHECK_FALSE(rows[1].delta);
    CHECK_THROWS_AS(parse_sig_delta("Ticker\tSignal\nA\t1"), Error);
}
