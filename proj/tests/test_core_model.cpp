#include "doctest.h"
#include "vmap/core_model.hpp"

using namespace vmap;

namespace {

std::map<std::string, std::string> row(std::map<std::string, std::string> overrides = {}) {
    std::map<std::string, std::string> r{{"Ticker", "KO"},     {"Sector", "6"},      {"Exchange", "1"},
                                         {"MktCap", "1.8e11"}, {"Liquidity", "8e8"}, {"Close", "44.1"},
                                         {"Last", "44.5"},     {"High", "44.6"},     {"Low", "43.9"},
                                         {"Weight", "1"},      {"IndNames", "Beverages"}, {"Signal", "NA"}};
    for (auto& [k, v] : overrides) r[k] = v;
    return r;
}

ErrorCode code_of(const std::map<std::string, std::string>& raw) {
    try {
        validate_record(raw);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error");
    return ErrorCode::ParseError;
}

}  // namespace

TEST_CASE("validate_record maps a well-formed row") {
    auto r = validate_record(row());
    CHECK(r.symbol == "KO");
    CHECK(r.cluster == Cluster::NonCyclicals);
    CHECK(cluster_name(r.cluster) == "Non-Cyclicals");
    CHECK(r.exchange == Exchange::Nyse);
    CHECK(r.market_cap == 1.8e11);
    CHECK(r.industry == "Beverages");
    CHECK_FALSE(r.prev_signal.has_value());
}

TEST_CASE("validate_record field rules") {
    CHECK(code_of(row({{"Sector", "10"}})) == ErrorCode::InvalidCluster);
    CHECK(code_of(row({{"Sector", "-1"}})) == ErrorCode::InvalidCluster);
    CHECK(code_of(row({{"Exchange", "3"}})) == ErrorCode::InvalidExchange);
    CHECK(code_of(row({{"Last", "-2"}})) == ErrorCode::NegativeValue);
    CHECK(code_of(row({{"Ticker", "ko"}})) == ErrorCode::BadSymbol);
    CHECK(code_of(row({{"Ticker", "ABCDEFG"}})) == ErrorCode::BadSymbol);
    CHECK(code_of(row({{"Last", "abc"}})) == ErrorCode::NumericParse);

    auto raw = row();
    raw.erase("Low");
    CHECK(code_of(raw) == ErrorCode::MissingField);

    CHECK(validate_record(row({{"Close", "0"}})).close == 0.0);
    CHECK(validate_record(row({{"Weight", "0"}})).weight == 1.0);
    CHECK(validate_record(row({{"Weight", "0.5"}})).weight == 0.5);
    CHECK(validate_record(row({{"Signal", "-1.25"}})).prev_signal == -1.25);
    CHECK(validate_record(row({{"Signal", ""}})).prev_signal == std::nullopt);
    CHECK(validate_record(row({{"Ticker", "BRK.B"}})).symbol == "BRK.B");
}

TEST_CASE("exchange letters map to codes") {
    CHECK(validate_record(row({{"Exchange", "A"}})).exchange == Exchange::Amex);
    CHECK(validate_record(row({{"Exchange", "N"}})).exchange == Exchange::Nyse);
    CHECK(validate_record(row({{"Exchange", "Q"}})).exchange == Exchange::Nasdaq);
}

TEST_CASE("universe rejects duplicates and keeps order") {
    TickerRecord a, b;
    a.symbol = "AA";
    b.symbol = "BB";
    Universe u({b, a});
    CHECK(u[0].symbol == "BB");
    CHECK(u.find("AA") == 1);
    CHECK_FALSE(u.find("CC"));
    CHECK_THROWS_AS(Universe({a, a}), Error);

    auto carried = u.with_prev_signals({1.5, std::nullopt});
    CHECK(carried[0].prev_signal == 1.5);
    CHECK_FALSE(carried[1].prev_signal);
}

TEST_CASE("session config") {
    CHECK_NOTHROW(SessionConfig{}.validate());
    CHECK(SessionConfig::for_day(true).close_ssm == 46800);
    CHECK_THROWS_AS((SessionConfig{50000, 40000}.validate()), Error);
    CHECK_THROWS_AS((SessionConfig{0, 40000}.validate()), Error);
    CHECK_THROWS_AS((SessionConfig{100, 86400}.validate()), Error);
}

TEST_CASE("market stamp status") {
    CHECK(MarketStamp(-1).status() == MarketStatus::Closed);
    CHECK(MarketStamp(0).status() == MarketStatus::PreOpen);
    CHECK(MarketStamp(390).status() == MarketStatus::Open);
    CHECK_THROWS_AS(MarketStamp(-2), Error);
}
