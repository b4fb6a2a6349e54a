#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vmap {

enum class ErrorCode {
    InvalidCluster,
    InvalidExchange,
    NegativeValue,
    BadSymbol,
    DuplicateSymbol,
    MissingField,
    DegenerateScale,
    ScrambleDegenerate,
    HeaderMismatch,
    ColumnCount,
    NumericParse,
    RankNotPermutation,
    EmptyUniverse,
    MalformedEntry,
    BadTierCount,
    BadConfig,
    BadSpec,
    EmptyDir,
    ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Sector codes in Table order; the numbering is also alphabetical.
enum class Cluster : int {
    Cyclicals = 0,
    Energy = 1,
    Financials = 2,
    Healthcare = 3,
    Industrials = 4,
    Materials = 5,
    NonCyclicals = 6,
    Technology = 7,
    Telecom = 8,
    Utilities = 9,
};
inline constexpr int kClusterCount = 10;

enum class Exchange : int {
    Amex = 0,
    Nyse = 1,
    Nasdaq = 2,
};
inline constexpr int kExchangeCount = 3;

std::string_view cluster_name(Cluster c);
std::string_view exchange_name(Exchange e);

// Numeric fields use 0 for "missing"; the pipeline decides what missing means.
struct TickerRecord {
    std::string symbol;
    Cluster cluster = Cluster::Cyclicals;
    Exchange exchange = Exchange::Amex;
    double market_cap = 0.0;
    double liquidity = 0.0;
    double close = 0.0;
    double last = 0.0;
    double high = 0.0;
    double low = 0.0;
    double weight = 1.0;
    std::string industry;
    std::optional<double> prev_signal;

    bool operator==(const TickerRecord&) const = default;
};

bool is_valid_symbol(std::string_view symbol);

/// Builds a record from the twelve `mkt.data.txt` fields keyed by header name.
/// Throws Error (MissingField, InvalidCluster, InvalidExchange, NegativeValue,
/// BadSymbol, NumericParse). A zero weight is read as 1.
TickerRecord validate_record(const std::map<std::string, std::string>& raw);

/// Ordered ticker list. Order is authoritative: it fixes the m.txt row order
/// and the scramble index of every ticker.
class Universe {
public:
    Universe() = default;
    explicit Universe(std::vector<TickerRecord> tickers);

    const std::vector<TickerRecord>& tickers() const noexcept { return tickers_; }
    std::size_t size() const noexcept { return tickers_.size(); }
    bool empty() const noexcept { return tickers_.empty(); }
    const TickerRecord& operator[](std::size_t i) const { return tickers_[i]; }

    /// Index of `symbol`, or nullopt.
    std::optional<std::size_t> find(std::string_view symbol) const;

    /// Copy with prev_signal replaced (missing entries clear it).
    Universe with_prev_signals(const std::vector<std::optional<double>>& prev) const;

    bool operator==(const Universe&) const = default;

private:
    std::vector<TickerRecord> tickers_;
};

struct SessionConfig {
    std::int32_t open_ssm = 34200;   // 9:30 AM
    std::int32_t close_ssm = 57600;  // 4:00 PM

    static SessionConfig regular() { return {}; }
    static SessionConfig short_day() { return {34200, 46800}; }
    static SessionConfig for_day(bool short_day) { return short_day ? SessionConfig::short_day() : regular(); }

    void validate() const;
    bool operator==(const SessionConfig&) const = default;
};

struct SignalState {
    std::optional<double> signal;     // rounded to 2 decimals
    std::optional<double> unrounded;  // residual / scale before rounding
    std::optional<double> delta;      // rounded to 4 decimals
    int signal_rank = 0;
    int delta_rank = 0;
    std::optional<double> scrambled;

    bool operator==(const SignalState&) const = default;
};

enum class MarketStatus { PreOpen, Open, Closed };

class MarketStamp {
public:
    /// -1 is Closed, 0 is PreOpen, anything positive is Open.
    explicit MarketStamp(int value);

    static MarketStamp closed() { return MarketStamp(-1); }
    static MarketStamp pre_open() { return MarketStamp(0); }

    int value() const noexcept { return value_; }
    MarketStatus status() const noexcept;

    bool operator==(const MarketStamp&) const = default;

private:
    int value_;
};

}  // namespace vmap
