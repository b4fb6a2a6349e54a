#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vmap/core_model.hpp"

// Readers and writers for the four plain-text artifacts. All writers emit LF
// line endings and no newline after the final line.
namespace vmap::codecs {

inline constexpr std::string_view kMarketHeader =
    "Ticker\tSector\tExchange\tMktCap\tLiquidity\tClose\tLast\tHigh\tLow\tWeight\tIndNames\tSignal";
inline constexpr std::string_view kSigDeltaHeader = "Ticker\tScrambled.Signal\tSignal\tSignal.ix\tDelta\tDelta.ix";

// mkt.data.txt ------------------------------------------------------------

/// Throws HeaderMismatch, ColumnCount, NumericParse (messages carry the line
/// number) and any validate_record error.
Universe parse_market_snapshot(std::string_view bytes);

/// Inverse of parse_market_snapshot; missing prev_signal prints "NA".
std::string write_market_snapshot(const Universe& universe);

// m.txt -------------------------------------------------------------------

struct MapFileRow {
    std::string symbol;
    int cluster = 0;
    int exchange = 0;
    double market_cap = 0.0;
    int cap_rank = 0;
    double liquidity = 0.0;
    int liq_rank = 0;

    bool operator==(const MapFileRow&) const = default;
};

std::string write_map_file(const Universe& universe, std::span<const int> cap_ranks, std::span<const int> liq_ranks);

/// Ranks both columns with rank_quant and writes the file.
std::string write_map_file(const Universe& universe);

std::vector<MapFileRow> parse_map_file(std::string_view bytes);

// s.txt -------------------------------------------------------------------

struct SignalFileEntry {
    std::string scrambled_token;  // "*" pre-open, "" missing, else decimal
    int signal_rank = 0;
    std::optional<int> delta_rank;

    bool operator==(const SignalFileEntry&) const = default;
};

struct SignalFile {
    int stamp = 0;
    std::vector<SignalFileEntry> entries;

    bool operator==(const SignalFile&) const = default;
};

/// Scrambled token for one state: at most 4 decimals, trailing zeros trimmed.
std::string scrambled_token(const SignalState& state);

std::string write_signal_file(const MarketStamp& stamp, std::span<const SignalState> states);
SignalFile parse_signal_file(std::string_view bytes);

// sig.delta.txt -----------------------------------------------------------

struct SigDeltaRow {
    std::string symbol;
    std::optional<double> scrambled;
    std::optional<double> signal;
    int signal_rank = 0;
    std::optional<double> delta;
    int delta_rank = 0;

    bool operator==(const SigDeltaRow&) const = default;
};

std::string write_sig_delta(const Universe& universe, std::span<const SignalState> states);
std::vector<SigDeltaRow> parse_sig_delta(std::string_view bytes);

}  // namespace vmap::codecs
