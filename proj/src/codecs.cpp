#include "vmap/codecs.hpp"

#include <cmath>
#include <map>

#include "vmap/ranking.hpp"
#include "vmap/signal_engine.hpp"
#include "vmap/text.hpp"

namespace vmap::codecs {

namespace {

constexpr int kMarketColumns = 12;

// Splits into lines, dropping one trailing empty line and any CR before LF.
std::vector<std::string_view> lines_of(std::string_view bytes) {
    auto lines = text::split(bytes, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    for (auto& l : lines) {
        if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    }
    return lines;
}

void join_lines(std::string& out, const std::vector<std::string>& lines) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i];
    }
}

std::string line_tag(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

int int_field(std::string_view token, std::size_t line_no, std::string_view column) {
    auto v = text::parse_int(token);
    if (!v) throw Error(ErrorCode::NumericParse, line_tag(line_no) + std::string(column) + " '" + std::string(token) + "'");
    return static_cast<int>(*v);
}

double num_field(std::string_view token, std::size_t line_no, std::string_view column) {
    auto v = text::parse_double(token);
    if (!v) throw Error(ErrorCode::NumericParse, line_tag(line_no) + std::string(column) + " '" + std::string(token) + "'");
    return *v;
}

std::optional<double> na_field(std::string_view token, std::size_t line_no, std::string_view column) {
    if (token == "NA" || token.empty()) return std::nullopt;
    return num_field(token, line_no, column);
}

std::string na_or(const std::optional<double>& v) { return v ? text::format_plain(*v) : "NA"; }

std::string na_or_scaled4(const std::optional<double>& v) {
    return v ? text::format_scaled4(std::llround(*v * 10000.0)) : "NA";
}

}  // namespace

Universe parse_market_snapshot(std::string_view bytes) {
    auto lines = lines_of(bytes);
    if (lines.empty() || lines.front() != kMarketHeader)
        throw Error(ErrorCode::HeaderMismatch, "line 1: expected the 12-column mkt.data.txt header");

    static const auto names = text::split(kMarketHeader, '\t');
    std::vector<TickerRecord> records;
    records.reserve(lines.size() - 1);
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        auto cols = text::split(lines[ln], '\t');
        if (cols.size() != kMarketColumns)
            throw Error(ErrorCode::ColumnCount, line_tag(ln + 1) + "expected 12 columns, got " + std::to_string(cols.size()));
        std::map<std::string, std::string> raw;
        for (int c = 0; c < kMarketColumns; ++c) raw.emplace(std::string(names[c]), std::string(cols[c]));
        try {
            records.push_back(validate_record(raw));
        } catch (const Error& e) {
            throw Error(e.code(), line_tag(ln + 1) + e.what());
        }
    }
    return Universe(std::move(records));
}

std::string write_market_snapshot(const Universe& universe) {
    std::vector<std::string> lines;
    lines.reserve(universe.size() + 1);
    lines.emplace_back(kMarketHeader);
    for (const auto& t : universe.tickers()) {
        std::string l = t.symbol;
        l += '\t' + std::to_string(static_cast<int>(t.cluster));
        l += '\t' + std::to_string(static_cast<int>(t.exchange));
        for (double v : {t.market_cap, t.liquidity, t.close, t.last, t.high, t.low, t.weight}) {
            l += '\t' + text::format_plain(v);
        }
        l += '\t' + t.industry;
        l += '\t' + na_or(t.prev_signal);
        lines.push_back(std::move(l));
    }
    std::string out;
    join_lines(out, lines);
    return out;
}

std::string write_map_file(const Universe& universe, std::span<const int> cap_ranks, std::span<const int> liq_ranks) {
    if (universe.empty()) throw Error(ErrorCode::EmptyUniverse, "m.txt needs at least one ticker");
    if (cap_ranks.size() != universe.size() || !is_permutation_of_indices(cap_ranks))
        throw Error(ErrorCode::RankNotPermutation, "market cap ranks are not a permutation");
    if (liq_ranks.size() != universe.size() || !is_permutation_of_indices(liq_ranks))
        throw Error(ErrorCode::RankNotPermutation, "liquidity ranks are not a permutation");

    std::vector<std::string> lines;
    lines.reserve(universe.size());
    for (std::size_t i = 0; i < universe.size(); ++i) {
        const auto& t = universe[i];
        std::string l = t.symbol;
        l += '\t' + std::to_string(static_cast<int>(t.cluster));
        l += '\t' + std::to_string(static_cast<int>(t.exchange));
        l += '\t' + text::format_plain(t.market_cap);
        l += '\t' + std::to_string(cap_ranks[i]);
        l += '\t' + text::format_plain(t.liquidity);
        l += '\t' + std::to_string(liq_ranks[i]);
        lines.push_back(std::move(l));
    }
    std::string out;
    join_lines(out, lines);
    return out;
}

std::string write_map_file(const Universe& universe) {
    std::vector<double> caps, liqs;
    std::vector<std::string> symbols;
    for (const auto& t : universe.tickers()) {
        caps.push_back(t.market_cap);
        liqs.push_back(t.liquidity);
        symbols.push_back(t.symbol);
    }
    return write_map_file(universe, rank_quant(caps, symbols), rank_quant(liqs, symbols));
}

std::vector<MapFileRow> parse_map_file(std::string_view bytes) {
    std::vector<MapFileRow> rows;
    auto lines = lines_of(bytes);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        auto cols = text::split(lines[ln], '\t');
        if (cols.size() != 7)
            throw Error(ErrorCode::ColumnCount, line_tag(ln + 1) + "expected 7 columns, got " + std::to_string(cols.size()));
        MapFileRow r;
        r.symbol = std::string(cols[0]);
        r.cluster = int_field(cols[1], ln + 1, "cluster");
        r.exchange = int_field(cols[2], ln + 1, "exchange");
        r.market_cap = num_field(cols[3], ln + 1, "market cap");
        r.cap_rank = int_field(cols[4], ln + 1, "cap rank");
        r.liquidity = num_field(cols[5], ln + 1, "liquidity");
        r.liq_rank = int_field(cols[6], ln + 1, "liquidity rank");
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string scrambled_token(const SignalState& state) {
    if (!state.scrambled) return "";
    return text::format_scaled4(std::llround(*state.scrambled * 10000.0));
}

std::string write_signal_file(const MarketStamp& stamp, std::span<const SignalState> states) {
    const bool pre_open = stamp.status() == MarketStatus::PreOpen;
    std::string out = std::to_string(stamp.value());
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& st = states[i];
        out += ',';
        out += pre_open ? std::string("*") : scrambled_token(st);
        out += '\t';
        out += std::to_string(st.signal_rank);
        if (!pre_open && st.delta && st.delta_rank < kMaxFlashing) {
            out += '\t';
            out += std::to_string(st.delta_rank);
        }
    }
    return out;
}

SignalFile parse_signal_file(std::string_view bytes) {
    while (!bytes.empty() && (bytes.back() == '\n' || bytes.back() == '\r')) bytes.remove_suffix(1);
    SignalFile file;
    auto parts = text::split(bytes, ',');
    auto stamp = text::parse_int(parts.front());
    if (!stamp) throw Error(ErrorCode::MalformedEntry, "stamp '" + std::string(parts.front()) + "'");
    file.stamp = static_cast<int>(*stamp);
    for (std::size_t i = 1; i < parts.size(); ++i) {
        auto fields = text::split(parts[i], '\t');
        const auto index = std::to_string(i - 1);
        if (fields.size() < 2 || fields.size() > 3) throw Error(ErrorCode::MalformedEntry, "entry " + index + ": field count");
        SignalFileEntry e;
        e.scrambled_token = std::string(fields[0]);
        auto rank = text::parse_int(fields[1]);
        if (!rank) throw Error(ErrorCode::MalformedEntry, "entry " + index + ": signal rank");
        e.signal_rank = static_cast<int>(*rank);
        if (fields.size() == 3) {
            auto d = text::parse_int(fields[2]);
            if (!d) throw Error(ErrorCode::MalformedEntry, "entry " + index + ": delta rank");
            e.delta_rank = static_cast<int>(*d);
        }
        file.entries.push_back(std::move(e));
    }
    return file;
}

std::string write_sig_delta(const Universe& universe, std::span<const SignalState> states) {
    if (states.size() != universe.size()) throw Error(ErrorCode::BadConfig, "sig.delta: length mismatch");
    std::vector<std::string> lines;
    lines.reserve(universe.size() + 1);
    lines.emplace_back(kSigDeltaHeader);
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto& st = states[i];
        std::string l = universe[i].symbol;
        l += '\t' + na_or_scaled4(st.scrambled);
        l += '\t' + na_or(st.signal);
        l += '\t' + std::to_string(st.signal_rank);
        l += '\t' + na_or(st.delta);
        l += '\t' + std::to_string(st.delta_rank);
        lines.push_back(std::move(l));
    }
    std::string out;
    join_lines(out, lines);
    return out;
}

std::vector<SigDeltaRow> parse_sig_delta(std::string_view bytes) {
    auto lines = lines_of(bytes);
    if (lines.empty() || lines.front() != kSigDeltaHeader)
        throw Error(ErrorCode::HeaderMismatch, "line 1: expected the sig.delta.txt header");
    std::vector<SigDeltaRow> rows;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        auto cols = text::split(lines[ln], '\t');
        if (cols.size() != 6)
            throw Error(ErrorCode::ColumnCount, line_tag(ln + 1) + "expected 6 columns, got " + std::to_string(cols.size()));
        SigDeltaRow r;
        r.symbol = std::string(cols[0]);
        r.scrambled = na_field(cols[1], ln + 1, "Scrambled.Signal");
        r.signal = na_field(cols[2], ln + 1, "Signal");
        r.signal_rank = int_field(cols[3], ln + 1, "Signal.ix");
        r.delta = na_field(cols[4], ln + 1, "Delta");
        r.delta_rank = int_field(cols[5], ln + 1, "Delta.ix");
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace vmap::codecs
