#include "vmap/core_model.hpp"

#include <array>
#include <cmath>
#include <unordered_set>

#include "vmap/text.hpp"

namespace vmap {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidCluster: return "InvalidCluster";
        case ErrorCode::InvalidExchange: return "InvalidExchange";
        case ErrorCode::NegativeValue: return "NegativeValue";
        case ErrorCode::BadSymbol: return "BadSymbol";
        case ErrorCode::DuplicateSymbol: return "DuplicateSymbol";
        case ErrorCode::MissingField: return "MissingField";
        case ErrorCode::DegenerateScale: return "DegenerateScale";
        case ErrorCode::ScrambleDegenerate: return "ScrambleDegenerate";
        case ErrorCode::HeaderMismatch: return "HeaderMismatch";
        case ErrorCode::ColumnCount: return "ColumnCount";
        case ErrorCode::NumericParse: return "NumericParse";
        case ErrorCode::RankNotPermutation: return "RankNotPermutation";
        case ErrorCode::EmptyUniverse: return "EmptyUniverse";
        case ErrorCode::MalformedEntry: return "MalformedEntry";
        case ErrorCode::BadTierCount: return "BadTierCount";
        case ErrorCode::BadConfig: return "BadConfig";
        case ErrorCode::BadSpec: return "BadSpec";
        case ErrorCode::EmptyDir: return "EmptyDir";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

std::string_view cluster_name(Cluster c) {
    static constexpr std::array<std::string_view, kClusterCount> names = {
        "Cyclicals", "Energy", "Financials", "Healthcare", "Industrials",
        "Materials", "Non-Cyclicals", "Technology", "Telecom", "Utilities"};
    return names.at(static_cast<std::size_t>(c));
}

std::string_view exchange_name(Exchange e) {
    switch (e) {
        case Exchange::Amex: return "AMEX";
        case Exchange::Nyse: return "NYSE";
        case Exchange::Nasdaq: return "NASDAQ";
    }
    return "INVALID EXCHANGE";
}

bool is_valid_symbol(std::string_view symbol) {
    if (symbol.empty() || symbol.size() > 6) return false;
    for (char c : symbol) {
        if (!((c >= 'A' && c <= 'Z') || c == '.')) return false;
    }
    return true;
}

namespace {

const std::string& field(const std::map<std::string, std::string>& raw, const std::string& name) {
    auto it = raw.find(name);
    if (it == raw.end()) throw Error(ErrorCode::MissingField, "missing field " + name);
    return it->second;
}

// Missing numeric inputs are zeros; NA and empty are accepted as zero too.
double amount(const std::map<std::string, std::string>& raw, const std::string& name) {
    const auto& token = field(raw, name);
    if (token.empty() || token == "NA") return 0.0;
    auto v = text::parse_double(token);
    if (!v || !std::isfinite(*v)) throw Error(ErrorCode::NumericParse, name + ": cannot parse '" + token + "'");
    if (*v < 0.0) throw Error(ErrorCode::NegativeValue, name + " is negative: " + token);
    return *v;
}

Exchange parse_exchange(const std::string& token) {
    if (token == "A") return Exchange::Amex;
    if (token == "N") return Exchange::Nyse;
    if (token == "Q") return Exchange::Nasdaq;
    auto code = text::parse_int(token);
    if (!code || *code < 0 || *code >= kExchangeCount)
        throw Error(ErrorCode::InvalidExchange, "invalid exchange '" + token + "'");
    return static_cast<Exchange>(*code);
}

}  // namespace

TickerRecord validate_record(const std::map<std::string, std::string>& raw) {
    TickerRecord rec;
    rec.symbol = field(raw, "Ticker");
    if (!is_valid_symbol(rec.symbol)) throw Error(ErrorCode::BadSymbol, "bad symbol '" + rec.symbol + "'");

    const auto& sector = field(raw, "Sector");
    auto code = text::parse_int(sector);
    if (!code) {
        auto as_double = text::parse_double(sector);
        if (!as_double) throw Error(ErrorCode::NumericParse, "Sector: cannot parse '" + sector + "'");
        if (*as_double != std::floor(*as_double))
            throw Error(ErrorCode::InvalidCluster, "invalid cluster '" + sector + "'");
        code = static_cast<std::int64_t>(*as_double);
    }
    if (*code < 0 || *code >= kClusterCount) throw Error(ErrorCode::InvalidCluster, "invalid cluster '" + sector + "'");
    rec.cluster = static_cast<Cluster>(*code);
    rec.exchange = parse_exchange(field(raw, "Exchange"));

    rec.market_cap = amount(raw, "MktCap");
    rec.liquidity = amount(raw, "Liquidity");
    rec.close = amount(raw, "Close");
    rec.last = amount(raw, "Last");
    rec.high = amount(raw, "High");
    rec.low = amount(raw, "Low");
    rec.weight = amount(raw, "Weight");
    if (rec.weight == 0.0) rec.weight = 1.0;

    rec.industry = field(raw, "IndNames");
    if (rec.industry == "NA") rec.industry.clear();

    const auto& sig = field(raw, "Signal");
    if (!sig.empty() && sig != "NA") {
        auto v = text::parse_double(sig);
        if (!v) throw Error(ErrorCode::NumericParse, "Signal: cannot parse '" + sig + "'");
        if (std::isfinite(*v)) rec.prev_signal = *v;
    }
    return rec;
}

Universe::Universe(std::vector<TickerRecord> tickers) : tickers_(std::move(tickers)) {
    std::unordered_set<std::string_view> seen;
    seen.reserve(tickers_.size());
    for (const auto& t : tickers_) {
        if (!seen.insert(t.symbol).second) throw Error(ErrorCode::DuplicateSymbol, "duplicate symbol " + t.symbol);
    }
}

std::optional<std::size_t> Universe::find(std::string_view symbol) const {
    for (std::size_t i = 0; i < tickers_.size(); ++i) {
        if (tickers_[i].symbol == symbol) return i;
    }
    return std::nullopt;
}

Universe Universe::with_prev_signals(const std::vector<std::optional<double>>& prev) const {
    Universe copy = *this;
    for (std::size_t i = 0; i < copy.tickers_.size() && i < prev.size(); ++i) {
        copy.tickers_[i].prev_signal = prev[i];
    }
    return copy;
}

void SessionConfig::validate() const {
    if (!(0 < open_ssm && open_ssm < close_ssm && close_ssm < 86400))
        throw Error(ErrorCode::BadConfig, "session must satisfy 0 < open < close < 86400");
}

MarketStamp::MarketStamp(int value) : value_(value) {
    if (value < -1) throw Error(ErrorCode::BadConfig, "stamp below -1");
}

MarketStatus MarketStamp::status() const noexcept {
    if (value_ < 0) return MarketStatus::Closed;
    if (value_ == 0) return MarketStatus::PreOpen;
    return MarketStatus::Open;
}

}  // namespace vmap
