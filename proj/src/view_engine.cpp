#include "vmap/view_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "json.hpp"

#include "vmap/ranking.hpp"

namespace vmap::view {

using nlohmann::json;

std::string_view to_string(Param p) {
    switch (p) {
        case Param::None: return "None";
        case Param::Clusters: return "Clusters";
        case Param::Exchanges: return "Exchanges";
        case Param::Liquidity: return "Liquidity";
        case Param::MarketCap: return "MarketCap";
    }
    return "None";
}

Param param_from_string(std::string_view s) {
    for (auto p : {Param::None, Param::Clusters, Param::Exchanges, Param::Liquidity, Param::MarketCap}) {
        if (to_string(p) == s) return p;
    }
    throw Error(ErrorCode::BadConfig, "unknown tier parameter '" + std::string(s) + "'");
}

void ViewConfig::validate() const {
    if (row_param != Param::None && row_param == col_param)
        throw Error(ErrorCode::BadConfig, "a parameter can be tiered on one axis only");
    if (selected_clusters.size() != kClusterCount || std::none_of(selected_clusters.begin(), selected_clusters.end(), [](bool b) { return b; }))
        throw Error(ErrorCode::BadConfig, "at least one cluster must be selected");
    if (selected_exchanges.size() != kExchangeCount || std::none_of(selected_exchanges.begin(), selected_exchanges.end(), [](bool b) { return b; }))
        throw Error(ErrorCode::BadConfig, "at least one exchange must be selected");
    for (int tiers : {liquidity_tiers, marketcap_tiers}) {
        if (tiers < 2 || tiers > 10) throw Error(ErrorCode::BadConfig, "tier count must be in 2..10");
    }
    if (!(signal_min >= 0.0 && signal_min <= 6.0) || std::fmod(signal_min * 4.0, 1.0) != 0.0)
        throw Error(ErrorCode::BadConfig, "signal_min must be a multiple of 0.25 in [0, 6]");
    if (flash_count < 0 || flash_count > 25) throw Error(ErrorCode::BadConfig, "flash_count must be in 0..25");
    if (!(liquidity_range.min <= liquidity_range.max) || !(marketcap_range.min <= marketcap_range.max))
        throw Error(ErrorCode::BadConfig, "range min exceeds max");
}

std::string_view to_string(Band b) {
    switch (b) {
        case Band::NA: return "NA";
        case Band::Grey01: return "Grey01";
        case Band::Green12: return "Green12";
        case Band::Blue23: return "Blue23";
        case Band::Yellow34: return "Yellow34";
        case Band::Orange45: return "Orange45";
        case Band::Red5plus: return "Red5plus";
    }
    return "NA";
}

namespace {

// Math.round semantics (half toward +infinity); NaN collapses to 0 as an int cast would.
std::int64_t hundredths(double v) {
    if (std::isnan(v)) return 0;
    return static_cast<std::int64_t>(std::floor(v * 100.0 + 0.5));
}

}  // namespace

int compare_signal(double a, double b) {
    const auto x = hundredths(a);
    const auto y = hundredths(b);
    return x > y ? 1 : (x < y ? -1 : 0);
}

ColorBand color_of(std::optional<double> signal) {
    if (!signal || std::isnan(*signal)) return {Band::NA, 0xB4B4B4};
    const double m = std::abs(*signal);
    static constexpr std::array<ColorBand, 6> bands = {{
        {Band::Red5plus, 0xF53636},
        {Band::Orange45, 0xFF9C2C},
        {Band::Yellow34, 0xF4D701},
        {Band::Blue23, 0x3380C2},
        {Band::Green12, 0x40B06C},
        {Band::Grey01, 0x666666},
    }};
    for (std::size_t i = 0; i < bands.size(); ++i) {
        if (compare_signal(m, static_cast<double>(5 - i)) >= 0) return bands[i];
    }
    return {Band::NA, 0xB4B4B4};
}

std::int64_t tier_upper_bound(std::int64_t n, int p, int k) { return n * (k + 1) / p - 1; }

QuantileTiers quantile_tiers(std::span<const int> ranks, std::span<const double> values, int p) {
    if (p < 2 || p > 10) throw Error(ErrorCode::BadTierCount, "tier count must be in 2..10");
    if (ranks.size() != values.size()) throw Error(ErrorCode::BadConfig, "quantile_tiers: length mismatch");
    const auto n = static_cast<std::int64_t>(ranks.size());
    const auto order = invert_ranks(ranks);

    QuantileTiers out;
    out.tier.assign(ranks.size(), 0);
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        int k = 0;
        while (k < p - 1 && ranks[i] > tier_upper_bound(n, p, k)) ++k;
        out.tier[i] = k;
    }
    for (int k = 0; k < p && n > 0; ++k) {
        const auto ub = std::clamp<std::int64_t>(tier_upper_bound(n, p, k), 0, n - 1);
        out.markers.push_back(values[static_cast<std::size_t>(order[static_cast<std::size_t>(ub)])]);
    }
    return out;
}

QuantRanks quant_ranks(const Universe& universe) {
    std::vector<double> caps, liqs;
    std::vector<std::string> symbols;
    for (const auto& t : universe.tickers()) {
        caps.push_back(t.market_cap);
        liqs.push_back(t.liquidity);
        symbols.push_back(t.symbol);
    }
    return {rank_quant(caps, symbols), rank_quant(liqs, symbols)};
}

namespace {

// Position among the selected entries of `display_order`, or -1 when deselected.
std::vector<int> selection_positions(const std::vector<bool>& selected, std::span<const int> display_order) {
    std::vector<int> pos(selected.size(), -1);
    int next = 0;
    for (int code : display_order) {
        if (selected[static_cast<std::size_t>(code)]) pos[static_cast<std::size_t>(code)] = next++;
    }
    return pos;
}

constexpr std::array<int, kClusterCount> kClusterOrder = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
// AMEX, NASDAQ, NYSE
constexpr std::array<int, kExchangeCount> kExchangeOrder = {0, 2, 1};

}  // namespace

GridAssignment assign_tiers(const Universe& universe, const QuantRanks& ranks, const ViewConfig& config) {
    config.validate();
    GridAssignment grid;
    grid.cells.assign(universe.size(), TickerCell{});

    auto place = [&](Param axis_param, bool rows) {
        if (axis_param == Param::None) return;
        int count = 1;
        std::vector<int> index(universe.size(), 0);
        std::vector<double> markers;
        if (axis_param == Param::Clusters) {
            auto pos = selection_positions(config.selected_clusters, kClusterOrder);
            count = static_cast<int>(std::count(config.selected_clusters.begin(), config.selected_clusters.end(), true));
            for (std::size_t i = 0; i < universe.size(); ++i) index[i] = pos[static_cast<std::size_t>(universe[i].cluster)];
        } else if (axis_param == Param::Exchanges) {
            auto pos = selection_positions(config.selected_exchanges, kExchangeOrder);
            count = static_cast<int>(std::count(config.selected_exchanges.begin(), config.selected_exchanges.end(), true));
            for (std::size_t i = 0; i < universe.size(); ++i) index[i] = pos[static_cast<std::size_t>(universe[i].exchange)];
        } else {
            const bool liq = axis_param == Param::Liquidity;
            std::vector<double> values(universe.size());
            for (std::size_t i = 0; i < universe.size(); ++i) values[i] = liq ? universe[i].liquidity : universe[i].market_cap;
            count = liq ? config.liquidity_tiers : config.marketcap_tiers;
            auto q = quantile_tiers(liq ? ranks.liquidity : ranks.cap, values, count);
            index = std::move(q.tier);
            markers = std::move(q.markers);
        }
        for (std::size_t i = 0; i < universe.size(); ++i) (rows ? grid.cells[i].row : grid.cells[i].col) = index[i];
        (rows ? grid.matrix_rows : grid.matrix_cols) = count;
        (rows ? grid.tier_markers_rows : grid.tier_markers_cols) = std::move(markers);
    };
    place(config.row_param, true);
    place(config.col_param, false);
    grid.dropped.assign(static_cast<std::size_t>(grid.matrix_rows * grid.matrix_cols), 0);
    return grid;
}

std::vector<bool> apply_filters(const Universe& universe, std::span<const SignalState> states, const ViewConfig& config) {
    if (states.size() != universe.size()) throw Error(ErrorCode::BadConfig, "apply_filters: length mismatch");
    std::vector<bool> excluded(universe.size(), false);
    const bool liq_filtered = !config.is_tiered(Param::Liquidity);
    const bool cap_filtered = !config.is_tiered(Param::MarketCap);
    for (std::size_t i = 0; i < universe.size(); ++i) {
        const auto& t = universe[i];
        bool out = !config.selected_clusters[static_cast<std::size_t>(t.cluster)] ||
                   !config.selected_exchanges[static_cast<std::size_t>(t.exchange)];
        if (liq_filtered && (t.liquidity < config.liquidity_range.min || t.liquidity > config.liquidity_range.max)) out = true;
        if (cap_filtered && (t.market_cap < config.marketcap_range.min || t.market_cap > config.marketcap_range.max)) out = true;

        const double mag = states[i].signal ? std::abs(*states[i].signal) : std::nan("");
        if (compare_signal(mag, config.signal_min) == -1) out = true;
        if (compare_signal(mag, config.signal_max) == 1) out = true;
        if (config.signal_min > 0.0 && !states[i].signal) out = true;
        excluded[i] = out;
    }
    return excluded;
}

std::vector<bool> select_flashing(std::span<const SignalState> states, int flash_count) {
    std::vector<bool> flags(states.size(), false);
    for (std::size_t i = 0; i < states.size(); ++i) {
        flags[i] = states[i].delta.has_value() && states[i].delta_rank < flash_count;
    }
    return flags;
}

void layout_grid(GridAssignment& grid, std::span<const SignalState> states, int capacity) {
    if (states.size() != grid.cells.size()) throw Error(ErrorCode::BadConfig, "layout_grid: length mismatch");
    const auto buckets = static_cast<std::size_t>(grid.matrix_rows * grid.matrix_cols);
    std::vector<int> filled(buckets, 0);
    grid.dropped.assign(buckets, 0);

    std::vector<int> ranks(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) ranks[i] = states[i].signal_rank;
    const auto order = invert_ranks(ranks);

    for (auto& c : grid.cells) c.slot = -1;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto i = static_cast<std::size_t>(*it);
        auto& cell = grid.cells[i];
        if (cell.excluded) continue;
        const auto b = static_cast<std::size_t>(grid.bucket_of(i));
        if (filled[b] < capacity) {
            cell.slot = filled[b]++;
        } else {
            ++grid.dropped[b];
        }
    }
}

GridAssignment build_view(const Universe& universe, std::span<const SignalState> states, const ViewConfig& config,
                          int capacity) {
    auto grid = assign_tiers(universe, quant_ranks(universe), config);
    const auto excluded = apply_filters(universe, states, config);
    const auto flashing = select_flashing(states, config.flash_count);
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        grid.cells[i].excluded = excluded[i];
        grid.cells[i].flashing = flashing[i];
        grid.cells[i].color = color_of(states[i].signal);
    }
    layout_grid(grid, states, capacity);
    return grid;
}

SliderScale slider_scale(double max_value) {
    const auto max_millions = static_cast<std::int64_t>(max_value / 1000000.0);
    SliderScale s;
    std::int64_t value = 0;
    std::int64_t step = 1;
    while (true) {
        s.ticks.push_back(value);
        if (value == step * 10) {
            s.markers.push_back(value);
            step *= 10;
        }
        if (value > max_millions) break;
        value += step;
    }
    return s;
}

namespace {

json range_json(const Range& r) {
    return {{"min", r.min}, {"max", std::isfinite(r.max) ? json(r.max) : json(nullptr)}};
}

Range range_from(const json& j) {
    Range r;
    r.min = j.at("min").get<double>();
    r.max = j.at("max").is_null() ? std::numeric_limits<double>::infinity() : j.at("max").get<double>();
    return r;
}

std::string hex_string(std::uint32_t hex) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "0x%06X", static_cast<unsigned>(hex));
    return buf;
}

json config_json(const ViewConfig& c) {
    return {
        {"row_param", to_string(c.row_param)},
        {"col_param", to_string(c.col_param)},
        {"selected_clusters", c.selected_clusters},
        {"selected_exchanges", c.selected_exchanges},
        {"liquidity_range", range_json(c.liquidity_range)},
        {"marketcap_range", range_json(c.marketcap_range)},
        {"liquidity_tiers", c.liquidity_tiers},
        {"marketcap_tiers", c.marketcap_tiers},
        {"signal_min", c.signal_min},
        {"flash_count", c.flash_count},
    };
}

ViewConfig config_from(const json& j) {
    ViewConfig c;
    c.row_param = param_from_string(j.at("row_param").get<std::string>());
    c.col_param = param_from_string(j.at("col_param").get<std::string>());
    c.selected_clusters = j.at("selected_clusters").get<std::vector<bool>>();
    c.selected_exchanges = j.at("selected_exchanges").get<std::vector<bool>>();
    c.liquidity_range = range_from(j.at("liquidity_range"));
    c.marketcap_range = range_from(j.at("marketcap_range"));
    c.liquidity_tiers = j.at("liquidity_tiers").get<int>();
    c.marketcap_tiers = j.at("marketcap_tiers").get<int>();
    c.signal_min = j.at("signal_min").get<double>();
    c.flash_count = j.at("flash_count").get<int>();
    return c;
}

Band band_from(std::string_view s) {
    for (auto b : {Band::NA, Band::Grey01, Band::Green12, Band::Blue23, Band::Yellow34, Band::Orange45, Band::Red5plus}) {
        if (to_string(b) == s) return b;
    }
    throw Error(ErrorCode::ParseError, "unknown color band '" + std::string(s) + "'");
}

}  // namespace

std::string export_view_fixture(const Universe& universe, std::span<const SignalState> states,
                                const ViewConfig& config, int capacity) {
    const auto grid = build_view(universe, states, config, capacity);
    json tickers = json::array();
    for (std::size_t i = 0; i < universe.size(); ++i) {
        const auto& c = grid.cells[i];
        tickers.push_back({
            {"symbol", universe[i].symbol},
            {"signal", states[i].signal ? json(*states[i].signal) : json(nullptr)},
            {"row", c.row},
            {"col", c.col},
            {"excluded", c.excluded},
            {"flashing", c.flashing},
            {"band", to_string(c.color.band)},
            {"color", hex_string(c.color.hex)},
            {"slot", c.slot},
        });
    }
    json doc = {
        {"config", config_json(config)},
        {"capacity", capacity},
        {"matrix_rows", grid.matrix_rows},
        {"matrix_cols", grid.matrix_cols},
        {"tier_markers_rows", grid.tier_markers_rows},
        {"tier_markers_cols", grid.tier_markers_cols},
        {"dropped", grid.dropped},
        {"tickers", tickers},
    };
    return doc.dump(2) + "\n";
}

ViewFixture parse_view_fixture(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("view fixture: ") + e.what());
    }
    ViewFixture f;
    f.config = config_from(doc.at("config"));
    f.capacity = doc.at("capacity").get<int>();
    f.grid.matrix_rows = doc.at("matrix_rows").get<int>();
    f.grid.matrix_cols = doc.at("matrix_cols").get<int>();
    f.grid.tier_markers_rows = doc.at("tier_markers_rows").get<std::vector<double>>();
    f.grid.tier_markers_cols = doc.at("tier_markers_cols").get<std::vector<double>>();
    f.grid.dropped = doc.at("dropped").get<std::vector<int>>();
    for (const auto& t : doc.at("tickers")) {
        f.symbols.push_back(t.at("symbol").get<std::string>());
        f.signals.push_back(t.at("signal").is_null() ? std::nullopt : std::optional<double>(t.at("signal").get<double>()));
        TickerCell c;
        c.row = t.at("row").get<int>();
        c.col = t.at("col").get<int>();
        c.excluded = t.at("excluded").get<bool>();
        c.flashing = t.at("flashing").get<bool>();
        c.color.band = band_from(t.at("band").get<std::string>());
        c.color.hex = static_cast<std::uint32_t>(std::stoul(t.at("color").get<std::string>(), nullptr, 16));
        c.slot = t.at("slot").get<int>();
        f.grid.cells.push_back(c);
    }
    return f;
}

}  // namespace vmap::view
