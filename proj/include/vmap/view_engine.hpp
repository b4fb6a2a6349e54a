#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vmap/core_model.hpp"

// Headless display semantics of the grid client: tiering, filtering,
// flashing, color bands and bucket layout.
namespace vmap::view {

enum class Param { None, Clusters, Exchanges, Liquidity, MarketCap };

std::string_view to_string(Param p);
Param param_from_string(std::string_view s);

struct Range {
    double min = 0.0;
    double max = std::numeric_limits<double>::infinity();

    bool operator==(const Range&) const = default;
};

struct ViewConfig {
    Param row_param = Param::None;
    Param col_param = Param::None;
    std::vector<bool> selected_clusters = std::vector<bool>(kClusterCount, true);
    std::vector<bool> selected_exchanges = std::vector<bool>(kExchangeCount, true);
    Range liquidity_range;
    Range marketcap_range;
    int liquidity_tiers = 2;
    int marketcap_tiers = 2;
    double signal_min = 0.0;
    double signal_max = 9999.0;  // not user adjustable
    int flash_count = 15;

    bool is_tiered(Param p) const { return p != Param::None && (row_param == p || col_param == p); }

    /// Throws BadConfig on a broken invariant: same parameter on both axes,
    /// empty cluster or exchange selection, tier counts outside 2..10,
    /// signal_min outside [0, 6] or off the 0.25 grid, flash_count outside 0..25.
    void validate() const;

    bool operator==(const ViewConfig&) const = default;
};

// Color bands ---------------------------------------------------------------

enum class Band { NA, Grey01, Green12, Blue23, Yellow34, Orange45, Red5plus };

struct ColorBand {
    Band band = Band::NA;
    std::uint32_t hex = 0xB4B4B4;

    bool operator==(const ColorBand&) const = default;
};

std::string_view to_string(Band b);

/// Compares two signals at hundredths resolution: -1, 0 or 1. A NaN compares as 0.
int compare_signal(double a, double b);

ColorBand color_of(std::optional<double> signal);

// Tiering -------------------------------------------------------------------

struct QuantileTiers {
    std::vector<int> tier;        // per ticker
    std::vector<double> markers;  // per tier: value of its last ticker
};

/// Upper bound position of tier k for N tickers split into p tiers.
std::int64_t tier_upper_bound(std::int64_t n, int p, int k);

/// `ranks` are ascending 0-based positions by the parameter (rank_quant);
/// `values` the parameter values. Throws BadTierCount unless 2 <= p <= 10.
QuantileTiers quantile_tiers(std::span<const int> ranks, std::span<const double> values, int p);

struct TickerCell {
    int row = 0;
    int col = 0;
    bool excluded = false;
    bool flashing = false;
    ColorBand color;
    int slot = -1;  // position inside its bucket, -1 when not drawn

    bool operator==(const TickerCell&) const = default;
};

struct GridAssignment {
    int matrix_rows = 1;
    int matrix_cols = 1;
    std::vector<TickerCell> cells;
    std::vector<double> tier_markers_rows;
    std::vector<double> tier_markers_cols;
    std::vector<int> dropped;  // per bucket, filled by layout_grid

    int bucket_of(std::size_t ticker) const { return cells[ticker].row * matrix_cols + cells[ticker].col; }

    bool operator==(const GridAssignment&) const = default;
};

struct QuantRanks {
    std::vector<int> cap;
    std::vector<int> liquidity;
};

/// rank_quant over market cap and liquidity, as published in m.txt.
QuantRanks quant_ranks(const Universe& universe);

/// Row and column per ticker. Tickers in a deselected cluster or exchange on
/// a tiered axis get index -1; apply_filters excludes them.
GridAssignment assign_tiers(const Universe& universe, const QuantRanks& ranks, const ViewConfig& config);

std::vector<bool> apply_filters(const Universe& universe, std::span<const SignalState> states, const ViewConfig& config);

std::vector<bool> select_flashing(std::span<const SignalState> states, int flash_count);

/// Fills slot and dropped: each bucket takes its non-excluded tickers in
/// descending |signal| order until `capacity` is reached.
void layout_grid(GridAssignment& assignment, std::span<const SignalState> states, int capacity);

/// Everything above in one call: tiers, filters, flashing, colors, layout.
GridAssignment build_view(const Universe& universe, std::span<const SignalState> states, const ViewConfig& config,
                          int capacity);

// Slider ----------------------------------------------------------------------

struct SliderScale {
    std::vector<std::int64_t> ticks;    // millions
    std::vector<std::int64_t> markers;  // the tick values at each power of ten
};

SliderScale slider_scale(double max_value);

// Fixtures --------------------------------------------------------------------

std::string export_view_fixture(const Universe& universe, std::span<const SignalState> states,
                                const ViewConfig& config, int capacity);

struct ViewFixture {
    ViewConfig config;
    int capacity = 0;
    std::vector<std::string> symbols;
    std::vector<std::optional<double>> signals;
    GridAssignment grid;
};

ViewFixture parse_view_fixture(std::string_view bytes);

}  // namespace vmap::view
