#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vmap/core_model.hpp"

namespace vmap {

/// Session time as a fraction: 0 at the open, 1 at the close, clamped outside.
struct ClockFraction {
    double t = 0.0;
};

enum class ScaleEstimator {
    MedianAbsoluteDeviation,  // 1.4826 * median(|r - median(r)|)
    MeanAbsoluteDeviation,    // mean(|r - mean(r)|)
};

inline constexpr double kMadConsistency = 1.4826;
inline constexpr int kMaxFlashing = 25;

ClockFraction clock_fraction(int ssm, const SessionConfig& session);

/// Minutes since the open, rounded up; 0 at or before the open, -1 at or after the close.
MarketStamp minutes_stamp(int ssm, const SessionConfig& session);

/// Blend of the previous close and the intraday (high + low) / 2 midpoint.
/// A missing close (0) forces the blend fully onto the midpoint.
double reference_price(const TickerRecord& record, ClockFraction t);

/// weight * ln(last / x), or nullopt unless last / x is finite and positive.
std::optional<double> raw_return(double last, double x, double weight);

/// Subtracts each industry's average return from its members. Averages run over
/// members with a return; an empty-string industry is unclassified and its
/// tickers come back missing.
std::vector<std::optional<double>> industry_demean(std::span<const std::optional<double>> returns,
                                                   std::span<const std::string> industries);

/// Dispersion of the present residuals. Throws DegenerateScale when fewer than
/// two are present or the result is zero.
double scale(std::span<const std::optional<double>> residuals, ScaleEstimator estimator);

/// Half-away-from-zero rounding to `decimals` places.
double round_to(double value, int decimals);

/// Full pipeline for one snapshot: returns, industry demeaning, scale,
/// rounding, deltas against prev_signal, ranks and scrambled values.
/// Per-ticker kernels run under OpenMP when available.
std::vector<SignalState> compute_signals(const Universe& universe, int ssm, const SessionConfig& session,
                                         ScaleEstimator estimator = ScaleEstimator::MedianAbsoluteDeviation);

/// States published before the open: no signals, ranks by ascending market cap.
std::vector<SignalState> pre_open_states(const Universe& universe);

/// States published after the close: the previous signals carried, no deltas.
std::vector<SignalState> carried_states(const Universe& universe);

namespace serial {

/// Single-threaded reference for compute_signals; kept for tests and benchmarks.
std::vector<SignalState> compute_signals(const Universe& universe, int ssm, const SessionConfig& session,
                                         ScaleEstimator estimator = ScaleEstimator::MedianAbsoluteDeviation);

}  // namespace serial

}  // namespace vmap
