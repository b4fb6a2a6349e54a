// Single-threaded reference pipeline. Kept deliberately plain: one loop per
// step, sorted medians. compute_signals must agree with it bit for bit.

#include <algorithm>
#include <cmath>
#include <map>

#include "vmap/ranking.hpp"
#include "vmap/scramble.hpp"
#include "vmap/signal_engine.hpp"

namespace vmap::serial {

namespace {

double sorted_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

std::vector<SignalState> compute_signals(const Universe& universe, int ssm, const SessionConfig& session,
                                         ScaleEstimator estimator) {
    if (universe.empty()) throw Error(ErrorCode::EmptyUniverse, "empty universe");
    const auto n = universe.size();
    const auto t = clock_fraction(ssm, session);

    std::vector<std::optional<double>> ret(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& rec = universe[i];
        ret[i] = raw_return(rec.last, reference_price(rec, t), rec.weight);
    }

    std::map<std::string, std::pair<double, int>> totals;
    for (std::size_t i = 0; i < n; ++i) {
        if (universe[i].industry.empty() || !ret[i]) continue;
        auto& [sum, count] = totals[universe[i].industry];
        sum += *ret[i];
        ++count;
    }

    std::vector<std::optional<double>> residual(n);
    std::vector<double> present;
    for (std::size_t i = 0; i < n; ++i) {
        if (universe[i].industry.empty() || !ret[i]) continue;
        const auto& [sum, count] = totals.at(universe[i].industry);
        residual[i] = *ret[i] - sum / count;
        present.push_back(*residual[i]);
    }
    if (present.size() < 2) throw Error(ErrorCode::DegenerateScale, "fewer than two residuals");

    double sigma = 0.0;
    if (estimator == ScaleEstimator::MedianAbsoluteDeviation) {
        const double center = sorted_median(present);
        std::vector<double> dev;
        for (double r : present) dev.push_back(std::abs(r - center));
        sigma = kMadConsistency * sorted_median(dev);
    } else {
        double sum = 0.0;
        for (double r : present) sum += r;
        const double mean = sum / static_cast<double>(present.size());
        double dev = 0.0;
        for (double r : present) dev += std::abs(r - mean);
        sigma = dev / static_cast<double>(present.size());
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::DegenerateScale, "zero dispersion");

    std::vector<SignalState> states(n);
    std::vector<std::optional<double>> signals(n), deltas(n);
    std::vector<double> caps(n);
    for (std::size_t i = 0; i < n; ++i) {
        caps[i] = universe[i].market_cap;
        if (!residual[i]) continue;
        states[i].unrounded = *residual[i] / sigma;
        states[i].signal = round_to(*states[i].unrounded, 2);
        if (universe[i].prev_signal)
            states[i].delta = round_to(std::abs(*states[i].signal - *universe[i].prev_signal), 4);
        signals[i] = states[i].signal;
        deltas[i] = states[i].delta;
    }

    const auto signal_rank = rank_signal(caps, signals);
    const auto delta_rank = rank_delta(deltas);
    for (std::size_t i = 0; i < n; ++i) {
        states[i].signal_rank = signal_rank[i];
        states[i].delta_rank = delta_rank[i];
        if (states[i].signal) states[i].scrambled = scramble(*states[i].signal, i);
    }
    return states;
}

}  // namespace vmap::serial
