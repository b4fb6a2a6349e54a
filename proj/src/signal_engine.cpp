#include "vmap/signal_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <unordered_map>

#include "vmap/ranking.hpp"
#include "vmap/scramble.hpp"

namespace vmap {

ClockFraction clock_fraction(int ssm, const SessionConfig& session) {
    if (ssm < session.open_ssm) return {0.0};
    if (ssm > session.close_ssm) return {1.0};
    return {static_cast<double>(ssm - session.open_ssm) / static_cast<double>(session.close_ssm - session.open_ssm)};
}

MarketStamp minutes_stamp(int ssm, const SessionConfig& session) {
    if (ssm >= session.close_ssm) return MarketStamp::closed();
    if (ssm <= session.open_ssm) return MarketStamp::pre_open();
    const int elapsed = ssm - session.open_ssm;
    return MarketStamp((elapsed + 59) / 60);
}

double reference_price(const TickerRecord& record, ClockFraction t) {
    const double w = record.close == 0.0 ? 1.0 : t.t;
    return (1.0 - w) * record.close + w * (record.high + record.low) / 2.0;
}

std::optional<double> raw_return(double last, double x, double weight) {
    const double y = last / x;
    if (!std::isfinite(y) || !(y > 0.0)) return std::nullopt;
    return std::log(y) * weight;
}

double round_to(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    const double r = std::round(value * scale) / scale;
    return r == 0.0 ? 0.0 : r;
}

namespace {

struct IndustryIndex {
    std::vector<int> id;  // -1 for unclassified
    std::vector<std::vector<std::size_t>> members;
};

IndustryIndex index_industries(std::span<const std::string> industries) {
    IndustryIndex out;
    out.id.assign(industries.size(), -1);
    std::unordered_map<std::string_view, int> ids;
    for (std::size_t i = 0; i < industries.size(); ++i) {
        if (industries[i].empty()) continue;
        auto [it, inserted] = ids.try_emplace(industries[i], static_cast<int>(out.members.size()));
        if (inserted) out.members.emplace_back();
        out.id[i] = it->second;
        out.members[static_cast<std::size_t>(it->second)].push_back(i);
    }
    return out;
}

double median_in_place(std::vector<double>& v) {
    const auto n = v.size();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    const double upper = *mid;
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), mid);
    return (lower + upper) / 2.0;
}

std::vector<std::optional<double>> demean(std::span<const std::optional<double>> returns, const IndustryIndex& index) {
    const auto groups = static_cast<std::ptrdiff_t>(index.members.size());
    std::vector<double> average(index.members.size(), 0.0);

#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t g = 0; g < groups; ++g) {
        double sum = 0.0;
        int count = 0;
        for (auto i : index.members[static_cast<std::size_t>(g)]) {
            if (!returns[i]) continue;
            sum += *returns[i];
            ++count;
        }
        const double avg = sum / count;
        average[static_cast<std::size_t>(g)] = std::isfinite(avg) ? avg : 0.0;
    }

    const auto n = static_cast<std::ptrdiff_t>(returns.size());
    std::vector<std::optional<double>> residual(returns.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto id = index.id[static_cast<std::size_t>(i)];
        if (id < 0 || !returns[i]) continue;
        residual[static_cast<std::size_t>(i)] = *returns[i] - average[static_cast<std::size_t>(id)];
    }
    return residual;
}

}  // namespace

std::vector<std::optional<double>> industry_demean(std::span<const std::optional<double>> returns,
                                                   std::span<const std::string> industries) {
    if (returns.size() != industries.size()) throw Error(ErrorCode::BadConfig, "industry_demean: length mismatch");
    return demean(returns, index_industries(industries));
}

double scale(std::span<const std::optional<double>> residuals, ScaleEstimator estimator) {
    std::vector<double> r;
    r.reserve(residuals.size());
    for (const auto& x : residuals) {
        if (x && std::isfinite(*x)) r.push_back(*x);
    }
    if (r.size() < 2) throw Error(ErrorCode::DegenerateScale, "fewer than two residuals");

    double sigma = 0.0;
    if (estimator == ScaleEstimator::MedianAbsoluteDeviation) {
        std::vector<double> work = r;
        const double center = median_in_place(work);
        for (std::size_t i = 0; i < r.size(); ++i) work[i] = std::abs(r[i] - center);
        sigma = kMadConsistency * median_in_place(work);
    } else {
        double sum = 0.0;
        for (double x : r) sum += x;
        const double mean = sum / static_cast<double>(r.size());
        double dev = 0.0;
        for (double x : r) dev += std::abs(x - mean);
        sigma = dev / static_cast<double>(r.size());
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::DegenerateScale, "zero dispersion");
    return sigma;
}

namespace {

std::vector<double> caps_of(const Universe& universe) {
    std::vector<double> caps(universe.size());
    for (std::size_t i = 0; i < universe.size(); ++i) caps[i] = universe[i].market_cap;
    return caps;
}

void finish_states(const Universe& universe, std::vector<SignalState>& states) {
    const auto n = states.size();
    std::vector<std::optional<double>> signals(n), deltas(n);
    for (std::size_t i = 0; i < n; ++i) {
        signals[i] = states[i].signal;
        deltas[i] = states[i].delta;
    }
    const auto caps = caps_of(universe);
    const auto signal_rank = rank_signal(caps, signals);
    const auto delta_rank = rank_delta(deltas);

    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        auto& st = states[static_cast<std::size_t>(i)];
        st.signal_rank = signal_rank[static_cast<std::size_t>(i)];
        st.delta_rank = delta_rank[static_cast<std::size_t>(i)];
        if (st.signal) st.scrambled = scramble(*st.signal, static_cast<std::size_t>(i));
    }
}

}  // namespace

std::vector<SignalState> compute_signals(const Universe& universe, int ssm, const SessionConfig& session,
                                         ScaleEstimator estimator) {
    if (universe.empty()) throw Error(ErrorCode::EmptyUniverse, "empty universe");
    const auto& tickers = universe.tickers();
    const auto n = static_cast<std::ptrdiff_t>(tickers.size());
    const auto t = clock_fraction(ssm, session);

    std::vector<std::optional<double>> returns(tickers.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto& rec = tickers[static_cast<std::size_t>(i)];
        returns[static_cast<std::size_t>(i)] = raw_return(rec.last, reference_price(rec, t), rec.weight);
    }

    std::vector<std::string> industries(tickers.size());
    for (std::size_t i = 0; i < tickers.size(); ++i) industries[i] = tickers[i].industry;
    const auto residual = demean(returns, index_industries(industries));
    const double sigma = scale(residual, estimator);

    std::vector<SignalState> states(tickers.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        if (!residual[k]) continue;
        auto& st = states[k];
        st.unrounded = *residual[k] / sigma;
        st.signal = round_to(*st.unrounded, 2);
        if (tickers[k].prev_signal) st.delta = round_to(std::abs(*st.signal - *tickers[k].prev_signal), 4);
    }
    finish_states(universe, states);
    return states;
}

std::vector<SignalState> pre_open_states(const Universe& universe) {
    std::vector<SignalState> states(universe.size());
    finish_states(universe, states);
    return states;
}

std::vector<SignalState> carried_states(const Universe& universe) {
    std::vector<SignalState> states(universe.size());
    for (std::size_t i = 0; i < universe.size(); ++i) {
        if (universe[i].prev_signal) states[i].signal = round_to(*universe[i].prev_signal, 2);
    }
    finish_states(universe, states);
    return states;
}

}  // namespace vmap
