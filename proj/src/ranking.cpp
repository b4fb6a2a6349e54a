#include "vmap/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vmap/core_model.hpp"

namespace vmap {

namespace {

double fix_sort(double x) { return std::isfinite(x) ? x : kSortSentinel; }
double fix_sort(const std::optional<double>& x) { return x ? fix_sort(*x) : kSortSentinel; }

std::vector<int> iota_indices(std::size_t n) {
    std::vector<int> ix(n);
    std::iota(ix.begin(), ix.end(), 0);
    return ix;
}

// order[p] holds the original index sorted into position p.
std::vector<int> positions_of(const std::vector<int>& order) {
    std::vector<int> rank(order.size());
    for (std::size_t p = 0; p < order.size(); ++p) rank[static_cast<std::size_t>(order[p])] = static_cast<int>(p);
    return rank;
}

}  // namespace

std::vector<int> rank_quant(std::span<const double> values, std::span<const std::string> symbols) {
    if (values.size() != symbols.size()) throw Error(ErrorCode::BadConfig, "rank_quant: length mismatch");
    std::vector<double> x(values.size());
    std::transform(values.begin(), values.end(), x.begin(), [](double v) { return fix_sort(v); });

    auto order = iota_indices(x.size());
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x[a] < x[b]; });

    auto zero_begin = std::find_if(order.begin(), order.end(), [&](int i) { return x[i] == 0.0; });
    auto zero_end = std::find_if(zero_begin, order.end(), [&](int i) { return x[i] != 0.0; });
    std::stable_sort(zero_begin, zero_end, [&](int a, int b) { return symbols[a] < symbols[b]; });

    return positions_of(order);
}

std::vector<int> rank_signal(std::span<const double> caps, std::span<const std::optional<double>> signals) {
    if (caps.size() != signals.size()) throw Error(ErrorCode::BadConfig, "rank_signal: length mismatch");
    const auto n = caps.size();
    std::vector<double> mag(n), cap(n);
    for (std::size_t i = 0; i < n; ++i) {
        mag[i] = signals[i] ? fix_sort(std::abs(*signals[i])) : kSortSentinel;
        cap[i] = fix_sort(caps[i]);
    }
    auto order = iota_indices(n);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return cap[a] < cap[b]; });
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return mag[a] < mag[b]; });
    return positions_of(order);
}

std::vector<int> rank_delta(std::span<const std::optional<double>> deltas) {
    const auto n = deltas.size();
    std::vector<double> d(n);
    std::transform(deltas.begin(), deltas.end(), d.begin(), [](const auto& v) { return fix_sort(v); });
    auto order = iota_indices(n);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
    auto ascending = positions_of(order);
    for (auto& r : ascending) r = static_cast<int>(n) - 1 - r;
    return ascending;
}

bool is_permutation_of_indices(std::span<const int> ranks) {
    std::vector<char> seen(ranks.size(), 0);
    for (int r : ranks) {
        if (r < 0 || static_cast<std::size_t>(r) >= ranks.size() || seen[static_cast<std::size_t>(r)]) return false;
        seen[static_cast<std::size_t>(r)] = 1;
    }
    return true;
}

std::vector<int> invert_ranks(std::span<const int> ranks) {
    if (!is_permutation_of_indices(ranks)) throw Error(ErrorCode::RankNotPermutation, "ranks are not a permutation");
    std::vector<int> order(ranks.size());
    for (std::size_t i = 0; i < ranks.size(); ++i) order[static_cast<std::size_t>(ranks[i])] = static_cast<int>(i);
    return order;
}

}  // namespace vmap
