#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vmap {

// All rankers return 0-based positions and always produce a permutation of
// {0..N-1}. Non-finite or missing inputs are ranked as -9999.
inline constexpr double kSortSentinel = -9999.0;

/// Ascending rank; the block of exact zeros is ordered by symbol, other ties
/// keep their original order.
std::vector<int> rank_quant(std::span<const double> values, std::span<const std::string> symbols);

/// Ascending rank of |signal|, ties broken by ascending market cap and then
/// original order.
std::vector<int> rank_signal(std::span<const double> caps, std::span<const std::optional<double>> signals);

/// Descending rank: the largest delta gets 0, missing deltas get the largest ranks.
std::vector<int> rank_delta(std::span<const std::optional<double>> deltas);

bool is_permutation_of_indices(std::span<const int> ranks);

/// order[rank] = index.
std::vector<int> invert_ranks(std::span<const int> ranks);

}  // namespace vmap
