#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "vmap/core_model.hpp"

// Desk-scale snapshot sources: a seeded synthetic trading day and a replayer
// for directories of recorded mkt.data.txt files.
namespace vmap::feedgen {

struct GenSpec {
    int tickers = 500;
    int industries_per_sector = 4;
    std::uint64_t seed = 1;
    double volatility = 0.02;  // daily log-return scale
    SessionConfig session;
    int interval_seconds = 30;
    double missing_industry_fraction = 0.0;
    double zero_close_fraction = 0.0;

    void validate() const;
};

struct Snapshot {
    int ssm = 0;
    Universe universe;
};

/// One snapshot per interval from the open through the close (inclusive when
/// aligned). Deterministic in `spec.seed`. Throws BadSpec.
std::vector<Snapshot> generate_day(const GenSpec& spec);

/// Latest snapshot at or before `ssm` (the first one before the open).
const Snapshot& snapshot_at(const std::vector<Snapshot>& day, int ssm);

/// Seconds since midnight embedded in a file name as a six-digit HHMMSS run,
/// e.g. "mkt.data.093000.txt".
std::optional<int> timestamp_of(const std::filesystem::path& file);

class Replay {
public:
    /// Throws EmptyDir when no timestamped files are found.
    /// speed <= 0 or infinity replays without sleeping.
    Replay(const std::filesystem::path& dir, double speed);

    /// Parses and returns the next file; nullopt at the end. Parse failures
    /// rethrow as ParseError naming the file.
    std::optional<Snapshot> next();

    const std::vector<std::filesystem::path>& files() const noexcept { return files_; }

private:
    std::vector<std::filesystem::path> files_;
    std::vector<int> stamps_;
    std::size_t pos_ = 0;
    double speed_;
};

}  // namespace vmap::feedgen
