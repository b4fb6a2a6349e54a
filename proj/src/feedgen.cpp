#include "vmap/feedgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <regex>
#include <sstream>
#include <thread>

#include "vmap/codecs.hpp"

namespace vmap::feedgen {

void GenSpec::validate() const {
    session.validate();
    if (tickers < 2) throw Error(ErrorCode::BadSpec, "need at least two tickers");
    if (industries_per_sector < 1) throw Error(ErrorCode::BadSpec, "industries_per_sector must be positive");
    if (interval_seconds < 1) throw Error(ErrorCode::BadSpec, "interval_seconds must be positive");
    if (!(volatility >= 0.0) || !std::isfinite(volatility)) throw Error(ErrorCode::BadSpec, "bad volatility");
    for (double f : {missing_industry_fraction, zero_close_fraction}) {
        if (!(f >= 0.0 && f <= 1.0)) throw Error(ErrorCode::BadSpec, "fractions must lie in [0, 1]");
    }
    if (missing_industry_fraction + zero_close_fraction > 1.0)
        throw Error(ErrorCode::BadSpec, "missing-industry and zero-close fractions overlap");
}

namespace {

std::string symbol_for(int index) {
    std::string s;
    int v = index;
    do {
        s.insert(s.begin(), static_cast<char>('A' + v % 26));
        v /= 26;
    } while (v > 0);
    while (s.size() < 3) s.insert(s.begin(), 'A');
    return s;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

double cents(double price) { return std::max(0.01, std::round(price * 100.0) / 100.0); }

struct Path {
    double base_close;
    double log_price;
    double last = 0.0;
    double high = 0.0;
    double low = 0.0;
};

}  // namespace

std::vector<Snapshot> generate_day(const GenSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<int> cluster_dist(0, kClusterCount - 1);
    std::uniform_int_distribution<int> exchange_dist(0, kExchangeCount - 1);
    std::uniform_int_distribution<int> industry_dist(0, spec.industries_per_sector - 1);
    std::normal_distribution<double> normal(0.0, 1.0);

    const auto n = static_cast<std::size_t>(spec.tickers);
    std::vector<TickerRecord> base(n);
    std::vector<int> industry_id(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& t = base[i];
        t.symbol = symbol_for(static_cast<int>(i));
        t.cluster = static_cast<Cluster>(cluster_dist(rng));
        t.exchange = static_cast<Exchange>(exchange_dist(rng));
        t.market_cap = std::round(log_uniform(rng, 5e7, 5e11));
        t.liquidity = std::round(log_uniform(rng, 1e5, 5e9));
        t.close = cents(log_uniform(rng, 2.0, 400.0));
        const int sub = industry_dist(rng);
        industry_id[i] = static_cast<int>(t.cluster) * spec.industries_per_sector + sub;
        t.industry = std::string(cluster_name(t.cluster)) + " " + std::to_string(sub + 1);
        t.weight = 1.0;
    }

    std::vector<std::size_t> shuffled(n);
    std::iota(shuffled.begin(), shuffled.end(), 0);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto missing = static_cast<std::size_t>(std::llround(spec.missing_industry_fraction * static_cast<double>(n)));
    const auto zero_close = static_cast<std::size_t>(std::llround(spec.zero_close_fraction * static_cast<double>(n)));
    std::vector<bool> hide_close(n, false);
    for (std::size_t k = 0; k < missing; ++k) base[shuffled[k]].industry.clear();
    for (std::size_t k = missing; k < missing + zero_close && k < n; ++k) hide_close[shuffled[k]] = true;

    const int span = spec.session.close_ssm - spec.session.open_ssm;
    const double dt = static_cast<double>(spec.interval_seconds) / span;
    const double step_sd = spec.volatility * std::sqrt(dt);
    const int sectors = kClusterCount;
    const int industries = sectors * spec.industries_per_sector;

    std::vector<Path> paths(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double gap = 0.3 * spec.volatility * normal(rng);
        paths[i].base_close = base[i].close;
        paths[i].log_price = std::log(base[i].close) + gap;
    }

    std::vector<Snapshot> day;
    std::vector<double> sector_shock(static_cast<std::size_t>(sectors)), industry_shock(static_cast<std::size_t>(industries));
    for (int ssm = spec.session.open_ssm; ssm <= spec.session.close_ssm; ssm += spec.interval_seconds) {
        const bool first = day.empty();
        if (!first) {
            for (auto& s : sector_shock) s = 0.5 * step_sd * normal(rng);
            for (auto& s : industry_shock) s = 0.5 * step_sd * normal(rng);
        }
        std::vector<TickerRecord> records = base;
        for (std::size_t i = 0; i < n; ++i) {
            auto& p = paths[i];
            if (!first) {
                p.log_price += sector_shock[static_cast<std::size_t>(base[i].cluster)] +
                               industry_shock[static_cast<std::size_t>(industry_id[i])] + 0.7 * step_sd * normal(rng);
            }
            p.last = cents(std::exp(p.log_price));
            p.high = first ? p.last : std::max(p.high, p.last);
            p.low = first ? p.last : std::min(p.low, p.last);
            auto& r = records[i];
            r.last = p.last;
            r.high = p.high;
            r.low = p.low;
            if (hide_close[i]) r.close = 0.0;
        }
        day.push_back({ssm, Universe(std::move(records))});
    }
    return day;
}

const Snapshot& snapshot_at(const std::vector<Snapshot>& day, int ssm) {
    if (day.empty()) throw Error(ErrorCode::BadSpec, "empty day");
    auto it = std::upper_bound(day.begin(), day.end(), ssm, [](int s, const Snapshot& snap) { return s < snap.ssm; });
    if (it == day.begin()) return day.front();
    return *std::prev(it);
}

std::optional<int> timestamp_of(const std::filesystem::path& file) {
    static const std::regex six_digits(R"((?:^|\D)(\d{2})(\d{2})(\d{2})(?:\D|$))");
    const auto name = file.filename().string();
    std::smatch m;
    if (!std::regex_search(name, m, six_digits)) return std::nullopt;
    const int h = std::stoi(m[1]), mi = std::stoi(m[2]), s = std::stoi(m[3]);
    if (h > 23 || mi > 59 || s > 59) return std::nullopt;
    return h * 3600 + mi * 60 + s;
}

Replay::Replay(const std::filesystem::path& dir, double speed) : speed_(speed) {
    std::vector<std::pair<int, std::filesystem::path>> found;
    if (std::filesystem::is_directory(dir)) {
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (!entry.is_regular_file()) continue;
            if (auto ts = timestamp_of(entry.path())) found.emplace_back(*ts, entry.path());
        }
    }
    if (found.empty()) throw Error(ErrorCode::EmptyDir, "no timestamped snapshots in " + dir.string());
    std::sort(found.begin(), found.end());
    for (auto& [ts, path] : found) {
        stamps_.push_back(ts);
        files_.push_back(std::move(path));
    }
}

std::optional<Snapshot> Replay::next() {
    if (pos_ >= files_.size()) return std::nullopt;
    if (pos_ > 0 && speed_ > 0.0 && std::isfinite(speed_)) {
        const double wait = (stamps_[pos_] - stamps_[pos_ - 1]) / speed_;
        std::this_thread::sleep_for(std::chrono::duration<double>(wait));
    }
    const auto& file = files_[pos_];
    std::ifstream in(file, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    Snapshot snap;
    snap.ssm = stamps_[pos_];
    try {
        if (!in) throw Error(ErrorCode::ParseError, "cannot read file");
        snap.universe = codecs::parse_market_snapshot(buf.str());
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, file.filename().string() + ": " + e.what());
    }
    ++pos_;
    return snap;
}

}  // namespace vmap::feedgen
