#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "vmap/core_model.hpp"
#include "vmap/signal_engine.hpp"

namespace httplib {
class Server;
}

namespace vmap::service {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    int cycle_seconds = 30;
    SessionConfig session;
    ScaleEstimator estimator = ScaleEstimator::MedianAbsoluteDeviation;

    void validate() const;
};

/// Parses "host:port" into the config.
void parse_listen(std::string_view listen, ServiceConfig& config);

/// One engine run's artifacts. Immutable once published.
struct PublishedState {
    std::string map_bytes;
    std::string signal_bytes;
    std::string sig_delta_bytes;
    std::uint64_t generation = 0;
    int publish_ssm = 0;
    MarketStamp stamp = MarketStamp::pre_open();
    Universe universe;
    std::vector<SignalState> states;
};

/// One publication cycle. With `prev` set, m.txt is reused and the previous
/// signals become this cycle's prev_signal. Closed is absorbing within a day.
/// Throws DegenerateScale, or BadConfig if the ticker list changed intraday.
PublishedState run_cycle(const Universe& universe, int now_ssm, const PublishedState* prev,
                         const SessionConfig& session, ScaleEstimator estimator);

/// First publish instant at or after `now_ssm` on the cycle grid (":00/:30" for 30 s).
int next_publish(int now_ssm, int cycle_seconds = 30);

/// 24-hour "HH:MM:SS".
std::string format_clock(int ssm);

/// Parses "HH:MM:SS" or "HH:MM" into seconds since midnight. Throws BadConfig.
int parse_clock(std::string_view text);

/// Seconds since local midnight from the system clock.
int local_ssm();

/// Reads mkt.data.txt, runs one cycle at `ssm` and writes m.txt, s.txt and
/// sig.delta.txt into `out_dir`.
PublishedState run_oneshot(const std::filesystem::path& input, const std::filesystem::path& out_dir, int ssm,
                           const SessionConfig& session, ScaleEstimator estimator);

class Clock {
public:
    virtual ~Clock() = default;
    /// Seconds since midnight, fractional.
    virtual double now() const = 0;
};

class SystemClock final : public Clock {
public:
    double now() const override;
};

/// Simulated session time running `speed` times faster than the wall clock.
class AcceleratedClock final : public Clock {
public:
    AcceleratedClock(double start_ssm, double speed);
    double now() const override;

private:
    double start_ssm_;
    double speed_;
    std::chrono::steady_clock::time_point origin_;
};

/// Set by hand; for tests.
class ManualClock final : public Clock {
public:
    explicit ManualClock(double ssm = 0.0) : ssm_(ssm) {}
    double now() const override { return ssm_.load(); }
    void set(double ssm) { ssm_.store(ssm); }
    void advance(double seconds) { ssm_.store(ssm_.load() + seconds); }

private:
    std::atomic<double> ssm_;
};

using SnapshotSource = std::function<Universe(int ssm)>;
using PublishHook = std::function<void(const PublishedState&)>;

struct Response {
    int status = 200;
    std::string body;
};

class Service {
public:
    Service(ServiceConfig config, SnapshotSource source, std::shared_ptr<const Clock> clock);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Runs a cycle stamped at `ssm` and swaps it in. A failed cycle keeps the
    /// previous state and returns false.
    bool publish_at(int ssm);

    /// Called on the cycle thread after every successful publication. Set before starting.
    void set_publish_hook(PublishHook hook) { hook_ = std::move(hook); }

    /// Latest published state, or nullptr before the first publication.
    std::shared_ptr<const PublishedState> latest() const;

    /// Request routing without sockets: /m.txt, /s.txt, /t.
    Response handle(std::string_view path) const;

    /// Binds the HTTP server and serves on a background thread. Returns the bound port.
    int start_http();

    /// Background publish loop following next_publish on the service clock.
    void start_cycle_loop();

    void stop();

private:
    ServiceConfig config_;
    SnapshotSource source_;
    std::shared_ptr<const Clock> clock_;

    mutable std::mutex mu_;
    std::shared_ptr<const PublishedState> current_;
    std::mutex cycle_mu_;
    PublishHook hook_;

    std::unique_ptr<httplib::Server> http_;
    std::thread http_thread_;
    std::jthread cycle_thread_;
};

}  // namespace vmap::service
