#include "vmap/service.hpp"

#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "httplib.h"
#include "vmap/codecs.hpp"
#include "vmap/text.hpp"

namespace vmap::service {

void ServiceConfig::validate() const {
    session.validate();
    if (cycle_seconds < 1) throw Error(ErrorCode::BadConfig, "cycle_seconds must be at least 1");
    if (port < 0 || port > 65535) throw Error(ErrorCode::BadConfig, "port out of range");
}

void parse_listen(std::string_view listen, ServiceConfig& config) {
    const auto colon = listen.rfind(':');
    if (colon == std::string_view::npos) throw Error(ErrorCode::BadConfig, "listen address must be host:port");
    auto port = text::parse_int(listen.substr(colon + 1));
    if (!port || *port < 0 || *port > 65535) throw Error(ErrorCode::BadConfig, "bad port in '" + std::string(listen) + "'");
    config.host = std::string(listen.substr(0, colon));
    config.port = static_cast<int>(*port);
}

namespace {

bool same_tickers(const Universe& a, const Universe& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].symbol != b[i].symbol) return false;
    }
    return true;
}

}  // namespace

PublishedState run_cycle(const Universe& universe, int now_ssm, const PublishedState* prev,
                         const SessionConfig& session, ScaleEstimator estimator) {
    if (universe.empty()) throw Error(ErrorCode::EmptyUniverse, "empty universe");
    // A clock earlier than the previous publication means a new trading day.
    if (prev && now_ssm < prev->publish_ssm) prev = nullptr;
    if (prev && !same_tickers(universe, prev->universe))
        throw Error(ErrorCode::BadConfig, "ticker list changed intraday; m.txt is frozen for the day");

    PublishedState out;
    out.publish_ssm = now_ssm;
    out.generation = prev ? prev->generation + 1 : 1;
    out.stamp = minutes_stamp(now_ssm, session);
    if (prev && prev->stamp.status() == MarketStatus::Closed) out.stamp = MarketStamp::closed();

    switch (out.stamp.status()) {
        case MarketStatus::PreOpen:
            out.universe = universe;
            out.states = pre_open_states(universe);
            break;
        case MarketStatus::Open: {
            if (prev) {
                std::vector<std::optional<double>> carried(prev->states.size());
                for (std::size_t i = 0; i < carried.size(); ++i) carried[i] = prev->states[i].signal;
                out.universe = universe.with_prev_signals(carried);
            } else {
                out.universe = universe;
            }
            out.states = compute_signals(out.universe, now_ssm, session, estimator);
            break;
        }
        case MarketStatus::Closed:
            if (prev) {
                out.universe = prev->universe;
                out.states = prev->states;
            } else {
                out.universe = universe;
                out.states = carried_states(universe);
            }
            break;
    }

    out.map_bytes = prev ? prev->map_bytes : codecs::write_map_file(universe);
    out.signal_bytes = codecs::write_signal_file(out.stamp, out.states);
    out.sig_delta_bytes = codecs::write_sig_delta(out.universe, out.states);
    return out;
}

int next_publish(int now_ssm, int cycle_seconds) {
    if (cycle_seconds < 1) throw Error(ErrorCode::BadConfig, "cycle_seconds must be at least 1");
    const int rem = now_ssm % cycle_seconds;
    return rem == 0 ? now_ssm : now_ssm + (cycle_seconds - rem);
}

std::string format_clock(int ssm) {
    ssm = ((ssm % 86400) + 86400) % 86400;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d:%02d:%02d", ssm / 3600, ssm / 60 % 60, ssm % 60);
    return buf;
}

int parse_clock(std::string_view text_value) {
    auto parts = text::split(text_value, ':');
    if (parts.size() < 2 || parts.size() > 3) throw Error(ErrorCode::BadConfig, "clock must be HH:MM[:SS]");
    int fields[3] = {0, 0, 0};
    for (std::size_t i = 0; i < parts.size(); ++i) {
        auto v = text::parse_int(parts[i]);
        if (!v || *v < 0) throw Error(ErrorCode::BadConfig, "bad clock '" + std::string(text_value) + "'");
        fields[i] = static_cast<int>(*v);
    }
    if (fields[0] > 23 || fields[1] > 59 || fields[2] > 59)
        throw Error(ErrorCode::BadConfig, "bad clock '" + std::string(text_value) + "'");
    return fields[0] * 3600 + fields[1] * 60 + fields[2];
}

int local_ssm() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    localtime_r(&now, &tm);
    return tm.tm_hour * 3600 + tm.tm_min * 60 + tm.tm_sec;
}

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + p.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + p.string());
    out << bytes;
}

}  // namespace

PublishedState run_oneshot(const std::filesystem::path& input, const std::filesystem::path& out_dir, int ssm,
                           const SessionConfig& session, ScaleEstimator estimator) {
    const auto universe = codecs::parse_market_snapshot(read_file(input));
    auto state = run_cycle(universe, ssm, nullptr, session, estimator);
    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "m.txt", state.map_bytes);
    write_file(out_dir / "s.txt", state.signal_bytes);
    write_file(out_dir / "sig.delta.txt", state.sig_delta_bytes);
    return state;
}

double SystemClock::now() const {
    using namespace std::chrono;
    const auto since_epoch = system_clock::now().time_since_epoch();
    const double frac = duration<double>(since_epoch).count();
    return local_ssm() + (frac - std::floor(frac));
}

AcceleratedClock::AcceleratedClock(double start_ssm, double speed)
    : start_ssm_(start_ssm), speed_(speed), origin_(std::chrono::steady_clock::now()) {
    if (!(speed > 0.0)) throw Error(ErrorCode::BadConfig, "clock speed must be positive");
}

double AcceleratedClock::now() const {
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - origin_).count();
    return start_ssm_ + elapsed * speed_;
}

Service::Service(ServiceConfig config, SnapshotSource source, std::shared_ptr<const Clock> clock)
    : config_(std::move(config)), source_(std::move(source)), clock_(std::move(clock)) {
    config_.validate();
}

Service::~Service() { stop(); }

bool Service::publish_at(int ssm) {
    std::lock_guard cycle_lock(cycle_mu_);
    auto prev = latest();
    try {
        auto next = std::make_shared<const PublishedState>(
            run_cycle(source_(ssm), ssm, prev.get(), config_.session, config_.estimator));
        {
            std::lock_guard lock(mu_);
            current_ = next;
        }
        if (hook_) hook_(*next);
        return true;
    } catch (const std::exception& e) {
        std::cerr << "[vmap] " << format_clock(ssm) << " cycle failed, keeping previous state: " << e.what() << '\n';
        return false;
    }
}

std::shared_ptr<const PublishedState> Service::latest() const {
    std::lock_guard lock(mu_);
    return current_;
}

Response Service::handle(std::string_view path) const {
    if (auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
    if (path == "/t") return {200, format_clock(static_cast<int>(std::floor(clock_->now())))};
    if (path != "/m.txt" && path != "/s.txt") return {404, "not found"};
    auto state = latest();
    if (!state) return {503, "no data published yet"};
    return {200, path == "/m.txt" ? state->map_bytes : state->signal_bytes};
}

int Service::start_http() {
    http_ = std::make_unique<httplib::Server>();
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
        auto r = handle(req.path);
        res.status = r.status;
        res.set_header("Cache-Control", "no-cache, no-store, must-revalidate");
        res.set_header("Pragma", "no-cache");
        res.set_header("Expires", "0");
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_content(r.body, "text/plain");
    };
    http_->Get("/m.txt", route);
    http_->Get("/s.txt", route);
    http_->Get("/t", route);

    int port = config_.port;
    if (port == 0) {
        port = http_->bind_to_any_port(config_.host);
    } else if (!http_->bind_to_port(config_.host, port)) {
        port = -1;
    }
    if (port < 0) throw Error(ErrorCode::BadConfig, "cannot bind " + config_.host + ":" + std::to_string(config_.port));
    http_thread_ = std::thread([this] { http_->listen_after_bind(); });
    http_->wait_until_ready();
    return port;
}

void Service::start_cycle_loop() {
    cycle_thread_ = std::jthread([this](std::stop_token stop) {
        int target = next_publish(static_cast<int>(std::ceil(clock_->now())), config_.cycle_seconds);
        while (!stop.stop_requested()) {
            const double now = clock_->now();
            if (now >= target) {
                // Catch up to the latest boundary already passed; never publish twice for one.
                int boundary = target;
                while (boundary + config_.cycle_seconds <= now) boundary += config_.cycle_seconds;
                publish_at(boundary % 86400);
                target = boundary + config_.cycle_seconds;
                continue;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(2));
        }
    });
}

void Service::stop() {
    if (cycle_thread_.joinable()) {
        cycle_thread_.request_stop();
        cycle_thread_.join();
    }
    if (http_) {
        http_->stop();
        if (http_thread_.joinable()) http_thread_.join();
        http_.reset();
    }
}

}  // namespace vmap::service
