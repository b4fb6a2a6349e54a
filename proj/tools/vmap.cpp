#include <algorithm>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "vmap/codecs.hpp"
#include "vmap/feedgen.hpp"
#include "vmap/service.hpp"
#include "vmap/view_engine.hpp"

namespace fs = std::filesystem;
using namespace vmap;

namespace {

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

ScaleEstimator estimator_from(const std::string& name) {
    return name == "mean" ? ScaleEstimator::MeanAbsoluteDeviation : ScaleEstimator::MedianAbsoluteDeviation;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + p.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Common {
    bool short_day = false;
    std::string estimator = "median";
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_flag("--short-day", c.short_day, "Session closes at 1:00 PM");
    cmd->add_option("--estimator", c.estimator, "Scale estimator")
        ->check(CLI::IsMember({"median", "mean"}))
        ->capture_default_str();
}

int run_oneshot_cmd(const std::string& input, const std::string& out_dir, const std::string& at, const Common& c) {
    const int ssm = at.empty() ? service::local_ssm() : service::parse_clock(at);
    auto state = service::run_oneshot(input, out_dir, ssm, SessionConfig::for_day(c.short_day), estimator_from(c.estimator));
    std::cout << "stamp " << state.stamp.value() << ", " << state.universe.size() << " tickers -> " << out_dir << '\n';
    return 0;
}

int run_gen_cmd(const feedgen::GenSpec& spec, const std::string& out_dir) {
    const auto day = feedgen::generate_day(spec);
    fs::create_directories(out_dir);
    for (const auto& snap : day) {
        auto clock = service::format_clock(snap.ssm);
        clock.erase(std::remove(clock.begin(), clock.end(), ':'), clock.end());
        std::ofstream out(fs::path(out_dir) / ("mkt.data." + clock + ".txt"), std::ios::binary);
        out << codecs::write_market_snapshot(snap.universe);
    }
    std::cout << day.size() << " snapshots of " << spec.tickers << " tickers -> " << out_dir << '\n';
    return 0;
}

struct ViewOptions {
    std::string input = "mkt.data.txt";
    std::string at;
    std::string output;
    std::string row = "None";
    std::string col = "None";
    int liquidity_tiers = 2;
    int marketcap_tiers = 2;
    double signal_min = 0.0;
    int flash = 15;
    int capacity = 1000;
};

int run_view_cmd(const ViewOptions& o, const Common& c) {
    const int ssm = o.at.empty() ? service::local_ssm() : service::parse_clock(o.at);
    const auto universe = codecs::parse_market_snapshot(read_file(o.input));
    const auto state = service::run_cycle(universe, ssm, nullptr, SessionConfig::for_day(c.short_day), estimator_from(c.estimator));
    view::ViewConfig config;
    config.row_param = view::param_from_string(o.row);
    config.col_param = view::param_from_string(o.col);
    config.liquidity_tiers = o.liquidity_tiers;
    config.marketcap_tiers = o.marketcap_tiers;
    config.signal_min = o.signal_min;
    config.flash_count = o.flash;
    const auto bytes = view::export_view_fixture(state.universe, state.states, config, o.capacity);
    if (o.output.empty()) {
        std::cout << bytes;
    } else {
        std::ofstream(o.output, std::ios::binary) << bytes;
    }
    return 0;
}

struct ServeOptions {
    std::string listen = "127.0.0.1:8080";
    int cycle = 30;
    std::string input;
    std::string replay_dir;
    bool synthetic = false;
    int tickers = 500;
    std::uint64_t seed = 1;
    double speed = 1.0;
    std::string start;
};

int run_serve_cmd(const ServeOptions& o, const Common& c) {
    service::ServiceConfig config;
    service::parse_listen(o.listen, config);
    config.cycle_seconds = o.cycle;
    config.session = SessionConfig::for_day(c.short_day);
    config.estimator = estimator_from(c.estimator);

    std::shared_ptr<const service::Clock> clock;
    if (o.speed != 1.0 || !o.start.empty()) {
        const double start = o.start.empty() ? service::local_ssm() : service::parse_clock(o.start);
        clock = std::make_shared<service::AcceleratedClock>(start, o.speed);
    } else {
        clock = std::make_shared<service::SystemClock>();
    }

    service::SnapshotSource source;
    if (o.synthetic) {
        feedgen::GenSpec spec;
        spec.tickers = o.tickers;
        spec.seed = o.seed;
        spec.session = config.session;
        auto day = std::make_shared<const std::vector<feedgen::Snapshot>>(feedgen::generate_day(spec));
        source = [day](int ssm) { return feedgen::snapshot_at(*day, ssm).universe; };
    } else if (!o.replay_dir.empty()) {
        // Recorded snapshots keyed by their file timestamps; the newest one not after the clock wins.
        auto replay = std::make_shared<feedgen::Replay>(o.replay_dir, 0.0);
        auto day = std::make_shared<std::vector<feedgen::Snapshot>>();
        while (auto snap = replay->next()) day->push_back(std::move(*snap));
        source = [day](int ssm) { return feedgen::snapshot_at(*day, ssm).universe; };
    } else {
        const std::string input = o.input.empty() ? "mkt.data.txt" : o.input;
        source = [input](int) { return codecs::parse_market_snapshot(read_file(input)); };
    }

    service::Service svc(config, source, clock);
    svc.publish_at(static_cast<int>(clock->now()));
    const int port = svc.start_http();
    svc.start_cycle_loop();
    std::cout << "serving /m.txt /s.txt /t on " << config.host << ':' << port << '\n';

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    svc.stop();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vmap: intraday signal engine and grid data server", "vmap"};
    app.require_subcommand(1);

    Common common;

    auto* oneshot = app.add_subcommand("oneshot", "Read mkt.data.txt once and write m.txt, s.txt, sig.delta.txt");
    std::string input = "mkt.data.txt";
    std::string out_dir = ".";
    std::string at;
    oneshot->add_option("--input", input, "Market snapshot file")->capture_default_str();
    oneshot->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    oneshot->add_option("--at", at, "Pinned clock HH:MM:SS (default: local time)");
    add_common(oneshot, common);

    auto* serve = app.add_subcommand("serve", "Publish on a cycle and serve /m.txt, /s.txt, /t over HTTP");
    ServeOptions so;
    serve->add_option("--listen", so.listen, "host:port")->capture_default_str();
    serve->add_option("--cycle", so.cycle, "Publication cycle in seconds")->check(CLI::PositiveNumber)->capture_default_str();
    serve->add_option("--input", so.input, "Snapshot file re-read every cycle");
    serve->add_option("--replay", so.replay_dir, "Directory of timestamped mkt.data files");
    serve->add_flag("--synthetic", so.synthetic, "Use the synthetic feed");
    serve->add_option("--tickers", so.tickers, "Synthetic ticker count")->capture_default_str();
    serve->add_option("--seed", so.seed, "Synthetic seed")->capture_default_str();
    serve->add_option("--speed", so.speed, "Clock acceleration factor")->check(CLI::PositiveNumber)->capture_default_str();
    serve->add_option("--start", so.start, "Simulated start time HH:MM:SS");
    add_common(serve, common);

    auto* gen = app.add_subcommand("gen", "Write a synthetic day of mkt.data snapshots");
    feedgen::GenSpec spec;
    std::string gen_dir = "feed";
    gen->add_option("--tickers", spec.tickers, "Ticker count")->capture_default_str();
    gen->add_option("--seed", spec.seed, "Seed")->capture_default_str();
    gen->add_option("--interval", spec.interval_seconds, "Seconds between snapshots")->capture_default_str();
    gen->add_option("--industries", spec.industries_per_sector, "Industries per sector")->capture_default_str();
    gen->add_option("--volatility", spec.volatility, "Daily volatility")->capture_default_str();
    gen->add_option("--missing-industry", spec.missing_industry_fraction, "Fraction without industry")->capture_default_str();
    gen->add_option("--zero-close", spec.zero_close_fraction, "Fraction with zero close")->capture_default_str();
    gen->add_option("--out-dir", gen_dir, "Output directory")->capture_default_str();
    add_common(gen, common);

    auto* viewcmd = app.add_subcommand("view", "Export the grid view of one snapshot as a JSON fixture");
    ViewOptions vo;
    const std::vector<std::string> params{"None", "Clusters", "Exchanges", "Liquidity", "MarketCap"};
    viewcmd->add_option("--input", vo.input, "Market snapshot file")->capture_default_str();
    viewcmd->add_option("--at", vo.at, "Pinned clock HH:MM:SS (default: local time)");
    viewcmd->add_option("--output", vo.output, "Fixture path (default: stdout)");
    viewcmd->add_option("--row", vo.row, "Row tier parameter")->check(CLI::IsMember(params))->capture_default_str();
    viewcmd->add_option("--col", vo.col, "Column tier parameter")->check(CLI::IsMember(params))->capture_default_str();
    viewcmd->add_option("--liquidity-tiers", vo.liquidity_tiers, "Liquidity tier count")->capture_default_str();
    viewcmd->add_option("--marketcap-tiers", vo.marketcap_tiers, "Market cap tier count")->capture_default_str();
    viewcmd->add_option("--signal-min", vo.signal_min, "Minimum |signal| shown")->capture_default_str();
    viewcmd->add_option("--flash", vo.flash, "Flashing ticker count")->capture_default_str();
    viewcmd->add_option("--capacity", vo.capacity, "Tickers per bucket")->capture_default_str();
    add_common(viewcmd, common);

    if (argc <= 1) {
        std::cerr << app.help();
        return 2;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*oneshot) return run_oneshot_cmd(input, out_dir, at, common);
        if (*gen) {
            spec.session = SessionConfig::for_day(common.short_day);
            return run_gen_cmd(spec, gen_dir);
        }
        if (*serve) return run_serve_cmd(so, common);
        if (*viewcmd) return run_view_cmd(vo, common);
    } catch (const Error& e) {
        std::cerr << "vmap: " << to_string(e.code()) << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "vmap: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
