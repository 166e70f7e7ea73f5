// Operator entry point: suite registry export, key generation, handshake
// nodes (serve/connect), the mock KME, benchmarking, and report rendering.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <thread>

#include "hkx/bench.hpp"
#include "hkx/errors.hpp"
#include "hkx/handshake/record.hpp"
#include "hkx/handshake/session.hpp"
#include "hkx/keyfile.hpp"
#include "hkx/log.hpp"
#include "hkx/qkd/server.hpp"
#include "hkx/suites.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitCheckFailed = 2;
constexpr int kExitUsage = 64;

using nlohmann::ordered_json;

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw hkx::Error("cannot write " + out_path);
    out << text;
}

struct SuitesOptions {
    bool json = false;
};

int cmd_suites(const SuitesOptions& opt) {
    if (opt.json) {
        ordered_json arr = ordered_json::array();
        for (const auto& suite : hkx::list_suites()) {
            auto acc = hkx::bench::account_bytes(suite);
            arr.push_back({{"label", std::string(suite.label)},
                           {"id", suite.id},
                           {"classical", std::string(suite.classical.name)},
                           {"pq", std::string(suite.pq.name)},
                           {"bytes_total", acc.total},
                           {"packets", hkx::bench::suite_packets(suite, 1500)},
                           {"strength_pqc", suite.strength_pqc_bits},
                           {"strength_classical", suite.strength_classical_bits}});
        }
        std::printf("%s\n", arr.dump(2).c_str());
        return kExitOk;
    }
    std::printf("%2s  %-33s  %-7s  %-23s  %8s  %7s  %4s  %9s\n", "id", "label", "curve", "kem",
                "bytes", "packets", "pqc", "classical");
    for (const auto& suite : hkx::list_suites()) {
        auto acc = hkx::bench::account_bytes(suite);
        std::printf("%2u  %-33s  %-7s  %-23s  %8zu  %7u  %4u  %9u\n", suite.id,
                    std::string(suite.label).c_str(), std::string(suite.classical.name).c_str(),
                    std::string(suite.pq.name).c_str(), acc.total,
                    hkx::bench::suite_packets(suite, 1500), suite.strength_pqc_bits,
                    suite.strength_classical_bits);
    }
    return kExitOk;
}

struct KeygenOptions {
    std::string out_path;
    std::string seed_hex;
    bool hex_dump = false;
};

int cmd_keygen(const KeygenOptions& opt) {
    std::unique_ptr<hkx::crypto::RandomSource> rng;
    if (!opt.seed_hex.empty()) {
        auto seed = hkx::hex_decode(opt.seed_hex);
        rng = std::make_unique<hkx::crypto::DeterministicRng>(seed);
    } else {
        rng = std::make_unique<hkx::crypto::SystemRng>();
    }
    auto kp = hkx::dual_keygen(*rng);
    auto pub = hkx::verifying_keys(kp);

    hkx::write_keypair_file(opt.out_path, kp);
    hkx::write_verifying_file(opt.out_path + ".pub", pub);
    std::printf("wrote %s (keypair, mode 0600) and %s.pub (verifying keys)\n",
                opt.out_path.c_str(), opt.out_path.c_str());

    if (opt.hex_dump) {
        // Secrets never reach stdout; signing components are shown redacted.
        std::printf("keypair file structure (magic HKX1, tag %u):\n", hkx::kKeyfileTagKeypair);
        std::printf("  classical_signing   <%zu bytes redacted>\n", kp.classical_signing.size());
        std::printf("  classical_verifying %s\n", hkx::hex_encode(kp.classical_verifying).c_str());
        std::printf("  pq_signing          <%zu bytes redacted>\n", kp.pq_signing.size());
        std::printf("  pq_verifying        %s\n", hkx::hex_encode(kp.pq_verifying).c_str());
        std::printf("verifying file hex:\n  %s\n",
                    hkx::hex_encode(hkx::encode_verifying(pub)).c_str());
    }
    return kExitOk;
}

struct NodeOptions {
    std::string config_path;
    std::string address_override;
    std::string message = "hybridkex loopback echo";
    size_t sessions = 0;  // serve: 0 = run until killed
    int connect_timeout_ms = 5000;
};

hkx::handshake::NodeConfig load_node(const NodeOptions& opt, hkx::handshake::Role role) {
    auto cfg = hkx::handshake::load_node_config_file(opt.config_path);
    cfg.role = role;
    if (!opt.address_override.empty()) cfg.address = opt.address_override;
    return cfg;
}

int cmd_serve(const NodeOptions& opt) {
    auto cfg = load_node(opt, hkx::handshake::Role::responder);
    auto [host, port] = hkx::net::parse_hostport(cfg.address);
    auto listener = hkx::net::TcpListener::bind(host, port);
    std::printf("listening on %s:%u suite=%s qkd=%s\n", host.c_str(), listener.bound_port(),
                std::string(cfg.suite->label).c_str(), cfg.qkd ? "on" : "off");
    std::fflush(stdout);

    std::optional<hkx::handshake::QkdDecFetcher> fetcher;
    if (cfg.qkd) fetcher = hkx::handshake::make_dec_fetcher(*cfg.qkd);

    // Sessions run concurrently, one thread and one state machine each.
    std::atomic<size_t> completed{0};
    std::atomic<size_t> failed{0};
    std::mutex stdout_mutex;
    std::vector<std::thread> workers;

    auto handle_session = [&](hkx::net::TcpStream stream) {
        try {
            hkx::crypto::SystemRng rng;
            hkx::handshake::ResponderSession session(*cfg.suite, cfg.own_keypair, cfg.peer_keys,
                                                     fetcher, rng);
            auto f1 = hkx::handshake::read_flight_message(stream);
            auto f2 = session.respond(f1);
            hkx::handshake::write_message(stream, f2);
            auto f3 = hkx::handshake::read_flight_message(stream);
            session.finish(f3);

            hkx::handshake::RecordChannel channel(session.session_keys(),
                                                  hkx::handshake::Role::responder);
            auto sealed = hkx::handshake::read_record_message(stream);
            auto plaintext = channel.open(sealed);
            auto echo = channel.seal(plaintext);
            hkx::handshake::write_record_message(stream, echo);

            ++completed;
            std::lock_guard lock(stdout_mutex);
            std::printf("session complete transcript=%s\n",
                        hkx::hex_encode(session.transcript_hash()).c_str());
            std::fflush(stdout);
        } catch (const hkx::Error& e) {
            ++failed;
            hkx::log::error(std::string("session failed: ") + e.what());
        }
    };

    for (size_t i = 0; opt.sessions == 0 || i < opt.sessions; ++i) {
        auto stream = listener.accept();
        std::thread worker(handle_session, std::move(stream));
        if (opt.sessions == 0) {
            worker.detach();  // run-until-killed mode never joins
        } else {
            workers.push_back(std::move(worker));
        }
    }
    for (auto& w : workers) w.join();
    std::printf("served %zu session(s), %zu failed\n", completed.load(), failed.load());
    return failed.load() == 0 ? kExitOk : kExitRuntime;
}

int cmd_connect(const NodeOptions& opt) {
    auto cfg = load_node(opt, hkx::handshake::Role::initiator);
    auto [host, port] = hkx::net::parse_hostport(cfg.address);

    std::optional<hkx::handshake::QkdEncFetcher> fetcher;
    if (cfg.qkd) fetcher = hkx::handshake::make_enc_fetcher(*cfg.qkd);

    // The responder may still be coming up; retry within the window.
    hkx::net::TcpStream stream;
    auto deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(opt.connect_timeout_ms);
    while (true) {
        try {
            stream = hkx::net::TcpStream::connect(host, port);
            break;
        } catch (const hkx::NetworkError&) {
            if (std::chrono::steady_clock::now() >= deadline) throw;
            std::this_thread::sleep_for(std::chrono::milliseconds(50));
        }
    }

    hkx::crypto::SystemRng rng;
    hkx::handshake::InitiatorSession session(*cfg.suite, cfg.own_keypair, cfg.peer_keys, fetcher,
                                             rng);
    auto f1 = session.start();
    hkx::handshake::write_message(stream, f1);
    auto f2 = hkx::handshake::read_flight_message(stream);
    auto f3 = session.finish(f2);
    hkx::handshake::write_message(stream, f3);

    hkx::handshake::RecordChannel channel(session.session_keys(),
                                          hkx::handshake::Role::initiator);
    auto sealed = channel.seal(hkx::as_span(opt.message));
    hkx::handshake::write_record_message(stream, sealed);
    auto echoed = hkx::handshake::read_record_message(stream);
    auto plaintext = channel.open(echoed);
    if (!hkx::ct_equal(plaintext, hkx::as_span(opt.message))) {
        throw hkx::RecordError("echoed message does not match");
    }
    std::printf("echo verified transcript=%s\n",
                hkx::hex_encode(session.transcript_hash()).c_str());
    return kExitOk;
}

struct QkdSimOptions {
    std::string config_path;
    std::string listen_override;
    std::string seed_hex_override;
    int epoch_override = -1;
};

int cmd_qkd_sim(const QkdSimOptions& opt) {
    hkx::qkd::KmeSimConfig cfg;
    if (!opt.config_path.empty()) cfg = hkx::qkd::load_kme_config_file(opt.config_path);
    if (!opt.listen_override.empty()) cfg.listen_addr = opt.listen_override;
    if (!opt.seed_hex_override.empty()) {
        auto seed = hkx::hex_decode(opt.seed_hex_override);
        if (seed.size() != 32) throw hkx::Error("--link-seed must be 32 hex-encoded bytes");
        std::copy(seed.begin(), seed.end(), cfg.link_seed.begin());
    }
    if (opt.epoch_override >= 0) cfg.epoch = static_cast<uint64_t>(opt.epoch_override);

    hkx::qkd::KmeServer server(std::move(cfg));
    server.start();
    std::printf("kme listening on port %u\n", server.port());
    std::fflush(stdout);
    server.wait();
    return kExitOk;
}

struct BenchOptions {
    hkx::bench::BenchConfig cfg;
    std::string out_path;
    bool check = false;
};

int cmd_bench(const BenchOptions& opt) {
    if (opt.check) {
        auto result = hkx::bench::check_accounting(opt.cfg.suites, opt.cfg.mtu);
        for (const auto& line : result.lines) std::printf("%s\n", line.c_str());
        return result.ok ? kExitOk : kExitCheckFailed;
    }
    auto rows = hkx::bench::run_bench(opt.cfg);
    write_output(hkx::bench::render_report(rows, opt.cfg.format), opt.out_path);
    return kExitOk;
}

struct ReportOptions {
    std::string in_path;
    std::string format = "table";
    std::string out_path;
};

int cmd_report(const ReportOptions& opt) {
    std::ifstream in(opt.in_path);
    if (!in) throw hkx::Error("cannot open " + opt.in_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto rows = hkx::bench::parse_report_json(text);
    write_output(hkx::bench::render_report(rows, opt.format), opt.out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    hkx::log::init_from_env();

    CLI::App app{"hybrid key-exchange toolkit (ECDH + post-quantum KEM + QKD)"};
    app.require_subcommand(1);

    std::string log_level;
    app.add_option("--log-level", log_level, "error|warn|info|debug (env: HYBRIDKEX_LOG)")
        ->check(CLI::IsMember({"error", "warn", "info", "debug"}));

    SuitesOptions suites_opt;
    auto* suites_cmd = app.add_subcommand("suites", "List the registered hybrid suites");
    suites_cmd->add_flag("--json", suites_opt.json, "Emit the registry as JSON");

    KeygenOptions keygen_opt;
    auto* keygen_cmd = app.add_subcommand("keygen", "Generate a dual signature keypair");
    keygen_cmd->add_option("--out", keygen_opt.out_path, "Output keypair file path")->required();
    keygen_cmd->add_option("--seed", keygen_opt.seed_hex,
                           "Hex seed for deterministic key generation");
    keygen_cmd->add_flag("--hex-dump", keygen_opt.hex_dump,
                         "Print the file structure (secrets redacted)");

    NodeOptions serve_opt;
    auto* serve_cmd = app.add_subcommand("serve", "Run a responder node");
    serve_cmd->add_option("--config", serve_opt.config_path, "Node config JSON")->required();
    serve_cmd->add_option("--address", serve_opt.address_override, "Listen address override");
    serve_cmd->add_option("--sessions", serve_opt.sessions,
                          "Exit after this many sessions (0 = run until killed)");

    NodeOptions connect_opt;
    auto* connect_cmd = app.add_subcommand("connect", "Run an initiator node");
    connect_cmd->add_option("--config", connect_opt.config_path, "Node config JSON")->required();
    connect_cmd->add_option("--address", connect_opt.address_override, "Peer address override");
    connect_cmd->add_option("--message", connect_opt.message, "Echo test message");
    connect_cmd->add_option("--connect-timeout-ms", connect_opt.connect_timeout_ms,
                            "Time to keep retrying the TCP connect");

    QkdSimOptions qkd_opt;
    auto* qkd_cmd = app.add_subcommand("qkd-sim", "Run the mock ETSI QKD 014 KME");
    qkd_cmd->add_option("--config", qkd_opt.config_path, "KME sim config JSON");
    qkd_cmd->add_option("--listen", qkd_opt.listen_override, "Listen address override");
    qkd_cmd->add_option("--link-seed", qkd_opt.seed_hex_override, "Link seed override (hex)");
    qkd_cmd->add_option("--epoch", qkd_opt.epoch_override, "Starting epoch override");

    BenchOptions bench_opt;
    auto* bench_cmd = app.add_subcommand("bench", "Run the performance evaluation");
    bench_cmd->add_option("--iters", bench_opt.cfg.iterations, "Timed iterations per suite");
    bench_cmd->add_option("--warmup", bench_opt.cfg.warmup, "Warmup iterations per suite");
    bench_cmd->add_option("--mtu", bench_opt.cfg.mtu, "Payload MTU for packet accounting");
    bench_cmd->add_option("--suite", bench_opt.cfg.suites, "Suite label filter (repeatable)");
    bench_cmd->add_option("--format", bench_opt.cfg.format, "table|csv|json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    bench_cmd->add_option("--out", bench_opt.out_path, "Write the report to a file");
    bench_cmd->add_flag("--check", bench_opt.check,
                        "Verify accounting against the recorded table instead of timing");

    ReportOptions report_opt;
    auto* report_cmd = app.add_subcommand("report", "Re-render a JSON bench report");
    report_cmd->add_option("--in", report_opt.in_path, "Bench JSON input file")->required();
    report_cmd->add_option("--format", report_opt.format, "table|csv|json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    report_cmd->add_option("--out", report_opt.out_path, "Write the report to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (!log_level.empty()) {
        hkx::log::Level lvl;
        hkx::log::parse_level(log_level, lvl);
        hkx::log::set_level(lvl);
    }

    try {
        if (*suites_cmd) return cmd_suites(suites_opt);
        if (*keygen_cmd) return cmd_keygen(keygen_opt);
        if (*serve_cmd) return cmd_serve(serve_opt);
        if (*connect_cmd) return cmd_connect(connect_opt);
        if (*qkd_cmd) return cmd_qkd_sim(qkd_opt);
        if (*bench_cmd) return cmd_bench(bench_opt);
        if (*report_cmd) return cmd_report(report_opt);
    } catch (const hkx::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitUsage;
}
