#include "hkx/qkd/server.hpp"

#include <httplib.h>

#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <thread>

#include "hkx/errors.hpp"
#include "hkx/log.hpp"
#include "hkx/net/tcp.hpp"

using nlohmann::json;

namespace hkx::qkd {

KmeSimConfig load_kme_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw DecodeError("kme config: " + std::string(e.what()));
    }
    KmeSimConfig cfg;
    if (doc.contains("link_seed_hex")) {
        Bytes seed = hex_decode(doc["link_seed_hex"].get<std::string>());
        if (seed.size() != 32) throw DecodeError("kme config: link_seed_hex must be 32 bytes");
        std::copy(seed.begin(), seed.end(), cfg.link_seed.begin());
    }
    cfg.epoch = doc.value("epoch", cfg.epoch);
    cfg.key_count = doc.value("key_count", cfg.key_count);
    cfg.key_size_bits = doc.value("key_size_bits", cfg.key_size_bits);
    cfg.master_sae_id = doc.value("master_sae_id", cfg.master_sae_id);
    cfg.slave_sae_id = doc.value("slave_sae_id", cfg.slave_sae_id);
    cfg.listen_addr = doc.value("listen_addr", cfg.listen_addr);
    return cfg;
}

KmeSimConfig load_kme_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_kme_config(text);
}

struct KmeServer::Impl {
    explicit Impl(KmeSimConfig cfg)
        : config(std::move(cfg)),
          pool(config.link_seed, config.epoch, config.key_count, config.key_size_bits) {}

    KmeSimConfig config;
    std::mutex mutex;  // guards pool
    EpochPool pool;
    httplib::Server server;
    std::thread thread;
    uint16_t bound_port = 0;
};

namespace {

void send_error(httplib::Response& res, int status, const std::string& message) {
    res.status = status;
    res.set_content(json{{"message", message}}.dump(), "application/json");
}

// Exactly the ETSI 014 container shape; no extra members.
json key_container(const std::vector<QkdKey>& keys) {
    json arr = json::array();
    for (const auto& k : keys) {
        arr.push_back({{"key_ID", uuid_to_string(k.key_id)}, {"key", base64_encode(k.key)}});
    }
    return json{{"keys", arr}};
}

}  // namespace

KmeServer::KmeServer(KmeSimConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {
    auto* impl = impl_.get();
    auto& srv = impl->server;

    srv.Get(R"(/api/v1/keys/([^/]+)/status)",
            [impl](const httplib::Request& req, httplib::Response& res) {
                const std::string sae = req.matches[1];
                if (sae != impl->config.slave_sae_id) {
                    send_error(res, 404, "unknown slave SAE: " + sae);
                    return;
                }
                std::lock_guard lock(impl->mutex);
                json doc = {
                    {"source_kme_id", "kme-" + impl->config.master_sae_id},
                    {"target_kme_id", "kme-" + impl->config.slave_sae_id},
                    {"master_sae_id", impl->config.master_sae_id},
                    {"slave_sae_id", impl->config.slave_sae_id},
                    {"key_size", impl->config.key_size_bits},
                    {"stored_key_count", impl->pool.stored_key_count()},
                    {"max_key_count", impl->config.key_count},
                    {"max_key_per_request", impl->config.key_count},
                };
                res.set_content(doc.dump(), "application/json");
            });

    srv.Post(R"(/api/v1/keys/([^/]+)/enc_keys)",
             [impl](const httplib::Request& req, httplib::Response& res) {
                 const std::string sae = req.matches[1];
                 if (sae != impl->config.slave_sae_id) {
                     send_error(res, 404, "unknown slave SAE: " + sae);
                     return;
                 }
                 size_t number = 1;
                 unsigned size_bits = impl->config.key_size_bits;
                 if (!req.body.empty()) {
                     try {
                         auto doc = json::parse(req.body);
                         number = doc.value("number", number);
                         size_bits = doc.value("size", size_bits);
                     } catch (const json::exception& e) {
                         send_error(res, 400, std::string("malformed request: ") + e.what());
                         return;
                     }
                 }
                 if (number < 1) {
                     send_error(res, 400, "number must be at least 1");
                     return;
                 }
                 if (size_bits != impl->config.key_size_bits) {
                     send_error(res, 400, "unsupported key size " + std::to_string(size_bits));
                     return;
                 }
                 std::lock_guard lock(impl->mutex);
                 auto keys = impl->pool.take_master(number);
                 if (!keys) {
                     send_error(res, 400, "insufficient keys");
                     return;
                 }
                 log::debug("kme: delivered " + std::to_string(keys->size()) + " enc key(s)");
                 res.set_content(key_container(*keys).dump(), "application/json");
             });

    srv.Post(R"(/api/v1/keys/([^/]+)/dec_keys)",
             [impl](const httplib::Request& req, httplib::Response& res) {
                 const std::string sae = req.matches[1];
                 if (sae != impl->config.master_sae_id) {
                     send_error(res, 404, "unknown master SAE: " + sae);
                     return;
                 }
                 std::vector<KeyId> ids;
                 try {
                     auto doc = json::parse(req.body);
                     for (const auto& entry : doc.at("key_IDs")) {
                         ids.push_back(uuid_from_string(entry.at("key_ID").get<std::string>()));
                     }
                 } catch (const json::exception& e) {
                     send_error(res, 400, std::string("malformed request: ") + e.what());
                     return;
                 } catch (const DecodeError& e) {
                     send_error(res, 400, e.what());
                     return;
                 }
                 if (ids.empty()) {
                     send_error(res, 400, "key_IDs must not be empty");
                     return;
                 }
                 std::lock_guard lock(impl->mutex);
                 std::vector<QkdKey> keys;
                 for (const auto& id : ids) {
                     std::optional<QkdKey> key;
                     try {
                         key = impl->pool.take_slave(id);
                     } catch (const QkdError&) {
                         send_error(res, 409, "already consumed: " + uuid_to_string(id));
                         return;
                     }
                     if (!key) {
                         send_error(res, 404, "unknown key_ID: " + uuid_to_string(id));
                         return;
                     }
                     keys.push_back(std::move(*key));
                 }
                 res.set_content(key_container(keys).dump(), "application/json");
             });

    srv.Post("/admin/epoch/advance", [impl](const httplib::Request&, httplib::Response& res) {
        std::lock_guard lock(impl->mutex);
        impl->pool.advance_epoch();
        log::info("kme: advanced to epoch " + std::to_string(impl->pool.epoch()));
        res.set_content(json{{"epoch", impl->pool.epoch()}}.dump(), "application/json");
    });
}

KmeServer::~KmeServer() { stop(); }

void KmeServer::start() {
    auto [host, port] = net::parse_hostport(impl_->config.listen_addr);
    if (port == 0) {
        int bound = impl_->server.bind_to_any_port(host);
        if (bound <= 0) throw NetworkError("kme: cannot bind " + impl_->config.listen_addr);
        impl_->bound_port = static_cast<uint16_t>(bound);
    } else {
        if (!impl_->server.bind_to_port(host, port)) {
            throw NetworkError("kme: cannot bind " + impl_->config.listen_addr);
        }
        impl_->bound_port = port;
    }
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    log::info("kme: listening on " + impl_->config.listen_addr);
}

void KmeServer::stop() {
    if (impl_ && impl_->thread.joinable()) {
        impl_->server.stop();
        impl_->thread.join();
    }
}

void KmeServer::wait() {
    if (impl_ && impl_->thread.joinable()) impl_->thread.join();
}

uint16_t KmeServer::port() const { return impl_->bound_port; }

std::string KmeServer::base_url() const {
    auto [host, port] = net::parse_hostport(impl_->config.listen_addr);
    return "http://" + host + ":" + std::to_string(impl_->bound_port);
}

}  // namespace hkx::qkd
