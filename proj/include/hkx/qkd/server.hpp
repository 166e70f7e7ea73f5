#pragma once

#include <memory>
#include <string>

#include "hkx/qkd/pool.hpp"

namespace hkx::qkd {

struct KmeSimConfig {
    std::array<uint8_t, 32> link_seed{};
    uint64_t epoch = 0;
    size_t key_count = 64;
    unsigned key_size_bits = 256;
    std::string master_sae_id = "sae-master";
    std::string slave_sae_id = "sae-slave";
    std::string listen_addr = "127.0.0.1:8600";
};

// Config file keys: link_seed_hex, epoch, key_count, key_size_bits,
// master_sae_id, slave_sae_id, listen_addr. Missing keys keep defaults.
KmeSimConfig load_kme_config(const std::string& json_text);
KmeSimConfig load_kme_config_file(const std::string& path);

// Mock ETSI QKD 014 key management entity backed by a deterministic epoch
// pool. Epochs advance only through the admin endpoint.
class KmeServer {
public:
    explicit KmeServer(KmeSimConfig config);
    ~KmeServer();
    KmeServer(const KmeServer&) = delete;
    KmeServer& operator=(const KmeServer&) = delete;

    // Binds and serves on a background thread; throws NetworkError when the
    // address is unavailable.
    void start();
    void stop();

    // Blocks until stop() (or process teardown). For the qkd-sim command.
    void wait();

    uint16_t port() const;
    std::string base_url() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace hkx::qkd
