#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hkx/qkd/types.hpp"

namespace hkx::qkd {

// ETSI TS QKD 014 HTTP client. Transport problems raise NetworkError;
// non-2xx answers raise ApiError carrying the HTTP status.
class QkdClient {
public:
    explicit QkdClient(const std::string& base_url);
    ~QkdClient();
    QkdClient(QkdClient&&) noexcept;
    QkdClient& operator=(QkdClient&&) noexcept;

    // GET /api/v1/keys/{slave_SAE_ID}/status
    KmeStatus get_status(const std::string& slave_sae_id);

    // POST /api/v1/keys/{slave_SAE_ID}/enc_keys  {"number": n, "size": bits}
    std::vector<QkdKey> get_enc_keys(const std::string& slave_sae_id, size_t number,
                                     unsigned size_bits);

    // POST /api/v1/keys/{master_SAE_ID}/dec_keys  {"key_IDs":[{"key_ID": ...}]}
    std::vector<QkdKey> get_dec_keys(const std::string& master_sae_id,
                                     const std::vector<KeyId>& key_ids);

    // POST /admin/epoch/advance (sim-only endpoint); returns the new epoch.
    uint64_t advance_epoch();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace hkx::qkd
