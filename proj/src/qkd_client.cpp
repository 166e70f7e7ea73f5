#include "hkx/qkd/client.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "hkx/errors.hpp"

using nlohmann::json;

namespace hkx::qkd {

struct QkdClient::Impl {
    explicit Impl(const std::string& base_url) : client(base_url) {
        client.set_connection_timeout(5, 0);
        client.set_read_timeout(10, 0);
    }
    httplib::Client client;
};

namespace {

json parse_body(const httplib::Result& res, const std::string& what) {
    if (!res) throw NetworkError("kme unreachable during " + what);
    if (res->status < 200 || res->status >= 300) {
        std::string message = res->body;
        try {
            auto doc = json::parse(res->body);
            if (doc.contains("message")) message = doc["message"].get<std::string>();
        } catch (const json::exception&) {
            // keep raw body
        }
        throw ApiError(res->status, message);
    }
    try {
        return json::parse(res->body);
    } catch (const json::exception& e) {
        throw DecodeError("kme returned malformed json: " + std::string(e.what()));
    }
}

// The ETSI container does not carry the epoch; delivered keys report 0.
std::vector<QkdKey> parse_key_container(const json& doc) {
    if (!doc.contains("keys") || !doc["keys"].is_array()) {
        throw DecodeError("kme key container missing \"keys\" array");
    }
    std::vector<QkdKey> out;
    for (const auto& entry : doc["keys"]) {
        QkdKey key;
        key.key_id = uuid_from_string(entry.at("key_ID").get<std::string>());
        key.key = base64_decode(entry.at("key").get<std::string>());
        out.push_back(std::move(key));
    }
    return out;
}

}  // namespace

QkdClient::QkdClient(const std::string& base_url) : impl_(std::make_unique<Impl>(base_url)) {}
QkdClient::~QkdClient() = default;
QkdClient::QkdClient(QkdClient&&) noexcept = default;
QkdClient& QkdClient::operator=(QkdClient&&) noexcept = default;

KmeStatus QkdClient::get_status(const std::string& slave_sae_id) {
    auto res = impl_->client.Get("/api/v1/keys/" + slave_sae_id + "/status");
    json doc = parse_body(res, "status");
    KmeStatus st;
    st.source_kme_id = doc.at("source_kme_id").get<std::string>();
    st.target_kme_id = doc.at("target_kme_id").get<std::string>();
    st.master_sae_id = doc.at("master_sae_id").get<std::string>();
    st.slave_sae_id = doc.at("slave_sae_id").get<std::string>();
    st.key_size = doc.at("key_size").get<unsigned>();
    st.stored_key_count = doc.at("stored_key_count").get<size_t>();
    st.max_key_count = doc.at("max_key_count").get<size_t>();
    st.max_key_per_request = doc.at("max_key_per_request").get<size_t>();
    return st;
}

std::vector<QkdKey> QkdClient::get_enc_keys(const std::string& slave_sae_id, size_t number,
                                            unsigned size_bits) {
    json body = {{"number", number}, {"size", size_bits}};
    auto res = impl_->client.Post("/api/v1/keys/" + slave_sae_id + "/enc_keys", body.dump(),
                                  "application/json");
    json doc = parse_body(res, "enc_keys");
    return parse_key_container(doc);
}

std::vector<QkdKey> QkdClient::get_dec_keys(const std::string& master_sae_id,
                                            const std::vector<KeyId>& key_ids) {
    json ids = json::array();
    for (const auto& id : key_ids) ids.push_back({{"key_ID", uuid_to_string(id)}});
    json body = {{"key_IDs", ids}};
    auto res = impl_->client.Post("/api/v1/keys/" + master_sae_id + "/dec_keys", body.dump(),
                                  "application/json");
    json doc = parse_body(res, "dec_keys");
    return parse_key_container(doc);
}

uint64_t QkdClient::advance_epoch() {
    auto res = impl_->client.Post("/admin/epoch/advance", "", "application/json");
    json doc = parse_body(res, "epoch advance");
    return doc.at("epoch").get<uint64_t>();
}

}  // namespace hkx::qkd
