#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hkx/crypto/hash.hpp"
#include "hkx/handshake/record.hpp"
#include "hkx/handshake/wire.hpp"
#include "hkx/hybrid_kex.hpp"
#include "hkx/net/tcp.hpp"

namespace hkx::handshake {

// QKD endpoints used by a node. The initiator is the ETSI master SAE
// (enc_keys); the responder is the slave SAE (dec_keys). Only the key id
// crosses the handshake channel; each side fetches the bytes from its KME.
struct QkdPeering {
    std::string kme_endpoint;  // base url, e.g. http://127.0.0.1:8600
    std::string own_sae_id;
    std::string peer_sae_id;
};

// Key retrieval hooks; production wiring comes from make_*_fetcher, tests
// may inject their own.
using QkdEncFetcher = std::function<qkd::QkdKey()>;
using QkdDecFetcher = std::function<Bytes(const qkd::KeyId&)>;

QkdEncFetcher make_enc_fetcher(const QkdPeering& peering, unsigned key_size_bits = 256);
QkdDecFetcher make_dec_fetcher(const QkdPeering& peering);

// Node-side handshake configuration; the JSON form mirrors this with
// hex-encoded keys (see load_node_config).
struct NodeConfig {
    const HybridSuite* suite = nullptr;
    Role role = Role::initiator;
    DualKeypair own_keypair;
    DualVerifyingKeys peer_keys;
    std::optional<QkdPeering> qkd;
    std::string address;  // listen (responder) or connect (initiator)
};

NodeConfig load_node_config(const std::string& json_text);
NodeConfig load_node_config_file(const std::string& path);

// Three-flight initiator state machine. Usage: start() -> send, receive ->
// finish() -> send; session_keys() is valid only after finish(). Key
// material is copied in; the suite reference and the randomness source stay
// caller-owned and must outlive the session.
class InitiatorSession {
public:
    InitiatorSession(const HybridSuite& suite, DualKeypair own_keypair,
                     DualVerifyingKeys peer_keys, std::optional<QkdEncFetcher> qkd,
                     crypto::RandomSource& rng);

    Bytes start();
    Bytes finish(ByteSpan flight2);

    const SessionKeys& session_keys() const;
    const crypto::Digest& transcript_hash() const;

private:
    enum class State { fresh, awaiting_flight2, complete, failed };

    const HybridSuite& suite_;
    DualKeypair own_keypair_;
    DualVerifyingKeys peer_keys_;
    std::optional<QkdEncFetcher> qkd_;
    crypto::RandomSource& rng_;
    State state_ = State::fresh;
    crypto::Sha256 transcript_;
    HybridPrivateState private_state_;
    Bytes qkd_key_;
    SessionKeys keys_{};
    crypto::Digest final_hash_{};
};

class ResponderSession {
public:
    ResponderSession(const HybridSuite& suite, DualKeypair own_keypair,
                     DualVerifyingKeys peer_keys, std::optional<QkdDecFetcher> qkd,
                     crypto::RandomSource& rng);

    Bytes respond(ByteSpan flight1);
    void finish(ByteSpan flight3);

    const SessionKeys& session_keys() const;
    const crypto::Digest& transcript_hash() const;

private:
    enum class State { fresh, awaiting_flight3, complete, failed };

    const HybridSuite& suite_;
    DualKeypair own_keypair_;
    DualVerifyingKeys peer_keys_;
    std::optional<QkdDecFetcher> qkd_;
    crypto::RandomSource& rng_;
    State state_ = State::fresh;
    crypto::Sha256 transcript_;
    SessionKeys keys_{};
    crypto::Digest final_hash_{};
};

// Framed transport helpers: flights travel as header+body, records as
// u32-length-prefixed blobs.
void write_message(net::TcpStream& stream, ByteSpan message);
Bytes read_flight_message(net::TcpStream& stream);
void write_record_message(net::TcpStream& stream, ByteSpan sealed);
Bytes read_record_message(net::TcpStream& stream);

}  // namespace hkx::handshake
