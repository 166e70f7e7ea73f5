#include "hkx/handshake/session.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "hkx/errors.hpp"
#include "hkx/keyfile.hpp"
#include "hkx/log.hpp"
#include "hkx/qkd/client.hpp"

using nlohmann::json;

namespace hkx::handshake {

namespace {

constexpr std::string_view kSigLabelFlight1 = "hkx-hs-sig-f1";
constexpr std::string_view kSigLabelFlight2 = "hkx-hs-sig-f2";
constexpr std::string_view kResponderConfirm = "responder-confirm";
constexpr std::string_view kInitiatorConfirm = "initiator-confirm";

Bytes sig_message(std::string_view label, const crypto::Digest& transcript_hash) {
    return concat({as_span(label), transcript_hash});
}

std::array<uint8_t, kConfirmMacBytes> confirm_mac(const SessionKeys& keys, std::string_view label,
                                                  const crypto::Digest& transcript_hash) {
    return crypto::hmac_sha256(keys.mac_key, concat({as_span(label), transcript_hash}));
}

void check_suite(uint16_t wire_suite_id, const HybridSuite& configured) {
    bool registered = false;
    for (const auto& s : list_suites()) {
        if (s.id == wire_suite_id) {
            registered = true;
            break;
        }
    }
    if (!registered) throw DecodeError("unknown suite id " + std::to_string(wire_suite_id));
    if (wire_suite_id != configured.id) {
        throw DecodeError("flight suite id " + std::to_string(wire_suite_id) +
                          " does not match configured suite " + std::to_string(configured.id));
    }
}

// Poisons the session state unless the protocol step completes.
template <typename StateT>
class StepGuard {
public:
    StepGuard(StateT& state, StateT on_failure) : state_(state), on_failure_(on_failure) {}
    ~StepGuard() {
        if (!done_) state_ = on_failure_;
    }
    void complete(StateT next) {
        state_ = next;
        done_ = true;
    }

private:
    StateT& state_;
    StateT on_failure_;
    bool done_ = false;
};

}  // namespace

QkdEncFetcher make_enc_fetcher(const QkdPeering& peering, unsigned key_size_bits) {
    return [peering, key_size_bits]() -> qkd::QkdKey {
        qkd::QkdClient client(peering.kme_endpoint);
        auto keys = client.get_enc_keys(peering.peer_sae_id, 1, key_size_bits);
        if (keys.empty()) throw QkdError("kme returned no keys");
        return std::move(keys.front());
    };
}

QkdDecFetcher make_dec_fetcher(const QkdPeering& peering) {
    return [peering](const qkd::KeyId& id) -> Bytes {
        qkd::QkdClient client(peering.kme_endpoint);
        auto keys = client.get_dec_keys(peering.peer_sae_id, {id});
        if (keys.empty()) throw QkdError("kme returned no keys");
        return std::move(keys.front().key);
    };
}

NodeConfig load_node_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw DecodeError("node config: " + std::string(e.what()));
    }
    NodeConfig cfg;

    auto suite_name = doc.at("suite").get<std::string>();
    cfg.suite = find_suite(suite_name);
    if (!cfg.suite) throw LookupError("unknown suite: " + suite_name);

    auto role = doc.value("role", std::string("initiator"));
    if (role == "initiator") cfg.role = Role::initiator;
    else if (role == "responder") cfg.role = Role::responder;
    else throw DecodeError("node config: role must be initiator or responder");

    cfg.address = doc.value("address", std::string("127.0.0.1:7000"));

    auto hex_field = [](const json& obj, const char* key) {
        return hex_decode(obj.at(key).get<std::string>());
    };
    if (doc.contains("own_keypair")) {
        const auto& kp = doc["own_keypair"];
        cfg.own_keypair.classical_signing = hex_field(kp, "classical_signing");
        cfg.own_keypair.classical_verifying = hex_field(kp, "classical_verifying");
        cfg.own_keypair.pq_signing = hex_field(kp, "pq_signing");
        cfg.own_keypair.pq_verifying = hex_field(kp, "pq_verifying");
    } else if (doc.contains("own_keypair_file")) {
        cfg.own_keypair = read_keypair_file(doc["own_keypair_file"].get<std::string>());
    } else {
        throw DecodeError("node config: own_keypair or own_keypair_file required");
    }
    if (doc.contains("peer_verifying")) {
        const auto& pk = doc["peer_verifying"];
        cfg.peer_keys.classical = hex_field(pk, "classical");
        cfg.peer_keys.pq = hex_field(pk, "pq");
    } else if (doc.contains("peer_verifying_file")) {
        cfg.peer_keys = read_verifying_file(doc["peer_verifying_file"].get<std::string>());
    } else {
        throw DecodeError("node config: peer_verifying or peer_verifying_file required");
    }
    if (doc.contains("qkd") && !doc["qkd"].is_null()) {
        const auto& q = doc["qkd"];
        QkdPeering peering;
        peering.kme_endpoint = q.at("kme_endpoint").get<std::string>();
        peering.own_sae_id = q.at("own_sae_id").get<std::string>();
        peering.peer_sae_id = q.at("peer_sae_id").get<std::string>();
        cfg.qkd = std::move(peering);
    }
    return cfg;
}

NodeConfig load_node_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_node_config(text);
}

InitiatorSession::InitiatorSession(const HybridSuite& suite, DualKeypair own_keypair,
                                   DualVerifyingKeys peer_keys, std::optional<QkdEncFetcher> qkd,
                                   crypto::RandomSource& rng)
    : suite_(suite), own_keypair_(std::move(own_keypair)), peer_keys_(std::move(peer_keys)),
      qkd_(std::move(qkd)), rng_(rng) {}

Bytes InitiatorSession::start() {
    if (state_ != State::fresh) throw Error("initiator: start() called twice");
    StepGuard guard(state_, State::failed);

    Flight1 f1;
    f1.suite_id = suite_.id;
    rng_.fill(f1.client_random);

    auto keygen = hybrid_keygen(suite_, rng_);
    private_state_ = std::move(keygen.private_state);
    f1.classical_pub = std::move(keygen.public_bundle.classical_pub);
    f1.pq_pub = std::move(keygen.public_bundle.pq_pub);

    if (qkd_) {
        qkd::QkdKey key;
        try {
            key = (*qkd_)();
        } catch (const QkdError&) {
            throw;
        } catch (const Error& e) {
            throw QkdError(std::string("qkd key retrieval failed: ") + e.what());
        }
        f1.qkd_key_id = key.key_id;
        qkd_key_ = std::move(key.key);
    }

    Bytes prefix = encode_flight1_prefix(f1);
    transcript_.update(prefix);
    auto th1 = transcript_.peek();
    auto sig = dual_sign(own_keypair_, sig_message(kSigLabelFlight1, th1));

    guard.complete(State::awaiting_flight2);
    return finish_flight1(std::move(prefix), sig);
}

Bytes InitiatorSession::finish(ByteSpan flight2) {
    if (state_ != State::awaiting_flight2) throw Error("initiator: finish() out of order");
    StepGuard guard(state_, State::failed);

    FlightHeader header = parse_flight_header(flight2);
    check_suite(header.suite_id, suite_);
    auto decoded = decode_flight2(flight2, size_profile(suite_));
    const Flight2& f2 = decoded.flight;

    transcript_.update(flight2.subspan(0, decoded.presig_len));
    auto th2 = transcript_.peek();

    if (!dual_verify(peer_keys_, sig_message(kSigLabelFlight2, th2), f2.sig)) {
        throw AuthError("responder dual signature rejected");
    }

    HybridCiphertextBundle ct;
    ct.suite_id = suite_.id;
    ct.classical_pub = f2.classical_pub;
    ct.pq_ct = f2.pq_ct;
    auto secrets = hybrid_decapsulate(suite_, private_state_, ct);

    Bytes ikm = combine_secrets({secrets.ecdh_ss, secrets.kem_ss, qkd_key_});
    keys_ = derive_session_keys(ikm, th2);

    auto expected = confirm_mac(keys_, kResponderConfirm, th2);
    if (!ct_equal(expected, f2.confirm_mac)) {
        throw KeyConfirmError("responder key confirmation failed");
    }

    Flight3 f3;
    f3.suite_id = suite_.id;
    f3.confirm_mac = confirm_mac(keys_, kInitiatorConfirm, th2);

    final_hash_ = th2;
    guard.complete(State::complete);
    log::debug("initiator: handshake complete");
    return encode_flight3(f3);
}

const SessionKeys& InitiatorSession::session_keys() const {
    if (state_ != State::complete) throw Error("initiator: session keys not yet established");
    return keys_;
}

const crypto::Digest& InitiatorSession::transcript_hash() const {
    if (state_ != State::complete) throw Error("initiator: transcript not yet final");
    return final_hash_;
}

ResponderSession::ResponderSession(const HybridSuite& suite, DualKeypair own_keypair,
                                   DualVerifyingKeys peer_keys, std::optional<QkdDecFetcher> qkd,
                                   crypto::RandomSource& rng)
    : suite_(suite), own_keypair_(std::move(own_keypair)), peer_keys_(std::move(peer_keys)),
      qkd_(std::move(qkd)), rng_(rng) {}

Bytes ResponderSession::respond(ByteSpan flight1) {
    if (state_ != State::fresh) throw Error("responder: respond() called twice");
    StepGuard guard(state_, State::failed);

    FlightHeader header = parse_flight_header(flight1);
    check_suite(header.suite_id, suite_);
    auto decoded = decode_flight1(flight1, size_profile(suite_));
    const Flight1& f1 = decoded.flight;

    transcript_.update(flight1.subspan(0, decoded.presig_len));
    auto th1 = transcript_.peek();

    if (!dual_verify(peer_keys_, sig_message(kSigLabelFlight1, th1), f1.sig)) {
        throw AuthError("initiator dual signature rejected");
    }

    // QKD participation must match on both sides; a mismatch aborts rather
    // than silently downgrading to two-source derivation.
    Bytes qkd_key;
    if (qkd_) {
        if (!f1.qkd_key_id) throw QkdError("qkd configured but flight 1 carries no key id");
        try {
            qkd_key = (*qkd_)(*f1.qkd_key_id);
        } catch (const QkdError&) {
            throw;
        } catch (const Error& e) {
            throw QkdError(std::string("qkd key retrieval failed: ") + e.what());
        }
    } else if (f1.qkd_key_id) {
        throw QkdError("flight 1 carries a qkd key id but qkd is not configured");
    }

    HybridPublicBundle peer;
    peer.suite_id = suite_.id;
    peer.classical_pub = f1.classical_pub;
    peer.pq_pub = f1.pq_pub;
    auto enc = hybrid_encapsulate(suite_, peer, rng_);

    Flight2 f2;
    f2.suite_id = suite_.id;
    rng_.fill(f2.server_random);
    f2.classical_pub = std::move(enc.ciphertext.classical_pub);
    f2.pq_ct = std::move(enc.ciphertext.pq_ct);

    Bytes prefix = encode_flight2_prefix(f2);
    transcript_.update(prefix);
    auto th2 = transcript_.peek();

    auto sig = dual_sign(own_keypair_, sig_message(kSigLabelFlight2, th2));

    Bytes ikm = combine_secrets({enc.ecdh_ss, enc.kem_ss, qkd_key});
    keys_ = derive_session_keys(ikm, th2);

    auto mac = confirm_mac(keys_, kResponderConfirm, th2);

    final_hash_ = th2;
    guard.complete(State::awaiting_flight3);
    return finish_flight2(std::move(prefix), sig, mac);
}

void ResponderSession::finish(ByteSpan flight3) {
    if (state_ != State::awaiting_flight3) throw Error("responder: finish() out of order");
    StepGuard guard(state_, State::failed);

    FlightHeader header = parse_flight_header(flight3);
    check_suite(header.suite_id, suite_);
    auto decoded = decode_flight3(flight3);

    auto expected = confirm_mac(keys_, kInitiatorConfirm, final_hash_);
    if (!ct_equal(expected, decoded.flight.confirm_mac)) {
        throw KeyConfirmError("initiator key confirmation failed");
    }
    guard.complete(State::complete);
    log::debug("responder: handshake complete");
}

const SessionKeys& ResponderSession::session_keys() const {
    if (state_ != State::complete) throw Error("responder: session keys not yet released");
    return keys_;
}

const crypto::Digest& ResponderSession::transcript_hash() const {
    if (state_ != State::complete) throw Error("responder: transcript not yet final");
    return final_hash_;
}

void write_message(net::TcpStream& stream, ByteSpan message) { stream.write_all(message); }

Bytes read_flight_message(net::TcpStream& stream) {
    Bytes header = stream.read_exact(kFlightHeaderBytes);
    FlightHeader parsed = parse_flight_header(header);
    Bytes body = stream.read_exact(parsed.body_len);
    Bytes full = std::move(header);
    append(full, body);
    return full;
}

void write_record_message(net::TcpStream& stream, ByteSpan sealed) {
    Bytes framed;
    put_u32_be(framed, static_cast<uint32_t>(sealed.size()));
    append(framed, sealed);
    stream.write_all(framed);
}

Bytes read_record_message(net::TcpStream& stream) {
    Bytes len_bytes = stream.read_exact(4);
    uint32_t len = read_u32_be(len_bytes);
    if (len > kMaxBodyBytes) throw DecodeError("record exceeds size limit");
    return stream.read_exact(len);
}

}  // namespace hkx::handshake
