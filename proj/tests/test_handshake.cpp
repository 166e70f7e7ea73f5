#include <doctest.h>

#include <algorithm>
#include <limits>
#include <map>

#include "hkx/crypto/hash.hpp"
#include "hkx/errors.hpp"
#include "hkx/handshake/record.hpp"
#include "hkx/handshake/session.hpp"
#include "hkx/qkd/pool.hpp"
#include "support/flight_offsets.hpp"

using namespace hkx;
using namespace hkx::handshake;

namespace {

crypto::DeterministicRng seeded(const std::string& tag) {
    return crypto::DeterministicRng(as_span(tag));
}

struct Peers {
    DualKeypair initiator_kp;
    DualKeypair responder_kp;
    DualVerifyingKeys initiator_pub;
    DualVerifyingKeys responder_pub;
};

Peers make_peers(const std::string& tag = "peers") {
    auto rng_i = seeded(tag + "-i");
    auto rng_r = seeded(tag + "-r");
    Peers p;
    p.initiator_kp = dual_keygen(rng_i);
    p.responder_kp = dual_keygen(rng_r);
    p.initiator_pub = verifying_keys(p.initiator_kp);
    p.responder_pub = verifying_keys(p.responder_kp);
    return p;
}

// In-process QKD stand-in: both fetchers read the same deterministic pool.
struct FakeQkdLink {
    std::vector<qkd::QkdKey> pool;
    size_t next = 0;

    explicit FakeQkdLink(uint8_t seed_fill = 0x31) {
        std::array<uint8_t, 32> seed{};
        seed.fill(seed_fill);
        pool = qkd::sim_generate_pool(seed, 0, 16, 256);
    }

    QkdEncFetcher enc_fetcher() {
        return [this]() { return pool.at(next++); };
    }
    QkdDecFetcher dec_fetcher() {
        return [this](const qkd::KeyId& id) -> Bytes {
            for (const auto& k : pool) {
                if (k.key_id == id) return k.key;
            }
            throw QkdError("unknown key id");
        };
    }
    // A responder whose KME disagrees about the key bytes.
    QkdDecFetcher wrong_key_fetcher() {
        return [](const qkd::KeyId&) { return Bytes(32, 0xdd); };
    }
};

struct HonestRun {
    Bytes f1, f2, f3;
    SessionKeys initiator_keys;
    SessionKeys responder_keys;
    crypto::Digest initiator_transcript;
    crypto::Digest responder_transcript;
};

HonestRun run_handshake(const HybridSuite& suite, const Peers& peers, bool with_qkd,
                        const std::string& rng_tag = "run") {
    FakeQkdLink link;
    auto rng_i = seeded(rng_tag + "-init");
    auto rng_r = seeded(rng_tag + "-resp");

    InitiatorSession initiator(suite, peers.initiator_kp, peers.responder_pub,
                               with_qkd ? std::optional<QkdEncFetcher>(link.enc_fetcher())
                                        : std::nullopt,
                               rng_i);
    ResponderSession responder(suite, peers.responder_kp, peers.initiator_pub,
                               with_qkd ? std::optional<QkdDecFetcher>(link.dec_fetcher())
                                        : std::nullopt,
                               rng_r);

    HonestRun run;
    run.f1 = initiator.start();
    run.f2 = responder.respond(run.f1);
    run.f3 = initiator.finish(run.f2);
    responder.finish(run.f3);
    run.initiator_keys = initiator.session_keys();
    run.responder_keys = responder.session_keys();
    run.initiator_transcript = initiator.transcript_hash();
    run.responder_transcript = responder.transcript_hash();
    return run;
}

bool contains_subsequence(ByteSpan haystack, ByteSpan needle) {
    if (needle.empty() || haystack.size() < needle.size()) return false;
    auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end());
    return it != haystack.end();
}

}  // namespace

TEST_CASE("key agreement across all ten suites, qkd on and off") {
    auto peers = make_peers();
    for (const auto& suite : list_suites()) {
        for (bool qkd : {false, true}) {
            CAPTURE(suite.label);
            CAPTURE(qkd);
            auto run = run_handshake(suite, peers, qkd);
            CHECK(run.initiator_keys.enc_key == run.responder_keys.enc_key);
            CHECK(run.initiator_keys.mac_key == run.responder_keys.mac_key);
            CHECK(run.initiator_transcript == run.responder_transcript);
            CHECK(run.initiator_keys.enc_key != run.initiator_keys.mac_key);
        }
    }
}

TEST_CASE("qkd participation changes the derived keys") {
    auto peers = make_peers();
    const auto& suite = *find_suite("X25519-MLKEM768-Draft00");
    auto with = run_handshake(suite, peers, true, "same-tag");
    auto without = run_handshake(suite, peers, false, "same-tag");
    CHECK(with.initiator_keys.enc_key != without.initiator_keys.enc_key);
}

TEST_CASE("flight 1 qkd flag: absent without qkd, 16-byte id with") {
    auto peers = make_peers();
    const auto& suite = *find_suite("X25519-MLKEM768-Draft00");

    auto off = run_handshake(suite, peers, false);
    auto decoded_off = decode_flight1(off.f1, size_profile(suite));
    CHECK_FALSE(decoded_off.flight.qkd_key_id.has_value());

    auto on = run_handshake(suite, peers, true);
    auto decoded_on = decode_flight1(on.f1, size_profile(suite));
    REQUIRE(decoded_on.flight.qkd_key_id.has_value());
    CHECK(decoded_on.flight.qkd_key_id->size() == 16);
}

TEST_CASE("flights never contain key material") {
    auto peers = make_peers();
    const auto& suite = *find_suite("X25519-MLKEM768-Draft00");

    FakeQkdLink link;
    auto rng_i = seeded("secrets-init");
    auto rng_r = seeded("secrets-resp");
    InitiatorSession initiator(suite, peers.initiator_kp, peers.responder_pub,
                               std::optional<QkdEncFetcher>(link.enc_fetcher()), rng_i);
    ResponderSession responder(suite, peers.responder_kp, peers.initiator_pub,
                               std::optional<QkdDecFetcher>(link.dec_fetcher()), rng_r);
    Bytes f1 = initiator.start();
    Bytes f2 = responder.respond(f1);
    Bytes f3 = initiator.finish(f2);
    responder.finish(f3);

    Bytes all = concat({f1, f2, f3});
    const auto& keys = initiator.session_keys();
    CHECK_FALSE(contains_subsequence(all, keys.enc_key));
    CHECK_FALSE(contains_subsequence(all, keys.mac_key));
    CHECK_FALSE(contains_subsequence(all, link.pool[0].key));  // qkd bytes stay off the wire
    CHECK_FALSE(contains_subsequence(all, peers.initiator_kp.classical_signing));
    CHECK_FALSE(contains_subsequence(all, peers.responder_kp.classical_signing));
}

TEST_CASE("tampered signature bit aborts with auth failure, no flight 2") {
    auto peers = make_peers();
    const auto& suite = *find_suite("X25519-MLKEM768-Draft00");
    auto run = run_handshake(suite, peers, false);

    Bytes bad = run.f1;
    bad[bad.size() - 100] ^= 0x01;  // inside the dual signature field
    auto rng = seeded("tamper-resp");
    ResponderSession responder(suite, peers.responder_kp, peers.initiator_pub, std::nullopt, rng);
    CHECK_THROWS_AS(responder.respond(bad), AuthError);
}

TEST_CASE("unknown and mismatched suite ids are malformed messages") {
    auto peers = make_peers();
    const auto& suite = *find_suite("X25519-MLKEM768-Draft00");
    auto run = run_handshake(suite, peers, false);

    Bytes unknown = run.f1;
    unknown[2] = 0x7f;  // suite id high byte -> id 0x7f03, not registered
    auto rng = seeded("unknown-suite");
    ResponderSession responder(suite, peers.responder_kp, peers.initiator_pub, std::nullopt, rng);
    CHECK_THROWS_AS(responder.respond(unknown), DecodeError);

    // a registered but different suite id is a downgrade attempt: abort
    Bytes downgrade = run.f1;
    downgrade[3] = 2;  // suite id 2 (mlkem512) while responder expects 3
    auto rng2 = seeded("downgrade");
    ResponderSession responder2(suite, peers.responder_kp, peers.initiator_pub, std::nullopt,
                                rng2);
    CHECK_THROWS_AS(responder2.respond(downgrade), DecodeError);
}

TEST_CASE("wrong pinned responder key is an auth failure") {
    auto peers = make_peers();
    auto impostor = make_peers("impostor");
    const auto& suite = *find_suite("X25519-MLKEM768-Draft00");

    auto rng_i = seeded("pin-init");
    auto rng_r = seeded("pin-resp");
    // initiator pins the impostor's keys instead of the real responder's
    InitiatorSession initiator(suite, peers.initiator_kp, impostor.responder_pub, std::nullopt,
                               rng_i);
    ResponderSession responder(suite, peers.responder_kp, peers.initiator_pub, std::nullopt,
                               rng_r);
    Bytes f1 = initiator.start();
    Bytes f2 = responder.respond(f1);
    CHECK_THROWS_AS(initiator.finish(f2), AuthError);
}

TEST_CASE("dishonest responder corrupting pq_ct pre-signature fails key confirmation") {
    auto peers = make_peers();
    const auto& suite = *find_suite("X25519-MLKEM768-Draft00");

    auto rng_i = seeded("dishonest-init");
    InitiatorSession initiator(suite, peers.initiator_kp, peers.responder_pub, std::nullopt,
                               rng_i);
    Bytes f1_bytes = initiator.start();

    // Hand-rolled responder: encapsulates honestly, then flips a ciphertext
    // byte before signing, so the signature covers the corrupted bytes and
    // only implicit rejection can catch the divergence.
    auto rng_r = seeded("dishonest-resp");
    auto decoded = decode_flight1(f1_bytes, size_profile(suite));
    crypto::Sha256 transcript;
    transcript.update(ByteSpan(f1_bytes).subspan(0, decoded.presig_len));

    HybridPublicBundle peer_bundle{suite.id, decoded.flight.classical_pub, decoded.flight.pq_pub};
    auto enc = hybrid_encapsulate(suite, peer_bundle, rng_r);

    Flight2 f2;
    f2.suite_id = suite.id;
    rng_r.fill(f2.server_random);
    f2.classical_pub = enc.ciphertext.classical_pub;
    f2.pq_ct = enc.ciphertext.pq_ct;
    f2.pq_ct[50] ^= 0x04;  // corrupt before signing

    Bytes prefix = encode_flight2_prefix(f2);
    transcript.update(prefix);
    auto th2 = transcript.peek();
    auto sig = dual_sign(peers.responder_kp, concat({as_span("hkx-hs-sig-f2"), th2}));
    // responder-side keys come from its own (honest) encapsulation secrets
    auto keys = derive_session_keys(combine_secrets({enc.ecdh_ss, enc.kem_ss, {}}), th2);
    auto mac = crypto::hmac_sha256(keys.mac_key, concat({as_span("responder-confirm"), th2}));
    Bytes f2_bytes = finish_flight2(std::move(prefix), sig, mac);

    CHECK_THROWS_AS(initiator.finish(f2_bytes), KeyConfirmError);
}

TEST_CASE("qkd key substitution on one side fails key confirmation") {
    auto peers = make_peers();
    const auto& suite = *find_suite("X25519-MLKEM768-Draft00");
    FakeQkdLink link;

    auto rng_i = seeded("subst-init");
    auto rng_r = seeded("subst-resp");
    InitiatorSession initiator(suite, peers.initiator_kp, peers.responder_pub,
                               std::optional<QkdEncFetcher>(link.enc_fetcher()), rng_i);
    ResponderSession responder(suite, peers.responder_kp, peers.initiator_pub,
                               std::optional<QkdDecFetcher>(link.wrong_key_fetcher()), rng_r);
    Bytes f1 = initiator.start();
    Bytes f2 = responder.respond(f1);
    CHECK_THROWS_AS(initiator.finish(f2), KeyConfirmError);
}

TEST_CASE("qkd configuration mismatches abort instead of downgrading") {
    auto peers = make_peers();
    const auto& suite = *find_suite("X25519-MLKEM768-Draft00");
    FakeQkdLink link;

    // initiator sends a key id, responder has no qkd configured
    auto rng_i = seeded("mismatch-init");
    auto rng_r = seeded("mismatch-resp");
    InitiatorSession initiator(suite, peers.initiator_kp, peers.responder_pub,
                               std::optional<QkdEncFetcher>(link.enc_fetcher()), rng_i);
    ResponderSession responder(suite, peers.responder_kp, peers.initiator_pub, std::nullopt,
                               rng_r);
    CHECK_THROWS_AS(responder.respond(initiator.start()), QkdError);

    // responder expects qkd, initiator sends none
    auto rng_i2 = seeded("mismatch2-init");
    auto rng_r2 = seeded("mismatch2-resp");
    InitiatorSession initiator2(suite, peers.initiator_kp, peers.responder_pub, std::nullopt,
                                rng_i2);
    ResponderSession responder2(suite, peers.responder_kp, peers.initiator_pub,
                                std::optional<QkdDecFetcher>(link.dec_fetcher()), rng_r2);
    CHECK_THROWS_AS(responder2.respond(initiator2.start()), QkdError);

    // failing KME on the initiator side aborts before flight 1 exists
    auto rng_i3 = seeded("kme-down");
    InitiatorSession initiator3(
        suite, peers.initiator_kp, peers.responder_pub,
        std::optional<QkdEncFetcher>([]() -> qkd::QkdKey { throw NetworkError("kme down"); }),
        rng_i3);
    CHECK_THROWS_AS(initiator3.start(), QkdError);
}

TEST_CASE("cross-session flight 3 replay fails key confirmation") {
    auto peers = make_peers();
    const auto& suite = *find_suite("X25519-MLKEM768-Draft00");

    auto session_a = run_handshake(suite, peers, false, "session-a");

    auto rng_i = seeded("session-b-init");
    auto rng_r = seeded("session-b-resp");
    InitiatorSession initiator(suite, peers.initiator_kp, peers.responder_pub, std::nullopt,
                               rng_i);
    ResponderSession responder(suite, peers.responder_kp, peers.initiator_pub, std::nullopt,
                               rng_r);
    Bytes f1 = initiator.start();
    Bytes f2 = responder.respond(f1);
    (void)initiator.finish(f2);
    CHECK_THROWS_AS(responder.finish(session_a.f3), KeyConfirmError);
}

TEST_CASE("tamper totality: flipping any sampled byte in any flight aborts") {
    auto peers = make_peers();
    const auto& suite = *find_suite("X25519-MLKEM768-Draft00");
    auto honest = run_handshake(suite, peers, true, "fuzz");

    size_t positions_tested = 0;

    auto fresh_responder = [&](crypto::RandomSource& rng, FakeQkdLink& link) {
        return ResponderSession(suite, peers.responder_kp, peers.initiator_pub,
                                std::optional<QkdDecFetcher>(link.dec_fetcher()), rng);
    };

    SUBCASE("flight 1 flips abort at the responder") {
        // every field boundary plus a stride sample across the rest
        auto positions = testing::flight1_field_offsets(size_profile(suite), true);
        for (size_t pos = 8; pos < honest.f1.size(); pos += 31) positions.insert(pos);
        for (size_t pos : positions) {
            CAPTURE(pos);
            Bytes bad = honest.f1;
            bad[pos] ^= 0x01;
            FakeQkdLink link;
            auto rng = seeded("fuzz-resp");
            auto responder = fresh_responder(rng, link);
            CHECK_THROWS_AS(responder.respond(bad), Error);
            ++positions_tested;
        }
        CHECK(positions_tested >= 100);
    }

    SUBCASE("flight 2 flips abort at the initiator") {
        auto positions = testing::flight2_field_offsets(size_profile(suite));
        for (size_t pos = 8; pos < honest.f2.size(); pos += 41) positions.insert(pos);
        for (size_t pos : positions) {
            CAPTURE(pos);
            // replay the same deterministic initiator, then feed it a bad f2
            FakeQkdLink link;
            auto rng_i = seeded("fuzz-init");
            InitiatorSession initiator(suite, peers.initiator_kp, peers.responder_pub,
                                       std::optional<QkdEncFetcher>(link.enc_fetcher()), rng_i);
            Bytes f1 = initiator.start();
            REQUIRE(f1 == honest.f1);
            Bytes bad = honest.f2;
            bad[pos] ^= 0x01;
            CHECK_THROWS_AS(initiator.finish(bad), Error);
            ++positions_tested;
        }
        CHECK(positions_tested >= 100);
    }

    SUBCASE("flight 3 flips abort at the responder, every byte") {
        for (size_t pos = 0; pos < honest.f3.size(); ++pos) {
            CAPTURE(pos);
            FakeQkdLink link;
            auto rng_i = seeded("fuzz-init");
            auto rng_r = seeded("fuzz-resp");
            InitiatorSession initiator(suite, peers.initiator_kp, peers.responder_pub,
                                       std::optional<QkdEncFetcher>(link.enc_fetcher()), rng_i);
            auto responder = fresh_responder(rng_r, link);
            Bytes f1 = initiator.start();
            Bytes f2 = responder.respond(f1);
            (void)initiator.finish(f2);
            Bytes bad = honest.f3;
            bad[pos] ^= 0x01;
            CHECK_THROWS_AS(responder.finish(bad), Error);
            ++positions_tested;
        }
        CHECK(positions_tested == honest.f3.size());
    }
}

TEST_CASE("record layer: round trip, tamper, replay, reorder") {
    auto peers = make_peers();
    const auto& suite = *find_suite("X25519-MLKEM768-Draft00");
    auto run = run_handshake(suite, peers, false);

    RecordChannel alice(run.initiator_keys, Role::initiator);
    RecordChannel bob(run.responder_keys, Role::responder);

    Bytes msg(as_span("application data").begin(), as_span("application data").end());
    Bytes sealed = alice.seal(msg);
    CHECK(bob.open(sealed) == msg);

    Bytes reply = bob.seal(msg);
    CHECK(alice.open(reply) == msg);

    SUBCASE("tampered byte") {
        Bytes sealed2 = alice.seal(msg);
        sealed2[0] ^= 0x01;
        CHECK_THROWS_AS(bob.open(sealed2), RecordError);
    }
    SUBCASE("replayed record") {
        Bytes sealed2 = alice.seal(msg);
        CHECK(bob.open(sealed2) == msg);
        CHECK_THROWS_AS(bob.open(sealed2), RecordError);  // counter moved on
    }
    SUBCASE("reordered records") {
        Bytes first = alice.seal(msg);
        Bytes second = alice.seal(msg);
        CHECK_THROWS_AS(bob.open(second), RecordError);  // skipped `first`
        CHECK(bob.open(first) == msg);
    }
    SUBCASE("direction separation") {
        Bytes from_alice = alice.seal(msg);
        RecordChannel mirror(run.initiator_keys, Role::initiator);
        CHECK_THROWS_AS(mirror.open(from_alice), RecordError);  // own direction tag
    }
    SUBCASE("empty plaintext") {
        Bytes sealed2 = alice.seal({});
        CHECK(bob.open(sealed2).empty());
    }
}

TEST_CASE("record layer: nonce exhaustion raises session-expired") {
    auto peers = make_peers();
    const auto& suite = *find_suite("X25519-MLKEM512-Draft00");
    auto run = run_handshake(suite, peers, false);

    RecordChannel nearly_dead(run.initiator_keys, Role::initiator,
                              std::numeric_limits<uint64_t>::max() - 1);
    Bytes msg{0x01};
    CHECK_NOTHROW(nearly_dead.seal(msg));
    CHECK_THROWS_AS(nearly_dead.seal(msg), SessionExpired);
}

TEST_CASE("a failed session stays failed") {
    auto peers = make_peers();
    const auto& suite = *find_suite("X25519-MLKEM768-Draft00");
    auto honest = run_handshake(suite, peers, false, "poison");

    auto rng_i = seeded("poison-init");
    InitiatorSession initiator(suite, peers.initiator_kp, peers.responder_pub, std::nullopt,
                               rng_i);
    Bytes f1 = initiator.start();
    REQUIRE(f1 == honest.f1);

    Bytes bad = honest.f2;
    bad[bad.size() - 50] ^= 0x01;
    CHECK_THROWS_AS(initiator.finish(bad), Error);
    // retrying with the honest flight must not resurrect the session
    CHECK_THROWS_AS(initiator.finish(honest.f2), Error);
    CHECK_THROWS_AS(initiator.session_keys(), Error);
}

TEST_CASE("session state machines reject out-of-order use") {
    auto peers = make_peers();
    const auto& suite = *find_suite("X25519-MLKEM768-Draft00");
    auto rng_i = seeded("order-init");
    auto rng_r = seeded("order-resp");

    InitiatorSession initiator(suite, peers.initiator_kp, peers.responder_pub, std::nullopt,
                               rng_i);
    CHECK_THROWS_AS(initiator.session_keys(), Error);
    Bytes f1 = initiator.start();
    CHECK_THROWS_AS(initiator.start(), Error);

    ResponderSession responder(suite, peers.responder_kp, peers.initiator_pub, std::nullopt,
                               rng_r);
    CHECK_THROWS_AS(responder.session_keys(), Error);
    Bytes f2 = responder.respond(f1);
    CHECK_THROWS_AS(responder.respond(f1), Error);

    Bytes f3 = initiator.finish(f2);
    responder.finish(f3);
    CHECK_NOTHROW(responder.session_keys());
    CHECK_NOTHROW(initiator.session_keys());
}
