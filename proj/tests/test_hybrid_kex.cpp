#include <doctest.h>

#include <random>

#include "hkx/crypto/hash.hpp"
#include "hkx/errors.hpp"
#include "hkx/hybrid_kex.hpp"
#include "support/oracles.hpp"

using namespace hkx;

namespace {

crypto::DeterministicRng seeded(const char* tag) { return crypto::DeterministicRng(as_span(tag)); }

Bytes random_bytes(std::mt19937_64& gen, size_t n) {
    Bytes out(n);
    for (auto& b : out) b = static_cast<uint8_t>(gen());
    return out;
}

}  // namespace

TEST_CASE("kdf2: zero-length request") { CHECK(kdf2_sha256(as_span("anything"), 0).empty()); }

TEST_CASE("kdf2: single block equals SHA-256(z || 00000001)") {
    Bytes z{0x00};
    Bytes expected_input{0x00, 0x00, 0x00, 0x00, 0x01};
    auto expected = crypto::sha256(expected_input);
    Bytes got = kdf2_sha256(z, 32);
    CHECK(hex_encode(got) == hex_encode(expected));
}

TEST_CASE("kdf2: counter starts at 1, not 0") {
    // A KDF1-style loop (counter from 0) would put SHA-256(z || 00000000) first.
    Bytes z = hex_decode("deadbeef");
    Bytes wrong_first_input = concat({z, Bytes{0, 0, 0, 0}});
    auto wrong_first = crypto::sha256(wrong_first_input);
    Bytes got = kdf2_sha256(z, 32);
    CHECK(hex_encode(got) != hex_encode(wrong_first));
}

TEST_CASE("kdf2: output length bound") {
    // the 4-byte counter caps the stream at 2^32 blocks of 32 bytes
    size_t over = size_t{0xFFFFFFFF} * 32 + 1;
    CHECK_THROWS_AS(kdf2_sha256(as_span("z"), over), Error);
}

TEST_CASE("kdf2: prefix property") {
    Bytes z = hex_decode("0102030405");
    Bytes short_out = kdf2_sha256(z, 48);
    Bytes long_out = kdf2_sha256(z, 64);
    CHECK(Bytes(long_out.begin(), long_out.begin() + 48) == short_out);
}

TEST_CASE("kdf2 agrees with the independent oracle on 1000 random inputs") {
    std::mt19937_64 gen(0x1db7);
    for (int i = 0; i < 1000; ++i) {
        size_t z_len = gen() % 100;
        size_t out_len = gen() % 200;
        Bytes z = random_bytes(gen, z_len);
        CHECK(kdf2_sha256(z, out_len) == oracle::kdf2_sha256(z, out_len));
    }
}

TEST_CASE("combine_secrets: order, lengths, and errors") {
    SecretBundle single{{0x01}, {0x02}, {0x03}};
    CHECK(hex_encode(combine_secrets(single)) == "010203");

    SecretBundle no_qkd{Bytes(32, 0xaa), Bytes(32, 0xbb), {}};
    Bytes out = combine_secrets(no_qkd);
    CHECK(out.size() == 64);
    CHECK(Bytes(out.begin(), out.begin() + 32) == no_qkd.ecdh_ss);
    CHECK(Bytes(out.begin() + 32, out.end()) == no_qkd.kem_ss);

    SecretBundle full{Bytes(32, 0x01), Bytes(32, 0x02), Bytes(32, 0x03)};
    CHECK(combine_secrets(full).size() == 96);

    CHECK_THROWS_AS(combine_secrets({{}, Bytes(32, 0), Bytes(32, 0)}), Error);
    CHECK_THROWS_AS(combine_secrets({Bytes(32, 0), {}, Bytes(32, 0)}), Error);
}

TEST_CASE("combine_secrets slicing recovers the inputs") {
    std::mt19937_64 gen(7);
    for (int i = 0; i < 50; ++i) {
        SecretBundle b{random_bytes(gen, 1 + gen() % 64), random_bytes(gen, 1 + gen() % 64),
                       random_bytes(gen, gen() % 64)};
        Bytes out = combine_secrets(b);
        REQUIRE(out.size() == b.ecdh_ss.size() + b.kem_ss.size() + b.qkd_key.size());
        CHECK(Bytes(out.begin(), out.begin() + b.ecdh_ss.size()) == b.ecdh_ss);
        CHECK(Bytes(out.begin() + b.ecdh_ss.size(),
                    out.begin() + b.ecdh_ss.size() + b.kem_ss.size()) == b.kem_ss);
        CHECK(Bytes(out.end() - b.qkd_key.size(), out.end()) == b.qkd_key);
    }
}

TEST_CASE("derive_session_keys: determinism, split, and sensitivity") {
    std::array<uint8_t, 32> th{};
    th.fill(0x11);
    Bytes ikm(64, 0x22);

    auto keys = derive_session_keys(ikm, th);
    auto again = derive_session_keys(ikm, th);
    CHECK(keys.enc_key == again.enc_key);
    CHECK(keys.mac_key == again.mac_key);
    CHECK(keys.enc_key != keys.mac_key);

    // matches KDF2(ikm || th, 64) recomputed via the oracle
    Bytes seed = concat({ikm, th});
    Bytes okm = oracle::kdf2_sha256(seed, 64);
    CHECK(Bytes(keys.enc_key.begin(), keys.enc_key.end()) == Bytes(okm.begin(), okm.begin() + 32));
    CHECK(Bytes(keys.mac_key.begin(), keys.mac_key.end()) == Bytes(okm.begin() + 32, okm.end()));

    // flipping any single component changes both keys
    Bytes ikm2 = ikm;
    ikm2[63] ^= 0x01;  // last byte models the qkd tail of the bundle
    auto keys2 = derive_session_keys(ikm2, th);
    CHECK(keys2.enc_key != keys.enc_key);
    CHECK(keys2.mac_key != keys.mac_key);

    auto th2 = th;
    th2[0] ^= 0x01;
    auto keys3 = derive_session_keys(ikm, th2);
    CHECK(keys3.enc_key != keys.enc_key);
    CHECK(keys3.mac_key != keys.mac_key);

    CHECK_THROWS_AS(derive_session_keys({}, th), Error);
}

TEST_CASE("combiner dependence: each secret component changes the output") {
    std::array<uint8_t, 32> th{};
    SecretBundle base{Bytes(32, 0x01), Bytes(32, 0x02), Bytes(32, 0x03)};
    auto baseline = derive_session_keys(combine_secrets(base), th);

    auto vary = base;
    vary.ecdh_ss[5] ^= 0xff;
    auto k1 = derive_session_keys(combine_secrets(vary), th);
    CHECK(k1.enc_key != baseline.enc_key);

    vary = base;
    vary.kem_ss[5] ^= 0xff;
    auto k2 = derive_session_keys(combine_secrets(vary), th);
    CHECK(k2.enc_key != baseline.enc_key);

    vary = base;
    vary.qkd_key[5] ^= 0xff;
    auto k3 = derive_session_keys(combine_secrets(vary), th);
    CHECK(k3.enc_key != baseline.enc_key);
    CHECK(k3.mac_key != baseline.mac_key);
}

TEST_CASE("hybrid keygen produces profile-sized bundles") {
    auto rng = seeded("keygen");
    const auto& mlkem768 = *find_suite("X25519-MLKEM768-Draft00");
    auto kg = hybrid_keygen(mlkem768, rng);
    CHECK(kg.public_bundle.classical_pub.size() == 32);
    CHECK(kg.public_bundle.pq_pub.size() == 1184);
    CHECK(kg.public_bundle.suite_id == mlkem768.id);

    const auto& x448 = *find_suite("X448-MLKEM768-Draft00");
    auto kg448 = hybrid_keygen(x448, rng);
    CHECK(kg448.public_bundle.classical_pub.size() == 56);

    auto rng_a = seeded("a");
    auto rng_b = seeded("b");
    auto bundle_a = hybrid_keygen(mlkem768, rng_a).public_bundle;
    auto bundle_b = hybrid_keygen(mlkem768, rng_b).public_bundle;
    CHECK(bundle_a.classical_pub != bundle_b.classical_pub);
    CHECK(bundle_a.pq_pub != bundle_b.pq_pub);
}

TEST_CASE("hybrid encapsulation sizes and suite mismatch") {
    auto rng = seeded("encaps");
    const auto& suite = *find_suite("X25519-MLKEM768-Draft00");
    auto kg = hybrid_keygen(suite, rng);
    auto enc = hybrid_encapsulate(suite, kg.public_bundle, rng);
    CHECK(enc.ciphertext.pq_ct.size() == 1088);
    CHECK(enc.kem_ss.size() == 32);
    CHECK(enc.ecdh_ss.size() == 32);

    const auto& frodo = *find_suite("X25519-FrodoKEM976-AESDraft00");
    auto kg_frodo = hybrid_keygen(frodo, rng);
    auto enc_frodo = hybrid_encapsulate(frodo, kg_frodo.public_bundle, rng);
    CHECK(enc_frodo.ciphertext.pq_ct.size() == 15744);
    CHECK(enc_frodo.kem_ss.size() == 24);

    auto wrong = kg.public_bundle;
    wrong.suite_id = frodo.id;
    CHECK_THROWS_AS(hybrid_encapsulate(frodo, wrong, rng), DecodeError);
}

TEST_CASE("hybrid round trip over all ten suites") {
    auto rng = seeded("round-trip");
    for (const auto& suite : list_suites()) {
        CAPTURE(suite.label);
        auto kg = hybrid_keygen(suite, rng);
        auto enc = hybrid_encapsulate(suite, kg.public_bundle, rng);
        auto dec = hybrid_decapsulate(suite, kg.private_state, enc.ciphertext);
        CHECK(dec.ecdh_ss == enc.ecdh_ss);
        CHECK(dec.kem_ss == enc.kem_ss);
    }
}

TEST_CASE("truncated ciphertext is a decode error before any primitive runs") {
    auto rng = seeded("truncate");
    const auto& suite = *find_suite("X25519-MLKEM768-Draft00");
    auto kg = hybrid_keygen(suite, rng);
    auto enc = hybrid_encapsulate(suite, kg.public_bundle, rng);

    auto truncated = enc.ciphertext;
    truncated.pq_ct.pop_back();
    CHECK_THROWS_AS(hybrid_decapsulate(suite, kg.private_state, truncated), DecodeError);

    auto short_classical = enc.ciphertext;
    short_classical.classical_pub.pop_back();
    CHECK_THROWS_AS(hybrid_decapsulate(suite, kg.private_state, short_classical), DecodeError);
}

TEST_CASE("bit-flipped kem ciphertext diverges via implicit rejection") {
    auto rng = seeded("implicit-rejection");
    const auto& suite = *find_suite("X25519-MLKEM768-Draft00");
    auto kg = hybrid_keygen(suite, rng);
    auto enc = hybrid_encapsulate(suite, kg.public_bundle, rng);

    auto tampered = enc.ciphertext;
    tampered.pq_ct[17] ^= 0x20;
    auto dec = hybrid_decapsulate(suite, kg.private_state, tampered);
    CHECK(dec.ecdh_ss == enc.ecdh_ss);  // classical half untouched
    CHECK(dec.kem_ss != enc.kem_ss);    // kem half rejects implicitly
    CHECK(dec.kem_ss.size() == enc.kem_ss.size());
}
