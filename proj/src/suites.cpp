#include "hkx/suites.hpp"

#include "hkx/errors.hpp"

namespace hkx {

namespace {

constexpr ClassicalGroup kX25519{CurveId::X25519, "X25519", 32, 32};
constexpr ClassicalGroup kX448{CurveId::X448, "X448", 56, 56};

// KEM parameter sizes from the FIPS 203 and FrodoKEM parameter tables.
// Kyber768-Draft00 predates the final standard but shares ML-KEM-768 sizes.
// The McEliece row's variant is not recoverable from the evaluation table;
// Classic-McEliece-348864 sizes back the KEM while the byte/packet columns
// come from the recorded override below.
constexpr PqKem kKyber768Draft{KemId::Kyber768Draft, "Kyber768-Draft00", 1184, 1088, 32, 192};
constexpr PqKem kMlKem512{KemId::MlKem512, "ML-KEM-512", 800, 768, 32, 128};
constexpr PqKem kMlKem768{KemId::MlKem768, "ML-KEM-768", 1184, 1088, 32, 192};
constexpr PqKem kMlKem1024{KemId::MlKem1024, "ML-KEM-1024", 1568, 1568, 32, 256};
constexpr PqKem kFrodo976Shake{KemId::Frodo976Shake, "FrodoKEM-976-SHAKE", 15632, 15744, 24, 192};
constexpr PqKem kFrodo976Aes{KemId::Frodo976Aes, "FrodoKEM-976-AES", 15632, 15744, 24, 192};
constexpr PqKem kMcEliece{KemId::McEliece, "Classic-McEliece-348864", 261120, 96, 32, 128};

constexpr unsigned kX25519Strength = 128;
constexpr unsigned kX448Strength = 224;

// The non-"e" FrodoKEM rows carry 48 extra bytes in flight 1.
constexpr size_t kFrodoExtraBytes = 48;

std::vector<HybridSuite> build_registry() {
    return {
        {1, "X25519-Kyber768-Draft00", "", kX25519, kKyber768Draft, 0, 192, kX25519Strength, {}},
        {2, "X25519-MLKE512M-Draft00", "X25519-MLKEM512-Draft00", kX25519, kMlKem512, 0, 128,
         kX25519Strength, {}},
        {3, "X25519-MLKE768M-Draft00", "X25519-MLKEM768-Draft00", kX25519, kMlKem768, 0, 192,
         kX25519Strength, {}},
        {4, "X25519-MLKE1024M-Draft00", "X25519-MLKEM1024-Draft00", kX25519, kMlKem1024, 0, 256,
         kX25519Strength, {}},
        {5, "X448-MLKEM768-Draft00", "", kX448, kMlKem768, 0, 192, kX448Strength, {}},
        {6, "X25519e-FrodoKEM976-SHAKEDraft00", "X25519e-FrodoKEM976-SHAKE-Draft00", kX25519,
         kFrodo976Shake, 0, 192, kX25519Strength, {}},
        {7, "X25519-FrodoKEM976-SHAKEDraft00", "X25519-FrodoKEM976-SHAKE-Draft00", kX25519,
         kFrodo976Shake, kFrodoExtraBytes, 192, kX25519Strength, {}},
        {8, "X25519e-FrodoKEM976-AESDraft00", "X25519e-FrodoKEM976-AES-Draft00", kX25519,
         kFrodo976Aes, 0, 192, kX25519Strength, {}},
        {9, "X25519-FrodoKEM976-AESDraft00", "X25519-FrodoKEM976-AES-Draft00", kX25519,
         kFrodo976Aes, kFrodoExtraBytes, 192, kX25519Strength, {}},
        {10, "X25519-Mceliece-Draft00", "X25519-McEliece-Draft00", kX25519, kMcEliece, 0, 128,
         kX25519Strength, AccountingOverride{200722, 139}},
    };
}

}  // namespace

const std::vector<HybridSuite>& list_suites() {
    static const std::vector<HybridSuite> registry = build_registry();
    return registry;
}

const HybridSuite& suite_by_id(uint16_t id) {
    for (const auto& s : list_suites()) {
        if (s.id == id) return s;
    }
    throw LookupError("unknown suite id " + std::to_string(id));
}

const HybridSuite* find_suite(std::string_view label_or_alias) {
    for (const auto& s : list_suites()) {
        if (s.label == label_or_alias || (!s.alias.empty() && s.alias == label_or_alias)) {
            return &s;
        }
    }
    return nullptr;
}

std::pair<unsigned, unsigned> strength_estimate(const HybridSuite& suite) {
    return {suite.strength_pqc_bits, suite.strength_classical_bits};
}

SizeProfile size_profile(const HybridSuite& suite) {
    return {suite.classical.public_key_bytes, suite.pq.public_key_bytes,
            suite.pq.ciphertext_bytes, suite.extra_flight1_bytes};
}

const crypto::EcdhProvider& ecdh_for(CurveId id) {
    static const auto x25519 = crypto::make_x25519();
    static const auto x448 = crypto::make_x448();
    return id == CurveId::X25519 ? *x25519 : *x448;
}

const crypto::KemProvider& kem_for(KemId id) {
    static const auto kyber768 = crypto::make_model_kem("kyber768-draft00", 1184, 1088, 32);
    static const auto mlkem512 = crypto::make_model_kem("ml-kem-512", 800, 768, 32);
    static const auto mlkem768 = crypto::make_model_kem("ml-kem-768", 1184, 1088, 32);
    static const auto mlkem1024 = crypto::make_model_kem("ml-kem-1024", 1568, 1568, 32);
    static const auto frodo_shake = crypto::make_model_kem("frodokem-976-shake", 15632, 15744, 24);
    static const auto frodo_aes = crypto::make_model_kem("frodokem-976-aes", 15632, 15744, 24);
    static const auto mceliece = crypto::make_model_kem("classic-mceliece-348864", 261120, 96, 32);
    switch (id) {
        case KemId::Kyber768Draft: return *kyber768;
        case KemId::MlKem512: return *mlkem512;
        case KemId::MlKem768: return *mlkem768;
        case KemId::MlKem1024: return *mlkem1024;
        case KemId::Frodo976Shake: return *frodo_shake;
        case KemId::Frodo976Aes: return *frodo_aes;
        case KemId::McEliece: return *mceliece;
    }
    throw LookupError("unknown kem id");
}

}  // namespace hkx
