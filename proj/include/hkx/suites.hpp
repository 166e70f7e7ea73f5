#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hkx/crypto/ecdh.hpp"
#include "hkx/crypto/kem.hpp"

namespace hkx {

enum class CurveId { X25519, X448 };

enum class KemId {
    Kyber768Draft,
    MlKem512,
    MlKem768,
    MlKem1024,
    Frodo976Shake,
    Frodo976Aes,
    McEliece,
};

struct ClassicalGroup {
    CurveId id;
    std::string_view name;
    size_t public_key_bytes;
    size_t shared_secret_bytes;
};

struct PqKem {
    KemId id;
    std::string_view name;
    size_t public_key_bytes;
    size_t ciphertext_bytes;
    size_t shared_secret_bytes;
    unsigned nist_level_bits;
};

// Bytes/packets recorded from the evaluation table when the size-derived
// accounting cannot reproduce them (McEliece row).
struct AccountingOverride {
    size_t total_bytes;
    unsigned packets;
};

struct HybridSuite {
    uint16_t id;                 // wire identifier, 1..10 in table row order
    std::string_view label;      // verbatim evaluation-table row name
    std::string_view alias;      // normalized spelling accepted on lookup ("" = none)
    ClassicalGroup classical;
    PqKem pq;
    size_t extra_flight1_bytes;  // opaque extra bytes in flight 1 (non-"e" Frodo rows)
    unsigned strength_pqc_bits;
    unsigned strength_classical_bits;
    std::optional<AccountingOverride> accounting_override;
};

struct SizeProfile {
    size_t classical_pk;
    size_t pq_pk;
    size_t pq_ct;
    size_t extra_flight1;
};

// All ten suites in evaluation-table row order. The registry is built once
// and never mutated; concurrent reads are safe.
const std::vector<HybridSuite>& list_suites();

// Throws LookupError for ids outside the registry.
const HybridSuite& suite_by_id(uint16_t id);

// Matches the verbatim label or the normalized alias; nullptr when unknown.
const HybridSuite* find_suite(std::string_view label_or_alias);

std::pair<unsigned, unsigned> strength_estimate(const HybridSuite& suite);

SizeProfile size_profile(const HybridSuite& suite);

// Primitive providers backing a suite's components. Instances are immutable
// singletons shared across threads.
const crypto::EcdhProvider& ecdh_for(CurveId id);
const crypto::KemProvider& kem_for(KemId id);

}  // namespace hkx
