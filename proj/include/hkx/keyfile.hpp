#pragma once

#include <string>

#include "hkx/dual_sig.hpp"

namespace hkx {

// Binary key file: magic "HKX1", u16 type tag, then u32-length-prefixed key
// components, all integers big-endian.
//   tag 1: dual keypair  (classical_signing, classical_verifying,
//                         pq_signing, pq_verifying)
//   tag 2: verifying-only (classical_verifying, pq_verifying)
constexpr uint16_t kKeyfileTagKeypair = 1;
constexpr uint16_t kKeyfileTagVerifying = 2;

Bytes encode_keypair(const DualKeypair& kp);
Bytes encode_verifying(const DualVerifyingKeys& keys);

DualKeypair decode_keypair(ByteSpan data);
DualVerifyingKeys decode_verifying(ByteSpan data);

// Keypair files land with mode 0600; verifying files are world-readable.
void write_keypair_file(const std::string& path, const DualKeypair& kp);
void write_verifying_file(const std::string& path, const DualVerifyingKeys& keys);

DualKeypair read_keypair_file(const std::string& path);
DualVerifyingKeys read_verifying_file(const std::string& path);

}  // namespace hkx
