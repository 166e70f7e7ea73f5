#pragma once

#include <stdexcept>
#include <string>

namespace hkx {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A crypto provider refused or failed; message names the primitive.
class ProviderError : public Error {
public:
    using Error::Error;
};

// Malformed input: bad framing, bad length, bad encoding.
class DecodeError : public Error {
public:
    using Error::Error;
};

// Registry miss (unknown suite id / label).
class LookupError : public Error {
public:
    using Error::Error;
};

// A dual signature failed to verify, or peer keys do not match the pinned set.
class AuthError : public Error {
public:
    using Error::Error;
};

// Key-confirmation MAC mismatch: peers did not derive the same keys.
class KeyConfirmError : public Error {
public:
    using Error::Error;
};

// QKD key retrieval failed; the handshake never downgrades past this.
class QkdError : public Error {
public:
    using Error::Error;
};

// Transport-level failure talking to a KME or peer.
class NetworkError : public Error {
public:
    using Error::Error;
};

// Non-2xx answer from a KME; carries the HTTP status.
class ApiError : public Error {
public:
    ApiError(int status, const std::string& msg)
        : Error("kme api error " + std::to_string(status) + ": " + msg), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

// Record-layer authentication failure (bad tag, replay, reorder).
class RecordError : public Error {
public:
    using Error::Error;
};

// Record-layer nonce space exhausted.
class SessionExpired : public Error {
public:
    using Error::Error;
};

}  // namespace hkx
