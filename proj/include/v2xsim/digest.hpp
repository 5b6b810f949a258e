#pragma once

#include <string>

namespace v2xsim {

// SHA-256 of a byte string, hex-encoded. Self-contained implementation used
// to fingerprint emitted artifacts in the run manifest.
std::string sha256_hex(const std::string& bytes);

// Digest of a file's contents; throws std::runtime_error if unreadable.
std::string sha256_file_hex(const std::string& path);

}  // namespace v2xsim
