#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace edgepart::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

struct Manifest {
    std::string config_digest;
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    std::string timestamp_utc; ///< ISO 8601, e.g. 2026-01-31T12:00:00Z
    std::map<std::string, std::string> outputs;
};

std::string utc_now_iso8601();
std::string manifest_json(const Manifest& m);

} // namespace edgepart::cli
