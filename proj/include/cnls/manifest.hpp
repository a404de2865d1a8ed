#ifndef CNLS_MANIFEST_HPP_
#define CNLS_MANIFEST_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cnls/types.hpp"

namespace cnls {

/// Formats a double with 17 significant digits (value round-trips exactly).
std::string format_real(Real v);

using ManifestEntry = std::pair<std::string, std::string>;

/// Writes `key = value` lines; keys keep their insertion order.
void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries);

/// FNV-1a hash of a file's bytes, as a 16-digit hex string.
std::string file_hash(const std::string& path);

}  // namespace cnls

#endif  // CNLS_MANIFEST_HPP_
