#pragma once

#include <string>

namespace helixlab {

/// Hex SHA-256 digest of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Hex SHA-256 digest of a file's contents; throws ValidationError when the
/// file cannot be read.
std::string sha256_file(const std::string& path);

}  // namespace helixlab
